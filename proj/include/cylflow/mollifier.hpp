#pragma once

/// @file mollifier.hpp
/// Smooth axial cutoff W_{R,h}: identically 1 on [-R, R], identically 0 outside
/// [-(R+h), R+h], C^2 across the transition, with a certified second-derivative
/// constant c_w such that |W''| <= c_w / h^2. The transition is the quintic
/// smoothstep p(u) = 6u^5 - 15u^4 + 10u^3, whose |p''| peaks at 10/sqrt(3).

namespace cylflow {

class MollifierProfile {
public:
    /// Requires R >= 2h > 0; throws ConfigError otherwise. Certifies c_w on a
    /// dense grid at construction.
    MollifierProfile(double R, double h);

    double R() const { return R_; }
    double h() const { return h_; }
    /// Certified constant: max |W''(xi)| * h^2 <= c_w (equals 10/sqrt(3)).
    double c_w() const { return c_w_; }

    /// W(xi) in [0, 1]; even in xi.
    double eval(double xi) const;
    /// W'(xi); vanishes for |xi| <= R and |xi| >= R + h.
    double eval_d1(double xi) const;
    /// W''(xi); bounded by c_w / h^2.
    double eval_d2(double xi) const;

private:
    double R_;
    double h_;
    double c_w_;
};

inline MollifierProfile make_mollifier(double R, double h) { return {R, h}; }

} // namespace cylflow
