#pragma once

#include <cmath>

namespace cylflow {

inline constexpr double two_pi = 6.283185307179586476925286766559;

/// Wrap an angle into [0, 2*pi). fmod is exact in IEEE arithmetic, so values
/// already in range pass through bit-identically and a shift by a representable
/// multiple of two_pi is undone exactly (Sterbenz).
inline double wrap_angle(double a) {
    double w = std::fmod(a, two_pi);
    if (w < 0.0) w += two_pi;
    if (w >= two_pi) w -= two_pi;
    return w;
}

/// Point on the cylinder R x T: unbounded axial coordinate x1, angular
/// coordinate x2 stored canonically in [0, 2*pi).
struct CylPoint {
    double x1 = 0.0;
    double x2 = 0.0;

    CylPoint() = default;
    CylPoint(double x1_, double x2_) : x1(x1_), x2(wrap_angle(x2_)) {}

    friend bool operator==(const CylPoint&, const CylPoint&) = default;
};

struct Vec2 {
    double u1 = 0.0;
    double u2 = 0.0;

    friend bool operator==(const Vec2&, const Vec2&) = default;
};

} // namespace cylflow
