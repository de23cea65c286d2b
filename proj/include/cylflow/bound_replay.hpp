#pragma once

/// @file bound_replay.hpp
/// Numerical replay of the tail-mass iteration: the Gronwall-type recursion is
/// iterated n times from the envelope radius r0 down to r0/2 with uniform step
/// h = r0/(2n), giving the bound (1/n!) (C t / h^2)^n M0 (with an extra factor
/// 2/r0 per step in the euler regime). Everything is evaluated in log domain
/// (log-gamma for the factorial), valid for t up to e^300 and beyond.
///
/// The closed forms drop the sqrt(2 pi n) Stirling factor, exactly like the
/// textbook displays they implement; the certificate keeps both routes so the
/// Stirling gap stays visible.

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "cylflow/kernel.hpp"

namespace cylflow {

enum class Regime { ns_a, ns_b, euler };

struct IterationPlan {
    Regime regime = Regime::ns_a;
    double t = 0.0;
    double alpha = 2.0;   ///< ns_a / euler
    double beta = 0.75;   ///< ns_b
    double delta = 0.25;  ///< ns_b
    double big_c = 1.0;   ///< the generic constant of the recursion (user input)
    double r0 = 0.0;      ///< starting radius
    long n = 0;           ///< iteration count
    double h = 0.0;       ///< radius decrement per iteration, r0 / (2n)
};

struct BoundCertificate {
    IterationPlan plan;
    double log_recursive_bound = 0.0; ///< min(iterated bound, log m0)
    double raw_log_recursive = 0.0;   ///< iterated bound before the trivial cap
    double log_closed_form = 0.0;
    double log_m0 = 0.0;
    std::vector<double> per_step_log_terms; ///< log[(C t / h^2)^j / j!], j = 1..n

    std::string json() const;
};

/// Validates parameter ranges (t > e^2; alpha > 1; beta > 1/2;
/// 0 < delta < 2 beta - 1; big_c > 0) and fills n, r0, h:
///   ns_a:  n = floor(log t),   r0 = sqrt(t log^alpha t)
///   ns_b:  n = floor(t^delta), r0 = t^beta
///   euler: n = floor(log t),   r0 = (t log^alpha t)^{1/3}
IterationPlan make_plan(Regime regime, double t, double alpha_or_beta,
                        double delta, double big_c);

/// ns_a / euler: n (log(4 e big_c) + (1 - alpha) log log t);
/// ns_b: t^delta (log big_c - (2 beta - delta - 1) log t).
double closed_form_log_bound(const IterationPlan& plan);

/// Exact log of (1/n!) (C t / h^2)^n m0 via lgamma; the euler regime carries
/// the extra 1/R factor with R = r0/2. Throws ConfigError when the initial
/// support radius reaches r0/2 - h (the iteration requires mu_0(R_j, h) = 0).
BoundCertificate recursive_log_bound(const IterationPlan& plan, double m0,
                                     double support_radius = 0.0);

/// RK4 integration of rho' = 4 c1 exp(-c2 rho / 2) / rho + g(t) on [t0, t1];
/// returns (t, rho) at the step nodes. Throws NumericalError when halving the
/// step count moves the endpoint by more than 1e-6 relative (step count too
/// small).
std::vector<std::pair<double, double>> integrate_rho(
    double rho0, double t0, double t1, const DecayEnvelope& env,
    const std::function<double(double)>& g, std::size_t steps);

std::string to_string(Regime r);
Regime regime_from_string(const std::string& s);

} // namespace cylflow
