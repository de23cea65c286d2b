#include "cylflow/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cylflow/errors.hpp"

namespace cylflow {

namespace {

// Above this axial separation cosh/sinh are evaluated in the rescaled
// exponential form. exp(-2*30) ~ 9e-27, so both branches agree to roundoff
// at the seam.
constexpr double kLargeAxial = 30.0;

struct KernelTerms {
    double denom;   // cosh(d1) - cos(d2) + s, always > 0 for s > 0
    double sinh_d1; // representation-matched numerators: for the large-|d1|
    double sin_d2;  // branch these are pre-divided by exp(|d1|)/2 along with denom
};

// Evaluates the three ingredients of the gradient in a branch-consistent way:
// both numerators and the denominator are scaled by the same factor, so the
// ratios are exact in either branch.
KernelTerms kernel_terms(double d1, double d2, double s) {
    KernelTerms k;
    if (std::abs(d1) <= kLargeAxial) {
        const double sh = std::sinh(0.5 * d1);
        const double sn = std::sin(0.5 * d2);
        k.denom = 2.0 * (sh * sh + sn * sn) + s;
        k.sinh_d1 = 2.0 * sh * std::sqrt(1.0 + sh * sh);   // sinh(d1)
        k.sin_d2 = 2.0 * sn * std::cos(0.5 * d2);          // sin(d2)
    } else {
        // Scale everything by 2*exp(-|d1|): denom -> q + 2 s E, with
        // q = 1 - 2 cos(d2) E + E^2 and E = exp(-|d1|).
        const double e = std::exp(-std::abs(d1));
        const double q = 1.0 + e * e - 2.0 * std::cos(d2) * e + 2.0 * s * e;
        k.denom = q;
        k.sinh_d1 = (d1 > 0.0 ? 1.0 : -1.0) * (1.0 - e * e);
        k.sin_d2 = 2.0 * std::sin(d2) * e;
    }
    return k;
}

} // namespace

void KernelConfig::validate() const {
    if (!(normalization > 0.0) || !std::isfinite(normalization))
        throw ConfigError("kernel.normalization must be a positive real");
    if (core_radius < 0.0 || !std::isfinite(core_radius))
        throw ConfigError("kernel.core_radius must be >= 0");
    if (!(truncation_radius > 0.0))
        throw ConfigError("kernel.truncation_radius must be positive or infinity");
    if (std::isfinite(truncation_radius) && truncation_radius < 10.0)
        throw ConfigError("kernel.truncation_radius must be >= 10 when finite");
}

double detail::kernel_denominator(double d1, double d2, double s) {
    return kernel_terms(d1, d2, s).denom;
}

double detail::green_desingularized(double d1, double d2, double s) {
    if (std::abs(d1) <= kLargeAxial) {
        const double denom = kernel_terms(d1, d2, s).denom;
        if (!(denom > 0.0)) return std::numeric_limits<double>::quiet_NaN();
        return -0.5 * std::log(denom);
    }
    const double q = kernel_terms(d1, d2, s).denom; // rescaled by 2 exp(-|d1|)
    return -0.5 * std::abs(d1) + 0.5 * std::log(2.0) - 0.5 * std::log(q);
}

double green(const CylPoint& x, const CylPoint& y) {
    const double g = detail::green_desingularized(x.x1 - y.x1, x.x2 - y.x2, 0.0);
    if (std::isnan(g))
        throw SingularInputError("green: cosh(d1) - cos(d2) <= 0 (coincident points)");
    return g;
}

double dG_dx2(const CylPoint& x, const CylPoint& y) {
    const KernelTerms k = kernel_terms(x.x1 - y.x1, x.x2 - y.x2, 0.0);
    if (!(k.denom > 0.0))
        throw SingularInputError("dG_dx2: evaluated at coincident points");
    return -k.sin_d2 / (2.0 * k.denom);
}

double dG_dx1(const CylPoint& x, const CylPoint& y) {
    const KernelTerms k = kernel_terms(x.x1 - y.x1, x.x2 - y.x2, 0.0);
    if (!(k.denom > 0.0))
        throw SingularInputError("dG_dx1: evaluated at coincident points");
    return -k.sinh_d1 / (2.0 * k.denom);
}

Vec2 grad_perp_green(const CylPoint& x, const CylPoint& y, const KernelConfig& cfg) {
    if (cfg.truncated() && std::abs(x.x1 - y.x1) > cfg.truncation_radius)
        return {0.0, 0.0};
    const double s = 0.5 * cfg.core_radius * cfg.core_radius;
    const KernelTerms k = kernel_terms(x.x1 - y.x1, x.x2 - y.x2, s);
    if (!(k.denom > 0.0)) return {0.0, 0.0}; // coincident, core_radius = 0
    const double w = cfg.normalization / (2.0 * k.denom);
    return {-k.sin_d2 * w, k.sinh_d1 * w};
}

ValidationReport validate_decay_envelope(const DecayEnvelope& env, std::size_t samples) {
    if (samples < 1000)
        throw ConfigError("validate_decay_envelope: samples must be >= 1e3");
    if (!(env.c1 > 0.0) || !(env.c2 > 0.0))
        throw ConfigError("validate_decay_envelope: envelope constants must be positive");

    constexpr double r_min = 1e-3;
    constexpr double r_max = 30.0;
    constexpr std::size_t n_theta = 65;
    const std::size_t n_r = (samples + n_theta - 1) / n_theta;

    ValidationReport rep;
    rep.envelope = env;

    const double log_step = std::log(r_max / r_min) / static_cast<double>(n_r - 1);
    const double pi = 0.5 * two_pi;
    for (std::size_t i = 0; i < n_r; ++i) {
        const double r = r_min * std::exp(log_step * static_cast<double>(i));
        // d2 = r sin(theta) restricted to [0, pi].
        const double theta_max = (r <= pi) ? 0.5 * pi : std::asin(pi / r);
        for (std::size_t j = 0; j < n_theta; ++j) {
            const double theta = theta_max * static_cast<double>(j) / (n_theta - 1);
            const double d1 = r * std::cos(theta);
            const double d2 = r * std::sin(theta);
            const double v = std::abs(dG_dx2({d1, d2}, {0.0, 0.0}));
            const double ratio = v * r * std::exp(env.c2 * r) / env.c1;
            ++rep.samples;
            if (ratio > rep.max_ratio) {
                rep.max_ratio = ratio;
                rep.worst_r = r;
            }
        }
    }
    rep.pass = rep.max_ratio <= 1.0;
    return rep;
}

} // namespace cylflow
