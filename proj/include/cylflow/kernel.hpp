#pragma once

/// @file kernel.hpp
/// Green function of the Poisson equation on the cylinder R x T,
///     G(x,y) = -1/2 log[cosh(x1-y1) - cos(x2-y2)],
/// its perpendicular gradient (the Biot-Savart kernel), and the exponential
/// decay envelope of dG/dx2.
///
/// G satisfies -Lap G = 2*pi*delta, so velocity sums carry a configurable
/// normalization kappa; kappa = 1/(2*pi) makes curl u = omega, kappa = 1
/// reproduces the bare kernel. Confinement scalings are invariant under
/// kappa (it is a time rescaling).

#include <cstddef>
#include <limits>

#include "cylflow/cyl_point.hpp"

namespace cylflow {

/// Parameters of kernel evaluation in velocity sums.
struct KernelConfig {
    /// Multiplier kappa applied to grad_perp G.
    double normalization = 1.0 / two_pi;
    /// Blob desingularization length delta_core; 0 recovers the exact kernel.
    double core_radius = 0.0;
    /// Axial distance beyond which pair interactions are dropped exactly.
    double truncation_radius = std::numeric_limits<double>::infinity();

    /// Throws ConfigError when invariants are violated (kappa > 0,
    /// core_radius >= 0, truncation_radius >= 10 when finite).
    void validate() const;

    bool truncated() const { return std::isfinite(truncation_radius); }

    friend bool operator==(const KernelConfig&, const KernelConfig&) = default;
};

/// Claimed decay bound |dG/dx2| <= c1 * exp(-c2 r) / r, r = |x - y|.
struct DecayEnvelope {
    double c1 = 2.0;
    double c2 = 0.5;

    friend bool operator==(const DecayEnvelope&, const DecayEnvelope&) = default;
};

/// Result of sampling the decay envelope against the exact kernel.
struct ValidationReport {
    DecayEnvelope envelope;
    std::size_t samples = 0;
    double max_ratio = 0.0;  ///< max of |dG/dx2| * r * exp(c2 r) / c1
    double worst_r = 0.0;    ///< separation where the max ratio occurred
    bool pass = false;       ///< max_ratio <= 1
};

/// G(x,y). Symmetric in (x,y); overflow-free for |x1-y1| up to 1e4.
/// Throws SingularInputError at x = y.
double green(const CylPoint& x, const CylPoint& y);

/// dG/dx2 = -sin(d2) / (2 (cosh(d1) - cos(d2))). Antisymmetric under swap.
/// Throws SingularInputError at x = y.
double dG_dx2(const CylPoint& x, const CylPoint& y);

/// dG/dx1 = -sinh(d1) / (2 (cosh(d1) - cos(d2))). Tends to -sign(d1)/2 as
/// |d1| -> infinity. Throws SingularInputError at x = y.
double dG_dx1(const CylPoint& x, const CylPoint& y);

/// kappa * (dG/dx2, -dG/dx1) with the denominator mollified by
/// +core_radius^2/2. Total when core_radius > 0; returns (0,0) at x = y when
/// core_radius = 0 (self-interaction convention).
Vec2 grad_perp_green(const CylPoint& x, const CylPoint& y, const KernelConfig& cfg);

/// Samples |dG/dx2| on a log-spaced grid with |d| in [1e-3, 30], d2 in [0, pi],
/// and reports the worst ratio against the envelope. Requires samples >= 1000.
ValidationReport validate_decay_envelope(const DecayEnvelope& env, std::size_t samples);

namespace detail {

/// cosh(d1) - cos(d2) + s, evaluated cancellation-free near d = 0 via
/// 2*(sinh^2(d1/2) + sin^2(d2/2)) and via the rescaled exponential form for
/// |d1| > 30 (no overflow up to |d1| ~ 1e4 and beyond).
double kernel_denominator(double d1, double d2, double s);

/// -1/2 log(cosh(d1) - cos(d2) + s), overflow-free; NaN when the argument is
/// not positive (coincident points with s = 0).
double green_desingularized(double d1, double d2, double s);

} // namespace detail

} // namespace cylflow
