#include "cylflow/patches.hpp"

#include <cmath>
#include <iostream>

#include "cylflow/errors.hpp"

namespace cylflow {

namespace {

constexpr double pi = 0.5 * two_pi;

// R2 low-discrepancy sequence (plastic-constant additive recurrence).
struct R2Seq {
    double a = 0.0, b = 0.0;
    static constexpr double g1 = 0.7548776662466927;  // 1/phi_2
    static constexpr double g2 = 0.5698402909980532;  // 1/phi_2^2
    std::pair<double, double> next() {
        a += g1; if (a >= 1.0) a -= 1.0;
        b += g2; if (b >= 1.0) b -= 1.0;
        return {a, b};
    }
};

} // namespace

double PatchSpec::omega(double x1, double x2) const {
    const double d1 = x1 - center_x1;
    double d2 = std::fmod(x2 - center_x2, two_pi);
    if (d2 > pi) d2 -= two_pi;
    if (d2 < -pi) d2 += two_pi;
    const double r2 = d1 * d1 + d2 * d2;
    switch (shape) {
        case PatchShape::uniform_disk:
            return r2 <= radius * radius ? omega_level : 0.0;
        case PatchShape::gaussian_truncated:
            return r2 <= cutoff_radius * cutoff_radius
                       ? amplitude * std::exp(-0.5 * r2 / (sigma * sigma))
                       : 0.0;
        case PatchShape::ring:
            return (r2 >= r_in * r_in && r2 <= r_out * r_out) ? omega_level : 0.0;
    }
    return 0.0;
}

double PatchSpec::support_radius() const {
    switch (shape) {
        case PatchShape::uniform_disk: return radius;
        case PatchShape::gaussian_truncated: return cutoff_radius;
        case PatchShape::ring: return r_out;
    }
    return 0.0;
}

double PatchSpec::exact_mass() const {
    switch (shape) {
        case PatchShape::uniform_disk:
            return pi * radius * radius * omega_level;
        case PatchShape::gaussian_truncated: {
            const double s2 = sigma * sigma;
            return amplitude * two_pi * 0.5 * 2.0 * s2 *
                   (1.0 - std::exp(-0.5 * cutoff_radius * cutoff_radius / s2));
        }
        case PatchShape::ring:
            return pi * (r_out * r_out - r_in * r_in) * omega_level;
    }
    return 0.0;
}

void PatchSpec::validate() const {
    if (n_blobs == 0) throw ConfigError("patch: n_blobs must be positive");
    switch (shape) {
        case PatchShape::uniform_disk:
            if (!(radius > 0.0)) throw ConfigError("patch: disk radius must be positive");
            if (!(omega_level > 0.0)) throw ConfigError("patch: omega_level must be positive");
            break;
        case PatchShape::gaussian_truncated:
            if (!(sigma > 0.0) || !(cutoff_radius > 0.0))
                throw ConfigError("patch: sigma and cutoff_radius must be positive");
            if (!(amplitude > 0.0)) throw ConfigError("patch: amplitude must be positive");
            break;
        case PatchShape::ring:
            if (!(r_in >= 0.0) || !(r_out > r_in))
                throw ConfigError("patch: ring requires 0 <= r_in < r_out");
            if (!(omega_level > 0.0)) throw ConfigError("patch: omega_level must be positive");
            break;
    }
    if (!(exact_mass() > 0.0)) throw ConfigError("patch: zero-mass patch");
    if (core_override < 0.0) throw ConfigError("patch: core_override must be >= 0");
}

FlowState discretize(const PatchSpec& spec) {
    spec.validate();
    const double rs = spec.support_radius();
    if (rs >= pi)
        std::cerr << "warning: patch radial extent " << rs
                  << " >= pi; it overlaps itself through x2-periodicity\n";

    FlowState state;
    if (spec.n_blobs == 1) {
        const double core = spec.core_override > 0.0 ? spec.core_override : 1.5 * rs;
        state.blobs.push_back({CylPoint(spec.center_x1, spec.center_x2),
                               spec.exact_mass(), core});
        return state;
    }

    double spacing = 0.0;
    std::vector<Blob> blobs;
    if (spec.seeding == Seeding::grid) {
        const double support_area = spec.shape == PatchShape::ring
            ? pi * (spec.r_out * spec.r_out - spec.r_in * spec.r_in)
            : pi * rs * rs;
        const double box = 2.0 * rs;
        const auto n_side = static_cast<std::size_t>(std::ceil(
            std::sqrt(static_cast<double>(spec.n_blobs) * box * box / support_area)));
        spacing = box / static_cast<double>(n_side);
        const double cell_area = spacing * spacing;
        for (std::size_t i = 0; i < n_side; ++i) {
            const double x1 = spec.center_x1 - rs + (static_cast<double>(i) + 0.5) * spacing;
            for (std::size_t j = 0; j < n_side; ++j) {
                const double x2 = spec.center_x2 - rs + (static_cast<double>(j) + 0.5) * spacing;
                const double w = spec.omega(x1, x2);
                if (w > 0.0)
                    blobs.push_back({CylPoint(x1, x2), w * cell_area, 0.0});
            }
        }
    } else {
        const double support_area = pi * rs * rs;
        spacing = std::sqrt(support_area / static_cast<double>(spec.n_blobs));
        R2Seq seq;
        const double vol = support_area / static_cast<double>(spec.n_blobs);
        std::size_t placed = 0, attempts = 0;
        const std::size_t max_attempts = 1000 * spec.n_blobs + 1000;
        while (placed < spec.n_blobs && attempts < max_attempts) {
            ++attempts;
            const auto [ua, ub] = seq.next();
            const double x1 = spec.center_x1 + rs * (2.0 * ua - 1.0);
            const double x2 = spec.center_x2 + rs * (2.0 * ub - 1.0);
            const double d1 = x1 - spec.center_x1, d2 = x2 - spec.center_x2;
            if (d1 * d1 + d2 * d2 > rs * rs) continue; // uniform over the support disk
            const double w = spec.omega(x1, x2);
            if (w <= 0.0) continue;
            blobs.push_back({CylPoint(x1, x2), w * vol, 0.0});
            ++placed;
        }
    }
    if (blobs.empty()) throw ConfigError("patch: seeding produced no blobs");

    // Mass normalization: exact total, Gamma_i stays proportional to omega(x_i).
    double raw = 0.0;
    for (const auto& b : blobs) raw += b.gamma;
    const double scale = spec.exact_mass() / raw;
    const double core = spec.core_override > 0.0 ? spec.core_override : 1.5 * spacing;
    for (auto& b : blobs) {
        b.gamma *= scale;
        b.core = core;
    }
    state.blobs = std::move(blobs);
    return state;
}

std::string to_string(PatchShape s) {
    switch (s) {
        case PatchShape::uniform_disk: return "uniform_disk";
        case PatchShape::gaussian_truncated: return "gaussian_truncated";
        case PatchShape::ring: return "ring";
    }
    return "?";
}

std::string to_string(Seeding s) {
    return s == Seeding::grid ? "grid" : "quasi_random";
}

PatchShape patch_shape_from_string(const std::string& s) {
    if (s == "uniform_disk") return PatchShape::uniform_disk;
    if (s == "gaussian_truncated") return PatchShape::gaussian_truncated;
    if (s == "ring") return PatchShape::ring;
    throw ConfigError("unknown patch shape: " + s);
}

Seeding seeding_from_string(const std::string& s) {
    if (s == "grid") return Seeding::grid;
    if (s == "quasi_random") return Seeding::quasi_random;
    throw ConfigError("unknown seeding: " + s);
}

} // namespace cylflow
