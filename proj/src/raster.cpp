#include "cylflow/raster.hpp"

#include <algorithm>
#include <cmath>

#include "cylflow/errors.hpp"

namespace cylflow {

namespace {

// Quartic bump (1 - (r/a)^2)^2, C^1 at the edge; normalization handled
// discretely per blob.
double bump(double r2, double a2) {
    const double t = 1.0 - r2 / a2;
    return t > 0.0 ? t * t : 0.0;
}

double wrap_delta(double d) {
    // Smallest representative of d modulo 2*pi in [-pi, pi].
    if (d > 0.5 * two_pi) return d - two_pi;
    if (d < -0.5 * two_pi) return d + two_pi;
    return d;
}

} // namespace

void GridSpec::validate() const {
    if (n1 < 2 || n2 < 2) throw ConfigError("grid: need at least 2 cells per direction");
    if (!(x1_max > x1_min)) throw ConfigError("grid: x1_max must exceed x1_min");
}

double ScalarField::integral() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s * grid.cell_area();
}

double ScalarField::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

ScalarField rasterize(const FlowState& s, const GridSpec& grid) {
    grid.validate();
    ScalarField f{grid, std::vector<double>(grid.n1 * grid.n2, 0.0)};
    const double h1 = grid.h1(), h2 = grid.h2(), area = grid.cell_area();
    const auto n1 = static_cast<std::ptrdiff_t>(grid.n1);
    const auto n2 = static_cast<std::ptrdiff_t>(grid.n2);

    std::vector<std::pair<std::size_t, double>> weights;
    for (const auto& b : s.blobs) {
        if (b.pos.x1 < grid.x1_min || b.pos.x1 > grid.x1_max)
            throw ConfigError("rasterize: blob at x1 = " + std::to_string(b.pos.x1) +
                              " outside the grid window");
        const double a = b.core;
        weights.clear();

        if (a > 0.0) {
            const double a2 = a * a;
            const auto i_lo = static_cast<std::ptrdiff_t>(std::floor((b.pos.x1 - a - grid.x1_min) / h1));
            const auto i_hi = static_cast<std::ptrdiff_t>(std::ceil((b.pos.x1 + a - grid.x1_min) / h1));
            const auto j_span = static_cast<std::ptrdiff_t>(std::ceil(a / h2)) + 1;
            const auto j_mid = static_cast<std::ptrdiff_t>(std::floor(b.pos.x2 / h2));
            for (std::ptrdiff_t i = std::max<std::ptrdiff_t>(0, i_lo);
                 i <= std::min(n1 - 1, i_hi); ++i) {
                const double d1 = grid.x1_center(static_cast<std::size_t>(i)) - b.pos.x1;
                for (std::ptrdiff_t jj = j_mid - j_span; jj <= j_mid + j_span; ++jj) {
                    const std::ptrdiff_t j = ((jj % n2) + n2) % n2;
                    const double d2 = wrap_delta(grid.x2_center(static_cast<std::size_t>(j)) - b.pos.x2);
                    const double w = bump(d1 * d1 + d2 * d2, a2);
                    if (w > 0.0)
                        weights.emplace_back(static_cast<std::size_t>(i) * grid.n2 +
                                             static_cast<std::size_t>(j), w);
                }
            }
        }
        if (weights.empty()) {
            // Footprint below grid resolution: nearest-cell deposit.
            auto i = static_cast<std::ptrdiff_t>((b.pos.x1 - grid.x1_min) / h1);
            i = std::clamp<std::ptrdiff_t>(i, 0, n1 - 1);
            auto j = static_cast<std::ptrdiff_t>(b.pos.x2 / h2);
            j = std::clamp<std::ptrdiff_t>(j, 0, n2 - 1);
            weights.emplace_back(static_cast<std::size_t>(i) * grid.n2 +
                                 static_cast<std::size_t>(j), 1.0);
        }
        double wsum = 0.0;
        for (const auto& [idx, w] : weights) wsum += w;
        const double scale = b.gamma / (wsum * area);
        for (const auto& [idx, w] : weights) f.values[idx] += scale * w;
    }
    return f;
}

void velocity_on_grid(std::span<const PointSource> sources, const GridSpec& grid,
                      const KernelConfig& cfg, ScalarField& u1, ScalarField& u2) {
    grid.validate();
    std::vector<CylPoint> targets;
    targets.reserve(grid.n1 * grid.n2);
    for (std::size_t i = 0; i < grid.n1; ++i)
        for (std::size_t j = 0; j < grid.n2; ++j)
            targets.push_back({grid.x1_center(i), grid.x2_center(j)});
    const auto vel = induced_velocity(targets, sources, cfg);
    u1.grid = grid;
    u2.grid = grid;
    u1.values.resize(vel.size());
    u2.values.resize(vel.size());
    for (std::size_t k = 0; k < vel.size(); ++k) {
        u1.values[k] = vel[k].u1;
        u2.values[k] = vel[k].u2;
    }
}

ScalarField discrete_curl(const ScalarField& u1, const ScalarField& u2) {
    const GridSpec& g = u1.grid;
    ScalarField curl{g, std::vector<double>(g.n1 * g.n2, 0.0)};
    const double inv2h1 = 1.0 / (2.0 * g.h1());
    const double inv2h2 = 1.0 / (2.0 * g.h2());
    for (std::size_t i = 1; i + 1 < g.n1; ++i) {
        for (std::size_t j = 0; j < g.n2; ++j) {
            const std::size_t jp = (j + 1) % g.n2;
            const std::size_t jm = (j + g.n2 - 1) % g.n2;
            const double d1u2 = (u2.at(i + 1, j) - u2.at(i - 1, j)) * inv2h1;
            const double d2u1 = (u1.at(i, jp) - u1.at(i, jm)) * inv2h2;
            curl.at(i, j) = d1u2 - d2u1;
        }
    }
    return curl;
}

} // namespace cylflow
