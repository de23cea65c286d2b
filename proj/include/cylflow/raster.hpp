#pragma once

/// @file raster.hpp
/// Deposit the blob ensemble onto a cell-centered grid (full cylinder in x2,
/// a finite window in x1) and grid utilities for the curl-inversion checks.

#include <cstddef>
#include <span>
#include <vector>

#include "cylflow/state.hpp"
#include "cylflow/velocity.hpp"

namespace cylflow {

struct GridSpec {
    double x1_min = -1.0;
    double x1_max = 1.0;
    std::size_t n1 = 0;
    std::size_t n2 = 0; ///< cells around the cylinder; x2 spans [0, 2*pi)

    double h1() const { return (x1_max - x1_min) / static_cast<double>(n1); }
    double h2() const { return two_pi / static_cast<double>(n2); }
    double cell_area() const { return h1() * h2(); }
    double x1_center(std::size_t i) const { return x1_min + (static_cast<double>(i) + 0.5) * h1(); }
    double x2_center(std::size_t j) const { return (static_cast<double>(j) + 0.5) * h2(); }

    void validate() const;
};

struct ScalarField {
    GridSpec grid;
    std::vector<double> values; ///< row-major, index = i * n2 + j

    double& at(std::size_t i, std::size_t j) { return values[i * grid.n2 + j]; }
    double at(std::size_t i, std::size_t j) const { return values[i * grid.n2 + j]; }
    /// Sum of values times cell area.
    double integral() const;
    double max_abs() const;
};

/// Deposits each circulation with a quartic radial bump of radius blob.core,
/// discretely normalized per blob so the field integrates to the total mass to
/// roundoff. A blob whose center lies outside the x1 window is an error;
/// footprints are clipped at the x1 edges with the mass renormalized onto the
/// visible part.
ScalarField rasterize(const FlowState& s, const GridSpec& grid);

/// Velocity components sampled at cell centers (fast summation path).
void velocity_on_grid(std::span<const PointSource> sources, const GridSpec& grid,
                      const KernelConfig& cfg, ScalarField& u1, ScalarField& u2);

/// Central-difference curl d1 u2 - d2 u1; periodic in x2, one-sided columns at
/// the x1 boundary are left zero.
ScalarField discrete_curl(const ScalarField& u1, const ScalarField& u2);

} // namespace cylflow
