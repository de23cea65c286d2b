#pragma once

/// @file patches.hpp
/// Initial blob ensembles: non-negative bounded vorticity with compact axial
/// support, discretized by grid or quasi-random seeding.

#include <cstddef>
#include <string>

#include "cylflow/state.hpp"

namespace cylflow {

enum class PatchShape { uniform_disk, gaussian_truncated, ring };
enum class Seeding { grid, quasi_random };

struct PatchSpec {
    PatchShape shape = PatchShape::uniform_disk;
    double center_x1 = 0.0;
    double center_x2 = 0.5 * two_pi;

    // uniform_disk
    double radius = 1.0;
    double omega_level = 1.0 / (0.5 * two_pi); ///< disk and ring vorticity level

    // gaussian_truncated
    double sigma = 1.0;
    double cutoff_radius = 3.0;
    double amplitude = 1.0;

    // ring
    double r_in = 0.5;
    double r_out = 1.0;

    std::size_t n_blobs = 1000;
    Seeding seeding = Seeding::grid;
    /// Blob footprint radius; 0 means the 1.5 x inter-blob-spacing heuristic.
    double core_override = 0.0;

    /// Vorticity level at a point (radial profile around the center).
    double omega(double x1, double x2) const;
    /// Radius of the compact support around the center.
    double support_radius() const;
    /// Exact integral of omega over the patch.
    double exact_mass() const;

    void validate() const;

    friend bool operator==(const PatchSpec&, const PatchSpec&) = default;
};

/// Blobs placed by the seeding rule with Gamma_i proportional to
/// omega(x_i) * cell_area and rescaled so the total matches the exact patch
/// mass; core radius 1.5 x spacing unless overridden. Warns on stderr when the
/// radial extent reaches pi (self-overlap through periodicity).
FlowState discretize(const PatchSpec& spec);

std::string to_string(PatchShape s);
std::string to_string(Seeding s);
PatchShape patch_shape_from_string(const std::string& s);
Seeding seeding_from_string(const std::string& s);

} // namespace cylflow
