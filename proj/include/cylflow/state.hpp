#pragma once

#include <cstdint>
#include <vector>

#include "cylflow/cyl_point.hpp"
#include "cylflow/kernel.hpp"

namespace cylflow {

/// Lagrangian vorticity carrier: position, circulation (units of the vorticity
/// integral), and the radius of its rasterization footprint.
struct Blob {
    CylPoint pos;
    double gamma = 0.0;
    double core = 0.0;

    friend bool operator==(const Blob&, const Blob&) = default;
};

/// Ensemble of blobs plus time, viscosity, kernel configuration and the
/// counter-based RNG stream descriptor. Circulations never change along a
/// trajectory, so the total mass is exactly conserved by both integrators.
struct FlowState {
    std::vector<Blob> blobs;
    double time = 0.0;
    double viscosity = 0.0;
    KernelConfig kernel_cfg;
    std::uint64_t rng_seed = 0;
    std::uint64_t step_index = 0;
};

/// Throws ConfigError on exactly coincident blobs when core_radius = 0
/// (they are rejected at construction, not silently merged).
void validate_state(const FlowState& s);

} // namespace cylflow
