#pragma once

/// @file ns.hpp
/// Viscous dynamics by operator splitting: one transport substep under the
/// induced velocity, then an independent Gaussian displacement of every blob
/// with variance 2*nu*dt per coordinate (random-vortex diffusion).
/// Circulations never change, so mass conservation is exact, and the
/// pure-diffusion limit has an exact Gaussian oracle.

#include <cstdint>
#include <span>
#include <vector>

#include "cylflow/euler.hpp"

namespace cylflow {

struct NsStepConfig {
    double dt = 1e-2;
    EulerStepConfig transport; ///< scheme used for the advection substep (its dt is ignored)
    std::uint64_t rng_seed = 0;
    int ensemble_id = 0;
    /// Skips the advection substep; blobs keep their diagnostic mass. This is
    /// the pure-diffusion mode used by the Brownian oracles.
    bool frozen_transport = false;

    void validate() const;
};

/// Transport substep then diffusion kick; x2 wrapped; RNG keyed by
/// (seed, step index, blob index) so trajectories are reproducible and
/// independent of thread count. Requires viscosity >= 0 (0 reduces to pure
/// transport).
FlowState ns_step(const FlowState& s, const NsStepConfig& cfg);

/// As run_euler, with records carrying cfg.ensemble_id for cross-seed
/// aggregation.
std::vector<DiagnosticsRecord> run_ns(FlowState& s, double t_end,
                                      const NsStepConfig& cfg,
                                      std::span<const double> schedule,
                                      const DiagnosticsSpec& diag,
                                      const SampleCallback& on_sample = {});

} // namespace cylflow
