#pragma once

/// @file euler.hpp
/// Inviscid transport of the blob ensemble: positions follow the induced
/// velocity field by explicit Runge-Kutta stepping, circulations are frozen.

#include <functional>
#include <span>
#include <vector>

#include "cylflow/diagnostics.hpp"
#include "cylflow/state.hpp"

namespace cylflow {

enum class TimeScheme { rk4, rk2, euler_fwd };

struct EulerStepConfig {
    double dt = 1e-3;
    TimeScheme scheme = TimeScheme::rk4;
    bool adaptive = false;
    double adaptive_tol = 1e-8; ///< max position defect for step-doubling control

    void validate() const;
};

/// One step of the chosen scheme: positions advanced with x2 wrapped, time
/// advanced by dt, circulations untouched. Requires viscosity = 0.
/// Throws NumericalError (with blob indices) on non-finite velocities.
FlowState euler_step(const FlowState& s, const EulerStepConfig& cfg);

/// Called after each emitted diagnostics record; gives access to the state at
/// that instant (checkpointing hooks).
using SampleCallback = std::function<void(const FlowState&, const DiagnosticsRecord&)>;

/// Steps to t_end emitting diagnostics at the scheduled times (strictly
/// increasing, within [s.time, t_end]). Each inter-sample interval is covered
/// by equal substeps of length <= cfg.dt, so a run is reproducible from any
/// checkpoint taken at a schedule time.
std::vector<DiagnosticsRecord> run_euler(FlowState& s, double t_end,
                                         const EulerStepConfig& cfg,
                                         std::span<const double> schedule,
                                         const DiagnosticsSpec& diag,
                                         const SampleCallback& on_sample = {});

namespace detail {

/// Advances positions by one step of the scheme without touching
/// time/viscosity bookkeeping; shared by the Euler and NS integrators.
void advect(FlowState& s, double dt, TimeScheme scheme);

/// Subdivision used between schedule waypoints: equal substeps of length
/// <= dt_max.
std::size_t substep_count(double interval, double dt_max);

void check_schedule(std::span<const double> schedule, double t0, double t_end);

} // namespace detail

} // namespace cylflow
