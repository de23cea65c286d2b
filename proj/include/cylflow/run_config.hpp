#pragma once

/// @file run_config.hpp
/// JSON run configuration, diagnostics schedules, and the run manifest.

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cylflow/bound_replay.hpp"
#include "cylflow/confinement.hpp"
#include "cylflow/diagnostics.hpp"
#include "cylflow/euler.hpp"
#include "cylflow/kernel.hpp"
#include "cylflow/patches.hpp"

namespace cylflow {

enum class RunMode { euler, ns, bound_replay, report };
enum class ScheduleKind { linear, geometric };
enum class CheckpointPolicy { none, final_only, schedule };

struct ScheduleSpec {
    ScheduleKind kind = ScheduleKind::geometric;
    double dt_out = 1.0;  ///< linear spacing
    double t_first = 1.0; ///< first geometric sample after t0
    double ratio = 1.25;  ///< geometric ratio, > 1

    void validate() const;
    /// Sample times: t0 itself, then the ladder, then t_end. Strictly
    /// increasing, all within [t0, t_end].
    std::vector<double> times(double t0, double t_end) const;
};

struct BoundReplayConfig {
    Regime regime = Regime::ns_a;
    std::vector<double> t_values; ///< explicit sweep; empty = log-spaced range
    double t_min = 0.0;
    double t_max = 0.0;
    std::size_t t_count = 0;
    double alpha = 2.0;
    double beta = 0.75;
    double delta = 0.25;
    double big_c = 1.0;
    double m0 = 1.0;
    double support_radius = 0.0;

    std::vector<double> sweep_times() const;
};

struct ReportConfig {
    std::vector<std::string> inputs; ///< diagnostics CSV paths
    EnvelopeSpec envelope;
    double fit_t_min = 0.0;
    double fit_t_max = 0.0;
};

struct RunConfig {
    RunMode mode = RunMode::euler;
    PatchSpec patch;
    KernelConfig kernel;
    EulerStepConfig step;
    double ns_dt = 1e-2;
    double viscosity = 0.0;
    bool frozen_transport = false;
    double t_end = 1.0;
    ScheduleSpec schedule;
    std::vector<double> h_grid = {0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0};
    std::vector<MollifierPair> mollifier_pairs = {{4.0, 1.0}, {8.0, 2.0}};
    std::string output_dir = "out";
    std::vector<std::uint64_t> seeds = {1};
    CheckpointPolicy checkpoints = CheckpointPolicy::final_only;
    BoundReplayConfig bounds;
    ReportConfig report;

    void validate() const;
    DiagnosticsSpec diagnostics_spec() const;
};

RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& c);
RunConfig load_config(const std::string& path);

bool operator==(const RunConfig& a, const RunConfig& b);

std::string to_string(RunMode m);
RunMode run_mode_from_string(const std::string& s);

} // namespace cylflow
