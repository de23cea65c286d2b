#pragma once

/// @file runner.hpp
/// End-to-end orchestration behind the CLI: construct initial data, run the
/// dynamics with diagnostics schedules, write CSV/JSON artifacts and
/// checkpoints, drive bound replays and confinement reports.

#include <iosfwd>
#include <string>
#include <vector>

#include "cylflow/diagnostics.hpp"
#include "cylflow/run_config.hpp"

namespace cylflow {

inline constexpr int exit_ok = 0;
inline constexpr int exit_config_error = 2;
inline constexpr int exit_numerical_error = 3;
inline constexpr int exit_io_error = 4;

/// Executes the configured run; returns a CLI exit code and writes artifacts
/// under config.output_dir (manifest.json, diagnostics CSVs, checkpoints,
/// report/certificate files depending on mode).
int run(const RunConfig& config, std::ostream& log);

/// Continues a checkpointed euler/ns run to the (possibly overridden) t_end.
/// Without allow_param_change, any difference between the stored config and
/// the effective one (other than t_end/output_dir) is refused.
int resume(const std::string& checkpoint_path, const RunConfig* overrides,
           bool allow_param_change, std::ostream& log);

/// Reads one diagnostics CSV written by this tool back into records.
std::vector<DiagnosticsRecord> read_diagnostics_csv(const std::string& path);

/// Aggregates per-seed record streams into ensemble mean and standard error
/// per column; all streams must share times and grids.
struct EnsembleStats {
    std::vector<double> times;
    std::vector<std::string> columns;          ///< column names minus "time"
    std::vector<std::vector<double>> mean;     ///< [time][column]
    std::vector<std::vector<double>> stderr_;  ///< [time][column]
};
EnsembleStats aggregate(const std::vector<std::vector<DiagnosticsRecord>>& per_seed,
                        const DiagnosticsSpec& spec);

std::string ensemble_csv(const EnsembleStats& s);

} // namespace cylflow
