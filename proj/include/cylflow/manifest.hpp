#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cylflow/kernel.hpp"

namespace cylflow {

inline constexpr const char* cylflow_version = "0.1.0";

/// Run manifest: written (status "running") before any long computation
/// starts, rewritten atomically on completion.
struct RunManifest {
    nlohmann::json config_echo;
    std::string code_version = cylflow_version;
    ValidationReport envelope_certification;
    double normalization = 0.0;
    std::string status = "running"; ///< running | complete | incomplete
    double wall_clock_sec = 0.0;
    std::vector<std::string> seed_outputs;
    std::vector<std::string> artifacts;

    nlohmann::json to_json() const;
    /// Atomic write (temp file + rename).
    void write(const std::string& path) const;
};

} // namespace cylflow
