#pragma once

/// @file checkpoint.hpp
/// JSON checkpoints with full-precision doubles (nlohmann round-trips them
/// exactly), so a resumed run reproduces the original bit for bit.

#include <string>

#include <nlohmann/json.hpp>

#include "cylflow/state.hpp"

namespace cylflow {

inline constexpr int checkpoint_schema_version = 1;

struct Checkpoint {
    int schema_version = checkpoint_schema_version;
    FlowState state;
    nlohmann::json config_echo; ///< the RunConfig JSON that produced the run
    int ensemble_id = 0;
};

void write_checkpoint(const Checkpoint& c, const std::string& path);

/// Throws ConfigError on a schema-version mismatch, IoError on file problems.
Checkpoint read_checkpoint(const std::string& path);

} // namespace cylflow
