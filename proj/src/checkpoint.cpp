#include "cylflow/checkpoint.hpp"

#include <cstdio>
#include <fstream>
#include <limits>

#include "cylflow/errors.hpp"

namespace cylflow {

void write_checkpoint(const Checkpoint& c, const std::string& path) {
    nlohmann::json j;
    j["schema_version"] = c.schema_version;
    j["time"] = c.state.time;
    j["viscosity"] = c.state.viscosity;
    j["rng_seed"] = c.state.rng_seed;
    j["step_index"] = c.state.step_index;
    j["ensemble_id"] = c.ensemble_id;
    j["kernel"] = {{"normalization", c.state.kernel_cfg.normalization},
                   {"core_radius", c.state.kernel_cfg.core_radius}};
    if (c.state.kernel_cfg.truncated())
        j["kernel"]["truncation_radius"] = c.state.kernel_cfg.truncation_radius;
    else
        j["kernel"]["truncation_radius"] = nullptr;
    std::vector<double> x1, x2, gamma, core;
    x1.reserve(c.state.blobs.size());
    for (const auto& b : c.state.blobs) {
        x1.push_back(b.pos.x1);
        x2.push_back(b.pos.x2);
        gamma.push_back(b.gamma);
        core.push_back(b.core);
    }
    j["blobs"] = {{"x1", x1}, {"x2", x2}, {"gamma", gamma}, {"core", core}};
    j["config_echo"] = c.config_echo;

    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw IoError("cannot write checkpoint: " + tmp);
        out << j.dump();
        if (!out) throw IoError("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw IoError("cannot move checkpoint into place: " + path);
}

Checkpoint read_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open checkpoint: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("checkpoint parse error in " + path + ": " + e.what());
    }
    Checkpoint c;
    c.schema_version = j.value("schema_version", -1);
    if (c.schema_version != checkpoint_schema_version)
        throw ConfigError("checkpoint schema version " +
                          std::to_string(c.schema_version) + " does not match " +
                          std::to_string(checkpoint_schema_version));
    c.state.time = j.at("time").get<double>();
    c.state.viscosity = j.at("viscosity").get<double>();
    c.state.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    c.state.step_index = j.at("step_index").get<std::uint64_t>();
    c.ensemble_id = j.value("ensemble_id", 0);
    const auto& k = j.at("kernel");
    c.state.kernel_cfg.normalization = k.at("normalization").get<double>();
    c.state.kernel_cfg.core_radius = k.at("core_radius").get<double>();
    c.state.kernel_cfg.truncation_radius =
        k.at("truncation_radius").is_null()
            ? std::numeric_limits<double>::infinity()
            : k.at("truncation_radius").get<double>();
    const auto& b = j.at("blobs");
    const auto x1 = b.at("x1").get<std::vector<double>>();
    const auto x2 = b.at("x2").get<std::vector<double>>();
    const auto gamma = b.at("gamma").get<std::vector<double>>();
    const auto core = b.at("core").get<std::vector<double>>();
    if (x1.size() != x2.size() || x1.size() != gamma.size() || x1.size() != core.size())
        throw ConfigError("checkpoint: blob array lengths disagree");
    c.state.blobs.resize(x1.size());
    for (std::size_t i = 0; i < x1.size(); ++i) {
        // Positions are stored canonically; bypass the wrapping constructor so
        // the restart is bit-identical.
        c.state.blobs[i].pos.x1 = x1[i];
        c.state.blobs[i].pos.x2 = x2[i];
        c.state.blobs[i].gamma = gamma[i];
        c.state.blobs[i].core = core[i];
    }
    c.config_echo = j.value("config_echo", nlohmann::json::object());
    return c;
}

} // namespace cylflow
