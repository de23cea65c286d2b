#include "cylflow/manifest.hpp"

#include <cstdio>
#include <fstream>

#include "cylflow/errors.hpp"

namespace cylflow {

nlohmann::json RunManifest::to_json() const {
    nlohmann::json j;
    j["config"] = config_echo;
    j["code_version"] = code_version;
    j["decay_envelope"] = {{"c1", envelope_certification.envelope.c1},
                           {"c2", envelope_certification.envelope.c2},
                           {"samples", envelope_certification.samples},
                           {"max_ratio", envelope_certification.max_ratio},
                           {"worst_r", envelope_certification.worst_r},
                           {"pass", envelope_certification.pass}};
    j["normalization"] = normalization;
    j["status"] = status;
    j["wall_clock_sec"] = wall_clock_sec;
    j["seed_outputs"] = seed_outputs;
    j["artifacts"] = artifacts;
    return j;
}

void RunManifest::write(const std::string& path) const {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw IoError("cannot write manifest: " + tmp);
        out << to_json().dump(2) << "\n";
        if (!out) throw IoError("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw IoError("cannot move manifest into place: " + path);
}

} // namespace cylflow
