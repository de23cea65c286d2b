#include "cylflow/run_config.hpp"

#include <cmath>
#include <fstream>

#include "cylflow/errors.hpp"

namespace cylflow {

namespace {

// Tolerant field access: missing keys keep defaults, wrong types are errors.
template <typename T>
void get_if(const nlohmann::json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config field '") + key + "': " + e.what());
    }
}

std::string scheme_to_string(TimeScheme s) {
    switch (s) {
        case TimeScheme::rk4: return "rk4";
        case TimeScheme::rk2: return "rk2";
        case TimeScheme::euler_fwd: return "euler_fwd";
    }
    return "?";
}

TimeScheme scheme_from_string(const std::string& s) {
    if (s == "rk4") return TimeScheme::rk4;
    if (s == "rk2") return TimeScheme::rk2;
    if (s == "euler_fwd") return TimeScheme::euler_fwd;
    throw ConfigError("unknown time scheme: " + s);
}

std::string policy_to_string(CheckpointPolicy p) {
    switch (p) {
        case CheckpointPolicy::none: return "none";
        case CheckpointPolicy::final_only: return "final";
        case CheckpointPolicy::schedule: return "schedule";
    }
    return "?";
}

CheckpointPolicy policy_from_string(const std::string& s) {
    if (s == "none") return CheckpointPolicy::none;
    if (s == "final") return CheckpointPolicy::final_only;
    if (s == "schedule") return CheckpointPolicy::schedule;
    throw ConfigError("unknown checkpoint policy: " + s);
}

} // namespace

void ScheduleSpec::validate() const {
    if (kind == ScheduleKind::linear) {
        if (!(dt_out > 0.0)) throw ConfigError("schedule: dt_out must be positive");
    } else {
        if (!(ratio > 1.0)) throw ConfigError("schedule: geometric ratio must exceed 1");
        if (!(t_first > 0.0)) throw ConfigError("schedule: t_first must be positive");
    }
}

std::vector<double> ScheduleSpec::times(double t0, double t_end) const {
    validate();
    if (!(t_end >= t0)) throw ConfigError("schedule: t_end must be >= t0");
    std::vector<double> out{t0};
    if (kind == ScheduleKind::linear) {
        for (long k = 1;; ++k) {
            const double t = t0 + dt_out * static_cast<double>(k);
            if (t > t_end * (1.0 + 1e-12)) break;
            out.push_back(std::min(t, t_end));
        }
    } else {
        for (double t = t_first;; t *= ratio) {
            if (t <= out.back() * (1.0 + 1e-12)) continue;
            if (t > t_end * (1.0 + 1e-12)) break;
            out.push_back(t);
        }
    }
    if (out.back() < t_end) out.push_back(t_end);
    return out;
}

std::vector<double> BoundReplayConfig::sweep_times() const {
    if (!t_values.empty()) return t_values;
    if (!(t_count >= 2) || !(t_min > 0.0) || !(t_max > t_min))
        throw ConfigError("bound replay: need explicit t values or a valid "
                          "(t_min, t_max, t_count) range");
    std::vector<double> out;
    out.reserve(t_count);
    const double step = std::log(t_max / t_min) / static_cast<double>(t_count - 1);
    for (std::size_t i = 0; i < t_count; ++i)
        out.push_back(t_min * std::exp(step * static_cast<double>(i)));
    return out;
}

void RunConfig::validate() const {
    kernel.validate();
    schedule.validate();
    diagnostics_spec().validate();
    switch (mode) {
        case RunMode::euler:
            patch.validate();
            step.validate();
            if (viscosity != 0.0)
                throw ConfigError("config: euler mode requires viscosity = 0");
            break;
        case RunMode::ns:
            patch.validate();
            if (!(ns_dt > 0.0)) throw ConfigError("config: ns dt must be positive");
            if (!frozen_transport) step.validate();
            if (!(viscosity > 0.0))
                throw ConfigError("config: ns mode requires viscosity > 0");
            if (seeds.empty()) throw ConfigError("config: ns mode needs at least one seed");
            break;
        case RunMode::bound_replay:
            (void)bounds.sweep_times();
            break;
        case RunMode::report:
            report.envelope.validate();
            if (report.inputs.empty())
                throw ConfigError("config: report mode needs input CSV paths");
            break;
    }
}

DiagnosticsSpec RunConfig::diagnostics_spec() const {
    return {h_grid, mollifier_pairs};
}

RunConfig config_from_json(const nlohmann::json& j) {
    RunConfig c;
    std::string mode_s = to_string(c.mode);
    get_if(j, "mode", mode_s);
    c.mode = run_mode_from_string(mode_s);

    if (j.contains("patch")) {
        const auto& p = j.at("patch");
        std::string shape = to_string(c.patch.shape);
        get_if(p, "shape", shape);
        c.patch.shape = patch_shape_from_string(shape);
        if (p.contains("center")) {
            const auto& ctr = p.at("center");
            if (!ctr.is_array() || ctr.size() != 2)
                throw ConfigError("config: patch.center must be [x1, x2]");
            c.patch.center_x1 = ctr[0].get<double>();
            c.patch.center_x2 = ctr[1].get<double>();
        }
        get_if(p, "radius", c.patch.radius);
        get_if(p, "omega_level", c.patch.omega_level);
        get_if(p, "sigma", c.patch.sigma);
        get_if(p, "cutoff_radius", c.patch.cutoff_radius);
        get_if(p, "amplitude", c.patch.amplitude);
        get_if(p, "r_in", c.patch.r_in);
        get_if(p, "r_out", c.patch.r_out);
        get_if(p, "n_blobs", c.patch.n_blobs);
        std::string seeding = to_string(c.patch.seeding);
        get_if(p, "seeding", seeding);
        c.patch.seeding = seeding_from_string(seeding);
        get_if(p, "core_override", c.patch.core_override);
    }
    if (j.contains("kernel")) {
        const auto& k = j.at("kernel");
        get_if(k, "normalization", c.kernel.normalization);
        get_if(k, "core_radius", c.kernel.core_radius);
        if (k.contains("truncation_radius")) {
            if (k.at("truncation_radius").is_null()) {
                c.kernel.truncation_radius = std::numeric_limits<double>::infinity();
            } else {
                get_if(k, "truncation_radius", c.kernel.truncation_radius);
            }
        }
    }
    if (j.contains("step")) {
        const auto& st = j.at("step");
        get_if(st, "dt", c.step.dt);
        std::string scheme = scheme_to_string(c.step.scheme);
        get_if(st, "scheme", scheme);
        c.step.scheme = scheme_from_string(scheme);
        get_if(st, "adaptive", c.step.adaptive);
        get_if(st, "adaptive_tol", c.step.adaptive_tol);
    }
    get_if(j, "ns_dt", c.ns_dt);
    get_if(j, "viscosity", c.viscosity);
    get_if(j, "frozen_transport", c.frozen_transport);
    get_if(j, "t_end", c.t_end);
    if (j.contains("schedule")) {
        const auto& s = j.at("schedule");
        std::string kind = c.schedule.kind == ScheduleKind::linear ? "linear" : "geometric";
        get_if(s, "kind", kind);
        if (kind == "linear") c.schedule.kind = ScheduleKind::linear;
        else if (kind == "geometric") c.schedule.kind = ScheduleKind::geometric;
        else throw ConfigError("unknown schedule kind: " + kind);
        get_if(s, "dt_out", c.schedule.dt_out);
        get_if(s, "t_first", c.schedule.t_first);
        get_if(s, "ratio", c.schedule.ratio);
    }
    get_if(j, "h_grid", c.h_grid);
    if (j.contains("mollifier_pairs")) {
        c.mollifier_pairs.clear();
        for (const auto& p : j.at("mollifier_pairs")) {
            if (!p.is_array() || p.size() != 2)
                throw ConfigError("config: mollifier_pairs entries must be [R, h]");
            c.mollifier_pairs.push_back({p[0].get<double>(), p[1].get<double>()});
        }
    }
    get_if(j, "output_dir", c.output_dir);
    get_if(j, "seeds", c.seeds);
    std::string policy = policy_to_string(c.checkpoints);
    get_if(j, "checkpoints", policy);
    c.checkpoints = policy_from_string(policy);

    if (j.contains("bounds")) {
        const auto& b = j.at("bounds");
        std::string regime = to_string(c.bounds.regime);
        get_if(b, "regime", regime);
        c.bounds.regime = regime_from_string(regime);
        get_if(b, "t_values", c.bounds.t_values);
        get_if(b, "t_min", c.bounds.t_min);
        get_if(b, "t_max", c.bounds.t_max);
        get_if(b, "t_count", c.bounds.t_count);
        get_if(b, "alpha", c.bounds.alpha);
        get_if(b, "beta", c.bounds.beta);
        get_if(b, "delta", c.bounds.delta);
        get_if(b, "big_c", c.bounds.big_c);
        get_if(b, "m0", c.bounds.m0);
        get_if(b, "support_radius", c.bounds.support_radius);
    }
    if (j.contains("report")) {
        const auto& r = j.at("report");
        get_if(r, "inputs", c.report.inputs);
        std::string kind = to_string(c.report.envelope.kind);
        get_if(r, "kind", kind);
        c.report.envelope.kind = envelope_kind_from_string(kind);
        get_if(r, "alpha", c.report.envelope.alpha);
        get_if(r, "beta", c.report.envelope.beta);
        get_if(r, "delta", c.report.envelope.delta);
        get_if(r, "ell", c.report.envelope.ell);
        get_if(r, "fit_t_min", c.report.fit_t_min);
        get_if(r, "fit_t_max", c.report.fit_t_max);
    }
    return c;
}

nlohmann::json config_to_json(const RunConfig& c) {
    nlohmann::json j;
    j["mode"] = to_string(c.mode);
    j["patch"] = {
        {"shape", to_string(c.patch.shape)},
        {"center", {c.patch.center_x1, c.patch.center_x2}},
        {"radius", c.patch.radius},
        {"omega_level", c.patch.omega_level},
        {"sigma", c.patch.sigma},
        {"cutoff_radius", c.patch.cutoff_radius},
        {"amplitude", c.patch.amplitude},
        {"r_in", c.patch.r_in},
        {"r_out", c.patch.r_out},
        {"n_blobs", c.patch.n_blobs},
        {"seeding", to_string(c.patch.seeding)},
        {"core_override", c.patch.core_override},
    };
    j["kernel"] = {{"normalization", c.kernel.normalization},
                   {"core_radius", c.kernel.core_radius}};
    if (c.kernel.truncated())
        j["kernel"]["truncation_radius"] = c.kernel.truncation_radius;
    else
        j["kernel"]["truncation_radius"] = nullptr;
    j["step"] = {{"dt", c.step.dt},
                 {"scheme", scheme_to_string(c.step.scheme)},
                 {"adaptive", c.step.adaptive},
                 {"adaptive_tol", c.step.adaptive_tol}};
    j["ns_dt"] = c.ns_dt;
    j["viscosity"] = c.viscosity;
    j["frozen_transport"] = c.frozen_transport;
    j["t_end"] = c.t_end;
    j["schedule"] = {{"kind", c.schedule.kind == ScheduleKind::linear ? "linear" : "geometric"},
                     {"dt_out", c.schedule.dt_out},
                     {"t_first", c.schedule.t_first},
                     {"ratio", c.schedule.ratio}};
    j["h_grid"] = c.h_grid;
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& p : c.mollifier_pairs) pairs.push_back({p.R, p.h});
    j["mollifier_pairs"] = pairs;
    j["output_dir"] = c.output_dir;
    j["seeds"] = c.seeds;
    j["checkpoints"] = policy_to_string(c.checkpoints);
    j["bounds"] = {{"regime", to_string(c.bounds.regime)},
                   {"t_values", c.bounds.t_values},
                   {"t_min", c.bounds.t_min},
                   {"t_max", c.bounds.t_max},
                   {"t_count", c.bounds.t_count},
                   {"alpha", c.bounds.alpha},
                   {"beta", c.bounds.beta},
                   {"delta", c.bounds.delta},
                   {"big_c", c.bounds.big_c},
                   {"m0", c.bounds.m0},
                   {"support_radius", c.bounds.support_radius}};
    j["report"] = {{"inputs", c.report.inputs},
                   {"kind", to_string(c.report.envelope.kind)},
                   {"alpha", c.report.envelope.alpha},
                   {"beta", c.report.envelope.beta},
                   {"delta", c.report.envelope.delta},
                   {"ell", c.report.envelope.ell},
                   {"fit_t_min", c.report.fit_t_min},
                   {"fit_t_max", c.report.fit_t_max}};
    return j;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    return config_from_json(j);
}

bool operator==(const RunConfig& a, const RunConfig& b) {
    return config_to_json(a) == config_to_json(b);
}

std::string to_string(RunMode m) {
    switch (m) {
        case RunMode::euler: return "euler";
        case RunMode::ns: return "ns";
        case RunMode::bound_replay: return "bound_replay";
        case RunMode::report: return "report";
    }
    return "?";
}

RunMode run_mode_from_string(const std::string& s) {
    if (s == "euler") return RunMode::euler;
    if (s == "ns") return RunMode::ns;
    if (s == "bound_replay") return RunMode::bound_replay;
    if (s == "report") return RunMode::report;
    throw ConfigError("unknown run mode: " + s);
}

} // namespace cylflow
