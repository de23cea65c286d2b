#include "cylflow/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "cylflow/checkpoint.hpp"
#include "cylflow/errors.hpp"
#include "cylflow/manifest.hpp"
#include "cylflow/ns.hpp"

namespace cylflow {

namespace fs = std::filesystem;

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << body;
    if (!out) throw IoError("write failed: " + path);
}

std::string join_path(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

class CsvWriter {
public:
    CsvWriter(std::string path, const DiagnosticsSpec& spec) : path_(std::move(path)) {
        out_.open(path_, std::ios::binary);
        if (!out_) throw IoError("cannot write " + path_);
        out_ << diagnostics_csv_header(spec) << "\r\n";
    }
    void row(const DiagnosticsRecord& r) { out_ << diagnostics_csv_row(r) << "\r\n"; }
    void close() {
        out_.close();
        if (out_.fail()) throw IoError("write failed: " + path_);
    }

private:
    std::string path_;
    std::ofstream out_;
};

struct DynamicsArtifacts {
    std::vector<std::vector<DiagnosticsRecord>> per_seed;
    std::vector<std::string> seed_paths;
    std::vector<std::string> extra;
};

// Shared driver for euler and ns runs (per seed for ns, single pass for euler).
DynamicsArtifacts run_dynamics(const RunConfig& c, std::ostream& log) {
    DynamicsArtifacts art;
    const DiagnosticsSpec diag = c.diagnostics_spec();
    const nlohmann::json echo = config_to_json(c);

    const auto seeds = c.mode == RunMode::euler
                           ? std::vector<std::uint64_t>{0}
                           : c.seeds;
    for (std::size_t si = 0; si < seeds.size(); ++si) {
        FlowState state = discretize(c.patch);
        state.kernel_cfg = c.kernel;
        state.viscosity = c.mode == RunMode::ns ? c.viscosity : 0.0;
        state.rng_seed = seeds[si];
        validate_state(state);

        const auto schedule = c.schedule.times(state.time, c.t_end);
        const std::string csv_name = c.mode == RunMode::euler
                                         ? std::string("diagnostics.csv")
                                         : "diagnostics_seed" + std::to_string(seeds[si]) + ".csv";
        const std::string csv_path = join_path(c.output_dir, csv_name);
        CsvWriter csv(csv_path, diag);

        std::size_t n_checkpoints = 0;
        auto on_sample = [&](const FlowState& s, const DiagnosticsRecord& r) {
            csv.row(r);
            if (c.checkpoints == CheckpointPolicy::schedule) {
                Checkpoint cp{checkpoint_schema_version, s, echo,
                              static_cast<int>(seeds[si])};
                const std::string name = (c.mode == RunMode::euler
                                              ? std::string("checkpoint_t")
                                              : "checkpoint_seed" + std::to_string(seeds[si]) + "_t") +
                                         fmt17(s.time) + ".json";
                write_checkpoint(cp, join_path(c.output_dir, name));
                art.extra.push_back(name);
                ++n_checkpoints;
            }
        };

        std::vector<DiagnosticsRecord> records;
        if (c.mode == RunMode::euler) {
            records = run_euler(state, c.t_end, c.step, schedule, diag, on_sample);
        } else {
            NsStepConfig ns_cfg;
            ns_cfg.dt = c.ns_dt;
            ns_cfg.transport = c.step;
            ns_cfg.rng_seed = seeds[si];
            ns_cfg.ensemble_id = static_cast<int>(si);
            ns_cfg.frozen_transport = c.frozen_transport;
            records = run_ns(state, c.t_end, ns_cfg, schedule, diag, on_sample);
        }
        csv.close();

        if (c.checkpoints != CheckpointPolicy::none) {
            Checkpoint cp{checkpoint_schema_version, state, echo,
                          static_cast<int>(seeds[si])};
            const std::string name = c.mode == RunMode::euler
                                         ? std::string("checkpoint_final.json")
                                         : "checkpoint_seed" + std::to_string(seeds[si]) + "_final.json";
            write_checkpoint(cp, join_path(c.output_dir, name));
            art.extra.push_back(name);
        }

        art.per_seed.push_back(std::move(records));
        art.seed_paths.push_back(csv_path);
        log << "  wrote " << csv_path << " (" << art.per_seed.back().size()
            << " records)\n";
    }
    return art;
}

int run_bound_replay(const RunConfig& c, std::ostream& log) {
    const auto ts = c.bounds.sweep_times();
    std::string csv = "regime,t,alpha,beta,delta,big_c,n,h,log_recursive,log_closed\r\n";
    nlohmann::json certs = nlohmann::json::array();
    for (double t : ts) {
        const double ab = c.bounds.regime == Regime::ns_b ? c.bounds.beta : c.bounds.alpha;
        const auto plan = make_plan(c.bounds.regime, t, ab, c.bounds.delta, c.bounds.big_c);
        const auto cert = recursive_log_bound(plan, c.bounds.m0, c.bounds.support_radius);
        certs.push_back(nlohmann::json::parse(cert.json()));
        csv += to_string(plan.regime) + "," + fmt17(t) + "," + fmt17(plan.alpha) + "," +
               fmt17(plan.beta) + "," + fmt17(plan.delta) + "," + fmt17(plan.big_c) + "," +
               std::to_string(plan.n) + "," + fmt17(plan.h) + "," +
               fmt17(cert.log_recursive_bound) + "," + fmt17(cert.log_closed_form) + "\r\n";
    }
    write_text(join_path(c.output_dir, "certificates.json"), certs.dump(2) + "\n");
    write_text(join_path(c.output_dir, "bounds.csv"), csv);
    log << "  wrote " << ts.size() << " certificates\n";
    return exit_ok;
}

int run_report(const RunConfig& c, std::ostream& log) {
    std::vector<std::vector<DiagnosticsRecord>> streams;
    for (const auto& path : c.report.inputs)
        streams.push_back(read_diagnostics_csv(path));

    // Ensemble mean of the record streams when several are given.
    std::vector<DiagnosticsRecord> records;
    if (streams.size() == 1) {
        records = streams.front();
    } else {
        const std::size_t nrec = streams.front().size();
        for (const auto& s : streams)
            if (s.size() != nrec)
                throw ConfigError("report: input streams have different lengths");
        records = streams.front();
        for (std::size_t k = 0; k < nrec; ++k) {
            auto& r = records[k];
            for (std::size_t s = 1; s < streams.size(); ++s) {
                const auto& o = streams[s][k];
                r.total_mass += o.total_mass;
                r.diameter += o.diameter;
                r.max_abs_x1 += o.max_abs_x1;
                r.center_x1 += o.center_x1;
                r.first_moment_x1 += o.first_moment_x1;
                r.hamiltonian += o.hamiltonian;
                for (std::size_t i = 0; i < r.tail_mass.size(); ++i)
                    r.tail_mass[i] += o.tail_mass[i];
                for (std::size_t i = 0; i < r.mollified_tail.size(); ++i)
                    r.mollified_tail[i] += o.mollified_tail[i];
            }
            const auto ns = static_cast<double>(streams.size());
            r.total_mass /= ns;
            r.diameter /= ns;
            r.max_abs_x1 /= ns;
            r.center_x1 /= ns;
            r.first_moment_x1 /= ns;
            r.hamiltonian /= ns;
            for (auto& v : r.tail_mass) v /= ns;
            for (auto& v : r.mollified_tail) v /= ns;
        }
    }
    // The envelopes need t > 1.
    std::erase_if(records, [](const DiagnosticsRecord& r) { return r.time <= 1.0; });
    const auto rep = build_report(records, c.report.envelope,
                                  c.report.fit_t_min, c.report.fit_t_max);
    write_text(join_path(c.output_dir, "report.json"), rep.json() + "\n");
    write_text(join_path(c.output_dir, "report.csv"), rep.csv());
    log << rep.summary();
    return exit_ok;
}

int dispatch(const RunConfig& c, std::ostream& log) {
    c.validate();
    std::error_code ec;
    fs::create_directories(c.output_dir, ec);
    if (ec) throw IoError("cannot create output dir " + c.output_dir + ": " + ec.message());

    const auto t_start = std::chrono::steady_clock::now();
    RunManifest manifest;
    manifest.config_echo = config_to_json(c);
    manifest.normalization = c.kernel.normalization;
    manifest.envelope_certification = validate_decay_envelope(DecayEnvelope{}, 4096);
    const std::string manifest_path = join_path(c.output_dir, "manifest.json");
    manifest.write(manifest_path); // status: running, before long computation

    int code = exit_ok;
    try {
        switch (c.mode) {
            case RunMode::euler:
            case RunMode::ns: {
                const auto art = run_dynamics(c, log);
                manifest.seed_outputs = art.seed_paths;
                manifest.artifacts = art.extra;
                if (c.mode == RunMode::ns && art.per_seed.size() > 1) {
                    const auto stats = aggregate(art.per_seed, c.diagnostics_spec());
                    const std::string agg = join_path(c.output_dir, "diagnostics_ensemble.csv");
                    write_text(agg, ensemble_csv(stats));
                    manifest.artifacts.push_back(agg);
                }
                break;
            }
            case RunMode::bound_replay:
                code = run_bound_replay(c, log);
                break;
            case RunMode::report:
                code = run_report(c, log);
                break;
        }
    } catch (...) {
        manifest.status = "incomplete";
        manifest.wall_clock_sec =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
        manifest.write(manifest_path);
        throw;
    }
    manifest.status = "complete";
    manifest.wall_clock_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    manifest.write(manifest_path);
    return code;
}

} // namespace

int run(const RunConfig& config, std::ostream& log) {
    try {
        return dispatch(config, log);
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << "\n";
        return exit_config_error;
    } catch (const IoError& e) {
        log << "i/o error: " << e.what() << "\n";
        return exit_io_error;
    } catch (const NumericalError& e) {
        log << "numerical error: " << e.what() << "\n";
        return exit_numerical_error;
    }
}

int resume(const std::string& checkpoint_path, const RunConfig* overrides,
           bool allow_param_change, std::ostream& log) {
    try {
        const Checkpoint cp = read_checkpoint(checkpoint_path);
        RunConfig c = config_from_json(cp.config_echo);
        if (overrides) {
            RunConfig o = *overrides;
            // t_end and output_dir may always change; anything else needs the flag.
            RunConfig probe = o;
            probe.t_end = c.t_end;
            probe.output_dir = c.output_dir;
            if (!(probe == c) && !allow_param_change)
                throw ConfigError("resume: parameters differ from the checkpointed run "
                                  "(pass --allow-param-change to accept)");
            c = o;
        }
        c.validate();
        std::error_code ec;
        fs::create_directories(c.output_dir, ec);
        if (ec) throw IoError("cannot create output dir " + c.output_dir);

        FlowState state = cp.state;
        if (state.time >= c.t_end) {
            log << "resume: checkpoint already at t = " << state.time << ", nothing to do\n";
            return exit_ok;
        }
        const DiagnosticsSpec diag = c.diagnostics_spec();
        const auto full = c.schedule.times(0.0, c.t_end);
        std::vector<double> remaining;
        for (double t : full)
            if (t > state.time * (1.0 + 1e-15)) remaining.push_back(t);

        const std::string csv_path = join_path(
            c.output_dir, c.mode == RunMode::euler
                              ? std::string("diagnostics_resumed.csv")
                              : "diagnostics_resumed_seed" + std::to_string(state.rng_seed) + ".csv");
        CsvWriter csv(csv_path, diag);
        auto on_sample = [&](const FlowState&, const DiagnosticsRecord& r) { csv.row(r); };

        if (c.mode == RunMode::euler) {
            run_euler(state, c.t_end, c.step, remaining, diag, on_sample);
        } else if (c.mode == RunMode::ns) {
            NsStepConfig ns_cfg;
            ns_cfg.dt = c.ns_dt;
            ns_cfg.transport = c.step;
            ns_cfg.rng_seed = state.rng_seed;
            ns_cfg.ensemble_id = cp.ensemble_id;
            ns_cfg.frozen_transport = c.frozen_transport;
            run_ns(state, c.t_end, ns_cfg, remaining, diag, on_sample);
        } else {
            throw ConfigError("resume: only euler/ns runs are checkpointable");
        }
        csv.close();

        Checkpoint out{checkpoint_schema_version, state, config_to_json(c), cp.ensemble_id};
        write_checkpoint(out, join_path(c.output_dir, "checkpoint_final.json"));
        log << "  wrote " << csv_path << "\n";
        return exit_ok;
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << "\n";
        return exit_config_error;
    } catch (const IoError& e) {
        log << "i/o error: " << e.what() << "\n";
        return exit_io_error;
    } catch (const NumericalError& e) {
        log << "numerical error: " << e.what() << "\n";
        return exit_numerical_error;
    }
}

std::vector<DiagnosticsRecord> read_diagnostics_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty diagnostics file: " + path);
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();

    // Parse the header: fixed scalar columns, then m(h=...), then mu(R=...;h=...).
    std::vector<std::string> cols;
    std::stringstream hs(line);
    std::string tok;
    while (std::getline(hs, tok, ',')) cols.push_back(tok);
    constexpr std::size_t n_fixed = 7;
    if (cols.size() < n_fixed || cols[0] != "time")
        throw ConfigError("not a diagnostics CSV: " + path);

    std::vector<double> h_grid;
    std::vector<MollifierPair> pairs;
    for (std::size_t i = n_fixed; i < cols.size(); ++i) {
        const auto& cname = cols[i];
        if (cname.rfind("m(h=", 0) == 0) {
            h_grid.push_back(std::stod(cname.substr(4)));
        } else if (cname.rfind("mu(R=", 0) == 0) {
            const auto semi = cname.find(";h=");
            pairs.push_back({std::stod(cname.substr(5)),
                             std::stod(cname.substr(semi + 3))});
        } else {
            throw ConfigError("unexpected diagnostics column: " + cname);
        }
    }

    std::vector<DiagnosticsRecord> records;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (line.empty()) continue;
        std::vector<double> v;
        std::stringstream ls(line);
        while (std::getline(ls, tok, ',')) v.push_back(std::stod(tok));
        if (v.size() != cols.size())
            throw ConfigError("diagnostics row width mismatch in " + path);
        DiagnosticsRecord r;
        r.time = v[0];
        r.total_mass = v[1];
        r.diameter = v[2];
        r.max_abs_x1 = v[3];
        r.center_x1 = v[4];
        r.first_moment_x1 = v[5];
        r.hamiltonian = v[6];
        r.h_grid = h_grid;
        r.tail_mass.assign(v.begin() + n_fixed,
                           v.begin() + n_fixed + static_cast<std::ptrdiff_t>(h_grid.size()));
        r.mu_pairs = pairs;
        r.mollified_tail.assign(v.begin() + n_fixed + static_cast<std::ptrdiff_t>(h_grid.size()),
                                v.end());
        records.push_back(std::move(r));
    }
    return records;
}

EnsembleStats aggregate(const std::vector<std::vector<DiagnosticsRecord>>& per_seed,
                        const DiagnosticsSpec& spec) {
    if (per_seed.empty()) throw ConfigError("aggregate: no record streams");
    const std::size_t nrec = per_seed.front().size();
    for (const auto& s : per_seed)
        if (s.size() != nrec) throw ConfigError("aggregate: streams differ in length");

    EnsembleStats out;
    out.columns = {"total_mass", "diameter", "max_abs_x1", "center_x1",
                   "first_moment_x1", "hamiltonian"};
    for (double h : spec.h_grid) out.columns.push_back("m(h=" + fmt17(h) + ")");
    for (const auto& p : spec.mollifier_pairs)
        out.columns.push_back("mu(R=" + fmt17(p.R) + ";h=" + fmt17(p.h) + ")");

    auto values_of = [&](const DiagnosticsRecord& r) {
        std::vector<double> v{r.total_mass, r.diameter, r.max_abs_x1,
                              r.center_x1, r.first_moment_x1, r.hamiltonian};
        v.insert(v.end(), r.tail_mass.begin(), r.tail_mass.end());
        v.insert(v.end(), r.mollified_tail.begin(), r.mollified_tail.end());
        return v;
    };

    const auto n_seeds = static_cast<double>(per_seed.size());
    for (std::size_t k = 0; k < nrec; ++k) {
        out.times.push_back(per_seed.front()[k].time);
        std::vector<double> mean(out.columns.size(), 0.0);
        std::vector<double> m2(out.columns.size(), 0.0);
        for (const auto& s : per_seed) {
            const auto v = values_of(s[k]);
            for (std::size_t c = 0; c < v.size(); ++c) mean[c] += v[c];
        }
        for (auto& m : mean) m /= n_seeds;
        for (const auto& s : per_seed) {
            const auto v = values_of(s[k]);
            for (std::size_t c = 0; c < v.size(); ++c) {
                const double d = v[c] - mean[c];
                m2[c] += d * d;
            }
        }
        std::vector<double> se(out.columns.size(), 0.0);
        if (per_seed.size() > 1)
            for (std::size_t c = 0; c < se.size(); ++c)
                se[c] = std::sqrt(m2[c] / (n_seeds * (n_seeds - 1.0)));
        out.mean.push_back(std::move(mean));
        out.stderr_.push_back(std::move(se));
    }
    return out;
}

std::string ensemble_csv(const EnsembleStats& s) {
    std::string out = "time";
    for (const auto& c : s.columns) out += "," + c + "_mean," + c + "_se";
    out += "\r\n";
    for (std::size_t k = 0; k < s.times.size(); ++k) {
        out += fmt17(s.times[k]);
        for (std::size_t c = 0; c < s.columns.size(); ++c)
            out += "," + fmt17(s.mean[k][c]) + "," + fmt17(s.stderr_[k][c]);
        out += "\r\n";
    }
    return out;
}

} // namespace cylflow
