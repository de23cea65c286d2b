/// cylflow command line: simulate | replay-bounds | report | resume |
/// validate-kernel. Configuration is JSON; flags mirror the config fields and
/// override them. CYLFLOW_OUTPUT_ROOT prefixes relative output directories.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>

#include "cylflow/bound_replay.hpp"
#include "cylflow/checkpoint.hpp"
#include "cylflow/errors.hpp"
#include "cylflow/manifest.hpp"
#include "cylflow/runner.hpp"

namespace {

using namespace cylflow;

std::string resolve_output_dir(const std::string& dir) {
    if (dir.empty()) return dir;
    if (std::filesystem::path(dir).is_absolute()) return dir;
    if (const char* root = std::getenv("CYLFLOW_OUTPUT_ROOT"))
        return (std::filesystem::path(root) / dir).string();
    return dir;
}

void set_threads(int threads) {
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"vortex-method simulator and confinement diagnostics on the cylinder"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    int threads = 0;
    app.add_option("--threads", threads, "OpenMP thread count (0 = runtime default)");

    // ---- simulate ----------------------------------------------------------
    auto* sim = app.add_subcommand("simulate", "run euler/ns dynamics from a JSON config");
    std::string sim_config;
    sim->add_option("--config", sim_config, "JSON run configuration")->required();
    double sim_t_end = -1.0;
    sim->add_option("--t-end", sim_t_end, "override t_end");
    std::string sim_out;
    sim->add_option("--output-dir", sim_out, "override output directory");
    std::vector<std::uint64_t> sim_seeds;
    sim->add_option("--seed", sim_seeds, "override the seed list");
    std::string sim_checkpoints;
    sim->add_option("--checkpoints", sim_checkpoints, "checkpoint policy: none|final|schedule");

    // ---- replay-bounds -----------------------------------------------------
    auto* rb = app.add_subcommand("replay-bounds",
                                  "evaluate the tail-mass iteration bounds over a t sweep");
    std::string rb_regime = "ns_a";
    rb->add_option("--regime", rb_regime, "ns_a | ns_b | euler");
    std::vector<double> rb_t;
    rb->add_option("--t", rb_t, "explicit t values");
    double rb_tmin = 0.0, rb_tmax = 0.0;
    std::size_t rb_tcount = 0;
    rb->add_option("--t-min", rb_tmin);
    rb->add_option("--t-max", rb_tmax);
    rb->add_option("--t-count", rb_tcount, "log-spaced sweep size");
    double rb_alpha = 2.0, rb_beta = 0.75, rb_delta = 0.25, rb_bigc = 1.0, rb_m0 = 1.0;
    double rb_support = 0.0;
    rb->add_option("--alpha", rb_alpha);
    rb->add_option("--beta", rb_beta);
    rb->add_option("--delta", rb_delta);
    rb->add_option("--big-c", rb_bigc, "generic constant of the recursion");
    rb->add_option("--m0", rb_m0, "total vorticity mass");
    rb->add_option("--support-radius", rb_support, "initial support radius");
    std::string rb_out = "bounds_out";
    rb->add_option("--output-dir", rb_out);
    bool rb_rho = false;
    rb->add_flag("--rho-table", rb_rho, "also integrate the comparison ODE and emit rho.csv");
    double rb_rho0 = 5.0, rb_rho_t0 = 1.0, rb_rho_t1 = 100.0;
    std::size_t rb_rho_steps = 4000;
    rb->add_option("--rho0", rb_rho0);
    rb->add_option("--rho-t0", rb_rho_t0);
    rb->add_option("--rho-t1", rb_rho_t1);
    rb->add_option("--rho-steps", rb_rho_steps);

    // ---- report ------------------------------------------------------------
    auto* rep = app.add_subcommand("report", "confinement report from diagnostics CSVs");
    std::vector<std::string> rep_inputs;
    rep->add_option("--input", rep_inputs, "diagnostics CSV path(s)")->required();
    std::string rep_kind = "euler_cuberoot_log";
    rep->add_option("--kind", rep_kind, "ns_sqrt_log | ns_power | euler_cuberoot_log");
    double rep_alpha = 2.0, rep_beta = 0.75, rep_delta = 0.25, rep_ell = 1.0;
    rep->add_option("--alpha", rep_alpha);
    rep->add_option("--beta", rep_beta);
    rep->add_option("--delta", rep_delta);
    rep->add_option("--ell", rep_ell);
    double rep_tmin = 0.0, rep_tmax = 0.0;
    rep->add_option("--fit-t-min", rep_tmin);
    rep->add_option("--fit-t-max", rep_tmax);
    std::string rep_out = "report_out";
    rep->add_option("--output-dir", rep_out);

    // ---- resume ------------------------------------------------------------
    auto* res = app.add_subcommand("resume", "continue a checkpointed run");
    std::string res_checkpoint;
    res->add_option("--checkpoint", res_checkpoint, "checkpoint JSON")->required();
    double res_t_end = -1.0;
    res->add_option("--t-end", res_t_end, "override t_end");
    std::string res_out;
    res->add_option("--output-dir", res_out, "override output directory");
    double res_dt = -1.0;
    res->add_option("--dt", res_dt, "override transport dt (needs --allow-param-change)");
    bool res_allow = false;
    res->add_flag("--allow-param-change", res_allow);

    // ---- validate-kernel ---------------------------------------------------
    auto* vk = app.add_subcommand("validate-kernel",
                                  "certify the decay envelope against the exact kernel");
    double vk_c1 = 2.0, vk_c2 = 0.5;
    std::size_t vk_samples = 4096;
    vk->add_option("--c1", vk_c1);
    vk->add_option("--c2", vk_c2);
    vk->add_option("--samples", vk_samples)->check(CLI::Range(std::size_t{1000}, std::size_t{100000000}));
    std::string vk_json;
    vk->add_option("--json-out", vk_json, "write the certification as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : exit_config_error;
    }

    set_threads(threads);

    try {
        if (sim->parsed()) {
            RunConfig c = load_config(sim_config);
            if (sim_t_end >= 0.0) c.t_end = sim_t_end;
            if (!sim_out.empty()) c.output_dir = sim_out;
            if (!sim_seeds.empty()) c.seeds = sim_seeds;
            if (!sim_checkpoints.empty()) {
                if (sim_checkpoints == "none") c.checkpoints = CheckpointPolicy::none;
                else if (sim_checkpoints == "final") c.checkpoints = CheckpointPolicy::final_only;
                else if (sim_checkpoints == "schedule") c.checkpoints = CheckpointPolicy::schedule;
                else throw ConfigError("unknown checkpoint policy: " + sim_checkpoints);
            }
            c.output_dir = resolve_output_dir(c.output_dir);
            return run(c, std::cout);
        }
        if (rb->parsed()) {
            RunConfig c;
            c.mode = RunMode::bound_replay;
            c.bounds.regime = regime_from_string(rb_regime);
            c.bounds.t_values = rb_t;
            c.bounds.t_min = rb_tmin;
            c.bounds.t_max = rb_tmax;
            c.bounds.t_count = rb_tcount;
            c.bounds.alpha = rb_alpha;
            c.bounds.beta = rb_beta;
            c.bounds.delta = rb_delta;
            c.bounds.big_c = rb_bigc;
            c.bounds.m0 = rb_m0;
            c.bounds.support_radius = rb_support;
            c.output_dir = resolve_output_dir(rb_out);
            const int code = run(c, std::cout);
            if (code == exit_ok && rb_rho) {
                const auto table = integrate_rho(rb_rho0, rb_rho_t0, rb_rho_t1,
                                                 DecayEnvelope{}, [](double t) { return 1.0 / (t * t); },
                                                 rb_rho_steps);
                std::ofstream out(std::filesystem::path(c.output_dir) / "rho.csv",
                                  std::ios::binary);
                out << "t,rho\r\n";
                char buf[96];
                for (const auto& [t, rho] : table) {
                    std::snprintf(buf, sizeof buf, "%.17g,%.17g\r\n", t, rho);
                    out << buf;
                }
            }
            return code;
        }
        if (rep->parsed()) {
            RunConfig c;
            c.mode = RunMode::report;
            c.report.inputs = rep_inputs;
            c.report.envelope.kind = envelope_kind_from_string(rep_kind);
            c.report.envelope.alpha = rep_alpha;
            c.report.envelope.beta = rep_beta;
            c.report.envelope.delta = rep_delta;
            c.report.envelope.ell = rep_ell;
            c.report.fit_t_min = rep_tmin;
            c.report.fit_t_max = rep_tmax;
            c.output_dir = resolve_output_dir(rep_out);
            return run(c, std::cout);
        }
        if (res->parsed()) {
            RunConfig overrides;
            bool have_overrides = false;
            try {
                const auto cp = read_checkpoint(res_checkpoint);
                overrides = config_from_json(cp.config_echo);
            } catch (const ConfigError& e) {
                std::cout << "config error: " << e.what() << "\n";
                return exit_config_error;
            } catch (const IoError& e) {
                std::cout << "i/o error: " << e.what() << "\n";
                return exit_io_error;
            }
            if (res_t_end >= 0.0) { overrides.t_end = res_t_end; have_overrides = true; }
            if (!res_out.empty()) {
                overrides.output_dir = resolve_output_dir(res_out);
                have_overrides = true;
            }
            if (res_dt > 0.0) { overrides.step.dt = res_dt; have_overrides = true; }
            return resume(res_checkpoint, have_overrides ? &overrides : nullptr,
                          res_allow, std::cout);
        }
        if (vk->parsed()) {
            const auto report = validate_decay_envelope({vk_c1, vk_c2}, vk_samples);
            std::cout << "decay envelope c1 = " << vk_c1 << ", c2 = " << vk_c2
                      << ": max ratio " << report.max_ratio << " at r = " << report.worst_r
                      << " over " << report.samples << " samples -> "
                      << (report.pass ? "PASS" : "FAIL") << "\n";
            if (!vk_json.empty()) {
                RunManifest m;
                m.envelope_certification = report;
                std::ofstream out(vk_json);
                if (!out) throw IoError("cannot write " + vk_json);
                out << m.to_json()["decay_envelope"].dump(2) << "\n";
            }
            return report.pass ? exit_ok : exit_numerical_error;
        }
    } catch (const ConfigError& e) {
        std::cout << "config error: " << e.what() << "\n";
        return exit_config_error;
    } catch (const IoError& e) {
        std::cout << "i/o error: " << e.what() << "\n";
        return exit_io_error;
    } catch (const NumericalError& e) {
        std::cout << "numerical error: " << e.what() << "\n";
        return exit_numerical_error;
    }
    return exit_config_error;
}
