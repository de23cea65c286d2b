#include "cylflow/ns.hpp"

#include <cmath>

#include "cylflow/errors.hpp"
#include "cylflow/rng.hpp"

namespace cylflow {

namespace {

void diffusion_kick(FlowState& s, double dt, std::uint64_t seed) {
    const double std_dev = std::sqrt(2.0 * s.viscosity * dt);
    if (std_dev == 0.0) return;
    const std::uint64_t step = s.step_index;
    auto& blobs = s.blobs;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(blobs.size()); ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        double g1, g2;
        counter_gaussian_pair(seed, step, i, g1, g2);
        blobs[i].pos = CylPoint(blobs[i].pos.x1 + std_dev * g1,
                                blobs[i].pos.x2 + std_dev * g2);
    }
}

} // namespace

void NsStepConfig::validate() const {
    if (!(dt > 0.0)) throw ConfigError("ns step: dt must be positive");
    if (!frozen_transport) transport.validate();
}

FlowState ns_step(const FlowState& s, const NsStepConfig& cfg) {
    cfg.validate();
    if (s.viscosity < 0.0) throw ConfigError("ns_step: viscosity must be >= 0");
    FlowState out = s;
    if (!cfg.frozen_transport) detail::advect(out, cfg.dt, cfg.transport.scheme);
    diffusion_kick(out, cfg.dt, cfg.rng_seed);
    out.time = s.time + cfg.dt;
    out.step_index = s.step_index + 1;
    return out;
}

std::vector<DiagnosticsRecord> run_ns(FlowState& s, double t_end,
                                      const NsStepConfig& cfg,
                                      std::span<const double> schedule,
                                      const DiagnosticsSpec& diag,
                                      const SampleCallback& on_sample) {
    cfg.validate();
    diag.validate();
    if (s.viscosity < 0.0) throw ConfigError("run_ns: viscosity must be >= 0");
    if (!(t_end >= s.time)) throw ConfigError("run_ns: t_end must be >= start time");
    detail::check_schedule(schedule, s.time, t_end);
    validate_state(s);
    s.rng_seed = cfg.rng_seed;

    std::vector<DiagnosticsRecord> records;

    auto advance_to = [&](double target) {
        const double interval = target - s.time;
        const std::size_t n = detail::substep_count(interval, cfg.dt);
        if (n == 0) { s.time = target; return; }
        const double h = interval / static_cast<double>(n);
        for (std::size_t k = 0; k < n; ++k) {
            if (!cfg.frozen_transport) detail::advect(s, h, cfg.transport.scheme);
            diffusion_kick(s, h, cfg.rng_seed);
            s.step_index += 1;
        }
        s.time = target;
    };

    for (double t_sample : schedule) {
        advance_to(t_sample);
        records.push_back(compute_diagnostics(s, diag, cfg.ensemble_id));
        if (on_sample) on_sample(s, records.back());
    }
    advance_to(t_end);
    return records;
}

} // namespace cylflow
