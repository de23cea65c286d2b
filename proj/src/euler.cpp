#include "cylflow/euler.hpp"

#include <cmath>
#include <string>

#include "cylflow/errors.hpp"
#include "cylflow/velocity.hpp"

namespace cylflow {

namespace {

void check_finite(const std::vector<Vec2>& v) {
    std::string bad;
    int count = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i].u1) || !std::isfinite(v[i].u2)) {
            if (count < 8) bad += (bad.empty() ? "" : ", ") + std::to_string(i);
            ++count;
        }
    }
    if (count > 0)
        throw NumericalError("non-finite velocity for " + std::to_string(count) +
                             " blob(s), indices: " + bad);
}

struct StageBuffers {
    std::vector<Vec2> k1, k2, k3, k4;
    std::vector<Blob> work;
};

void eval_velocity(const std::vector<Blob>& blobs, const KernelConfig& cfg,
                   std::vector<Vec2>& out) {
    self_induced_velocity(blobs, cfg, out);
    check_finite(out);
}

void displace(std::vector<Blob>& out, const std::vector<Blob>& base,
              const std::vector<Vec2>& v, double c) {
    out.resize(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
        out[i] = base[i];
        out[i].pos = CylPoint(base[i].pos.x1 + c * v[i].u1,
                              base[i].pos.x2 + c * v[i].u2);
    }
}

void advect_once(FlowState& s, double dt, TimeScheme scheme, StageBuffers& buf) {
    auto& blobs = s.blobs;
    const auto& cfg = s.kernel_cfg;
    switch (scheme) {
        case TimeScheme::euler_fwd: {
            eval_velocity(blobs, cfg, buf.k1);
            for (std::size_t i = 0; i < blobs.size(); ++i)
                blobs[i].pos = CylPoint(blobs[i].pos.x1 + dt * buf.k1[i].u1,
                                        blobs[i].pos.x2 + dt * buf.k1[i].u2);
            break;
        }
        case TimeScheme::rk2: {
            eval_velocity(blobs, cfg, buf.k1);
            displace(buf.work, blobs, buf.k1, 0.5 * dt);
            eval_velocity(buf.work, cfg, buf.k2);
            for (std::size_t i = 0; i < blobs.size(); ++i)
                blobs[i].pos = CylPoint(blobs[i].pos.x1 + dt * buf.k2[i].u1,
                                        blobs[i].pos.x2 + dt * buf.k2[i].u2);
            break;
        }
        case TimeScheme::rk4: {
            eval_velocity(blobs, cfg, buf.k1);
            displace(buf.work, blobs, buf.k1, 0.5 * dt);
            eval_velocity(buf.work, cfg, buf.k2);
            displace(buf.work, blobs, buf.k2, 0.5 * dt);
            eval_velocity(buf.work, cfg, buf.k3);
            displace(buf.work, blobs, buf.k3, dt);
            eval_velocity(buf.work, cfg, buf.k4);
            const double c = dt / 6.0;
            for (std::size_t i = 0; i < blobs.size(); ++i) {
                const double du1 = buf.k1[i].u1 + 2.0 * buf.k2[i].u1 +
                                   2.0 * buf.k3[i].u1 + buf.k4[i].u1;
                const double du2 = buf.k1[i].u2 + 2.0 * buf.k2[i].u2 +
                                   2.0 * buf.k3[i].u2 + buf.k4[i].u2;
                blobs[i].pos = CylPoint(blobs[i].pos.x1 + c * du1,
                                        blobs[i].pos.x2 + c * du2);
            }
            break;
        }
    }
}

double max_position_defect(const std::vector<Blob>& a, const std::vector<Blob>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i].pos.x1 - b[i].pos.x1));
        double d2 = std::abs(a[i].pos.x2 - b[i].pos.x2);
        d2 = std::min(d2, two_pi - d2);
        m = std::max(m, d2);
    }
    return m;
}

} // namespace

void EulerStepConfig::validate() const {
    if (!(dt > 0.0)) throw ConfigError("step: dt must be positive");
    if (adaptive && !(adaptive_tol > 0.0))
        throw ConfigError("step: adaptive tolerance must be positive");
}

void detail::advect(FlowState& s, double dt, TimeScheme scheme) {
    StageBuffers buf;
    advect_once(s, dt, scheme, buf);
}

std::size_t detail::substep_count(double interval, double dt_max) {
    if (interval <= 0.0) return 0;
    return static_cast<std::size_t>(std::ceil(interval / dt_max - 1e-12));
}

void detail::check_schedule(std::span<const double> schedule, double t0, double t_end) {
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        if (i > 0 && !(schedule[i] > schedule[i - 1]))
            throw ConfigError("schedule times must be strictly increasing");
        if (schedule[i] < t0 || schedule[i] > t_end)
            throw ConfigError("schedule time " + std::to_string(schedule[i]) +
                              " outside [" + std::to_string(t0) + ", " +
                              std::to_string(t_end) + "]");
    }
}

FlowState euler_step(const FlowState& s, const EulerStepConfig& cfg) {
    cfg.validate();
    if (s.viscosity != 0.0)
        throw ConfigError("euler_step: viscosity must be zero (use the NS integrator)");
    FlowState out = s;
    StageBuffers buf;
    if (!cfg.adaptive) {
        advect_once(out, cfg.dt, cfg.scheme, buf);
    } else {
        // Step-doubling control: one full step against two half steps,
        // subdividing until the defect meets the tolerance.
        std::size_t parts = 1;
        for (;;) {
            FlowState full = s;
            const double h = cfg.dt / static_cast<double>(parts);
            for (std::size_t k = 0; k < parts; ++k) advect_once(full, h, cfg.scheme, buf);
            FlowState halved = s;
            for (std::size_t k = 0; k < 2 * parts; ++k)
                advect_once(halved, 0.5 * h, cfg.scheme, buf);
            if (max_position_defect(full.blobs, halved.blobs) <= cfg.adaptive_tol ||
                parts >= 1024) {
                out.blobs = std::move(halved.blobs);
                break;
            }
            parts *= 2;
        }
    }
    out.time = s.time + cfg.dt;
    out.step_index = s.step_index + 1;
    return out;
}

std::vector<DiagnosticsRecord> run_euler(FlowState& s, double t_end,
                                         const EulerStepConfig& cfg,
                                         std::span<const double> schedule,
                                         const DiagnosticsSpec& diag,
                                         const SampleCallback& on_sample) {
    cfg.validate();
    diag.validate();
    if (s.viscosity != 0.0)
        throw ConfigError("run_euler: viscosity must be zero");
    if (!(t_end >= s.time)) throw ConfigError("run_euler: t_end must be >= start time");
    detail::check_schedule(schedule, s.time, t_end);
    validate_state(s);

    std::vector<DiagnosticsRecord> records;
    StageBuffers buf;

    auto advance_to = [&](double target) {
        const double interval = target - s.time;
        const std::size_t n = detail::substep_count(interval, cfg.dt);
        if (n == 0) { s.time = target; return; }
        const double h = interval / static_cast<double>(n);
        for (std::size_t k = 0; k < n; ++k) {
            advect_once(s, h, cfg.scheme, buf);
            s.step_index += 1;
        }
        s.time = target;
    };

    for (double t_sample : schedule) {
        advance_to(t_sample);
        records.push_back(compute_diagnostics(s, diag));
        if (on_sample) on_sample(s, records.back());
    }
    advance_to(t_end);
    return records;
}

} // namespace cylflow
