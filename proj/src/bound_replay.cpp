#include "cylflow/bound_replay.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "cylflow/errors.hpp"

namespace cylflow {

namespace {

constexpr double e_sq = 7.389056098930650227; // e^2

// log(C t / h^2), plus the euler regime's extra -log(r0/2).
double log_step_factor(const IterationPlan& p) {
    double v = std::log(p.big_c) + std::log(p.t) - 2.0 * std::log(p.h);
    if (p.regime == Regime::euler) v -= std::log(0.5 * p.r0);
    return v;
}

} // namespace

IterationPlan make_plan(Regime regime, double t, double alpha_or_beta,
                        double delta, double big_c) {
    if (!(t > e_sq)) throw ConfigError("plan: t must exceed e^2");
    if (!(big_c > 0.0)) throw ConfigError("plan: big_c must be positive");

    IterationPlan p;
    p.regime = regime;
    p.t = t;
    p.big_c = big_c;
    const double lg = std::log(t);
    switch (regime) {
        case Regime::ns_a:
            if (!(alpha_or_beta > 1.0)) throw ConfigError("plan: alpha must be > 1");
            p.alpha = alpha_or_beta;
            p.n = static_cast<long>(std::floor(lg));
            p.r0 = std::sqrt(t * std::pow(lg, p.alpha));
            break;
        case Regime::euler:
            if (!(alpha_or_beta > 1.0)) throw ConfigError("plan: alpha must be > 1");
            p.alpha = alpha_or_beta;
            p.n = static_cast<long>(std::floor(lg));
            p.r0 = std::cbrt(t * std::pow(lg, p.alpha));
            break;
        case Regime::ns_b:
            if (!(alpha_or_beta > 0.5)) throw ConfigError("plan: beta must be > 1/2");
            if (!(delta > 0.0 && delta < 2.0 * alpha_or_beta - 1.0))
                throw ConfigError("plan: delta must lie in (0, 2 beta - 1)");
            p.beta = alpha_or_beta;
            p.delta = delta;
            p.n = static_cast<long>(std::floor(std::pow(t, delta)));
            p.r0 = std::pow(t, p.beta);
            break;
    }
    if (p.n < 1) throw ConfigError("plan: iteration count must be >= 1");
    p.h = p.r0 / (2.0 * static_cast<double>(p.n));
    return p;
}

double closed_form_log_bound(const IterationPlan& plan) {
    const double lg = std::log(plan.t);
    switch (plan.regime) {
        case Regime::ns_a:
        case Regime::euler:
            return static_cast<double>(plan.n) *
                   (std::log(4.0 * std::numbers::e * plan.big_c) +
                    (1.0 - plan.alpha) * std::log(lg));
        case Regime::ns_b:
            return std::pow(plan.t, plan.delta) *
                   (std::log(plan.big_c) -
                    (2.0 * plan.beta - plan.delta - 1.0) * lg);
    }
    return 0.0;
}

BoundCertificate recursive_log_bound(const IterationPlan& plan, double m0,
                                     double support_radius) {
    if (!(m0 > 0.0)) throw ConfigError("recursive_log_bound: m0 must be positive");
    if (support_radius >= 0.5 * plan.r0 - plan.h)
        throw ConfigError("recursive_log_bound: initial support radius " +
                          std::to_string(support_radius) + " reaches R_n - h = " +
                          std::to_string(0.5 * plan.r0 - plan.h) +
                          "; the iteration needs mu_0(R_j, h) = 0 (take t larger)");

    BoundCertificate cert;
    cert.plan = plan;
    cert.log_m0 = std::log(m0);
    const double x = log_step_factor(plan);
    const auto n = static_cast<double>(plan.n);
    cert.raw_log_recursive = n * x - std::lgamma(n + 1.0) + cert.log_m0;
    // mu_t <= M0 trivially, so the certified bound is the min of both routes.
    cert.log_recursive_bound = std::min(cert.raw_log_recursive, cert.log_m0);
    cert.log_closed_form = closed_form_log_bound(plan);
    cert.per_step_log_terms.reserve(static_cast<std::size_t>(plan.n));
    for (long j = 1; j <= plan.n; ++j) {
        const auto jd = static_cast<double>(j);
        cert.per_step_log_terms.push_back(jd * x - std::lgamma(jd + 1.0));
    }
    return cert;
}

std::vector<std::pair<double, double>> integrate_rho(
    double rho0, double t0, double t1, const DecayEnvelope& env,
    const std::function<double(double)>& g, std::size_t steps) {
    if (!(rho0 > 0.0)) throw ConfigError("integrate_rho: rho0 must be positive");
    if (!(t0 > 0.0) || !(t1 > t0)) throw ConfigError("integrate_rho: need t1 > t0 > 0");
    if (steps == 0) throw ConfigError("integrate_rho: steps must be positive");

    auto rhs = [&](double t, double rho) {
        return 4.0 * env.c1 * std::exp(-0.5 * env.c2 * rho) / rho + g(t);
    };
    auto solve = [&](std::size_t m) {
        std::vector<std::pair<double, double>> table;
        table.reserve(m + 1);
        const double dt = (t1 - t0) / static_cast<double>(m);
        double t = t0, rho = rho0;
        table.emplace_back(t, rho);
        for (std::size_t k = 0; k < m; ++k) {
            const double k1 = rhs(t, rho);
            const double k2 = rhs(t + 0.5 * dt, rho + 0.5 * dt * k1);
            const double k3 = rhs(t + 0.5 * dt, rho + 0.5 * dt * k2);
            const double k4 = rhs(t + dt, rho + dt * k3);
            rho += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            t = t0 + (t1 - t0) * static_cast<double>(k + 1) / static_cast<double>(m);
            table.emplace_back(t, rho);
        }
        return table;
    };

    auto coarse = solve(steps);
    const auto fine = solve(2 * steps);
    const double a = coarse.back().second, b = fine.back().second;
    if (std::abs(a - b) > 1e-6 * std::max(1.0, std::abs(b)))
        throw NumericalError("integrate_rho: step count too small (halving check "
                             "moved the endpoint by " + std::to_string(std::abs(a - b)) + ")");
    return coarse;
}

std::string BoundCertificate::json() const {
    nlohmann::json j;
    j["regime"] = to_string(plan.regime);
    j["t"] = plan.t;
    switch (plan.regime) {
        case Regime::ns_a:
        case Regime::euler: j["alpha"] = plan.alpha; break;
        case Regime::ns_b: j["beta"] = plan.beta; j["delta"] = plan.delta; break;
    }
    j["big_c"] = plan.big_c;
    j["n"] = plan.n;
    j["r0"] = plan.r0;
    j["h"] = plan.h;
    j["log_recursive_bound"] = log_recursive_bound;
    j["raw_log_recursive"] = raw_log_recursive;
    j["log_closed_form"] = log_closed_form;
    j["log_m0"] = log_m0;
    j["per_step_log_terms"] = per_step_log_terms;
    return j.dump();
}

std::string to_string(Regime r) {
    switch (r) {
        case Regime::ns_a: return "ns_a";
        case Regime::ns_b: return "ns_b";
        case Regime::euler: return "euler";
    }
    return "?";
}

Regime regime_from_string(const std::string& s) {
    if (s == "ns_a") return Regime::ns_a;
    if (s == "ns_b") return Regime::ns_b;
    if (s == "euler") return Regime::euler;
    throw ConfigError("unknown regime: " + s);
}

} // namespace cylflow
