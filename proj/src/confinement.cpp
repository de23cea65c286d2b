#include "cylflow/confinement.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cylflow/errors.hpp"

namespace cylflow {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct LineFit {
    double slope = 0.0;
    double stderr_slope = 0.0;
};

// Ordinary least squares of y against x with the usual slope standard error.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) { sx += x[i]; sy += y[i]; }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    LineFit f;
    f.slope = sxy / sxx;
    if (x.size() > 2) {
        double ss_res = 0.0;
        const double b0 = my - f.slope * mx;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double r = y[i] - (b0 + f.slope * x[i]);
            ss_res += r * r;
        }
        f.stderr_slope = std::sqrt(ss_res / (n - 2.0) / sxx);
    }
    return f;
}

} // namespace

void EnvelopeSpec::validate() const {
    switch (kind) {
        case EnvelopeKind::ns_sqrt_log:
        case EnvelopeKind::euler_cuberoot_log:
            if (!(alpha > 1.0)) throw ConfigError("envelope: alpha must be > 1");
            if (!(ell > 0.0)) throw ConfigError("envelope: ell must be > 0");
            break;
        case EnvelopeKind::ns_power:
            if (!(beta > 0.5)) throw ConfigError("envelope: beta must be > 1/2");
            if (!(delta > 0.0 && delta < 2.0 * beta - 1.0))
                throw ConfigError("envelope: delta must lie in (0, 2 beta - 1)");
            break;
    }
}

double envelope_radius(const EnvelopeSpec& spec, double t) {
    spec.validate();
    if (!(t > 1.0)) throw ConfigError("envelope_radius: t must be > 1");
    const double lg = std::log(t);
    switch (spec.kind) {
        case EnvelopeKind::ns_sqrt_log:
            return std::sqrt(t * std::pow(lg, spec.alpha));
        case EnvelopeKind::ns_power:
            return std::pow(t, spec.beta);
        case EnvelopeKind::euler_cuberoot_log:
            return std::cbrt(t * std::pow(lg, spec.alpha));
    }
    return 0.0;
}

double envelope_bound(const EnvelopeSpec& spec, double t) {
    spec.validate();
    if (!(t > 1.0)) throw ConfigError("envelope_bound: t must be > 1");
    switch (spec.kind) {
        case EnvelopeKind::ns_sqrt_log:
        case EnvelopeKind::euler_cuberoot_log:
            return std::pow(t, -spec.ell);
        case EnvelopeKind::ns_power:
            return std::exp(-std::pow(t, spec.delta));
    }
    return 0.0;
}

double interpolate_tail_mass(const DiagnosticsRecord& r, double radius) {
    const auto& h = r.h_grid;
    const auto& m = r.tail_mass;
    if (h.empty()) throw ConfigError("interpolate_tail_mass: record has no h-grid");
    if (radius <= h.front()) return m.front();
    if (radius >= h.back()) {
        // Beyond the measured grid: extrapolate log-linearly from the last
        // positive segment, or 0 when the tail already vanished.
        if (m.back() <= 0.0) return 0.0;
        for (std::size_t i = h.size() - 1; i-- > 0;) {
            if (m[i] > 0.0 && m.back() > 0.0 && m[i] > m.back()) {
                const double slope = (std::log(m.back()) - std::log(m[i])) /
                                     (h.back() - h[i]);
                return std::exp(std::log(m.back()) + slope * (radius - h.back()));
            }
        }
        return m.back();
    }
    const auto it = std::upper_bound(h.begin(), h.end(), radius);
    const std::size_t k = static_cast<std::size_t>(it - h.begin());
    const double h0 = h[k - 1], h1 = h[k];
    const double m0 = m[k - 1], m1 = m[k];
    const double w = (radius - h0) / (h1 - h0);
    if (m0 > 0.0 && m1 > 0.0)
        return std::exp((1.0 - w) * std::log(m0) + w * std::log(m1));
    return (1.0 - w) * m0 + w * m1;
}

ConfinementReport build_report(std::span<const DiagnosticsRecord> records,
                               const EnvelopeSpec& spec,
                               double fit_t_min, double fit_t_max) {
    spec.validate();
    if (records.empty()) throw ConfigError("build_report: no records");

    ConfinementReport rep;
    rep.envelope = spec;
    rep.samples.reserve(records.size());
    for (const auto& r : records) {
        if (!(r.time > 1.0))
            throw ConfigError("build_report: record times must be > 1");
        ConfinementSample s;
        s.t = r.time;
        s.radius = envelope_radius(spec, r.time);
        s.measured_tail = interpolate_tail_mass(r, s.radius);
        s.bound = envelope_bound(spec, r.time);
        s.tail_ratio = s.measured_tail / s.bound;
        s.diameter = r.diameter;
        s.diameter_ratio = r.diameter / s.radius;
        rep.samples.push_back(s);
    }
    std::sort(rep.samples.begin(), rep.samples.end(),
              [](const auto& a, const auto& b) { return a.t < b.t; });

    rep.max_tail_ratio = 0.0;
    for (const auto& s : rep.samples)
        rep.max_tail_ratio = std::max(rep.max_tail_ratio, s.tail_ratio);
    rep.tail_within_bound = rep.max_tail_ratio <= 1.0;

    // Exponent fit over the requested window.
    const double lo = fit_t_min > 0.0 ? fit_t_min : rep.samples.front().t;
    const double hi = fit_t_max > 0.0 ? fit_t_max : rep.samples.back().t;
    rep.fit_t_min = lo;
    rep.fit_t_max = hi;
    std::vector<double> lt, ld, lr;
    for (const auto& s : rep.samples) {
        if (s.t < lo || s.t > hi) continue;
        if (!(s.diameter > 0.0)) continue;
        lt.push_back(std::log(s.t));
        ld.push_back(std::log(s.diameter));
        lr.push_back(std::log(s.diameter_ratio));
    }
    if (lt.size() < 8 || std::exp(lt.back() - lt.front()) < 5.0)
        throw ConfigError("build_report: exponent fit needs >= 8 samples spanning "
                          "a factor >= 5 in t");
    const LineFit fd = fit_line(lt, ld);
    rep.fitted_exponent = fd.slope;
    rep.fitted_exponent_stderr = fd.stderr_slope;
    const LineFit fr = fit_line(lt, lr);
    rep.ratio_increasing = fr.slope > 0.0 && fr.slope > 2.0 * fr.stderr_slope;
    rep.confinement_consistent = !rep.ratio_increasing && rep.tail_within_bound;
    return rep;
}

std::string ConfinementReport::csv() const {
    std::string out =
        "t,radius,measured_tail,bound,tail_ratio,diameter,diameter_ratio\r\n";
    for (const auto& s : samples) {
        out += fmt17(s.t) + "," + fmt17(s.radius) + "," + fmt17(s.measured_tail) +
               "," + fmt17(s.bound) + "," + fmt17(s.tail_ratio) + "," +
               fmt17(s.diameter) + "," + fmt17(s.diameter_ratio) + "\r\n";
    }
    return out;
}

std::string ConfinementReport::json() const {
    nlohmann::json j;
    j["envelope"] = {{"kind", to_string(envelope.kind)},
                     {"alpha", envelope.alpha},
                     {"beta", envelope.beta},
                     {"delta", envelope.delta},
                     {"ell", envelope.ell}};
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& s : samples)
        arr.push_back({{"t", s.t},
                       {"radius", s.radius},
                       {"measured_tail", s.measured_tail},
                       {"bound", s.bound},
                       {"tail_ratio", s.tail_ratio},
                       {"diameter", s.diameter},
                       {"diameter_ratio", s.diameter_ratio}});
    j["samples"] = arr;
    j["max_tail_ratio"] = max_tail_ratio;
    j["tail_within_bound"] = tail_within_bound;
    j["fitted_exponent"] = fitted_exponent;
    j["fitted_exponent_stderr"] = fitted_exponent_stderr;
    j["fit_window"] = {fit_t_min, fit_t_max};
    j["ratio_increasing"] = ratio_increasing;
    j["confinement_consistent"] = confinement_consistent;
    return j.dump(2);
}

std::string ConfinementReport::summary() const {
    std::ostringstream os;
    os << "confinement report (" << to_string(envelope.kind) << ")\n";
    os << "  samples:            " << samples.size() << "\n";
    os << "  max tail ratio:     " << max_tail_ratio
       << (tail_within_bound ? "  (within bound)" : "  (EXCEEDS bound)") << "\n";
    os << "  diameter exponent:  " << fitted_exponent << " +- "
       << fitted_exponent_stderr << "  over t in [" << fit_t_min << ", "
       << fit_t_max << "]\n";
    os << "  envelope ratio:     "
       << (ratio_increasing ? "INCREASING (non-confinement)" : "non-increasing")
       << "\n";
    return os.str();
}

std::string to_string(EnvelopeKind k) {
    switch (k) {
        case EnvelopeKind::ns_sqrt_log: return "ns_sqrt_log";
        case EnvelopeKind::ns_power: return "ns_power";
        case EnvelopeKind::euler_cuberoot_log: return "euler_cuberoot_log";
    }
    return "?";
}

EnvelopeKind envelope_kind_from_string(const std::string& s) {
    if (s == "ns_sqrt_log") return EnvelopeKind::ns_sqrt_log;
    if (s == "ns_power") return EnvelopeKind::ns_power;
    if (s == "euler_cuberoot_log") return EnvelopeKind::euler_cuberoot_log;
    throw ConfigError("unknown envelope kind: " + s);
}

} // namespace cylflow
