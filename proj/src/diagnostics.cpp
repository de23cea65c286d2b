#include "cylflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <nlohmann/json.hpp>

#include "cylflow/errors.hpp"

namespace cylflow {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

void validate_state(const FlowState& s) {
    s.kernel_cfg.validate();
    if (s.viscosity < 0.0) throw ConfigError("state: viscosity must be >= 0");
    if (s.kernel_cfg.core_radius > 0.0) return;
    // Exactly coincident blobs are singular for the bare kernel.
    std::vector<std::pair<double, double>> pos(s.blobs.size());
    for (std::size_t i = 0; i < s.blobs.size(); ++i)
        pos[i] = {s.blobs[i].pos.x1, s.blobs[i].pos.x2};
    std::sort(pos.begin(), pos.end());
    for (std::size_t i = 1; i < pos.size(); ++i)
        if (pos[i] == pos[i - 1])
            throw ConfigError("state: exactly coincident blobs with core_radius = 0");
}

double total_mass(const FlowState& s) {
    double m = 0.0;
    for (const auto& b : s.blobs) m += b.gamma;
    return m;
}

double tail_mass(const FlowState& s, double h) {
    if (h < 0.0) throw ConfigError("tail_mass: h must be >= 0");
    double m = 0.0;
    for (const auto& b : s.blobs)
        if (std::abs(b.pos.x1) > h) m += b.gamma;
    return m;
}

double mollified_tail(const FlowState& s, const MollifierProfile& profile) {
    double m = 0.0;
    for (const auto& b : s.blobs) m += b.gamma * (1.0 - profile.eval(b.pos.x1));
    return m;
}

double diameter_x1(const FlowState& s) {
    if (s.blobs.empty()) throw ConfigError("diameter_x1: empty ensemble");
    double lo = s.blobs.front().pos.x1, hi = lo;
    for (const auto& b : s.blobs) {
        lo = std::min(lo, b.pos.x1);
        hi = std::max(hi, b.pos.x1);
    }
    return hi - lo;
}

double max_abs_x1(const FlowState& s) {
    double m = 0.0;
    for (const auto& b : s.blobs) m = std::max(m, std::abs(b.pos.x1));
    return m;
}

double center_x1(const FlowState& s) {
    if (s.blobs.empty()) throw ConfigError("center_x1: empty ensemble");
    double num = 0.0, den = 0.0;
    for (const auto& b : s.blobs) {
        num += b.gamma * b.pos.x1;
        den += b.gamma;
    }
    if (den == 0.0) throw ConfigError("center_x1: zero total mass");
    return num / den;
}

double first_moment_x1(const FlowState& s) {
    double m = 0.0;
    for (const auto& b : s.blobs) m += b.gamma * std::abs(b.pos.x1);
    return m;
}

double hamiltonian(const FlowState& s) {
    const double s_core = 0.5 * s.kernel_cfg.core_radius * s.kernel_cfg.core_radius;
    const std::size_t n = s.blobs.size();
    // Row sums accumulated serially and added in index order: the value is
    // independent of the thread count.
    std::vector<double> row(n, 0.0);
    bool singular = false;
#pragma omp parallel for schedule(dynamic, 16) reduction(|| : singular)
    for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n); ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        double acc = 0.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double g = detail::green_desingularized(
                s.blobs[i].pos.x1 - s.blobs[j].pos.x1,
                s.blobs[i].pos.x2 - s.blobs[j].pos.x2, s_core);
            if (std::isnan(g)) {
                singular = true;
                break;
            }
            acc += s.blobs[i].gamma * s.blobs[j].gamma * g;
        }
        row[i] = acc;
    }
    if (singular)
        throw SingularInputError("hamiltonian: coincident blobs with core_radius = 0");
    double h = 0.0;
    for (double r : row) h += r;
    return s.kernel_cfg.normalization * h;
}

void DiagnosticsSpec::validate() const {
    for (std::size_t i = 1; i < h_grid.size(); ++i)
        if (!(h_grid[i] > h_grid[i - 1]))
            throw ConfigError("diagnostics: h_grid must be strictly increasing");
    for (const auto& p : mollifier_pairs)
        if (!(p.h > 0.0) || !(p.R >= 2.0 * p.h))
            throw ConfigError("diagnostics: mollifier pair (R=" + std::to_string(p.R) +
                              ", h=" + std::to_string(p.h) + ") violates R >= 2h > 0");
}

DiagnosticsRecord compute_diagnostics(const FlowState& s, const DiagnosticsSpec& spec,
                                      int ensemble_id) {
    DiagnosticsRecord r;
    r.time = s.time;
    r.total_mass = total_mass(s);
    r.diameter = s.blobs.empty() ? 0.0 : diameter_x1(s);
    r.max_abs_x1 = max_abs_x1(s);
    r.center_x1 = s.blobs.empty() ? 0.0 : center_x1(s);
    r.first_moment_x1 = first_moment_x1(s);
    r.hamiltonian = hamiltonian(s);
    r.h_grid = spec.h_grid;
    r.tail_mass.reserve(spec.h_grid.size());
    for (double h : spec.h_grid) r.tail_mass.push_back(tail_mass(s, h));
    r.mu_pairs = spec.mollifier_pairs;
    r.mollified_tail.reserve(spec.mollifier_pairs.size());
    for (const auto& p : spec.mollifier_pairs)
        r.mollified_tail.push_back(mollified_tail(s, MollifierProfile(p.R, p.h)));
    r.ensemble_id = ensemble_id;
    return r;
}

std::string diagnostics_csv_header(const DiagnosticsSpec& spec) {
    std::string h = "time,total_mass,diameter,max_abs_x1,center_x1,first_moment_x1,hamiltonian";
    for (double hh : spec.h_grid) h += ",m(h=" + fmt17(hh) + ")";
    for (const auto& p : spec.mollifier_pairs)
        h += ",mu(R=" + fmt17(p.R) + ";h=" + fmt17(p.h) + ")";
    return h;
}

std::string diagnostics_csv_row(const DiagnosticsRecord& r) {
    std::string row = fmt17(r.time);
    row += "," + fmt17(r.total_mass);
    row += "," + fmt17(r.diameter);
    row += "," + fmt17(r.max_abs_x1);
    row += "," + fmt17(r.center_x1);
    row += "," + fmt17(r.first_moment_x1);
    row += "," + fmt17(r.hamiltonian);
    for (double m : r.tail_mass) row += "," + fmt17(m);
    for (double m : r.mollified_tail) row += "," + fmt17(m);
    return row;
}

std::string diagnostics_json(const DiagnosticsRecord& r) {
    nlohmann::json j;
    j["time"] = r.time;
    j["total_mass"] = r.total_mass;
    j["diameter"] = r.diameter;
    j["max_abs_x1"] = r.max_abs_x1;
    j["center_x1"] = r.center_x1;
    j["first_moment_x1"] = r.first_moment_x1;
    j["hamiltonian"] = r.hamiltonian;
    j["h_grid"] = r.h_grid;
    j["tail_mass"] = r.tail_mass;
    nlohmann::json pairs = nlohmann::json::array();
    for (std::size_t i = 0; i < r.mu_pairs.size(); ++i)
        pairs.push_back({{"R", r.mu_pairs[i].R}, {"h", r.mu_pairs[i].h},
                         {"mu", r.mollified_tail[i]}});
    j["mollified_tail"] = pairs;
    j["ensemble_id"] = r.ensemble_id;
    return j.dump();
}

} // namespace cylflow
