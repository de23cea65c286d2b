#pragma once

/// @file diagnostics.hpp
/// Read-only functionals over the blob ensemble: the quantities whose growth
/// the confinement envelopes bound (tail masses, mollified tails, support
/// diameter, axial first moment) plus conserved-quantity surrogates.
/// Diagnostics are pure and never run concurrently with an integrator step.

#include <cstdint>
#include <string>
#include <vector>

#include "cylflow/mollifier.hpp"
#include "cylflow/state.hpp"

namespace cylflow {

/// Sum of circulations; exactly conserved by both integrators.
double total_mass(const FlowState& s);

/// Mass of blobs with |x1| > h (blobs are atoms: the indicator is applied to
/// centers, which keeps the mollified sandwich exact).
double tail_mass(const FlowState& s, double h);

/// sum gamma * (1 - W(x1)); satisfies mu(R,h) <= m(R) <= mu(R-h,h).
double mollified_tail(const FlowState& s, const MollifierProfile& profile);

/// Max pairwise |x1_i - x1_j|. Throws ConfigError on an empty ensemble.
double diameter_x1(const FlowState& s);

/// Max |x1| over blobs (0 for an empty ensemble).
double max_abs_x1(const FlowState& s);

/// (sum gamma x1) / (sum gamma). Throws ConfigError on an empty ensemble.
double center_x1(const FlowState& s);

/// sum gamma * |x1|.
double first_moment_x1(const FlowState& s);

/// Point-vortex interaction energy kappa * sum_{i<j} G_i G_j G_delta(x_i,x_j)
/// with the same desingularization as the dynamics. Throws SingularInputError
/// when core_radius = 0 and two blobs coincide.
double hamiltonian(const FlowState& s);

/// Mollifier pair (R, h) for the mu(R,h) diagnostic columns.
struct MollifierPair {
    double R = 0.0;
    double h = 0.0;

    friend bool operator==(const MollifierPair&, const MollifierPair&) = default;
};

/// What to sample at every diagnostics instant.
struct DiagnosticsSpec {
    std::vector<double> h_grid;            ///< strictly increasing h values for m(h)
    std::vector<MollifierPair> mollifier_pairs; ///< each with R >= 2h

    void validate() const;
};

/// One sampling instant.
struct DiagnosticsRecord {
    double time = 0.0;
    double total_mass = 0.0;
    double diameter = 0.0;
    double max_abs_x1 = 0.0;
    double center_x1 = 0.0;
    double first_moment_x1 = 0.0;
    double hamiltonian = 0.0;
    std::vector<double> h_grid;
    std::vector<double> tail_mass;          ///< m(h) per h_grid entry
    std::vector<MollifierPair> mu_pairs;
    std::vector<double> mollified_tail;     ///< mu(R,h) per pair
    int ensemble_id = 0;
};

DiagnosticsRecord compute_diagnostics(const FlowState& s, const DiagnosticsSpec& spec,
                                      int ensemble_id = 0);

/// CSV header for records with this spec (RFC 4180, documented in the README).
std::string diagnostics_csv_header(const DiagnosticsSpec& spec);

/// One CSV row, floats with 17 significant digits.
std::string diagnostics_csv_row(const DiagnosticsRecord& r);

/// JSON form of a record (string, parseable by any JSON reader).
std::string diagnostics_json(const DiagnosticsRecord& r);

} // namespace cylflow
