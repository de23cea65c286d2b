#pragma once

/// @file confinement.hpp
/// Theoretical confinement envelopes and the comparison of measured
/// diagnostics against them. The envelopes come in three kinds:
///   - ns_sqrt_log:        radius sqrt(t log^alpha t), tail bound t^-ell
///   - ns_power:           radius t^beta,              tail bound exp(-t^delta)
///   - euler_cuberoot_log: radius (t log^alpha t)^{1/3}, tail bound t^-ell
/// The constants multiplying the bounds are existence-only, so reports expose
/// ratios and fitted growth exponents rather than claiming the bounds hold.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cylflow/diagnostics.hpp"

namespace cylflow {

enum class EnvelopeKind { ns_sqrt_log, ns_power, euler_cuberoot_log };

struct EnvelopeSpec {
    EnvelopeKind kind = EnvelopeKind::ns_sqrt_log;
    double alpha = 2.0; ///< log exponent, must be > 1 (ns_sqrt_log, euler_cuberoot_log)
    double beta = 0.75; ///< power, must be > 1/2 (ns_power)
    double delta = 0.25; ///< stretched exponent, in (0, 2 beta - 1) (ns_power)
    double ell = 1.0;   ///< polynomial tail exponent, > 0

    void validate() const;
};

/// sqrt(t log^a t), t^b, or (t log^a t)^{1/3}; requires t > 1.
double envelope_radius(const EnvelopeSpec& spec, double t);

/// t^-ell or exp(-t^delta); requires t > 1.
double envelope_bound(const EnvelopeSpec& spec, double t);

struct ConfinementSample {
    double t = 0.0;
    double radius = 0.0;        ///< envelope radius r(t)
    double measured_tail = 0.0; ///< m_t(r(t)), interpolated from the record's h-grid
    double bound = 0.0;         ///< theoretical tail bound at t
    double tail_ratio = 0.0;    ///< measured / bound
    double diameter = 0.0;
    double diameter_ratio = 0.0; ///< diameter / r(t)
};

struct ConfinementReport {
    EnvelopeSpec envelope;
    std::vector<ConfinementSample> samples; ///< sorted by t
    double max_tail_ratio = 0.0;
    bool tail_within_bound = false; ///< max_tail_ratio <= 1
    double fitted_exponent = 0.0;   ///< log-log slope of diameter over the fit window
    double fitted_exponent_stderr = 0.0;
    double fit_t_min = 0.0;
    double fit_t_max = 0.0;
    /// Log-log slope of diameter_ratio significantly positive: the measured
    /// growth outpaces the envelope.
    bool ratio_increasing = false;
    bool confinement_consistent = false; ///< !ratio_increasing && tail_within_bound

    std::string csv() const;  ///< one row per sample
    std::string json() const;
    std::string summary() const; ///< human-readable table
};

/// Builds the report from diagnostics records (any order; sorted internally).
/// All record times must be > 1. The exponent fit uses records with
/// t in [fit_t_min, fit_t_max] (0, 0 = full range) and requires >= 8 samples
/// spanning a factor >= 5 in t; otherwise throws ConfigError.
ConfinementReport build_report(std::span<const DiagnosticsRecord> records,
                               const EnvelopeSpec& spec,
                               double fit_t_min = 0.0, double fit_t_max = 0.0);

/// m_t at an arbitrary radius from a record's h-grid: linear interpolation of
/// log m in h while both bracketing masses are positive, linear in m otherwise
/// (tail masses decay exponentially, so log-linear avoids overestimation).
double interpolate_tail_mass(const DiagnosticsRecord& r, double radius);

std::string to_string(EnvelopeKind k);
EnvelopeKind envelope_kind_from_string(const std::string& s);

} // namespace cylflow
