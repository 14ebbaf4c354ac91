#pragma once

#include "dctc/operation.hpp"

#include <cstdint>
#include <optional>
#include <utility>

namespace dctc {

struct SolverConfig {
    std::size_t n_max = 1000;
    double tol = 1e-6;
    TestFunctionDictionary dictionary;
    double merge_radius = 0.0;
    std::vector<double> tightness_radii; // empty: skip the tightness table
    std::optional<Point> tightness_center;
    std::size_t record_every = 1;
    std::size_t atom_cap = kDefaultAtomCap;

    void validate() const;
};

struct CheckpointRecord {
    std::size_t n = 0;
    double condition_a_deviation = 0.0; // max over A entries |w(f_A x 1) - w_A(f_A)|
    double condition_b_deviation = 0.0; // max over B entries |tau(w)(1 x f_B) - w(1 x f_B)|
    double cesaro_bound_value = 0.0;    // 2*max_B_bound/n
    double marginal_a_discrepancy = 0.0; // bl_discrepancy(marginal_a(w_N), w_A)
    // max over B entries of deviation*n/(2*bound): <= 1 means the Cesaro
    // estimate holds for every entry at this checkpoint.
    double bound_utilization = 0.0;
    std::size_t atom_count = 0;
};

struct EntryDeviation {
    std::string id;
    Factor factor = Factor::full;
    double deviation = 0.0;
};

struct ClassicalDctcReport {
    double condition_a_deviation = 0.0;
    double condition_b_deviation = 0.0;
    std::size_t n_used = 0;
    double cesaro_bound_value = 0.0;
    bool converged = false;
    std::vector<CheckpointRecord> curve;
    std::vector<EntryDeviation> per_entry;
    std::vector<std::string> dictionary_ids;
    std::optional<TightnessProfile> tightness;
};

// phi_1 = w_A x w_B0; phi_{n+1} = w_A x marginal_B(tau(phi_n)). Every
// element keeps marginal_A == w_A by construction.
std::vector<AtomicMeasure> phi_sequence(const OperationSpec& tau, const AtomicMeasure& w_a,
                                        const AtomicMeasure& w_b0, std::size_t n,
                                        double merge_radius = 0.0,
                                        std::size_t atom_cap = kDefaultAtomCap);

// w_(N): the uniform mixture of phi_1..phi_N, atoms merged at merge_radius.
AtomicMeasure cesaro_state(std::span<const AtomicMeasure> phis, double merge_radius = 0.0,
                           std::size_t atom_cap = kDefaultAtomCap);

// The telescoping estimate of the averaging construction: 2*f_bound/n.
double cesaro_bound(std::size_t n, double f_bound);

// Runs the phi recursion with running Cesaro averaging until the measured
// B-invariance deviation drops below cfg.tol or n_max is reached. The
// report carries both D-CTC deviations, the analytic bound at the stopping
// N, the convergence curve, and (when radii are configured) the tightness
// profile of the B marginals of the plain iterates tau^n(w_A x w_B0).
std::pair<AtomicMeasure, ClassicalDctcReport> solve_classical_dctc(const OperationSpec& tau,
                                                                   const AtomicMeasure& w_a,
                                                                   const AtomicMeasure& w_b0,
                                                                   const SolverConfig& cfg);

// Evaluates both D-CTC deviations for an arbitrary candidate w, independent
// of how w was produced.
ClassicalDctcReport verify_dctc_classical(const AtomicMeasure& w, const OperationSpec& tau,
                                          const AtomicMeasure& w_a,
                                          const TestFunctionDictionary& dict);

enum class TimeRatioKind { integer_multiple, rational, irrational_within_tolerance };

struct CaseClassification {
    TimeRatioKind kind = TimeRatioKind::irrational_within_tolerance;
    std::int64_t k = 0;
    std::int64_t l = 1;
    double residual = 0.0; // |t/T - k/l| at the best reported approximation
};

// Continued-fraction classification of t/T. A convergent p/q with
// q <= max_denominator is accepted as rational only when its error is both
// below tol and anomalously small for its denominator (q^2*error <= 0.05,
// i.e. the next partial quotient is large); floating-point input can never
// certify irrationality, so the fallback is irrational-within-tolerance
// with the best-approximation residual.
CaseClassification classify_time_ratio(double t, double period, std::int64_t max_denominator,
                                       double tol);

struct EquidistributionStats {
    std::vector<double> weyl_sums; // |1/N sum e^{i m theta}| for m = 1..M
    double star_discrepancy = 0.0;
};

EquidistributionStats equidistribution_stats(std::span<const double> angles, unsigned max_harmonic = 5);

} // namespace dctc
