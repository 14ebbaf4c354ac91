#include "dctc/classical.hpp"

#include "dctc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <unordered_map>

namespace dctc {

void SolverConfig::validate() const {
    if (n_max < 1) throw std::invalid_argument("n_max must be at least 1");
    if (tol <= 0.0) throw std::invalid_argument("solver tolerance must be positive");
    if (merge_radius < 0.0) throw std::invalid_argument("merge radius must be nonnegative");
    if (record_every < 1) throw std::invalid_argument("record_every must be at least 1");
    if (dictionary.empty()) throw std::invalid_argument("solver needs a nonempty dictionary");
    for (std::size_t i = 1; i < tightness_radii.size(); ++i)
        if (tightness_radii[i] <= tightness_radii[i - 1])
            throw std::invalid_argument("tightness radii must be strictly increasing");
}

namespace {

void require_factors(const AtomicMeasure& w_a, const AtomicMeasure& w_b0) {
    if (w_a.space.kind != Space::Kind::factor_a)
        throw std::invalid_argument("w_A must live on the A factor");
    if (w_b0.space.kind != Space::Kind::factor_b)
        throw std::invalid_argument("w_B0 must live on the B factor");
}

} // namespace

std::vector<AtomicMeasure> phi_sequence(const OperationSpec& tau, const AtomicMeasure& w_a,
                                        const AtomicMeasure& w_b0, std::size_t n,
                                        double merge_radius, std::size_t atom_cap) {
    require_factors(w_a, w_b0);
    if (n < 1) throw std::invalid_argument("phi_sequence needs n >= 1");
    std::vector<AtomicMeasure> phis;
    phis.reserve(n);
    phis.push_back(product_measure(w_a, w_b0, atom_cap));
    for (std::size_t i = 1; i < n; ++i) {
        AtomicMeasure nu = merge_atoms(marginal_b(apply(tau, phis.back(), atom_cap)), merge_radius);
        phis.push_back(product_measure(w_a, nu, atom_cap));
    }
    return phis;
}

AtomicMeasure cesaro_state(std::span<const AtomicMeasure> phis, double merge_radius,
                           std::size_t atom_cap) {
    if (phis.empty()) throw std::invalid_argument("cesaro_state needs at least one state");
    const std::vector<double> weights(phis.size(), 1.0 / static_cast<double>(phis.size()));
    return merge_atoms(convex_combine(weights, phis, atom_cap), merge_radius);
}

double cesaro_bound(std::size_t n, double f_bound) {
    if (n < 1) throw std::invalid_argument("cesaro_bound needs n >= 1");
    if (f_bound <= 0.0) throw std::invalid_argument("f_bound must be positive");
    return 2.0 * f_bound / static_cast<double>(n);
}

namespace {

// Incremental accumulator for w_(N) = (1/N) sum phi_n: atoms are pooled
// unnormalized with exact-duplicate grouping; snapshots divide by N.
class CesaroAccumulator {
  public:
    explicit CesaroAccumulator(Space space, std::size_t atom_cap)
        : space_(std::move(space)), atom_cap_(atom_cap) {}

    void add(const AtomicMeasure& phi) {
        for (const Atom& a : phi.atoms) {
            std::string key(reinterpret_cast<const char*>(a.point.coords.data()),
                            a.point.coords.size() * sizeof(double));
            auto [it, inserted] = index_.try_emplace(key, slots_.size());
            if (inserted) {
                if (slots_.size() >= atom_cap_)
                    throw ResourceLimitError("Cesaro accumulation exceeds the atom cap of " +
                                             std::to_string(atom_cap_));
                slots_.push_back(Slot{a.point, {}});
            }
            slots_[it->second].weight.add(a.weight);
        }
        ++count_;
    }

    std::size_t count() const { return count_; }

    AtomicMeasure snapshot(double merge_radius) const {
        AtomicMeasure out{space_, {}};
        out.atoms.reserve(slots_.size());
        const double inv = 1.0 / static_cast<double>(count_);
        for (const Slot& s : slots_) {
            const double w = s.weight.value() * inv;
            if (w != 0.0) out.atoms.push_back(Atom{w, s.point});
        }
        if (merge_radius > 0.0) return merge_atoms(out, merge_radius);
        return out;
    }

  private:
    struct KahanSum {
        double sum = 0.0, comp = 0.0;
        void add(double x) {
            const double t = sum + x;
            if (std::fabs(sum) >= std::fabs(x))
                comp += (sum - t) + x;
            else
                comp += (x - t) + sum;
            sum = t;
        }
        double value() const { return sum + comp; }
    };
    struct Slot {
        Point point;
        KahanSum weight;
    };
    Space space_;
    std::size_t atom_cap_;
    std::vector<Slot> slots_;
    std::unordered_map<std::string, std::size_t> index_;
    std::size_t count_ = 0;
};

struct DeviationBreakdown {
    double condition_a = 0.0;
    double condition_b = 0.0;
    double bound_utilization = 0.0;
    std::vector<EntryDeviation> per_entry;
};

DeviationBreakdown measure_deviations(const AtomicMeasure& w, const OperationSpec& tau,
                                      const AtomicMeasure& w_a, const TestFunctionDictionary& dict,
                                      std::size_t atom_cap) {
    DeviationBreakdown out;
    const AtomicMeasure tau_w = apply(tau, w, atom_cap);
    for (const TestFunction& f : dict.entries) {
        if (f.factor == Factor::a) {
            const double dev = std::fabs(integrate(w, f) - integrate(w_a, f));
            out.condition_a = std::max(out.condition_a, dev);
            out.per_entry.push_back({f.id, f.factor, dev});
        } else if (f.factor == Factor::b) {
            const double dev = std::fabs(integrate(tau_w, f) - integrate(w, f));
            out.condition_b = std::max(out.condition_b, dev);
            out.per_entry.push_back({f.id, f.factor, dev});
        }
    }
    return out;
}

double max_b_bound(const TestFunctionDictionary& dict) {
    double b = 0.0;
    for (const TestFunction& f : dict.entries)
        if (f.factor == Factor::b) b = std::max(b, f.bound);
    return b;
}

} // namespace

std::pair<AtomicMeasure, ClassicalDctcReport> solve_classical_dctc(const OperationSpec& tau,
                                                                   const AtomicMeasure& w_a,
                                                                   const AtomicMeasure& w_b0,
                                                                   const SolverConfig& cfg) {
    cfg.validate();
    require_factors(w_a, w_b0);
    bool has_b_entry = false;
    for (const TestFunction& f : cfg.dictionary.entries)
        if (f.factor == Factor::b) has_b_entry = true;
    if (!has_b_entry)
        throw std::invalid_argument("solver dictionary needs at least one B-factor entry");

    ClassicalDctcReport report;
    report.dictionary_ids = cfg.dictionary.ids();
    const double bmax = max_b_bound(cfg.dictionary);

    AtomicMeasure phi = product_measure(w_a, w_b0, cfg.atom_cap);
    spot_check_bounds(cfg.dictionary, phi);
    CesaroAccumulator accum(phi.space, cfg.atom_cap);

    // Plain-iterate chain tau^n(phi_1); its B marginals are the sequence
    // whose tightness the probability-measure statement assumes.
    const bool track_tightness = !cfg.tightness_radii.empty();
    AtomicMeasure joint = phi;
    std::vector<AtomicMeasure> iterate_b_marginals;

    // B-marginal of phi_1, the anchor of the telescoping identity.
    const AtomicMeasure nu_1 = marginal_b(phi);
    std::vector<double> nu1_integrals;
    for (const TestFunction& f : cfg.dictionary.entries)
        nu1_integrals.push_back(f.factor == Factor::b ? integrate(nu_1, f) : 0.0);

    AtomicMeasure w_n = phi; // overwritten at the first checkpoint
    auto checkpoint = [&](std::size_t n) {
        w_n = accum.snapshot(cfg.merge_radius);
        DeviationBreakdown dev = measure_deviations(w_n, tau, w_a, cfg.dictionary, cfg.atom_cap);

        CheckpointRecord rec;
        rec.n = n;
        rec.condition_a_deviation = dev.condition_a;
        rec.condition_b_deviation = dev.condition_b;
        rec.cesaro_bound_value = cesaro_bound(n, bmax);
        rec.atom_count = w_n.atoms.size();
        rec.marginal_a_discrepancy = bl_discrepancy(marginal_a(w_n), w_a, cfg.dictionary);
        for (const EntryDeviation& e : dev.per_entry)
            if (e.factor == Factor::b) {
                const TestFunction* f = nullptr;
                for (const TestFunction& cand : cfg.dictionary.entries)
                    if (cand.id == e.id) f = &cand;
                rec.bound_utilization = std::max(
                    rec.bound_utilization, e.deviation / cesaro_bound(n, f ? f->bound : bmax));
            }
        report.curve.push_back(rec);
        report.per_entry = std::move(dev.per_entry);
        report.condition_a_deviation = rec.condition_a_deviation;
        report.condition_b_deviation = rec.condition_b_deviation;
        report.cesaro_bound_value = rec.cesaro_bound_value;
        report.n_used = n;
        return rec.condition_b_deviation <= cfg.tol;
    };

    bool converged = false;
    for (std::size_t n = 1; n <= cfg.n_max && !converged; ++n) {
        accum.add(phi);

        if (track_tightness) {
            joint = apply(tau, joint, cfg.atom_cap);
            if (joint.atoms.size() > 64) joint = merge_atoms(joint, 0.0);
            iterate_b_marginals.push_back(marginal_b(joint));
        }

        // nu_{n+1} = B marginal of tau(phi_n); also the next phi's B factor.
        const AtomicMeasure tau_phi = apply(tau, phi, cfg.atom_cap);
        const AtomicMeasure nu_next = merge_atoms(marginal_b(tau_phi), 0.0);

        // Telescoped deviation |nu_{n+1}(f) - nu_1(f)|/n equals the measured
        // condition-B deviation of w_(n) whenever tau is an operation; it is
        // the cheap stopping signal between materialized checkpoints.
        double telescoped = 0.0;
        std::size_t idx = 0;
        for (const TestFunction& f : cfg.dictionary.entries) {
            if (f.factor == Factor::b)
                telescoped = std::max(
                    telescoped, std::fabs(integrate(nu_next, f) - nu1_integrals[idx]) /
                                    static_cast<double>(n));
            ++idx;
        }

        if (telescoped <= cfg.tol || n % cfg.record_every == 0 || n == cfg.n_max)
            converged = checkpoint(n);

        if (!converged && n < cfg.n_max) phi = product_measure(w_a, nu_next, cfg.atom_cap);
    }
    report.converged = converged;

    if (track_tightness) {
        Point center;
        if (cfg.tightness_center) {
            center = *cfg.tightness_center;
        } else {
            center = iterate_b_marginals.front().atoms.front().point;
        }
        report.tightness =
            tightness_profile(iterate_b_marginals, cfg.tightness_radii, center);
    }
    return {std::move(w_n), std::move(report)};
}

ClassicalDctcReport verify_dctc_classical(const AtomicMeasure& w, const OperationSpec& tau,
                                          const AtomicMeasure& w_a,
                                          const TestFunctionDictionary& dict) {
    if (!w.space.is_product())
        throw std::invalid_argument("verify_dctc_classical: candidate must live on the product space");
    if (dict.empty()) throw std::invalid_argument("verify_dctc_classical: empty dictionary");

    ClassicalDctcReport report;
    report.dictionary_ids = dict.ids();
    DeviationBreakdown dev = measure_deviations(w, tau, w_a, dict, kDefaultAtomCap);
    report.condition_a_deviation = dev.condition_a;
    report.condition_b_deviation = dev.condition_b;
    report.per_entry = std::move(dev.per_entry);
    return report;
}

CaseClassification classify_time_ratio(double t, double period, std::int64_t max_denominator,
                                       double tol) {
    if (period <= 0.0) throw std::invalid_argument("period must be positive");
    if (max_denominator < 1) throw std::invalid_argument("max_denominator must be positive");
    if (tol < 0.0) throw std::invalid_argument("tolerance must be nonnegative");

    const double x = t / period;
    const double xs = std::fabs(x);
    const std::int64_t sign = x < 0.0 ? -1 : 1;

    CaseClassification best;
    best.kind = TimeRatioKind::irrational_within_tolerance;
    best.residual = std::numeric_limits<double>::infinity();

    // Continued-fraction walk; convergents p/q are the best rational
    // approximations with denominator <= q.
    double frac = xs;
    std::int64_t p_prev = 1, q_prev = 0;
    std::int64_t p = 0, q = 1; // seeded so the first update yields a0/1
    bool terminated = false;
    for (int step = 0; step < 64; ++step) {
        const double a_real = std::floor(frac);
        if (a_real > 4e18) break; // integer part beyond representable range
        const auto a = static_cast<std::int64_t>(a_real);
        if (step > 0 && a_real * static_cast<double>(p) + static_cast<double>(p_prev) > 4e18) break;
        const std::int64_t p_next = (step == 0) ? a : a * p + p_prev;
        const std::int64_t q_next = (step == 0) ? 1 : a * q + q_prev;
        if (q_next > max_denominator) break;
        p_prev = (step == 0) ? 1 : p;
        q_prev = (step == 0) ? 0 : q;
        p = p_next;
        q = q_next;

        const double err = std::fabs(xs - static_cast<double>(p) / static_cast<double>(q));
        if (err < best.residual) {
            best.residual = err;
            best.k = sign * p;
            best.l = q;
        }
        const double rem = frac - a_real;
        if (rem == 0.0) { terminated = true; break; }
        const double next_quotient = 1.0 / rem;
        if (next_quotient > 1e15) { terminated = true; break; } // quotient at the noise floor
        frac = next_quotient;
    }

    // A convergent counts as the rational answer when it is inside tol and
    // anomalously accurate for its denominator (expansion terminated, or
    // equivalently q^2*err below the Diophantine-typical scale).
    const double anomaly = best.residual * static_cast<double>(best.l) * static_cast<double>(best.l);
    if (best.residual <= tol && (terminated || anomaly <= 0.05)) {
        best.kind = best.l == 1 ? TimeRatioKind::integer_multiple : TimeRatioKind::rational;
    } else {
        best.kind = TimeRatioKind::irrational_within_tolerance;
    }
    return best;
}

EquidistributionStats equidistribution_stats(std::span<const double> angles, unsigned max_harmonic) {
    if (angles.empty()) throw std::invalid_argument("equidistribution_stats: empty angle list");
    EquidistributionStats stats;
    const double n = static_cast<double>(angles.size());
    for (unsigned m = 1; m <= max_harmonic; ++m) {
        std::complex<double> s{0.0, 0.0};
        for (double theta : angles) s += std::polar(1.0, m * theta);
        stats.weyl_sums.push_back(std::abs(s) / n);
    }

    constexpr double two_pi = 2.0 * std::numbers::pi;
    std::vector<double> u;
    u.reserve(angles.size());
    for (double theta : angles) {
        double v = theta / two_pi;
        v -= std::floor(v);
        u.push_back(v);
    }
    std::sort(u.begin(), u.end());
    double dstar = 0.0;
    for (std::size_t i = 1; i <= u.size(); ++i) {
        dstar = std::max(dstar, static_cast<double>(i) / n - u[i - 1]);
        dstar = std::max(dstar, u[i - 1] - static_cast<double>(i - 1) / n);
    }
    stats.star_discrepancy = dstar;
    return stats;
}

} // namespace dctc
