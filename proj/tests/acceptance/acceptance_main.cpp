// Acceptance suite: one check per shipped guarantee, one PASS/FAIL line
// each. Exits nonzero if any check fails.
//
// usage: acceptance <path-to-dctc-lab-binary> <path-to-scenarios-dir>

#include "dctc/classical.hpp"
#include "dctc/dynamics.hpp"
#include "dctc/quantum.hpp"
#include "dctc/runner.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

using namespace dctc;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int g_failures = 0;

void criterion(int number, const std::string& label, const std::function<bool(std::string&)>& body) {
    std::string detail;
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("exception: ") + e.what();
    }
    std::printf("%s %2d: %s%s%s\n", ok ? "PASS" : "FAIL", number, label.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

// ---- shared builders ----

const Space kProd = Space::product(1, 1, "orbit-phase");
const AtomicMeasure kWa = dirac(Point{{0.0}}, Space::factor(Factor::a, 1));

AtomicMeasure delta_b(double theta) { return dirac(Point{{theta}}, Space::factor(Factor::b, 1)); }

OperationSpec rotation_op(double angle) {
    return OperationSpec::pushforward(lift_to_factor(circle_rotation(angle), kProd, Factor::b));
}

TestFunctionDictionary fourier_dict(unsigned harmonics) {
    TestFunctionDictionary dict;
    for (unsigned m = 1; m <= harmonics; ++m) {
        dict.entries.push_back(fourier_cos(Factor::b, 0, m));
        dict.entries.push_back(fourier_sin(Factor::b, 0, m));
    }
    dict.entries.push_back(clamp_coordinate(Factor::a, 0, -1.0, 1.0));
    return dict;
}

AtomicMeasure random_product_measure(std::uint64_t seed, std::size_t atoms = 4) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    std::vector<Atom> out;
    double total = 0.0;
    for (std::size_t i = 0; i < atoms; ++i) {
        const double w = u(rng);
        out.push_back(Atom{w, Point{{u(rng), kTwoPi * u(rng)}}});
        total += w;
    }
    for (Atom& a : out) a.weight /= total;
    return make_measure(kProd, std::move(out));
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) return {};
    return std::string(std::istreambuf_iterator<char>(in), {});
}

int run_command(const std::string& cmd) {
    const int rc = std::system((cmd + " >/dev/null 2>&1").c_str());
    if (rc == -1) return -1;
    return WEXITSTATUS(rc);
}

// Checkpoint curve of a forced-full-length solver run.
ClassicalDctcReport full_curve(const OperationSpec& tau, const AtomicMeasure& w_b0,
                               std::size_t n_max, const TestFunctionDictionary& dict) {
    SolverConfig cfg;
    cfg.n_max = n_max;
    cfg.tol = 1e-300; // never reached: record the whole curve
    cfg.record_every = 1;
    cfg.merge_radius = 1e-9;
    cfg.dictionary = dict;
    return solve_classical_dctc(tau, kWa, w_b0, cfg).second;
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::fprintf(stderr, "usage: acceptance <dctc-lab-binary> <scenarios-dir>\n");
        return 64;
    }
    const std::string cli = argv[1];
    const std::filesystem::path scenarios_dir = argv[2];
    const BipartiteDims qubits{2, 2};

    criterion(1, "random 2x2-factor unitaries reach residual 1e-10 and verify at 1e-9", [&](std::string& detail) {
        std::size_t worst_iters = 0;
        double worst_residual = 0.0;
        for (std::uint64_t us = 0; us < 50; ++us) {
            const UnitaryMatrix u = random_unitary(4, 42000 + us);
            for (std::uint64_t as = 0; as < 10; ++as) {
                const DensityMatrix rho_a = random_density_matrix(2, 91000 + as);
                const auto sol = solve_deutsch_fixed_point(
                    u, rho_a, DensityMatrix::maximally_mixed(2), qubits, 10000, 1e-10);
                worst_iters = std::max(worst_iters, sol.diagnostics.iterations);
                worst_residual = std::max(worst_residual, sol.diagnostics.final_residual);
                if (!sol.diagnostics.converged || sol.diagnostics.final_residual > 1e-10) {
                    detail = "not converged at seed pair " + std::to_string(us) + "/" +
                             std::to_string(as);
                    return false;
                }
                const auto rep = verify_dctc_quantum(tensor_product(rho_a, sol.rho_b_star), u,
                                                     rho_a, qubits, 1e-9);
                if (!rep.passed()) {
                    detail = "verification failed at seed pair " + std::to_string(us) + "/" +
                             std::to_string(as);
                    return false;
                }
            }
        }
        std::ostringstream os;
        os << "500 solves, max iterations " << worst_iters << ", max residual " << worst_residual;
        detail = os.str();
        return true;
    });

    criterion(2, "swap maps to rho_A (1e-12) and the identity keeps rho_B0 exactly", [&](std::string& detail) {
        const DensityMatrix rho_a = DensityMatrix::diagonal({0.62, 0.38});
        for (std::uint64_t s = 0; s < 5; ++s) {
            const DensityMatrix rho_b0 = random_density_matrix(2, 7700 + s);
            const auto swap_sol = solve_deutsch_fixed_point(UnitaryMatrix::swap(qubits), rho_a,
                                                            rho_b0, qubits, 100, 1e-12);
            if (trace_distance(swap_sol.rho_b_star, rho_a) > 1e-12) {
                detail = "swap fixed point is off";
                return false;
            }
            const auto id_sol = solve_deutsch_fixed_point(UnitaryMatrix::identity(4), rho_a,
                                                          rho_b0, qubits, 100, 1e-12);
            if (max_abs_diff(id_sol.rho_b_star.matrix(), rho_b0.matrix()) != 0.0) {
                detail = "identity moved the seed";
                return false;
            }
        }
        return true;
    });

    // Shared forced-full-length runs for the Cesaro estimate and A-marginal checks.
    const TestFunctionDictionary dict5 = fourier_dict(5);
    const ClassicalDctcReport rot_curve =
        full_curve(rotation_op(golden_angle()), delta_b(0.3), 1000, dict5);
    const AtomicMeasure mix_target = product_measure(
        kWa, make_measure(Space::factor(Factor::b, 1),
                          {Atom{0.5, Point{{1.0}}}, Atom{0.5, Point{{2.5}}}}));
    const ClassicalDctcReport mix_curve =
        full_curve(OperationSpec::mix_with_fixed(mix_target, 0.5), delta_b(0.3), 1000, dict5);

    criterion(3, "Cesaro estimate 2||f||/N holds for every entry at every N <= 1000", [&](std::string& detail) {
        std::size_t checked = 0;
        double worst = 0.0;
        for (const ClassicalDctcReport* rep : {&rot_curve, &mix_curve}) {
            if (rep->curve.size() != 1000) {
                detail = "expected 1000 checkpoints, got " + std::to_string(rep->curve.size());
                return false;
            }
            for (const CheckpointRecord& rec : rep->curve) {
                ++checked;
                worst = std::max(worst, rec.bound_utilization);
                if (rec.bound_utilization > 1.0) {
                    detail = "violation at N = " + std::to_string(rec.n);
                    return false;
                }
            }
        }
        std::ostringstream os;
        os << checked << " checkpoints, worst utilization " << worst;
        detail = os.str();
        return true;
    });

    criterion(4, "A marginal of w_(N) equals w_A within 1e-12 at every checkpoint", [&](std::string& detail) {
        double worst = 0.0;
        for (const ClassicalDctcReport* rep : {&rot_curve, &mix_curve})
            for (const CheckpointRecord& rec : rep->curve) {
                worst = std::max(worst, rec.marginal_a_discrepancy);
                if (rec.marginal_a_discrepancy > 1e-12) {
                    detail = "deviation " + std::to_string(rec.marginal_a_discrepancy) +
                             " at N = " + std::to_string(rec.n);
                    return false;
                }
            }
        std::ostringstream os;
        os << "worst discrepancy " << worst;
        detail = os.str();
        return true;
    });

    criterion(5, "case (i): one full orbit period leaves the B state at delta_xB", [&](std::string& detail) {
        const OperationSpec tau = OperationSpec::pushforward(
            lift_to_factor(reduced_satellite_map(1.0), kProd, Factor::b));
        const auto phis = phi_sequence(tau, kWa, delta_b(0.3), 8);
        const AtomicMeasure w = cesaro_state(phis, 1e-9);
        const double dev = bl_discrepancy(merge_atoms(marginal_b(w), 1e-9), delta_b(0.3), dict5);
        std::ostringstream os;
        os << "discrepancy " << dev;
        detail = os.str();
        return dev <= 1e-12;
    });

    criterion(6, "case (ii): quarter-period orbit averages to 4 atoms of weight 1/4", [&](std::string& detail) {
        const OperationSpec tau = OperationSpec::pushforward(
            lift_to_factor(reduced_satellite_map(0.25), kProd, Factor::b));
        const auto phis = phi_sequence(tau, kWa, delta_b(0.3), 4);
        const AtomicMeasure mb = merge_atoms(marginal_b(cesaro_state(phis, 1e-9)), 1e-9);
        if (mb.atoms.size() != 4) {
            detail = "got " + std::to_string(mb.atoms.size()) + " atoms";
            return false;
        }
        std::vector<double> angles;
        for (const Atom& a : mb.atoms) {
            if (std::fabs(a.weight - 0.25) > 1e-12) {
                detail = "weight " + std::to_string(a.weight);
                return false;
            }
            angles.push_back(a.point.coords[0]);
        }
        std::sort(angles.begin(), angles.end());
        for (int j = 0; j < 4; ++j) {
            const double expect = 0.3 + kTwoPi * j / 4.0;
            if (std::fabs(angles[j] - expect) > 1e-12) {
                detail = "angle " + std::to_string(angles[j]) + " vs " + std::to_string(expect);
                return false;
            }
        }
        return true;
    });

    criterion(7, "case (iii): golden rotation at N = 1e4 equidistributes", [&](std::string& detail) {
        SolverConfig cfg;
        cfg.n_max = 10000;
        cfg.tol = 1e-300;
        cfg.record_every = 10000;
        cfg.merge_radius = 1e-9;
        cfg.dictionary = dict5;
        const OperationSpec tau = rotation_op(golden_angle());
        const auto [w, rep] = solve_classical_dctc(tau, kWa, delta_b(0.3), cfg);

        std::vector<double> angles;
        double theta = 0.3;
        angles.push_back(theta);
        const PhaseMap rot = circle_rotation(golden_angle());
        for (int i = 1; i < 10000; ++i) {
            theta = rot(std::vector<double>{theta})[0];
            angles.push_back(theta);
        }
        const EquidistributionStats stats = equidistribution_stats(angles, 5);
        std::ostringstream os;
        os << "star discrepancy " << stats.star_discrepancy << ", max Weyl "
           << *std::max_element(stats.weyl_sums.begin(), stats.weyl_sums.end())
           << ", condition-B deviation " << rep.condition_b_deviation;
        detail = os.str();
        if (stats.star_discrepancy >= 0.01) return false;
        for (double wsum : stats.weyl_sums)
            if (wsum >= 0.02) return false;
        if (rep.condition_b_deviation >= 0.02) return false;
        if (rep.curve.back().marginal_a_discrepancy > 1e-12) return false;
        return true;
    });

    criterion(8, "tightness dichotomy: free pair escapes, external binding confines", [&](std::string& detail) {
        // lambda = 0, drifting center of mass
        TwoBodyParams free_pair;
        free_pair.m_a = 10.0;
        free_pair.m_b = 1.0;
        free_pair.alpha = 10.0;
        PhaseState s0;
        s0.q_a = {0, 0, 0};
        s0.q_b = {0, 1, 0};
        s0.p_a = {-3.0151134457776365, 0, 5.0};
        s0.p_b = {3.0151134457776361, 0, 0.5};
        const double period_free = 1.8944516501989659;
        const PhaseMap flow_free =
            flow_map(free_pair, period_free, IntegratorConfig{period_free / 1000});
        const Space phase_space = Space::product(6, 6);
        const auto flat0 = s0.flat();
        AtomicMeasure joint = dirac(Point{{flat0.begin(), flat0.end()}}, phase_space);
        const OperationSpec tau_free = OperationSpec::pushforward(flow_free);
        std::vector<AtomicMeasure> b_marginals;
        for (int n = 0; n < 120; ++n) {
            joint = apply(tau_free, joint);
            b_marginals.push_back(marginal_b(joint));
        }
        const Point center_b{{flat0.begin() + 6, flat0.end()}};
        const double r0 = 1.0;
        const double radii_free[] = {10.0 * r0};
        const TightnessProfile prof_free = tightness_profile(b_marginals, radii_free, center_b);
        if (prof_free.outside_mass.back()[0] <= 0.99) {
            detail = "free pair still inside after 120 iterates";
            return false;
        }
        std::size_t first_out = 0;
        for (std::size_t n = 0; n < prof_free.outside_mass.size(); ++n)
            if (prof_free.outside_mass[n][0] > 0.99) {
                first_out = n + 1;
                break;
            }

        // lambda = 1, hierarchical binding
        TwoBodyParams bound;
        bound.m_a = 100.0;
        bound.m_b = 1.0;
        bound.alpha = 100.0;
        bound.beta_a = 1e8;
        bound.beta_b = 1e6;
        bound.lambda = 1.0;
        PhaseState h0;
        h0.q_a = {10000.0, 0, 0};
        h0.p_a = {-9.9503719020998922, 1000.0, 0};
        h0.q_b = {10000.0, 1.0, 0};
        h0.p_b = {9.9503719020998904, 10.0, 0};
        const double t_b = 0.62520030536246629;
        const PhaseMap flow_bound = flow_map(bound, t_b, IntegratorConfig{t_b / 256});
        const auto hflat = h0.flat();
        AtomicMeasure joint_b = dirac(Point{{hflat.begin(), hflat.end()}}, phase_space);
        const OperationSpec tau_bound = OperationSpec::pushforward(flow_bound);
        const Point center_b2{{hflat.begin() + 6, hflat.end()}};
        const double radii_bound[] = {15000.0};
        for (int n = 0; n < 1000; ++n) {
            joint_b = apply(tau_bound, joint_b);
            const AtomicMeasure mb = marginal_b(joint_b);
            const TightnessProfile p = tightness_profile(std::span(&mb, 1), radii_bound, center_b2);
            if (p.outside_mass[0][0] != 0.0) {
                detail = "bound scenario leaked at iterate " + std::to_string(n + 1);
                return false;
            }
        }
        detail = "free pair outside 10*r0 from iterate " + std::to_string(first_out) +
                 "; bound pair confined for 1000 iterates";
        return true;
    });

    criterion(9, "leapfrog quality: energy, secular drift, orbit closure", [&](std::string& detail) {
        TwoBodyParams p;
        p.m_a = 1e6;
        p.m_b = 1.0;
        p.alpha = 1.0;
        const CircularOrbit orbit = circular_orbit_ic(p, 1.0, true);
        const double e0 = hamiltonian(p, orbit.state);

        PhaseState s = orbit.state;
        double drift_fine = 0.0;
        const double dt_fine = orbit.period / 10000;
        for (int i = 0; i < 10000; ++i) {
            s = leapfrog_step(p, s, dt_fine);
            drift_fine = std::max(drift_fine, std::fabs((hamiltonian(p, s) - e0) / e0));
        }
        double closure = 0.0;
        for (int k = 0; k < 3; ++k)
            closure += (s.q_b[k] - orbit.state.q_b[k]) * (s.q_b[k] - orbit.state.q_b[k]);
        closure = std::sqrt(closure);

        PhaseState s2 = orbit.state;
        double drift_long = 0.0;
        const double dt_coarse = orbit.period / 1000;
        for (int period = 0; period < 100; ++period)
            for (int i = 0; i < 1000; ++i) {
                s2 = leapfrog_step(p, s2, dt_coarse);
                drift_long = std::max(drift_long, std::fabs((hamiltonian(p, s2) - e0) / e0));
            }

        std::ostringstream os;
        os << "1-period |dE/E| " << drift_fine << ", 100-period |dE/E| " << drift_long
           << ", closure " << closure;
        detail = os.str();
        return drift_fine < 1e-6 && drift_long < 1e-3 && closure < 1e-4 * orbit.radius;
    });

    criterion(10, "operations commute with convex mixtures (100 seeded pairs)", [&](std::string& detail) {
        const TestFunctionDictionary dict = fourier_dict(3);
        const OperationSpec push = rotation_op(0.7);
        const OperationSpec mix = OperationSpec::mix_with_fixed(random_product_measure(888), 0.25);
        std::vector<OperationSpec> seq{push, mix};
        const OperationSpec comp = OperationSpec::compose(std::move(seq));
        double worst = 0.0;
        for (std::uint64_t k = 0; k < 100; ++k) {
            const AtomicMeasure samples[2] = {random_product_measure(2 * k),
                                              random_product_measure(2 * k + 1)};
            const double lambda = 0.1 + 0.8 * static_cast<double>(k) / 99.0;
            for (const OperationSpec* op : {&push, &mix, &comp}) {
                const double dev = convexity_check(*op, samples, lambda, dict);
                worst = std::max(worst, dev);
                if (dev > 1e-12) {
                    detail = "deviation " + std::to_string(dev) + " at pair " + std::to_string(k);
                    return false;
                }
            }
        }
        std::ostringstream os;
        os << "worst deviation " << worst;
        detail = os.str();
        return true;
    });

    criterion(11, "CLI determinism and validation exit codes", [&](std::string& detail) {
        namespace fs = std::filesystem;
        const fs::path work = fs::temp_directory_path() / "dctc-acceptance";
        fs::remove_all(work);
        fs::create_directories(work);

        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(scenarios_dir))
            if (entry.is_regular_file() && entry.path().extension() == ".json")
                files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        if (files.size() < 10) {
            detail = "expected at least 10 bundled scenarios";
            return false;
        }
        for (const auto& f : files) {
            const fs::path out1 = work / "a";
            const fs::path out2 = work / "b";
            for (const fs::path& out : {out1, out2}) {
                const int rc = run_command("\"" + cli + "\" run \"" + f.string() + "\" --out \"" +
                                           out.string() + "\"");
                if (rc != 0 && rc != 4) { // non-convergence still yields full artifacts
                    detail = f.filename().string() + " exited with " + std::to_string(rc);
                    return false;
                }
            }
            bool compared = false;
            for (const auto& entry : fs::recursive_directory_iterator(out1)) {
                if (!entry.is_regular_file()) continue;
                const fs::path rel = fs::relative(entry.path(), out1);
                if (rel.filename() == "manifest.json") continue; // timestamps live here
                const std::string a = slurp(entry.path());
                const std::string b = slurp(out2 / rel);
                if (a.empty() || a != b) {
                    detail = f.filename().string() + ": " + rel.string() + " differs between runs";
                    return false;
                }
                compared = true;
            }
            if (!compared) {
                detail = f.filename().string() + " produced no comparable artifacts";
                return false;
            }
            fs::remove_all(out1);
            fs::remove_all(out2);
        }

        // malformed scenarios: parse errors exit 2, validation errors exit 3
        const std::vector<std::pair<std::string, int>> expected = {
            {"bad_syntax.json", 2},    {"missing_kind.json", 3}, {"bad_weights.json", 3},
            {"unknown_field.json", 3}, {"bad_dims.json", 3},
        };
        for (const auto& [name, want] : expected) {
            const int rc = run_command("\"" + cli + "\" validate \"" +
                                       (scenarios_dir / "malformed" / name).string() + "\"");
            if (rc != want) {
                detail =
                    name + " exited with " + std::to_string(rc) + ", expected " + std::to_string(want);
                return false;
            }
        }
        fs::remove_all(work);
        detail = std::to_string(files.size()) + " scenarios byte-stable, 5 malformed rejected";
        return true;
    });

    if (g_failures == 0) {
        std::printf("acceptance: all 11 criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) FAILED\n", g_failures);
    return 1;
}
