#include "dctc/runner.hpp"

#include "dctc/errors.hpp"

#include <json.hpp>

#include <chrono>
#include <ctime>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <numeric>

namespace dctc {

using nlohmann::json;

namespace {

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path.string());
    out << text;
    if (!out) throw std::runtime_error("failed writing: " + path.string());
}

json matrix_to_json(const ComplexMatrix& m) {
    json entries = json::array();
    for (const Complex& z : m.entries) entries.push_back({z.real(), z.imag()});
    return json{{"rows", m.rows}, {"cols", m.cols}, {"entries", std::move(entries)}};
}

json measure_to_json(const AtomicMeasure& mu) {
    json atoms = json::array();
    for (const Atom& a : mu.atoms) {
        json x = json::array();
        for (double c : a.point.coords) x.push_back(c);
        atoms.push_back({{"w", a.weight}, {"x", std::move(x)}});
    }
    json space;
    switch (mu.space.kind) {
        case Space::Kind::product:
            space = {{"dim_a", mu.space.dim_a}, {"dim_b", mu.space.dim_b}};
            break;
        case Space::Kind::factor_a: space = {{"factor", "a"}, {"dim", mu.space.dim_a}}; break;
        case Space::Kind::factor_b: space = {{"factor", "b"}, {"dim", mu.space.dim_b}}; break;
    }
    if (!mu.space.label.empty()) space["label"] = mu.space.label;
    return json{{"space", std::move(space)}, {"atoms", std::move(atoms)}};
}

// ---- quantum pipeline ----

DensityMatrix resolve_state(const MatrixSource& src, std::size_t dim, std::uint64_t seed) {
    switch (src.kind) {
        case MatrixSource::Kind::maximally_mixed: return DensityMatrix::maximally_mixed(dim);
        case MatrixSource::Kind::diagonal: return DensityMatrix::diagonal(src.diag);
        case MatrixSource::Kind::explicit_matrix:
            try {
                return DensityMatrix(src.matrix);
            } catch (const std::invalid_argument& e) {
                throw ValidationError(std::string("state matrix rejected: ") + e.what());
            }
        case MatrixSource::Kind::random: return random_density_matrix(dim, seed);
        default: throw ValidationError("unsupported state source");
    }
}

UnitaryMatrix resolve_unitary(const MatrixSource& src, const BipartiteDims& dims, std::uint64_t seed) {
    switch (src.kind) {
        case MatrixSource::Kind::identity: return UnitaryMatrix::identity(dims.total());
        case MatrixSource::Kind::swap_factors: return UnitaryMatrix::swap(dims);
        case MatrixSource::Kind::cnot: return UnitaryMatrix::cnot();
        case MatrixSource::Kind::explicit_matrix:
            try {
                return UnitaryMatrix(src.matrix);
            } catch (const std::invalid_argument& e) {
                throw ValidationError(std::string("unitary matrix rejected: ") + e.what());
            }
        case MatrixSource::Kind::random: return random_unitary(dims.total(), seed);
        default: throw ValidationError("unsupported unitary source");
    }
}

struct PipelineResult {
    json report;
    std::vector<std::pair<std::string, std::string>> files; // name -> content
    bool converged = true;
};

PipelineResult run_quantum(const QuantumScenario& q, std::uint64_t seed) {
    const UnitaryMatrix u = resolve_unitary(q.unitary, q.dims, seed);
    const DensityMatrix rho_a = resolve_state(q.rho_a, q.dims.d_a, seed + 1);
    const DensityMatrix rho_b0 = resolve_state(q.rho_b0, q.dims.d_b, seed + 2);

    const DeutschSolution sol =
        solve_deutsch_fixed_point(u, rho_a, rho_b0, q.dims, q.max_iter, q.tol);
    const DensityMatrix rho_full = tensor_product(rho_a, sol.rho_b_star, q.dim_cap);
    const QuantumDctcReport check = verify_dctc_quantum(rho_full, u, rho_a, q.dims, q.verify_tol);

    PipelineResult out;
    out.converged = sol.diagnostics.converged;
    out.report = json{
        {"kind", "quantum_fixpoint"},
        {"dims", {{"d_a", q.dims.d_a}, {"d_b", q.dims.d_b}}},
        {"converged", sol.diagnostics.converged},
        {"iterations", sol.diagnostics.iterations},
        {"residual", sol.diagnostics.final_residual},
        {"tol", q.tol},
        {"verify_tol", q.verify_tol},
        {"marginal_a_deviation", check.marginal_a_deviation},
        {"invariance_deviation", check.invariance_deviation},
        {"dctc_passed", check.passed()},
        {"rho_b_star", matrix_to_json(sol.rho_b_star.matrix())},
    };

    std::string curve = "iteration,residual\n";
    for (std::size_t i = 0; i < sol.diagnostics.residual_history.size(); ++i)
        curve += std::to_string(i + 1) + "," + fmt_double(sol.diagnostics.residual_history[i]) + "\n";
    out.files.emplace_back("curve.csv", std::move(curve));
    return out;
}

// ---- classical pipeline ----

PhaseMap build_map(const MapSpec& spec, const Space& space) {
    PhaseMap inner;
    switch (spec.kind) {
        case MapSpec::Kind::identity: {
            const std::size_t d = !spec.factor              ? space.total_dim()
                                  : *spec.factor == Factor::a ? space.dim_a
                                                              : space.dim_b;
            inner = identity_map(d);
            break;
        }
        case MapSpec::Kind::circle_rotation: inner = circle_rotation(spec.angle.resolve()); break;
        case MapSpec::Kind::translation: inner = translation_map(spec.offset); break;
        case MapSpec::Kind::two_body_flow: {
            IntegratorConfig cfg;
            cfg.dt = spec.dt;
            return flow_map(spec.params, spec.flow_time.value, cfg);
        }
    }
    if (spec.factor) return lift_to_factor(inner, space, *spec.factor);
    return inner;
}

OperationSpec build_operation(const OperationSpecConfig& cfg, const Space& space) {
    switch (cfg.kind) {
        case OperationSpecConfig::Kind::pushforward:
            return OperationSpec::pushforward(build_map(cfg.map, space));
        case OperationSpecConfig::Kind::mix_with_fixed:
            return OperationSpec::mix_with_fixed(make_measure(space, cfg.fixed_atoms), cfg.mix_weight);
        case OperationSpecConfig::Kind::compose: {
            std::vector<OperationSpec> seq;
            seq.reserve(cfg.sequence.size());
            for (const auto& sub : cfg.sequence) seq.push_back(build_operation(sub, space));
            return OperationSpec::compose(std::move(seq));
        }
    }
    throw ValidationError("unsupported operation kind");
}

TestFunctionDictionary build_dictionary(const std::vector<FunctionSpec>& specs, const Space& space,
                                        std::span<const Point> anchors) {
    if (specs.empty()) return default_dictionary(space, anchors);
    TestFunctionDictionary dict;
    for (const FunctionSpec& f : specs) {
        switch (f.kind) {
            case FunctionSpec::Kind::clamp:
                dict.entries.push_back(clamp_coordinate(f.factor, f.coord, f.lo, f.hi));
                break;
            case FunctionSpec::Kind::gaussian:
                dict.entries.push_back(gaussian_bump(f.factor, Point{f.center}, f.width));
                break;
            case FunctionSpec::Kind::fourier:
                for (unsigned m = 1; m <= f.harmonics; ++m) {
                    dict.entries.push_back(fourier_cos(f.factor, f.coord, m));
                    dict.entries.push_back(fourier_sin(f.factor, f.coord, m));
                }
                break;
        }
    }
    return dict;
}

json tightness_to_json(const TightnessProfile& prof, bool include_rows) {
    json radii = json::array();
    for (double r : prof.radii) radii.push_back(r);
    json sup = json::array();
    for (std::size_t r = 0; r < prof.radii.size(); ++r) sup.push_back(prof.sup_outside(r));
    json center = json::array();
    for (double c : prof.center.coords) center.push_back(c);
    json out{{"radii", std::move(radii)}, {"sup_outside", std::move(sup)}, {"center", std::move(center)}};
    if (!prof.outside_mass.empty()) {
        json final_row = json::array();
        for (double m : prof.outside_mass.back()) final_row.push_back(m);
        out["final_outside"] = std::move(final_row);
        out["sequence_length"] = prof.outside_mass.size();
    }
    if (include_rows) {
        json rows = json::array();
        for (const auto& row : prof.outside_mass) {
            json r = json::array();
            for (double m : row) r.push_back(m);
            rows.push_back(std::move(r));
        }
        out["rows"] = std::move(rows);
    }
    return out;
}

std::string tightness_csv(const TightnessProfile& prof) {
    std::string csv = "n";
    for (double r : prof.radii) csv += ",outside_r" + fmt_double(r);
    csv += "\n";
    for (std::size_t n = 0; n < prof.outside_mass.size(); ++n) {
        csv += std::to_string(n + 1);
        for (double m : prof.outside_mass[n]) csv += "," + fmt_double(m);
        csv += "\n";
    }
    return csv;
}

PipelineResult run_classical(const ClassicalScenario& c, std::size_t atom_cap_override) {
    const Space space_a = Space::factor(Factor::a, c.space.dim_a, c.space.label);
    const Space space_b = Space::factor(Factor::b, c.space.dim_b, c.space.label);
    const AtomicMeasure w_a = make_measure(space_a, c.w_a_atoms);
    const AtomicMeasure w_b0 = make_measure(space_b, c.w_b0_atoms);
    const OperationSpec tau = build_operation(c.operation, c.space);

    std::vector<Point> anchors;
    for (const Atom& a : c.w_a_atoms)
        for (const Atom& b : c.w_b0_atoms) {
            if (anchors.size() >= 4) break;
            Point p;
            p.coords = a.point.coords;
            p.coords.insert(p.coords.end(), b.point.coords.begin(), b.point.coords.end());
            anchors.push_back(std::move(p));
        }

    SolverConfig cfg;
    cfg.n_max = c.n_max;
    cfg.tol = c.tol;
    cfg.merge_radius = c.merge_radius;
    cfg.record_every = c.record_every;
    cfg.atom_cap = atom_cap_override ? atom_cap_override : c.atom_cap;
    cfg.dictionary = build_dictionary(c.dictionary, c.space, anchors);
    cfg.tightness_radii = c.tightness_radii;
    if (!c.tightness_center.empty()) cfg.tightness_center = Point{c.tightness_center};

    auto [w, rep] = solve_classical_dctc(tau, w_a, w_b0, cfg);

    PipelineResult out;
    out.converged = rep.converged;
    json per_entry = json::array();
    for (const EntryDeviation& e : rep.per_entry)
        per_entry.push_back({{"id", e.id},
                             {"factor", e.factor == Factor::a ? "a" : e.factor == Factor::b ? "b" : "full"},
                             {"deviation", e.deviation}});
    out.report = json{
        {"kind", "classical_fixpoint"},
        {"converged", rep.converged},
        {"n_used", rep.n_used},
        {"condition_a_deviation", rep.condition_a_deviation},
        {"condition_b_deviation", rep.condition_b_deviation},
        {"cesaro_bound", rep.cesaro_bound_value},
        {"tol", c.tol},
        {"dictionary", rep.dictionary_ids},
        {"per_entry", std::move(per_entry)},
        {"state_atoms", w.atoms.size()},
        {"state", measure_to_json(w)},
    };
    if (rep.tightness) out.report["tightness"] = tightness_to_json(*rep.tightness, false);

    std::string curve =
        "n,condition_a_deviation,condition_b_deviation,cesaro_bound,marginal_a_discrepancy,"
        "bound_utilization,atoms\n";
    for (const CheckpointRecord& r : rep.curve)
        curve += std::to_string(r.n) + "," + fmt_double(r.condition_a_deviation) + "," +
                 fmt_double(r.condition_b_deviation) + "," + fmt_double(r.cesaro_bound_value) + "," +
                 fmt_double(r.marginal_a_discrepancy) + "," + fmt_double(r.bound_utilization) + "," +
                 std::to_string(r.atom_count) + "\n";
    out.files.emplace_back("curve.csv", std::move(curve));

    std::string atoms = "weight";
    for (std::size_t k = 0; k < c.space.total_dim(); ++k) atoms += ",x" + std::to_string(k);
    atoms += "\n";
    for (const Atom& a : w.atoms) {
        atoms += fmt_double(a.weight);
        for (double x : a.point.coords) atoms += "," + fmt_double(x);
        atoms += "\n";
    }
    out.files.emplace_back("atoms.csv", std::move(atoms));
    if (rep.tightness) out.files.emplace_back("tightness.csv", tightness_csv(*rep.tightness));
    return out;
}

// ---- orbit demo pipeline ----

PipelineResult run_orbit(const OrbitScenario& o) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const double period = two_pi * std::sqrt(o.m_b * o.radius * o.radius * o.radius / o.alpha);
    const double speed = std::sqrt(o.alpha / (o.m_b * o.radius));

    // Symbolic times classify exactly; decimal times go through the
    // continued-fraction classifier.
    CaseClassification cls;
    double turns; // rotation per application, as a fraction of a full orbit
    switch (o.time.kind) {
        case TimeSpec::Kind::multiple_of_period: {
            const std::int64_t g = std::gcd(o.time.k, o.time.l);
            cls.k = o.time.k / g;
            cls.l = o.time.l / g;
            cls.kind = cls.l == 1 ? TimeRatioKind::integer_multiple : TimeRatioKind::rational;
            cls.residual = 0.0;
            // Fractional turn in lowest terms; whole orbits rotate by zero.
            turns = static_cast<double>(cls.k % cls.l) / static_cast<double>(cls.l);
            break;
        }
        case TimeSpec::Kind::golden_of_period:
            cls = classify_time_ratio(o.time.resolve(period), period, o.max_denominator, o.classify_tol);
            turns = (std::sqrt(5.0) - 1.0) / 2.0;
            break;
        case TimeSpec::Kind::absolute:
        default:
            cls = classify_time_ratio(o.time.value, period, o.max_denominator, o.classify_tol);
            turns = o.time.value / period;
            break;
    }

    std::size_t n = o.n;
    if (n == 0) {
        if (cls.kind == TimeRatioKind::integer_multiple) n = 4;
        else if (cls.kind == TimeRatioKind::rational) n = static_cast<std::size_t>(cls.l);
        else n = 10'000;
    }

    const Space space = Space::product(1, 1, "orbit-phase");
    const AtomicMeasure w_a = dirac(Point{{0.0}}, Space::factor(Factor::a, 1, "planet"));
    const AtomicMeasure w_b0 = dirac(Point{{o.theta0}}, Space::factor(Factor::b, 1, "angle"));
    const OperationSpec tau =
        OperationSpec::pushforward(lift_to_factor(reduced_satellite_map(turns), space, Factor::b));

    TestFunctionDictionary dict;
    for (unsigned m = 1; m <= o.harmonics; ++m) {
        dict.entries.push_back(fourier_cos(Factor::b, 0, m));
        dict.entries.push_back(fourier_sin(Factor::b, 0, m));
    }
    dict.entries.push_back(clamp_coordinate(Factor::a, 0, -1.0, 1.0));

    const std::vector<AtomicMeasure> phis = phi_sequence(tau, w_a, w_b0, n, 0.0);
    const AtomicMeasure w_n = cesaro_state(phis, o.merge_radius);
    const AtomicMeasure b_marginal = merge_atoms(marginal_b(w_n), o.merge_radius);
    const ClassicalDctcReport rep = verify_dctc_classical(w_n, tau, w_a, dict);

    // Visited angles theta_1..theta_n (the B atom of each phi).
    std::vector<double> angles;
    angles.reserve(n);
    for (const AtomicMeasure& phi : phis) angles.push_back(phi.atoms.front().point.coords.back());
    const EquidistributionStats stats = equidistribution_stats(angles, o.harmonics);

    PipelineResult out;
    json weyl = json::array();
    for (double wsum : stats.weyl_sums) weyl.push_back(wsum);
    const char* case_name = cls.kind == TimeRatioKind::integer_multiple ? "integer_multiple"
                            : cls.kind == TimeRatioKind::rational       ? "rational"
                                                                        : "irrational_within_tolerance";
    out.report = json{
        {"kind", "orbit_demo"},
        {"classification",
         {{"case", case_name}, {"k", cls.k}, {"l", cls.l}, {"residual", cls.residual}}},
        {"period", period},
        {"n", n},
        {"theta0", o.theta0},
        {"b_atoms", b_marginal.atoms.size()},
        {"condition_a_deviation", rep.condition_a_deviation},
        {"condition_b_deviation", rep.condition_b_deviation},
        {"cesaro_bound", cesaro_bound(n, 1.0)},
        {"weyl_sums", std::move(weyl)},
        {"star_discrepancy", stats.star_discrepancy},
        {"dictionary", dict.ids()},
    };

    // Fig. 2-style atom sheet: angle, weight and the tangential momentum.
    std::string atoms = "angle,weight,p_x,p_y\n";
    for (const Atom& a : b_marginal.atoms) {
        const double theta = a.point.coords[0];
        atoms += fmt_double(theta) + "," + fmt_double(a.weight) + "," +
                 fmt_double(-o.m_b * speed * std::sin(theta)) + "," +
                 fmt_double(o.m_b * speed * std::cos(theta)) + "\n";
    }
    out.files.emplace_back("atoms.csv", std::move(atoms));

    std::string weylcsv = "n";
    for (unsigned m = 1; m <= o.harmonics; ++m) weylcsv += ",weyl_" + std::to_string(m);
    weylcsv += ",star_discrepancy\n";
    const std::size_t step = std::max<std::size_t>(1, n / 100);
    for (std::size_t k = step; k <= n; k += step) {
        const EquidistributionStats s =
            equidistribution_stats(std::span<const double>(angles.data(), k), o.harmonics);
        weylcsv += std::to_string(k);
        for (double wsum : s.weyl_sums) weylcsv += "," + fmt_double(wsum);
        weylcsv += "," + fmt_double(s.star_discrepancy) + "\n";
    }
    out.files.emplace_back("curve.csv", std::move(weylcsv));
    return out;
}

// ---- tightness probe pipeline ----

PipelineResult run_tightness(const TightnessScenario& t) {
    double period = 0.0;
    if (t.t.kind != TimeSpec::Kind::absolute) {
        const double mu = t.params.m_a * t.params.m_b / (t.params.m_a + t.params.m_b);
        period = 2.0 * std::numbers::pi *
                 std::sqrt(mu * t.orbit_radius * t.orbit_radius * t.orbit_radius / t.params.alpha);
    }
    const double step_time = t.t.resolve(period);
    if (step_time <= 0.0) throw ValidationError("tightness probe needs a positive iterate time");

    IntegratorConfig icfg;
    icfg.dt = t.dt;
    const PhaseMap flow = flow_map(t.params, step_time, icfg);

    const double e0 = hamiltonian(t.params, t.initial);
    const auto flat0 = t.initial.flat();
    const Space space = Space::product(6, 6, "two-body-phase");
    AtomicMeasure joint = dirac(Point{{flat0.begin(), flat0.end()}}, space);
    const OperationSpec tau = OperationSpec::pushforward(flow);

    std::vector<AtomicMeasure> b_marginals;
    b_marginals.reserve(t.iterations);
    std::string trajectory = "t,q_a_x,q_a_y,q_a_z,p_a_x,p_a_y,p_a_z,q_b_x,q_b_y,q_b_z,p_b_x,p_b_y,p_b_z,energy\n";
    double max_energy_drift = 0.0;
    for (std::size_t nstep = 1; nstep <= t.iterations; ++nstep) {
        joint = apply(tau, joint);
        b_marginals.push_back(marginal_b(joint));
        const PhaseState s = PhaseState::from_flat(joint.atoms.front().point.coords);
        const double e = hamiltonian(t.params, s);
        max_energy_drift = std::max(max_energy_drift, std::fabs((e - e0) / e0));
        trajectory += fmt_double(static_cast<double>(nstep) * step_time);
        for (double x : joint.atoms.front().point.coords) trajectory += "," + fmt_double(x);
        trajectory += "," + fmt_double(e) + "\n";
    }

    Point center;
    if (!t.center_b.empty()) {
        center = Point{t.center_b};
    } else {
        center = Point{{flat0.begin() + 6, flat0.end()}};
    }
    const TightnessProfile prof = tightness_profile(b_marginals, t.radii, center);

    // First iterate at which the mass outside each ball reaches 0.99.
    json first_exceed = json::array();
    for (std::size_t r = 0; r < prof.radii.size(); ++r) {
        std::int64_t first = -1;
        for (std::size_t nrow = 0; nrow < prof.outside_mass.size(); ++nrow)
            if (prof.outside_mass[nrow][r] > 0.99) {
                first = static_cast<std::int64_t>(nrow + 1);
                break;
            }
        first_exceed.push_back(first);
    }

    PipelineResult out;
    out.report = json{
        {"kind", "tightness_probe"},
        {"lambda", t.params.lambda},
        {"iterations", t.iterations},
        {"step_time", step_time},
        {"dt", t.dt},
        {"energy_drift_max", max_energy_drift},
        {"excluded_configurations", flow.fault_count ? flow.fault_count->load() : 0},
        {"tightness", tightness_to_json(prof, false)},
        {"first_iterate_outside_099", std::move(first_exceed)},
    };
    out.files.emplace_back("tightness.csv", tightness_csv(prof));
    out.files.emplace_back("trajectory.csv", std::move(trajectory));
    return out;
}

} // namespace

RunManifest run_scenario(const Scenario& scenario, const RunOptions& options) {
    RunManifest manifest;
    manifest.scenario_name = scenario.name;
    manifest.kind = Scenario::kind_name(scenario.kind);
    manifest.digest = scenario.digest;
    manifest.tool_version = kToolVersion;
    manifest.seed = options.seed_override.value_or(scenario.seed);
    manifest.started_at = iso_timestamp();

    std::filesystem::create_directories(options.out_dir);

    const auto wants = [&](const char* what) {
        for (const std::string& o : scenario.outputs)
            if (o == what) return true;
        return false;
    };

    PipelineResult result;
    try {
        switch (scenario.kind) {
            case Scenario::Kind::quantum_fixpoint:
                result = run_quantum(std::get<QuantumScenario>(scenario.payload), manifest.seed);
                break;
            case Scenario::Kind::classical_fixpoint:
                result = run_classical(std::get<ClassicalScenario>(scenario.payload),
                                       options.atom_cap_override.value_or(0));
                break;
            case Scenario::Kind::orbit_demo:
                result = run_orbit(std::get<OrbitScenario>(scenario.payload));
                break;
            case Scenario::Kind::tightness_probe:
                result = run_tightness(std::get<TightnessScenario>(scenario.payload));
                break;
        }
    } catch (const std::exception& e) {
        manifest.status = "error";
        manifest.error = e.what();
        manifest.converged = false;
        manifest.finished_at = iso_timestamp();
        json mj{{"schema_version", kSchemaVersion},
                {"scenario", manifest.scenario_name},
                {"kind", manifest.kind},
                {"digest", manifest.digest},
                {"tool_version", manifest.tool_version},
                {"seed", manifest.seed},
                {"started_at", manifest.started_at},
                {"finished_at", manifest.finished_at},
                {"status", manifest.status},
                {"error", manifest.error},
                {"outputs", json::array()}};
        write_text(options.out_dir / "manifest.json", mj.dump(2) + "\n");
        throw;
    }

    result.report["schema_version"] = kSchemaVersion;
    result.report["scenario"] = scenario.name;
    result.report["digest"] = scenario.digest;
    result.report["seed"] = manifest.seed;

    if (wants("report")) {
        write_text(options.out_dir / "report.json", result.report.dump(2) + "\n");
        manifest.output_files.push_back("report.json");
    }
    for (auto& [name, content] : result.files) {
        const bool is_curve = name == "curve.csv" || name == "tightness.csv";
        const bool is_atoms = name == "atoms.csv";
        const bool is_traj = name == "trajectory.csv";
        if ((is_curve && wants("curve")) || (is_atoms && wants("atoms")) ||
            (is_traj && wants("trajectory"))) {
            write_text(options.out_dir / name, content);
            manifest.output_files.push_back(name);
        }
    }

    manifest.converged = result.converged;
    manifest.status = result.converged ? "ok" : "not_converged";
    manifest.finished_at = iso_timestamp();

    json mj{{"schema_version", kSchemaVersion},
            {"scenario", manifest.scenario_name},
            {"kind", manifest.kind},
            {"digest", manifest.digest},
            {"tool_version", manifest.tool_version},
            {"seed", manifest.seed},
            {"started_at", manifest.started_at},
            {"finished_at", manifest.finished_at},
            {"status", manifest.status},
            {"outputs", manifest.output_files}};
    write_text(options.out_dir / "manifest.json", mj.dump(2) + "\n");
    return manifest;
}

} // namespace dctc
