#include "dctc/scenario.hpp"

#include "dctc/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace dctc {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& msg) {
    throw ValidationError(where + ": " + msg);
}

const json& member(const json& obj, const std::string& where, const std::string& key) {
    if (!obj.is_object()) fail(where, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(where, "missing required field '" + key + "'");
    return *it;
}

const json* opt_member(const json& obj, const std::string& key) {
    if (!obj.is_object()) return nullptr;
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

void reject_unknown(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key())) fail(where, "unknown field '" + it.key() + "'");
}

double finite_number(const json& j, const std::string& where) {
    if (!j.is_number()) fail(where, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(where, "number must be finite");
    return v;
}

double positive_number(const json& j, const std::string& where) {
    const double v = finite_number(j, where);
    if (v <= 0.0) fail(where, "must be positive");
    return v;
}

std::size_t positive_integer(const json& j, const std::string& where) {
    if (!j.is_number_integer() || j.get<std::int64_t>() < 1) fail(where, "expected a positive integer");
    return static_cast<std::size_t>(j.get<std::int64_t>());
}

std::vector<double> number_array(const json& j, const std::string& where) {
    if (!j.is_array()) fail(where, "expected an array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(finite_number(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

Factor parse_factor(const json& j, const std::string& where) {
    if (!j.is_string()) fail(where, "expected 'a', 'b' or 'full'");
    const std::string s = j.get<std::string>();
    if (s == "a") return Factor::a;
    if (s == "b") return Factor::b;
    if (s == "full") return Factor::full;
    fail(where, "expected 'a', 'b' or 'full', got '" + s + "'");
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

bool parse_int64(const std::string& s, std::int64_t& out) {
    if (s.empty()) return false;
    std::size_t pos = 0;
    try {
        out = std::stoll(s, &pos);
    } catch (...) {
        return false;
    }
    return pos == s.size();
}

AngleSpec parse_angle(const json& j, const std::string& where) {
    AngleSpec a;
    if (j.is_number()) {
        a.kind = AngleSpec::Kind::radians;
        a.radians = finite_number(j, where);
        return a;
    }
    if (j.is_string()) {
        const std::string s = trim(j.get<std::string>());
        if (s == "golden") {
            a.kind = AngleSpec::Kind::golden;
            return a;
        }
        const auto slash = s.find('/');
        if (slash != std::string::npos) {
            if (!parse_int64(trim(s.substr(0, slash)), a.k) ||
                !parse_int64(trim(s.substr(slash + 1)), a.l) || a.l < 1)
                fail(where, "expected a rational 'k/l' with positive l, got '" + s + "'");
            a.kind = AngleSpec::Kind::rational_of_turn;
            return a;
        }
        fail(where, "expected radians, 'k/l' or 'golden', got '" + s + "'");
    }
    fail(where, "expected a number or a string angle");
}

TimeSpec parse_time(const json& j, const std::string& where) {
    TimeSpec t;
    if (j.is_number()) {
        t.kind = TimeSpec::Kind::absolute;
        t.value = finite_number(j, where);
        return t;
    }
    if (!j.is_string()) fail(where, "expected a number or a string like '3 T', '1/4 T', 'golden T'");
    std::string s = trim(j.get<std::string>());
    if (s.empty() || (s.back() != 'T' && s.back() != 't'))
        fail(where, "symbolic times must end in 'T', got '" + s + "'");
    s = trim(s.substr(0, s.size() - 1));
    if (s.empty()) {
        t.kind = TimeSpec::Kind::multiple_of_period;
        t.k = 1;
        t.l = 1;
        return t;
    }
    if (s == "golden") {
        t.kind = TimeSpec::Kind::golden_of_period;
        return t;
    }
    const auto slash = s.find('/');
    if (slash != std::string::npos) {
        if (!parse_int64(trim(s.substr(0, slash)), t.k) ||
            !parse_int64(trim(s.substr(slash + 1)), t.l) || t.l < 1 || t.k < 1)
            fail(where, "expected 'k/l T' with positive integers, got '" + s + " T'");
        t.kind = TimeSpec::Kind::multiple_of_period;
        return t;
    }
    if (!parse_int64(s, t.k) || t.k < 1) fail(where, "expected 'k T' with positive k, got '" + s + " T'");
    t.kind = TimeSpec::Kind::multiple_of_period;
    t.l = 1;
    return t;
}

std::vector<Atom> parse_atoms(const json& j, const std::string& where, std::size_t dim) {
    if (!j.is_array() || j.empty()) fail(where, "expected a nonempty array of atoms");
    std::vector<Atom> atoms;
    atoms.reserve(j.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string at = where + ".atoms[" + std::to_string(i) + "]";
        const json& a = j[i];
        reject_unknown(a, at, {"w", "x"});
        const double w = finite_number(member(a, at, "w"), at + ".w");
        if (w < 0.0) fail(at, "atom weight must be nonnegative");
        std::vector<double> x = number_array(member(a, at, "x"), at + ".x");
        if (x.size() != dim)
            fail(at, "atom has " + std::to_string(x.size()) + " coordinates, space needs " +
                         std::to_string(dim));
        sum += w;
        atoms.push_back(Atom{w, Point{std::move(x)}});
    }
    if (std::fabs(sum - 1.0) > kWeightTolerance)
        fail(where, "atoms: weights sum to " + std::to_string(sum) + ", expected 1");
    return atoms;
}

ComplexMatrix parse_matrix(const json& j, const std::string& where) {
    reject_unknown(j, where, {"rows", "cols", "entries"});
    const std::size_t rows = positive_integer(member(j, where, "rows"), where + ".rows");
    const std::size_t cols = positive_integer(member(j, where, "cols"), where + ".cols");
    const json& entries = member(j, where, "entries");
    if (!entries.is_array() || entries.size() != rows * cols)
        fail(where + ".entries", "expected " + std::to_string(rows * cols) + " [re, im] pairs");
    ComplexMatrix m(rows, cols);
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const std::string at = where + ".entries[" + std::to_string(i) + "]";
        if (!entries[i].is_array() || entries[i].size() != 2) fail(at, "expected an [re, im] pair");
        m.entries[i] = Complex{finite_number(entries[i][0], at), finite_number(entries[i][1], at)};
    }
    return m;
}

MatrixSource parse_matrix_source(const json& j, const std::string& where, bool unitary_ctx) {
    MatrixSource src;
    reject_unknown(j, where, {"builtin", "maximally_mixed", "diag", "matrix", "random"});
    if (const json* b = opt_member(j, "builtin")) {
        if (!unitary_ctx) fail(where, "'builtin' is only valid for unitaries");
        const std::string s = b->is_string() ? b->get<std::string>() : "";
        if (s == "identity") src.kind = MatrixSource::Kind::identity;
        else if (s == "swap") src.kind = MatrixSource::Kind::swap_factors;
        else if (s == "cnot") src.kind = MatrixSource::Kind::cnot;
        else fail(where + ".builtin", "expected 'identity', 'swap' or 'cnot'");
        return src;
    }
    if (const json* b = opt_member(j, "maximally_mixed")) {
        if (unitary_ctx) fail(where, "'maximally_mixed' is only valid for states");
        if (!b->is_boolean() || !b->get<bool>()) fail(where + ".maximally_mixed", "expected true");
        src.kind = MatrixSource::Kind::maximally_mixed;
        return src;
    }
    if (const json* b = opt_member(j, "diag")) {
        if (unitary_ctx) fail(where, "'diag' is only valid for states");
        src.kind = MatrixSource::Kind::diagonal;
        src.diag = number_array(*b, where + ".diag");
        double sum = 0.0;
        for (double v : src.diag) {
            if (v < 0.0) fail(where + ".diag", "diagonal entries must be nonnegative");
            sum += v;
        }
        if (std::fabs(sum - 1.0) > kWeightTolerance)
            fail(where + ".diag", "diagonal sums to " + std::to_string(sum) + ", expected 1");
        return src;
    }
    if (const json* b = opt_member(j, "matrix")) {
        src.kind = MatrixSource::Kind::explicit_matrix;
        src.matrix = parse_matrix(*b, where + ".matrix");
        return src;
    }
    if (const json* b = opt_member(j, "random")) {
        if (!b->is_boolean() || !b->get<bool>()) fail(where + ".random", "expected true");
        src.kind = MatrixSource::Kind::random;
        return src;
    }
    fail(where, "expected one of 'builtin', 'maximally_mixed', 'diag', 'matrix', 'random'");
}

TwoBodyParams parse_two_body(const json& j, const std::string& where) {
    reject_unknown(j, where, {"m_a", "m_b", "alpha", "beta_a", "beta_b", "lambda", "softening"});
    TwoBodyParams p;
    p.m_a = positive_number(member(j, where, "m_a"), where + ".m_a");
    p.m_b = positive_number(member(j, where, "m_b"), where + ".m_b");
    p.alpha = finite_number(member(j, where, "alpha"), where + ".alpha");
    if (const json* b = opt_member(j, "beta_a")) p.beta_a = finite_number(*b, where + ".beta_a");
    if (const json* b = opt_member(j, "beta_b")) p.beta_b = finite_number(*b, where + ".beta_b");
    if (const json* b = opt_member(j, "lambda")) p.lambda = finite_number(*b, where + ".lambda");
    if (const json* b = opt_member(j, "softening")) p.softening = finite_number(*b, where + ".softening");
    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        fail(where, e.what());
    }
    return p;
}

MapSpec parse_map(const json& j, const std::string& where, const Space& space) {
    reject_unknown(j, where, {"type", "factor", "angle", "offset", "params", "t", "dt"});
    MapSpec m;
    const json& type = member(j, where, "type");
    const std::string s = type.is_string() ? type.get<std::string>() : "";
    if (const json* f = opt_member(j, "factor")) {
        const Factor fac = parse_factor(*f, where + ".factor");
        if (fac == Factor::full) fail(where + ".factor", "lift factor must be 'a' or 'b'");
        m.factor = fac;
    }
    const std::size_t target_dim = !m.factor              ? space.total_dim()
                                   : *m.factor == Factor::a ? space.dim_a
                                                            : space.dim_b;
    if (s == "identity") {
        m.kind = MapSpec::Kind::identity;
    } else if (s == "circle_rotation") {
        m.kind = MapSpec::Kind::circle_rotation;
        m.angle = parse_angle(member(j, where, "angle"), where + ".angle");
        if (target_dim != 1)
            fail(where, "circle_rotation acts on one angular coordinate; target has dim " +
                            std::to_string(target_dim));
    } else if (s == "translation") {
        m.kind = MapSpec::Kind::translation;
        m.offset = number_array(member(j, where, "offset"), where + ".offset");
        if (m.offset.size() != target_dim)
            fail(where + ".offset", "offset dim " + std::to_string(m.offset.size()) +
                                        " does not match target dim " + std::to_string(target_dim));
    } else if (s == "two_body_flow") {
        m.kind = MapSpec::Kind::two_body_flow;
        if (m.factor) fail(where, "two_body_flow acts on the full 12-dimensional product space");
        if (space.total_dim() != 12)
            fail(where, "two_body_flow needs a product space of dimension 6+6");
        m.params = parse_two_body(member(j, where, "params"), where + ".params");
        m.flow_time = parse_time(member(j, where, "t"), where + ".t");
        if (m.flow_time.kind != TimeSpec::Kind::absolute)
            fail(where + ".t", "flow maps inside operations take absolute times");
        m.dt = positive_number(member(j, where, "dt"), where + ".dt");
    } else {
        fail(where + ".type", "expected 'identity', 'circle_rotation', 'translation' or 'two_body_flow'");
    }
    return m;
}

OperationSpecConfig parse_operation(const json& j, const std::string& where, const Space& space) {
    reject_unknown(j, where, {"kind", "map", "lambda", "w0", "ops"});
    OperationSpecConfig op;
    const json& kind = member(j, where, "kind");
    const std::string s = kind.is_string() ? kind.get<std::string>() : "";
    if (s == "pushforward") {
        op.kind = OperationSpecConfig::Kind::pushforward;
        op.map = parse_map(member(j, where, "map"), where + ".map", space);
    } else if (s == "mix_with_fixed") {
        op.kind = OperationSpecConfig::Kind::mix_with_fixed;
        op.mix_weight = finite_number(member(j, where, "lambda"), where + ".lambda");
        if (op.mix_weight < 0.0 || op.mix_weight > 1.0)
            fail(where + ".lambda", "mixing coefficient must be in [0,1]");
        const json& w0 = member(j, where, "w0");
        reject_unknown(w0, where + ".w0", {"atoms"});
        op.fixed_atoms =
            parse_atoms(member(w0, where + ".w0", "atoms"), where + ".w0", space.total_dim());
    } else if (s == "compose") {
        op.kind = OperationSpecConfig::Kind::compose;
        const json& ops = member(j, where, "ops");
        if (!ops.is_array() || ops.empty()) fail(where + ".ops", "expected a nonempty array");
        for (std::size_t i = 0; i < ops.size(); ++i)
            op.sequence.push_back(parse_operation(ops[i], where + ".ops[" + std::to_string(i) + "]", space));
    } else {
        fail(where + ".kind", "expected 'pushforward', 'mix_with_fixed' or 'compose'");
    }
    return op;
}

FunctionSpec parse_function(const json& j, const std::string& where, const Space& space) {
    reject_unknown(j, where, {"type", "factor", "coord", "lo", "hi", "center", "width", "harmonics"});
    FunctionSpec f;
    const json& type = member(j, where, "type");
    const std::string s = type.is_string() ? type.get<std::string>() : "";
    f.factor = parse_factor(member(j, where, "factor"), where + ".factor");
    const std::size_t fdim = f.factor == Factor::a   ? space.dim_a
                             : f.factor == Factor::b ? space.dim_b
                                                     : space.total_dim();
    auto parse_coord = [&](const json* c) {
        if (!c) return;
        if (!c->is_number_integer() || c->get<std::int64_t>() < 0)
            fail(where + ".coord", "expected a nonnegative integer");
        f.coord = static_cast<std::size_t>(c->get<std::int64_t>());
    };
    if (s == "clamp") {
        f.kind = FunctionSpec::Kind::clamp;
        parse_coord(opt_member(j, "coord"));
        if (f.coord >= fdim) fail(where + ".coord", "coordinate index out of range");
        if (const json* c = opt_member(j, "lo")) f.lo = finite_number(*c, where + ".lo");
        if (const json* c = opt_member(j, "hi")) f.hi = finite_number(*c, where + ".hi");
        if (!(f.lo < f.hi)) fail(where, "clamp needs lo < hi");
    } else if (s == "gaussian") {
        f.kind = FunctionSpec::Kind::gaussian;
        f.center = number_array(member(j, where, "center"), where + ".center");
        if (f.center.size() != fdim)
            fail(where + ".center", "center dim does not match the factor dimension");
        f.width = positive_number(member(j, where, "width"), where + ".width");
    } else if (s == "fourier") {
        f.kind = FunctionSpec::Kind::fourier;
        parse_coord(opt_member(j, "coord"));
        if (f.coord >= fdim) fail(where + ".coord", "coordinate index out of range");
        f.harmonics = static_cast<unsigned>(
            positive_integer(member(j, where, "harmonics"), where + ".harmonics"));
    } else {
        fail(where + ".type", "expected 'clamp', 'gaussian' or 'fourier'");
    }
    return f;
}

QuantumScenario parse_quantum(const json& j, const std::string& where) {
    reject_unknown(j, where,
                   {"dims", "unitary", "rho_a", "rho_b0", "max_iter", "tol", "verify_tol", "dim_cap"});
    QuantumScenario q;
    const json& dims = member(j, where, "dims");
    reject_unknown(dims, where + ".dims", {"d_a", "d_b"});
    q.dims.d_a = positive_integer(member(dims, where + ".dims", "d_a"), where + ".dims.d_a");
    q.dims.d_b = positive_integer(member(dims, where + ".dims", "d_b"), where + ".dims.d_b");
    if (const json* c = opt_member(j, "dim_cap"))
        q.dim_cap = positive_integer(*c, where + ".dim_cap");
    if (q.dims.total() > q.dim_cap)
        fail(where + ".dims", "full dimension " + std::to_string(q.dims.total()) + " exceeds cap " +
                                  std::to_string(q.dim_cap));
    q.unitary = parse_matrix_source(member(j, where, "unitary"), where + ".unitary", true);
    q.rho_a = parse_matrix_source(member(j, where, "rho_a"), where + ".rho_a", false);
    if (const json* b = opt_member(j, "rho_b0"))
        q.rho_b0 = parse_matrix_source(*b, where + ".rho_b0", false);
    if (const json* b = opt_member(j, "max_iter")) q.max_iter = positive_integer(*b, where + ".max_iter");
    if (const json* b = opt_member(j, "tol")) q.tol = positive_number(*b, where + ".tol");
    q.verify_tol = 10.0 * q.tol;
    if (const json* b = opt_member(j, "verify_tol"))
        q.verify_tol = positive_number(*b, where + ".verify_tol");

    // Shape checks that do not need the seed.
    if (q.unitary.kind == MatrixSource::Kind::swap_factors && q.dims.d_a != q.dims.d_b)
        fail(where + ".unitary", "swap needs d_a == d_b");
    if (q.unitary.kind == MatrixSource::Kind::cnot && (q.dims.d_a != 2 || q.dims.d_b != 2))
        fail(where + ".unitary", "cnot needs d_a == d_b == 2");
    if (q.unitary.kind == MatrixSource::Kind::explicit_matrix &&
        q.unitary.matrix.rows != q.dims.total())
        fail(where + ".unitary.matrix", "unitary dimension must be d_a*d_b");
    if (q.rho_a.kind == MatrixSource::Kind::explicit_matrix && q.rho_a.matrix.rows != q.dims.d_a)
        fail(where + ".rho_a.matrix", "rho_a dimension must be d_a");
    if (q.rho_a.kind == MatrixSource::Kind::diagonal && q.rho_a.diag.size() != q.dims.d_a)
        fail(where + ".rho_a.diag", "rho_a diagonal length must be d_a");
    if (q.rho_b0.kind == MatrixSource::Kind::explicit_matrix && q.rho_b0.matrix.rows != q.dims.d_b)
        fail(where + ".rho_b0.matrix", "rho_b0 dimension must be d_b");
    if (q.rho_b0.kind == MatrixSource::Kind::diagonal && q.rho_b0.diag.size() != q.dims.d_b)
        fail(where + ".rho_b0.diag", "rho_b0 diagonal length must be d_b");
    return q;
}

ClassicalScenario parse_classical(const json& j, const std::string& where) {
    reject_unknown(j, where, {"space", "w_a", "w_b0", "operation", "solver"});
    ClassicalScenario c;
    const json& space = member(j, where, "space");
    reject_unknown(space, where + ".space", {"dim_a", "dim_b", "label"});
    const std::size_t da = positive_integer(member(space, where + ".space", "dim_a"), where + ".space.dim_a");
    const std::size_t db = positive_integer(member(space, where + ".space", "dim_b"), where + ".space.dim_b");
    std::string label;
    if (const json* l = opt_member(space, "label")) {
        if (!l->is_string()) fail(where + ".space.label", "expected a string");
        label = l->get<std::string>();
    }
    c.space = Space::product(da, db, label);
    c.w_a_atoms = parse_atoms(member(member(j, where, "w_a"), where + ".w_a", "atoms"),
                              where + ".w_a", da);
    c.w_b0_atoms = parse_atoms(member(member(j, where, "w_b0"), where + ".w_b0", "atoms"),
                               where + ".w_b0", db);
    c.operation = parse_operation(member(j, where, "operation"), where + ".operation", c.space);

    const json& solver = member(j, where, "solver");
    reject_unknown(solver, where + ".solver",
                   {"n_max", "tol", "merge_radius", "record_every", "atom_cap", "dictionary", "tightness"});
    c.n_max = positive_integer(member(solver, where + ".solver", "n_max"), where + ".solver.n_max");
    c.tol = positive_number(member(solver, where + ".solver", "tol"), where + ".solver.tol");
    if (const json* b = opt_member(solver, "merge_radius")) {
        c.merge_radius = finite_number(*b, where + ".solver.merge_radius");
        if (c.merge_radius < 0.0) fail(where + ".solver.merge_radius", "must be nonnegative");
    }
    if (const json* b = opt_member(solver, "record_every"))
        c.record_every = positive_integer(*b, where + ".solver.record_every");
    if (const json* b = opt_member(solver, "atom_cap"))
        c.atom_cap = positive_integer(*b, where + ".solver.atom_cap");
    if (const json* b = opt_member(solver, "dictionary")) {
        if (!b->is_array() || b->empty()) fail(where + ".solver.dictionary", "expected a nonempty array");
        for (std::size_t i = 0; i < b->size(); ++i)
            c.dictionary.push_back(
                parse_function((*b)[i], where + ".solver.dictionary[" + std::to_string(i) + "]", c.space));
    }
    if (const json* b = opt_member(solver, "tightness")) {
        reject_unknown(*b, where + ".solver.tightness", {"radii", "center"});
        c.tightness_radii = number_array(member(*b, where + ".solver.tightness", "radii"),
                                         where + ".solver.tightness.radii");
        for (std::size_t i = 1; i < c.tightness_radii.size(); ++i)
            if (c.tightness_radii[i] <= c.tightness_radii[i - 1])
                fail(where + ".solver.tightness.radii", "radii must be strictly increasing");
        if (const json* ctr = opt_member(*b, "center")) {
            c.tightness_center = number_array(*ctr, where + ".solver.tightness.center");
            if (c.tightness_center.size() != db)
                fail(where + ".solver.tightness.center", "center must have the B-factor dimension");
        }
    }
    return c;
}

OrbitScenario parse_orbit(const json& j, const std::string& where) {
    reject_unknown(j, where,
                   {"time", "theta0", "n", "harmonics", "merge_radius", "params", "max_denominator",
                    "classify_tol"});
    OrbitScenario o;
    o.time = parse_time(member(j, where, "time"), where + ".time");
    if (const json* b = opt_member(j, "theta0")) o.theta0 = finite_number(*b, where + ".theta0");
    if (const json* b = opt_member(j, "n")) o.n = positive_integer(*b, where + ".n");
    if (const json* b = opt_member(j, "harmonics"))
        o.harmonics = static_cast<unsigned>(positive_integer(*b, where + ".harmonics"));
    if (const json* b = opt_member(j, "merge_radius")) {
        o.merge_radius = finite_number(*b, where + ".merge_radius");
        if (o.merge_radius < 0.0) fail(where + ".merge_radius", "must be nonnegative");
    }
    if (const json* b = opt_member(j, "params")) {
        reject_unknown(*b, where + ".params", {"alpha", "m_b", "radius"});
        if (const json* v = opt_member(*b, "alpha")) o.alpha = positive_number(*v, where + ".params.alpha");
        if (const json* v = opt_member(*b, "m_b")) o.m_b = positive_number(*v, where + ".params.m_b");
        if (const json* v = opt_member(*b, "radius"))
            o.radius = positive_number(*v, where + ".params.radius");
    }
    if (const json* b = opt_member(j, "max_denominator")) {
        o.max_denominator = static_cast<std::int64_t>(positive_integer(*b, where + ".max_denominator"));
    }
    if (const json* b = opt_member(j, "classify_tol"))
        o.classify_tol = positive_number(*b, where + ".classify_tol");
    return o;
}

TightnessScenario parse_tightness(const json& j, const std::string& where) {
    reject_unknown(j, where,
                   {"params", "initial", "t", "dt", "iterations", "radii", "center_b", "orbit_radius"});
    TightnessScenario t;
    t.params = parse_two_body(member(j, where, "params"), where + ".params");
    const json& init = member(j, where, "initial");
    reject_unknown(init, where + ".initial", {"q_a", "p_a", "q_b", "p_b"});
    auto vec3 = [&](const char* key, std::array<double, 3>& out) {
        const std::vector<double> v =
            number_array(member(init, where + ".initial", key), where + ".initial." + key);
        if (v.size() != 3) fail(where + ".initial." + key, "expected 3 components");
        std::copy(v.begin(), v.end(), out.begin());
    };
    vec3("q_a", t.initial.q_a);
    vec3("p_a", t.initial.p_a);
    vec3("q_b", t.initial.q_b);
    vec3("p_b", t.initial.p_b);
    t.t = parse_time(member(j, where, "t"), where + ".t");
    t.dt = positive_number(member(j, where, "dt"), where + ".dt");
    t.iterations = positive_integer(member(j, where, "iterations"), where + ".iterations");
    t.radii = number_array(member(j, where, "radii"), where + ".radii");
    if (t.radii.empty()) fail(where + ".radii", "expected at least one radius");
    for (std::size_t i = 1; i < t.radii.size(); ++i)
        if (t.radii[i] <= t.radii[i - 1]) fail(where + ".radii", "radii must be strictly increasing");
    if (const json* b = opt_member(j, "center_b")) {
        t.center_b = number_array(*b, where + ".center_b");
        if (t.center_b.size() != 6) fail(where + ".center_b", "expected 6 phase-space components");
    }
    if (const json* b = opt_member(j, "orbit_radius"))
        t.orbit_radius = positive_number(*b, where + ".orbit_radius");
    if (t.t.kind != TimeSpec::Kind::absolute && t.orbit_radius <= 0.0)
        fail(where + ".t", "symbolic period times need 'orbit_radius' to define the period");
    return t;
}

} // namespace

double AngleSpec::resolve() const {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    switch (kind) {
        case Kind::radians: return radians;
        case Kind::rational_of_turn:
            return two_pi * static_cast<double>(k) / static_cast<double>(l);
        case Kind::golden: return two_pi * (std::sqrt(5.0) - 1.0) / 2.0;
    }
    return 0.0;
}

double TimeSpec::resolve(double period) const {
    switch (kind) {
        case Kind::multiple_of_period:
            return period * static_cast<double>(k) / static_cast<double>(l);
        case Kind::golden_of_period: return period * (std::sqrt(5.0) - 1.0) / 2.0;
        case Kind::absolute: return value;
    }
    return 0.0;
}

const char* Scenario::kind_name(Kind k) {
    switch (k) {
        case Kind::quantum_fixpoint: return "quantum_fixpoint";
        case Kind::classical_fixpoint: return "classical_fixpoint";
        case Kind::orbit_demo: return "orbit_demo";
        case Kind::tightness_probe: return "tightness_probe";
    }
    return "?";
}

std::string content_digest(const std::string& canonical) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

Scenario parse_scenario_text(const std::string& text) {
    const json root = json::parse(text); // propagates json::parse_error with position info

    Scenario sc;
    if (!root.is_object()) throw ValidationError("scenario: top level must be an object");
    const json& ver = member(root, "scenario", "schema_version");
    if (!ver.is_number_integer() || ver.get<int>() != kSchemaVersion)
        fail("scenario.schema_version", "expected " + std::to_string(kSchemaVersion));
    const json& name = member(root, "scenario", "name");
    if (!name.is_string() || name.get<std::string>().empty())
        fail("scenario.name", "expected a nonempty string");
    sc.name = name.get<std::string>();

    const json& kind = member(root, "scenario", "kind");
    const std::string ks = kind.is_string() ? kind.get<std::string>() : "";
    if (ks == "quantum_fixpoint") sc.kind = Scenario::Kind::quantum_fixpoint;
    else if (ks == "classical_fixpoint") sc.kind = Scenario::Kind::classical_fixpoint;
    else if (ks == "orbit_demo") sc.kind = Scenario::Kind::orbit_demo;
    else if (ks == "tightness_probe") sc.kind = Scenario::Kind::tightness_probe;
    else
        fail("scenario.kind",
             "expected 'quantum_fixpoint', 'classical_fixpoint', 'orbit_demo' or 'tightness_probe'");

    reject_unknown(root, "scenario", {"schema_version", "name", "kind", "seed", "outputs", ks});

    if (const json* s = opt_member(root, "seed")) {
        if (!s->is_number_unsigned() && !s->is_number_integer())
            fail("scenario.seed", "expected an integer");
        sc.seed = s->get<std::uint64_t>();
    }
    if (const json* o = opt_member(root, "outputs")) {
        if (!o->is_array()) fail("scenario.outputs", "expected an array of strings");
        sc.outputs.clear();
        const std::set<std::string> allowed{"report", "curve", "atoms", "trajectory"};
        for (const auto& e : *o) {
            if (!e.is_string() || !allowed.count(e.get<std::string>()))
                fail("scenario.outputs", "entries must be 'report', 'curve', 'atoms' or 'trajectory'");
            sc.outputs.push_back(e.get<std::string>());
        }
        if (sc.outputs.empty()) fail("scenario.outputs", "expected at least one output");
    }

    const json& payload = member(root, "scenario", ks);
    switch (sc.kind) {
        case Scenario::Kind::quantum_fixpoint: sc.payload = parse_quantum(payload, ks); break;
        case Scenario::Kind::classical_fixpoint: sc.payload = parse_classical(payload, ks); break;
        case Scenario::Kind::orbit_demo: sc.payload = parse_orbit(payload, ks); break;
        case Scenario::Kind::tightness_probe: sc.payload = parse_tightness(payload, ks); break;
    }

    sc.canonical_json = root.dump(); // nlohmann objects serialize key-sorted
    sc.digest = content_digest(sc.canonical_json);
    return sc;
}

Scenario parse_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str());
}

} // namespace dctc
