#include "dctc/measure.hpp"

#include "dctc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>

namespace dctc {

namespace {

// Neumaier-compensated accumulator; weight bookkeeping across 1e4+ atoms
// must stay well inside the 1e-12 normalization budget.
struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;
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

bool finite_point(const Point& p) {
    for (double c : p.coords)
        if (!std::isfinite(c)) return false;
    return true;
}

double sq_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

} // namespace

Space Space::product(std::size_t da, std::size_t db, std::string label) {
    if (da == 0 || db == 0) throw std::invalid_argument("product space needs positive factor dims");
    return Space{Kind::product, da, db, std::move(label)};
}

Space Space::factor(Factor which, std::size_t dim, std::string label) {
    if (dim == 0) throw std::invalid_argument("factor space needs positive dim");
    if (which == Factor::a) return Space{Kind::factor_a, dim, 0, std::move(label)};
    if (which == Factor::b) return Space{Kind::factor_b, 0, dim, std::move(label)};
    throw std::invalid_argument("factor space must be a or b");
}

std::size_t Space::total_dim() const {
    switch (kind) {
        case Kind::product: return dim_a + dim_b;
        case Kind::factor_a: return dim_a;
        case Kind::factor_b: return dim_b;
    }
    return 0;
}

bool Space::same_shape(const Space& other) const {
    return kind == other.kind && dim_a == other.dim_a && dim_b == other.dim_b;
}

std::vector<std::string> TestFunctionDictionary::ids() const {
    std::vector<std::string> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back(e.id);
    return out;
}

AtomicMeasure make_measure(Space space, std::vector<Atom> atoms) {
    if (atoms.empty()) throw ValidationError("measure needs at least one atom");
    KahanSum total;
    for (const Atom& a : atoms) {
        if (a.weight < 0.0 || !std::isfinite(a.weight))
            throw ValidationError("atom weight must be finite and nonnegative");
        if (a.point.dim() != space.total_dim())
            throw ValidationError("atom dimension does not match space");
        if (!finite_point(a.point)) throw ValidationError("atom has non-finite coordinate");
        total.add(a.weight);
    }
    const double sum = total.value();
    if (std::fabs(sum - 1.0) > kWeightTolerance)
        throw ValidationError("atom weights sum to " + std::to_string(sum) + ", expected 1");
    if (sum != 1.0)
        for (Atom& a : atoms) a.weight /= sum;
    return AtomicMeasure{std::move(space), std::move(atoms)};
}

AtomicMeasure dirac(Point point, Space space) {
    if (point.dim() != space.total_dim()) throw ValidationError("dirac: point/space dimension mismatch");
    if (!finite_point(point)) throw ValidationError("dirac: non-finite point");
    return AtomicMeasure{std::move(space), {Atom{1.0, std::move(point)}}};
}

AtomicMeasure product_measure(const AtomicMeasure& mu_a, const AtomicMeasure& mu_b,
                              std::size_t atom_cap) {
    if (mu_a.space.kind != Space::Kind::factor_a || mu_b.space.kind != Space::Kind::factor_b)
        throw std::invalid_argument("product_measure expects an A-factor and a B-factor measure");
    const std::size_t count = mu_a.atoms.size() * mu_b.atoms.size();
    if (count > atom_cap)
        throw ResourceLimitError("product measure would have " + std::to_string(count) +
                                 " atoms, cap is " + std::to_string(atom_cap));

    Space space = Space::product(mu_a.space.dim_a, mu_b.space.dim_b,
                                 mu_a.space.label.empty() ? mu_b.space.label : mu_a.space.label);
    AtomicMeasure out{std::move(space), {}};
    out.atoms.reserve(count);
    for (const Atom& a : mu_a.atoms)
        for (const Atom& b : mu_b.atoms) {
            Point p;
            p.coords.reserve(a.point.dim() + b.point.dim());
            p.coords.insert(p.coords.end(), a.point.coords.begin(), a.point.coords.end());
            p.coords.insert(p.coords.end(), b.point.coords.begin(), b.point.coords.end());
            out.atoms.push_back(Atom{a.weight * b.weight, std::move(p)});
        }
    return out;
}

namespace {

AtomicMeasure project(const AtomicMeasure& mu, Factor which) {
    if (!mu.space.is_product())
        throw std::invalid_argument("marginal of a measure that is not on a product space");
    const std::size_t da = mu.space.dim_a;
    const std::size_t db = mu.space.dim_b;
    Space target = Space::factor(which, which == Factor::a ? da : db, mu.space.label);

    // Group projected atoms by exact coordinates, weights compensated.
    struct Slot {
        Point point;
        KahanSum weight;
    };
    std::vector<Slot> slots;
    std::unordered_map<std::string, std::size_t> index;
    for (const Atom& atom : mu.atoms) {
        const double* begin = which == Factor::a ? atom.point.coords.data()
                                                 : atom.point.coords.data() + da;
        const std::size_t n = which == Factor::a ? da : db;
        std::string key(reinterpret_cast<const char*>(begin), n * sizeof(double));
        auto [it, inserted] = index.try_emplace(key, slots.size());
        if (inserted) slots.push_back(Slot{Point{{begin, begin + n}}, {}});
        slots[it->second].weight.add(atom.weight);
    }
    AtomicMeasure out{std::move(target), {}};
    out.atoms.reserve(slots.size());
    for (Slot& s : slots) out.atoms.push_back(Atom{s.weight.value(), std::move(s.point)});
    return out;
}

} // namespace

AtomicMeasure marginal_a(const AtomicMeasure& mu) { return project(mu, Factor::a); }
AtomicMeasure marginal_b(const AtomicMeasure& mu) { return project(mu, Factor::b); }

namespace {

// Coordinate window a test function of the given factor reads on this space.
std::span<const double> factor_window(const Space& space, const Point& p, Factor f) {
    switch (space.kind) {
        case Space::Kind::product:
            if (f == Factor::a) return {p.coords.data(), space.dim_a};
            if (f == Factor::b) return {p.coords.data() + space.dim_a, space.dim_b};
            return {p.coords.data(), p.coords.size()};
        case Space::Kind::factor_a:
            if (f == Factor::b) throw std::invalid_argument("B test function on an A-factor measure");
            return {p.coords.data(), p.coords.size()};
        case Space::Kind::factor_b:
            if (f == Factor::a) throw std::invalid_argument("A test function on a B-factor measure");
            return {p.coords.data(), p.coords.size()};
    }
    return {};
}

std::size_t window_dim(const Space& space, Factor f) {
    switch (space.kind) {
        case Space::Kind::product:
            return f == Factor::a ? space.dim_a : f == Factor::b ? space.dim_b : space.total_dim();
        case Space::Kind::factor_a: return space.dim_a;
        case Space::Kind::factor_b: return space.dim_b;
    }
    return 0;
}

bool applicable(const Space& space, const TestFunction& f) {
    if (space.kind == Space::Kind::factor_a && f.factor == Factor::b) return false;
    if (space.kind == Space::Kind::factor_b && f.factor == Factor::a) return false;
    return f.arity <= window_dim(space, f.factor);
}

} // namespace

double integrate(const AtomicMeasure& mu, const TestFunction& f) {
    if (!f.eval) throw std::invalid_argument("test function has no evaluator");
    if (f.arity > window_dim(mu.space, f.factor))
        throw std::invalid_argument("test function " + f.id + " reads more coordinates than the space has");
    KahanSum s;
    for (const Atom& a : mu.atoms) s.add(a.weight * f.eval(factor_window(mu.space, a.point, f.factor)));
    return s.value();
}

AtomicMeasure convex_combine(std::span<const double> weights,
                             std::span<const AtomicMeasure> measures, std::size_t atom_cap) {
    if (weights.size() != measures.size() || measures.empty())
        throw std::invalid_argument("convex_combine: weights and measures must match and be nonempty");
    KahanSum wsum;
    std::size_t count = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] < 0.0) throw std::invalid_argument("convex_combine: negative weight");
        if (!measures[i].space.same_shape(measures[0].space))
            throw std::invalid_argument("convex_combine: measures on different spaces");
        wsum.add(weights[i]);
        count += measures[i].atoms.size();
    }
    if (std::fabs(wsum.value() - 1.0) > kWeightTolerance)
        throw std::invalid_argument("convex_combine: weights sum to " + std::to_string(wsum.value()));
    if (count > atom_cap)
        throw ResourceLimitError("convex combination would have " + std::to_string(count) + " atoms");

    AtomicMeasure out{measures[0].space, {}};
    out.atoms.reserve(count);
    for (std::size_t i = 0; i < measures.size(); ++i)
        for (const Atom& a : measures[i].atoms)
            out.atoms.push_back(Atom{weights[i] * a.weight, a.point});
    return merge_atoms(out, 0.0);
}

AtomicMeasure merge_atoms(const AtomicMeasure& mu, double radius) {
    if (radius < 0.0) throw std::invalid_argument("merge radius must be nonnegative");

    AtomicMeasure out{mu.space, {}};
    if (radius == 0.0) {
        // Exact-duplicate merge keyed on coordinate bit patterns.
        struct Slot {
            Point point;
            KahanSum weight;
        };
        std::vector<Slot> slots;
        std::unordered_map<std::string, std::size_t> index;
        for (const Atom& a : mu.atoms) {
            if (a.weight == 0.0) continue;
            std::string key(reinterpret_cast<const char*>(a.point.coords.data()),
                            a.point.coords.size() * sizeof(double));
            auto [it, inserted] = index.try_emplace(key, slots.size());
            if (inserted) slots.push_back(Slot{a.point, {}});
            slots[it->second].weight.add(a.weight);
        }
        out.atoms.reserve(slots.size());
        for (Slot& s : slots) out.atoms.push_back(Atom{s.weight.value(), std::move(s.point)});
        return out;
    }

    const std::size_t dim = mu.space.total_dim();
    const std::size_t n = mu.atoms.size();
    const double r2 = radius * radius;

    // High-dimensional spaces: the 3^dim cell neighbourhood is larger than
    // a direct scan, so cluster quadratically.
    if (dim > 4) {
        std::vector<bool> used(n, false);
        for (std::size_t i = 0; i < n; ++i) {
            if (used[i] || mu.atoms[i].weight == 0.0) continue;
            used[i] = true;
            KahanSum weight;
            weight.add(mu.atoms[i].weight);
            std::vector<KahanSum> centroid(dim);
            for (std::size_t k = 0; k < dim; ++k)
                centroid[k].add(mu.atoms[i].weight * mu.atoms[i].point.coords[k]);
            for (std::size_t j = i + 1; j < n; ++j) {
                if (used[j] || mu.atoms[j].weight == 0.0) continue;
                if (sq_distance(mu.atoms[i].point.coords, mu.atoms[j].point.coords) <= r2) {
                    used[j] = true;
                    weight.add(mu.atoms[j].weight);
                    for (std::size_t k = 0; k < dim; ++k)
                        centroid[k].add(mu.atoms[j].weight * mu.atoms[j].point.coords[k]);
                }
            }
            const double w = weight.value();
            Point merged;
            merged.coords.resize(dim);
            for (std::size_t k = 0; k < dim; ++k) merged.coords[k] = centroid[k].value() / w;
            out.atoms.push_back(Atom{w, std::move(merged)});
        }
        return out;
    }

    // Greedy clustering accelerated by a cell grid of pitch `radius`:
    // candidate neighbours can only live in adjacent cells.
    std::unordered_map<std::string, std::vector<std::size_t>> grid;
    auto cell_key = [&](std::span<const double> x, std::vector<std::int64_t>& cell) {
        cell.resize(dim);
        for (std::size_t k = 0; k < dim; ++k)
            cell[k] = static_cast<std::int64_t>(std::floor(x[k] / radius));
        return std::string(reinterpret_cast<const char*>(cell.data()), dim * sizeof(std::int64_t));
    };
    std::vector<std::int64_t> cell;
    for (std::size_t i = 0; i < n; ++i)
        grid[cell_key(mu.atoms[i].point.coords, cell)].push_back(i);

    std::vector<bool> used(n, false);
    std::vector<std::int64_t> neighbor(dim);
    for (std::size_t i = 0; i < n; ++i) {
        if (used[i] || mu.atoms[i].weight == 0.0) continue;
        used[i] = true;
        const Point& anchor = mu.atoms[i].point;
        KahanSum weight;
        weight.add(mu.atoms[i].weight);
        std::vector<KahanSum> centroid(dim);
        for (std::size_t k = 0; k < dim; ++k) centroid[k].add(mu.atoms[i].weight * anchor.coords[k]);

        cell_key(anchor.coords, cell);
        // Enumerate the 3^dim neighbourhood of the anchor cell.
        std::vector<int> offs(dim, -1);
        while (true) {
            for (std::size_t k = 0; k < dim; ++k) neighbor[k] = cell[k] + offs[k];
            auto it = grid.find(std::string(reinterpret_cast<const char*>(neighbor.data()),
                                            dim * sizeof(std::int64_t)));
            if (it != grid.end()) {
                for (std::size_t j : it->second) {
                    if (used[j] || mu.atoms[j].weight == 0.0) continue;
                    if (sq_distance(anchor.coords, mu.atoms[j].point.coords) <= r2) {
                        used[j] = true;
                        weight.add(mu.atoms[j].weight);
                        for (std::size_t k = 0; k < dim; ++k)
                            centroid[k].add(mu.atoms[j].weight * mu.atoms[j].point.coords[k]);
                    }
                }
            }
            std::size_t k = 0;
            while (k < dim && offs[k] == 1) offs[k++] = -1;
            if (k == dim) break;
            ++offs[k];
        }

        const double w = weight.value();
        Point merged;
        merged.coords.resize(dim);
        for (std::size_t k = 0; k < dim; ++k) merged.coords[k] = centroid[k].value() / w;
        out.atoms.push_back(Atom{w, std::move(merged)});
    }
    return out;
}

double bl_discrepancy(const AtomicMeasure& mu, const AtomicMeasure& nu,
                      const TestFunctionDictionary& dict) {
    if (!mu.space.same_shape(nu.space)) throw std::invalid_argument("bl_discrepancy: space mismatch");
    if (dict.empty()) throw std::invalid_argument("bl_discrepancy: empty dictionary");
    double worst = 0.0;
    bool any = false;
    for (const TestFunction& f : dict.entries) {
        if (!applicable(mu.space, f)) continue;
        if (f.bound <= 0.0) throw std::invalid_argument("test function bound must be positive");
        any = true;
        worst = std::max(worst, std::fabs(integrate(mu, f) - integrate(nu, f)) / f.bound);
    }
    if (!any) throw std::invalid_argument("bl_discrepancy: no dictionary entry applies to the space");
    return worst;
}

void spot_check_bounds(const TestFunctionDictionary& dict, const AtomicMeasure& mu) {
    for (const TestFunction& f : dict.entries) {
        if (!applicable(mu.space, f)) continue;
        for (const Atom& a : mu.atoms) {
            const double v = f.eval(factor_window(mu.space, a.point, f.factor));
            if (!(std::fabs(v) <= f.bound))
                throw std::invalid_argument("test function " + f.id + " exceeds its bound " +
                                            std::to_string(f.bound) + " at an atom (value " +
                                            std::to_string(v) + ")");
        }
    }
}

double TightnessProfile::sup_outside(std::size_t radius_index) const {
    double sup = 0.0;
    for (const auto& row : outside_mass) sup = std::max(sup, row[radius_index]);
    return sup;
}

TightnessProfile tightness_profile(std::span<const AtomicMeasure> measures,
                                   std::span<const double> radii, const Point& center) {
    if (measures.empty()) throw std::invalid_argument("tightness_profile: no measures");
    for (std::size_t r = 1; r < radii.size(); ++r)
        if (radii[r] <= radii[r - 1])
            throw std::invalid_argument("tightness_profile: radii must be strictly increasing");
    for (const auto& m : measures)
        if (!m.space.same_shape(measures[0].space))
            throw std::invalid_argument("tightness_profile: measures on different spaces");
    if (center.dim() != measures[0].space.total_dim())
        throw std::invalid_argument("tightness_profile: center dimension mismatch");

    TightnessProfile prof;
    prof.center = center;
    prof.radii.assign(radii.begin(), radii.end());
    prof.outside_mass.reserve(measures.size());
    for (const auto& m : measures) {
        std::vector<double> row(radii.size(), 0.0);
        for (std::size_t r = 0; r < radii.size(); ++r) {
            KahanSum outside;
            const double r2 = radii[r] * radii[r];
            for (const Atom& a : m.atoms)
                if (sq_distance(a.point.coords, center.coords) > r2) outside.add(a.weight);
            row[r] = outside.value();
        }
        prof.outside_mass.push_back(std::move(row));
    }
    return prof;
}

TestFunction clamp_coordinate(Factor factor, std::size_t coord, double lo, double hi) {
    if (!(lo < hi)) throw std::invalid_argument("clamp needs lo < hi");
    const double bound = std::max(std::fabs(lo), std::fabs(hi));
    if (bound <= 0.0) throw std::invalid_argument("clamp bound must be positive");
    std::string fac = factor == Factor::a ? "a" : factor == Factor::b ? "b" : "x";
    TestFunction f;
    f.id = "clamp:" + fac + std::to_string(coord) + "[" + std::to_string(lo) + "," + std::to_string(hi) + "]";
    f.bound = bound;
    f.factor = factor;
    f.arity = coord + 1;
    f.eval = [coord, lo, hi](std::span<const double> x) {
        return std::clamp(x[coord], lo, hi);
    };
    return f;
}

TestFunction gaussian_bump(Factor factor, Point center, double width) {
    if (width <= 0.0) throw std::invalid_argument("gaussian width must be positive");
    std::string fac = factor == Factor::a ? "a" : factor == Factor::b ? "b" : "x";
    std::string id = "gauss:" + fac + "(";
    for (std::size_t i = 0; i < center.dim(); ++i)
        id += (i ? "," : "") + std::to_string(center.coords[i]);
    id += ")w" + std::to_string(width);
    TestFunction f;
    f.id = std::move(id);
    f.bound = 1.0;
    f.factor = factor;
    f.arity = center.dim();
    f.eval = [c = std::move(center), inv2w2 = 1.0 / (2.0 * width * width)](std::span<const double> x) {
        double s = 0.0;
        for (std::size_t i = 0; i < c.dim(); ++i) {
            const double d = x[i] - c.coords[i];
            s += d * d;
        }
        return std::exp(-s * inv2w2);
    };
    return f;
}

TestFunction fourier_cos(Factor factor, std::size_t coord, unsigned harmonic) {
    std::string fac = factor == Factor::a ? "a" : factor == Factor::b ? "b" : "x";
    TestFunction f;
    f.id = "cos:" + fac + std::to_string(coord) + "*" + std::to_string(harmonic);
    f.bound = 1.0;
    f.factor = factor;
    f.arity = coord + 1;
    f.eval = [coord, m = static_cast<double>(harmonic)](std::span<const double> x) {
        return std::cos(m * x[coord]);
    };
    return f;
}

TestFunction fourier_sin(Factor factor, std::size_t coord, unsigned harmonic) {
    std::string fac = factor == Factor::a ? "a" : factor == Factor::b ? "b" : "x";
    TestFunction f;
    f.id = "sin:" + fac + std::to_string(coord) + "*" + std::to_string(harmonic);
    f.bound = 1.0;
    f.factor = factor;
    f.arity = coord + 1;
    f.eval = [coord, m = static_cast<double>(harmonic)](std::span<const double> x) {
        return std::sin(m * x[coord]);
    };
    return f;
}

TestFunctionDictionary default_dictionary(const Space& space, std::span<const Point> anchors) {
    TestFunctionDictionary dict;
    auto add_clamps = [&](Factor f, std::size_t dim) {
        for (std::size_t c = 0; c < dim; ++c) dict.entries.push_back(clamp_coordinate(f, c, -1.0, 1.0));
    };
    switch (space.kind) {
        case Space::Kind::product:
            add_clamps(Factor::a, space.dim_a);
            add_clamps(Factor::b, space.dim_b);
            break;
        case Space::Kind::factor_a: add_clamps(Factor::a, space.dim_a); break;
        case Space::Kind::factor_b: add_clamps(Factor::b, space.dim_b); break;
    }
    for (const Point& p : anchors) {
        if (p.dim() != space.total_dim()) throw std::invalid_argument("anchor dimension mismatch");
        dict.entries.push_back(gaussian_bump(Factor::full, p, 1.0));
    }
    return dict;
}

} // namespace dctc
