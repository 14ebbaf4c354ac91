#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dctc {

constexpr double kWeightTolerance = 1e-9;  // accepted deviation of input weight sums
constexpr std::size_t kDefaultAtomCap = 1'000'000;

struct Point {
    std::vector<double> coords;
    std::size_t dim() const { return coords.size(); }
};

enum class Factor { a, b, full };

// Either the product space X_A x X_B or one of its factors.
struct Space {
    enum class Kind { product, factor_a, factor_b } kind = Kind::product;
    std::size_t dim_a = 0;
    std::size_t dim_b = 0;
    std::string label;

    static Space product(std::size_t da, std::size_t db, std::string label = "");
    static Space factor(Factor which, std::size_t dim, std::string label = "");

    std::size_t total_dim() const;
    bool is_product() const { return kind == Kind::product; }
    // Spaces are interchangeable when shape matches; labels are cosmetic.
    bool same_shape(const Space& other) const;
};

struct Atom {
    double weight = 0.0;
    Point point;
};

// Finitely supported probability measure: the concrete state-space element.
// All operations below preserve normalization.
struct AtomicMeasure {
    Space space;
    std::vector<Atom> atoms;
};

// Bounded test function reading one factor (or the whole space); the
// declared bound is the sup-norm certificate used in the Cesaro estimate.
// `arity` is the number of leading window coordinates the evaluator reads;
// an entry is skipped on spaces whose matching window is narrower.
struct TestFunction {
    std::string id;
    double bound = 1.0;
    Factor factor = Factor::full;
    std::size_t arity = 0;
    std::function<double(std::span<const double>)> eval;
};

struct TestFunctionDictionary {
    std::vector<TestFunction> entries;
    bool empty() const { return entries.empty(); }
    std::vector<std::string> ids() const;
};

// ---- constructors ----

// Validates weights (>= 0, sum 1 within kWeightTolerance), dimensions and
// finiteness, then rescales so the weight sum is exactly normalized.
AtomicMeasure make_measure(Space space, std::vector<Atom> atoms);

AtomicMeasure dirac(Point point, Space space);

// ---- operations ----

AtomicMeasure product_measure(const AtomicMeasure& mu_a, const AtomicMeasure& mu_b,
                              std::size_t atom_cap = kDefaultAtomCap);

AtomicMeasure marginal_a(const AtomicMeasure& mu);
AtomicMeasure marginal_b(const AtomicMeasure& mu);

// sum_i w_i f(x_i), with the evaluator reading the coordinate window that
// matches f's factor. Compensated summation keeps the error at O(eps).
double integrate(const AtomicMeasure& mu, const TestFunction& f);

AtomicMeasure convex_combine(std::span<const double> weights,
                             std::span<const AtomicMeasure> measures,
                             std::size_t atom_cap = kDefaultAtomCap);

// Atoms within Euclidean distance `radius` of a cluster anchor are merged
// into one atom at the weight-averaged location. radius 0 merges exact
// duplicates only. Total weight is preserved.
AtomicMeasure merge_atoms(const AtomicMeasure& mu, double radius);

// max over applicable dictionary entries of |mu(f) - nu(f)| / bound(f)
double bl_discrepancy(const AtomicMeasure& mu, const AtomicMeasure& nu,
                      const TestFunctionDictionary& dict);

// Spot check of the declared sup-norm certificates on a concrete atom set;
// throws when some |f(x)| exceeds its bound.
void spot_check_bounds(const TestFunctionDictionary& dict, const AtomicMeasure& mu);

struct TightnessProfile {
    Point center;
    std::vector<double> radii;
    // outside_mass[n][r]: weight outside the ball of radii[r] around center
    // for the n-th measure of the sequence.
    std::vector<std::vector<double>> outside_mass;

    double sup_outside(std::size_t radius_index) const;
};

TightnessProfile tightness_profile(std::span<const AtomicMeasure> measures,
                                   std::span<const double> radii, const Point& center);

// ---- dictionary builders ----

TestFunction clamp_coordinate(Factor factor, std::size_t coord, double lo, double hi);
TestFunction gaussian_bump(Factor factor, Point center, double width);
TestFunction fourier_cos(Factor factor, std::size_t coord, unsigned harmonic);
TestFunction fourier_sin(Factor factor, std::size_t coord, unsigned harmonic);

// Clamps on every coordinate of both factors plus Gaussian bumps at the
// anchor points: the discrepancy dictionary used when a scenario does not
// declare its own.
TestFunctionDictionary default_dictionary(const Space& space, std::span<const Point> anchors);

} // namespace dctc
