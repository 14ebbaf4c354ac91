#pragma once

#include "dctc/measure.hpp"

#include <atomic>
#include <memory>
#include <variant>

namespace dctc {

// Point transform on a phase space. `forward` must be pure so that atoms can
// be moved independently; `fault_count`, when set, counts excluded or
// otherwise flagged configurations encountered while transforming (shared
// with whoever built the map, e.g. a flow integrator).
struct PhaseMap {
    std::string id;
    std::size_t dim = 0;
    bool invertible = true;
    std::function<std::vector<double>(std::span<const double>)> forward;
    std::vector<std::pair<std::string, double>> metadata;
    std::shared_ptr<std::atomic<std::size_t>> fault_count;

    std::vector<double> operator()(std::span<const double> x) const { return forward(x); }
};

PhaseMap identity_map(std::size_t dim);
PhaseMap translation_map(std::vector<double> offset);

// theta -> theta + angle reduced into [0, 2*pi); one-dimensional.
PhaseMap circle_rotation(double angle);

// 2*pi*(sqrt(5)-1)/2, the canonical "very irrational" rotation angle.
double golden_angle();

// Embed a single-factor map into the product space, acting on the chosen
// factor's coordinate window and fixing the rest.
PhaseMap lift_to_factor(const PhaseMap& map, const Space& product_space, Factor which);

PhaseMap compose_maps(const PhaseMap& first, const PhaseMap& second);

// Convexity-preserving state-space map: push-forward along a phase map,
// mixing toward a fixed state, or a composition applied in sequence order.
struct OperationSpec;

struct PushforwardOp {
    PhaseMap map;
};

struct MixWithFixedOp {
    AtomicMeasure fixed;      // w0
    double mix_weight = 0.5;  // lambda in tau(w) = lambda*w0 + (1-lambda)*w
};

struct ComposeOp {
    std::vector<OperationSpec> sequence;
};

struct OperationSpec {
    std::variant<PushforwardOp, MixWithFixedOp, ComposeOp> kind;

    static OperationSpec pushforward(PhaseMap map);
    static OperationSpec mix_with_fixed(AtomicMeasure fixed, double mix_weight);
    static OperationSpec compose(std::vector<OperationSpec> sequence);
};

AtomicMeasure apply(const OperationSpec& op, const AtomicMeasure& mu,
                    std::size_t atom_cap = kDefaultAtomCap);

// [mu, tau(mu), tau^2(mu), ..., tau^n(mu)]
std::vector<AtomicMeasure> iterate(const OperationSpec& op, const AtomicMeasure& mu, std::size_t n,
                                   std::size_t atom_cap = kDefaultAtomCap);

// Max over sample pairs of the discrepancy between tau(lambda*mu+(1-lambda)*nu)
// and lambda*tau(mu)+(1-lambda)*tau(nu). Zero (to rounding) for every
// built-in kind; this is the defining property of an operation.
double convexity_check(const OperationSpec& op, std::span<const AtomicMeasure> samples,
                       double lambda, const TestFunctionDictionary& dict);

} // namespace dctc
