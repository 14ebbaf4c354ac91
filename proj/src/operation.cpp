#include "dctc/operation.hpp"

#include "dctc/errors.hpp"

#include <cmath>
#include <numbers>

namespace dctc {

PhaseMap identity_map(std::size_t dim) {
    PhaseMap m;
    m.id = "identity";
    m.dim = dim;
    m.forward = [](std::span<const double> x) { return std::vector<double>(x.begin(), x.end()); };
    return m;
}

PhaseMap translation_map(std::vector<double> offset) {
    PhaseMap m;
    m.id = "translation";
    m.dim = offset.size();
    for (std::size_t i = 0; i < offset.size(); ++i)
        m.metadata.emplace_back("offset" + std::to_string(i), offset[i]);
    m.forward = [off = std::move(offset)](std::span<const double> x) {
        std::vector<double> y(x.begin(), x.end());
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += off[i];
        return y;
    };
    return m;
}

namespace {

double wrap_angle(double theta) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    theta -= two_pi * std::floor(theta / two_pi);
    if (theta >= two_pi) theta -= two_pi; // floor rounding can land exactly on 2*pi
    if (theta < 0.0) theta += two_pi;
    return theta;
}

} // namespace

PhaseMap circle_rotation(double angle) {
    PhaseMap m;
    m.id = "circle_rotation";
    m.dim = 1;
    m.metadata.emplace_back("angle", angle);
    m.forward = [angle](std::span<const double> x) {
        return std::vector<double>{wrap_angle(x[0] + angle)};
    };
    return m;
}

double golden_angle() { return 2.0 * std::numbers::pi * (std::sqrt(5.0) - 1.0) / 2.0; }

PhaseMap lift_to_factor(const PhaseMap& map, const Space& product_space, Factor which) {
    if (!product_space.is_product()) throw std::invalid_argument("lift_to_factor needs a product space");
    if (which == Factor::full) throw std::invalid_argument("lift_to_factor: pick factor a or b");
    const std::size_t da = product_space.dim_a;
    const std::size_t db = product_space.dim_b;
    if ((which == Factor::a ? da : db) != map.dim)
        throw std::invalid_argument("lift_to_factor: factor dimension mismatch");

    PhaseMap lifted;
    lifted.id = map.id + (which == Factor::a ? "@a" : "@b");
    lifted.dim = da + db;
    lifted.invertible = map.invertible;
    lifted.metadata = map.metadata;
    lifted.fault_count = map.fault_count;
    lifted.forward = [inner = map.forward, da, db, which](std::span<const double> x) {
        std::vector<double> y(x.begin(), x.end());
        const std::size_t off = which == Factor::a ? 0 : da;
        const std::size_t len = which == Factor::a ? da : db;
        std::vector<double> part = inner(x.subspan(off, len));
        for (std::size_t i = 0; i < len; ++i) y[off + i] = part[i];
        return y;
    };
    return lifted;
}

PhaseMap compose_maps(const PhaseMap& first, const PhaseMap& second) {
    if (first.dim != second.dim) throw std::invalid_argument("compose_maps: dimension mismatch");
    PhaseMap m;
    m.id = first.id + ";" + second.id;
    m.dim = first.dim;
    m.invertible = first.invertible && second.invertible;
    m.forward = [f = first.forward, g = second.forward](std::span<const double> x) {
        return g(f(x));
    };
    return m;
}

OperationSpec OperationSpec::pushforward(PhaseMap map) { return OperationSpec{PushforwardOp{std::move(map)}}; }

OperationSpec OperationSpec::mix_with_fixed(AtomicMeasure fixed, double mix_weight) {
    if (mix_weight < 0.0 || mix_weight > 1.0)
        throw std::invalid_argument("mixing coefficient must be in [0,1]");
    return OperationSpec{MixWithFixedOp{std::move(fixed), mix_weight}};
}

OperationSpec OperationSpec::compose(std::vector<OperationSpec> sequence) {
    return OperationSpec{ComposeOp{std::move(sequence)}};
}

AtomicMeasure apply(const OperationSpec& op, const AtomicMeasure& mu, std::size_t atom_cap) {
    if (const auto* push = std::get_if<PushforwardOp>(&op.kind)) {
        if (push->map.dim != mu.space.total_dim())
            throw std::invalid_argument("pushforward: map dimension " + std::to_string(push->map.dim) +
                                        " does not match space dimension " +
                                        std::to_string(mu.space.total_dim()));
        AtomicMeasure out{mu.space, {}};
        out.atoms.reserve(mu.atoms.size());
        for (const Atom& a : mu.atoms) {
            std::vector<double> image = push->map.forward(a.point.coords);
            for (double c : image)
                if (!std::isfinite(c))
                    throw std::domain_error("pushforward produced a non-finite point (map " +
                                            push->map.id + ")");
            out.atoms.push_back(Atom{a.weight, Point{std::move(image)}});
        }
        return out;
    }
    if (const auto* mix = std::get_if<MixWithFixedOp>(&op.kind)) {
        if (!mix->fixed.space.same_shape(mu.space))
            throw std::invalid_argument("mix_with_fixed: fixed state lives on a different space");
        const double weights[2] = {mix->mix_weight, 1.0 - mix->mix_weight};
        const AtomicMeasure measures[2] = {mix->fixed, mu};
        return convex_combine(weights, measures, atom_cap);
    }
    const auto& seq = std::get<ComposeOp>(op.kind).sequence;
    AtomicMeasure cur = mu;
    for (const OperationSpec& step : seq) cur = apply(step, cur, atom_cap);
    return cur;
}

std::vector<AtomicMeasure> iterate(const OperationSpec& op, const AtomicMeasure& mu, std::size_t n,
                                   std::size_t atom_cap) {
    std::vector<AtomicMeasure> out;
    out.reserve(n + 1);
    out.push_back(mu);
    for (std::size_t k = 0; k < n; ++k) out.push_back(apply(op, out.back(), atom_cap));
    return out;
}

double convexity_check(const OperationSpec& op, std::span<const AtomicMeasure> samples,
                       double lambda, const TestFunctionDictionary& dict) {
    if (lambda < 0.0 || lambda > 1.0) throw std::invalid_argument("lambda must be in [0,1]");
    double worst = 0.0;
    const double weights[2] = {lambda, 1.0 - lambda};
    for (std::size_t i = 0; i < samples.size(); ++i) {
        for (std::size_t j = i + 1; j < samples.size(); ++j) {
            const AtomicMeasure pair_in[2] = {samples[i], samples[j]};
            const AtomicMeasure mixed_then_op = apply(op, convex_combine(weights, pair_in));
            const AtomicMeasure op_then_mixed_in[2] = {apply(op, samples[i]), apply(op, samples[j])};
            const AtomicMeasure op_then_mixed = convex_combine(weights, op_then_mixed_in);
            worst = std::max(worst, bl_discrepancy(mixed_then_op, op_then_mixed, dict));
        }
    }
    return worst;
}

} // namespace dctc
