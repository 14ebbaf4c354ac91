#include "dctc/dynamics.hpp"

#include "dctc/errors.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dctc {

namespace {

// Squared-separation floor guarding the potential singularities.
constexpr double kHardFloorSq = 1e-24;

double norm_sq(const std::array<double, 3>& v) { return v[0] * v[0] + v[1] * v[1] + v[2] * v[2]; }

std::array<double, 3> diff(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

} // namespace

void TwoBodyParams::validate() const {
    if (m_a <= 0.0 || m_b <= 0.0) throw std::invalid_argument("masses must be positive");
    if (alpha < 0.0) throw std::invalid_argument("pair coupling alpha must be nonnegative");
    if (beta_a < 0.0 || beta_b < 0.0) throw std::invalid_argument("external couplings must be nonnegative");
    if (lambda < 0.0) throw std::invalid_argument("lambda must be nonnegative");
    if (softening < 0.0) throw std::invalid_argument("softening must be nonnegative");
}

std::array<double, 12> PhaseState::flat() const {
    return {q_a[0], q_a[1], q_a[2], p_a[0], p_a[1], p_a[2],
            q_b[0], q_b[1], q_b[2], p_b[0], p_b[1], p_b[2]};
}

PhaseState PhaseState::from_flat(std::span<const double> x) {
    if (x.size() != 12) throw std::invalid_argument("phase state needs 12 coordinates");
    PhaseState s;
    for (int k = 0; k < 3; ++k) {
        s.q_a[k] = x[k];
        s.p_a[k] = x[3 + k];
        s.q_b[k] = x[6 + k];
        s.p_b[k] = x[9 + k];
    }
    return s;
}

double hamiltonian(const TwoBodyParams& params, const PhaseState& s) {
    params.validate();
    const double eps2 = params.softening * params.softening;

    const double sep2 = norm_sq(diff(s.q_a, s.q_b)) + eps2;
    if (sep2 < kHardFloorSq) throw std::domain_error("excluded configuration: bodies coincide");

    double e = norm_sq(s.p_a) / (2.0 * params.m_a) + norm_sq(s.p_b) / (2.0 * params.m_b);
    e -= params.alpha / std::sqrt(sep2);
    if (params.lambda != 0.0) {
        const double ra2 = norm_sq(s.q_a) + eps2;
        const double rb2 = norm_sq(s.q_b) + eps2;
        if (ra2 < kHardFloorSq || rb2 < kHardFloorSq)
            throw std::domain_error("excluded configuration: body at the external center");
        e += params.lambda * (-params.beta_a / std::sqrt(ra2) - params.beta_b / std::sqrt(rb2));
    }
    return e;
}

namespace {

void accumulate_forces(const TwoBodyParams& params, const PhaseState& s, std::array<double, 3>& f_a,
                       std::array<double, 3>& f_b, std::size_t* faults) {
    const double eps2 = params.softening * params.softening;
    const auto rel = diff(s.q_a, s.q_b);
    double sep2 = norm_sq(rel) + eps2;
    if (sep2 < kHardFloorSq) {
        if (faults) ++*faults;
        sep2 = kHardFloorSq;
    }
    const double inv3 = 1.0 / (sep2 * std::sqrt(sep2));
    for (int k = 0; k < 3; ++k) {
        const double f = -params.alpha * rel[k] * inv3;
        f_a[k] = f;
        f_b[k] = -f;
    }
    if (params.lambda != 0.0) {
        double ra2 = norm_sq(s.q_a) + eps2;
        double rb2 = norm_sq(s.q_b) + eps2;
        if (ra2 < kHardFloorSq) {
            if (faults) ++*faults;
            ra2 = kHardFloorSq;
        }
        if (rb2 < kHardFloorSq) {
            if (faults) ++*faults;
            rb2 = kHardFloorSq;
        }
        const double ia3 = 1.0 / (ra2 * std::sqrt(ra2));
        const double ib3 = 1.0 / (rb2 * std::sqrt(rb2));
        for (int k = 0; k < 3; ++k) {
            f_a[k] -= params.lambda * params.beta_a * s.q_a[k] * ia3;
            f_b[k] -= params.lambda * params.beta_b * s.q_b[k] * ib3;
        }
    }
}

} // namespace

PhaseState leapfrog_step(const TwoBodyParams& params, const PhaseState& s, double dt,
                         std::size_t* faults) {
    PhaseState out = s;
    const double ha = 0.5 * dt / params.m_a;
    const double hb = 0.5 * dt / params.m_b;
    for (int k = 0; k < 3; ++k) {
        out.q_a[k] += ha * out.p_a[k];
        out.q_b[k] += hb * out.p_b[k];
    }
    std::array<double, 3> f_a, f_b;
    accumulate_forces(params, out, f_a, f_b, faults);
    for (int k = 0; k < 3; ++k) {
        out.p_a[k] += dt * f_a[k];
        out.p_b[k] += dt * f_b[k];
    }
    for (int k = 0; k < 3; ++k) {
        out.q_a[k] += ha * out.p_a[k];
        out.q_b[k] += hb * out.p_b[k];
    }
    return out;
}

PhaseState integrate_flow(const TwoBodyParams& params, const PhaseState& s, double t,
                          const IntegratorConfig& config, std::size_t* faults) {
    params.validate();
    if (config.dt <= 0.0) throw std::invalid_argument("integrator dt must be positive");
    if (t == 0.0) return s;
    const double steps_real = std::round(std::fabs(t) / config.dt);
    if (steps_real < 1.0) throw std::invalid_argument("time step dt larger than requested time t");
    if (steps_real > static_cast<double>(config.max_steps))
        throw ResourceLimitError("flow would need " + std::to_string(steps_real) +
                                 " steps, budget is " + std::to_string(config.max_steps));
    const auto steps = static_cast<std::size_t>(steps_real);
    const double dt = t / steps_real; // signed; covers t exactly
    PhaseState cur = s;
    for (std::size_t i = 0; i < steps; ++i) cur = leapfrog_step(params, cur, dt, faults);
    return cur;
}

PhaseMap flow_map(const TwoBodyParams& params, double t, const IntegratorConfig& config) {
    params.validate();
    PhaseMap m;
    m.id = "two_body_flow";
    m.dim = 12;
    m.metadata = {{"m_a", params.m_a},     {"m_b", params.m_b},   {"alpha", params.alpha},
                  {"beta_a", params.beta_a}, {"beta_b", params.beta_b}, {"lambda", params.lambda},
                  {"softening", params.softening}, {"t", t},      {"dt", config.dt}};
    m.fault_count = std::make_shared<std::atomic<std::size_t>>(0);
    m.forward = [params, t, config, counter = m.fault_count](std::span<const double> x) {
        std::size_t faults = 0;
        const PhaseState out = integrate_flow(params, PhaseState::from_flat(x), t, config, &faults);
        if (faults) counter->fetch_add(faults, std::memory_order_relaxed);
        const auto flat = out.flat();
        return std::vector<double>(flat.begin(), flat.end());
    };
    return m;
}

CircularOrbit circular_orbit_ic(const TwoBodyParams& params, double r, bool heavy_a) {
    params.validate();
    if (params.alpha <= 0.0) throw std::invalid_argument("circular orbit needs alpha > 0");
    if (r <= 0.0) throw std::invalid_argument("orbit radius must be positive");

    CircularOrbit orbit;
    orbit.radius = r;
    if (heavy_a) {
        orbit.mass_ratio_warning = params.m_a < 100.0 * params.m_b;
        orbit.speed = std::sqrt(params.alpha / (params.m_b * r));
        orbit.period = 2.0 * std::numbers::pi * std::sqrt(params.m_b * r * r * r / params.alpha);
        orbit.state.q_b = {r, 0.0, 0.0};
        orbit.state.p_b = {0.0, params.m_b * orbit.speed, 0.0};
    } else {
        const double mu = params.m_a * params.m_b / (params.m_a + params.m_b);
        const double omega = std::sqrt(params.alpha / (mu * r * r * r));
        orbit.speed = omega * r; // relative speed
        orbit.period = 2.0 * std::numbers::pi / omega;
        const double frac_a = params.m_b / (params.m_a + params.m_b);
        const double frac_b = params.m_a / (params.m_a + params.m_b);
        orbit.state.q_a = {-frac_a * r, 0.0, 0.0};
        orbit.state.q_b = {frac_b * r, 0.0, 0.0};
        const double p = mu * omega * r;
        orbit.state.p_a = {0.0, -p, 0.0};
        orbit.state.p_b = {0.0, p, 0.0};
    }
    return orbit;
}

PhaseMap reduced_satellite_map(double t_over_period) {
    // Whole orbits are the identity; rotating by the fractional turn keeps
    // integer multiples of the period exact.
    const double turns = t_over_period - std::floor(t_over_period);
    PhaseMap m = circle_rotation(2.0 * std::numbers::pi * turns);
    m.id = "reduced_satellite";
    m.metadata.emplace_back("t_over_period", t_over_period);
    return m;
}

} // namespace dctc
