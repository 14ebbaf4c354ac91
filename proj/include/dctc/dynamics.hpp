#pragma once

#include "dctc/operation.hpp"

#include <array>
#include <cstddef>

namespace dctc {

// Two point masses coupled by a central potential V(r) = -alpha/sqrt(r^2+eps^2),
// optionally (lambda > 0) sitting in an external central potential
// V_ex = -beta_A/|q_A| - beta_B/|q_B| (same softening).
struct TwoBodyParams {
    double m_a = 1.0;
    double m_b = 1.0;
    double alpha = 1.0;   // pair coupling strength
    double beta_a = 0.0;  // external coupling on A
    double beta_b = 0.0;  // external coupling on B
    double lambda = 0.0;  // external potential switch/strength
    double softening = 0.0;

    void validate() const;
};

struct PhaseState {
    std::array<double, 3> q_a{};
    std::array<double, 3> p_a{};
    std::array<double, 3> q_b{};
    std::array<double, 3> p_b{};

    // Flat layout (q_a, p_a, q_b, p_b): the A factor occupies the first six
    // coordinates, matching Space::product(6, 6).
    std::array<double, 12> flat() const;
    static PhaseState from_flat(std::span<const double> x);
};

struct IntegratorConfig {
    double dt = 1e-3;
    std::size_t max_steps = 100'000'000; // per flow-map application
};

// Total energy H_lambda. Throws std::domain_error on excluded
// configurations (separation at the singularity with zero softening).
double hamiltonian(const TwoBodyParams& params, const PhaseState& s);

// One position-Verlet (leapfrog) step; symplectic and time-reversible.
// Excluded configurations encountered at the force evaluation are counted
// in *faults (when non-null) and the force is clamped at the hard floor.
PhaseState leapfrog_step(const TwoBodyParams& params, const PhaseState& s, double dt,
                         std::size_t* faults = nullptr);

// Integrate for time t (either sign) in round(|t|/dt) uniform steps.
PhaseState integrate_flow(const TwoBodyParams& params, const PhaseState& s, double t,
                          const IntegratorConfig& config, std::size_t* faults = nullptr);

// The time-t phase flow as a 12-dimensional point map. The map's
// fault_count aggregates excluded-configuration hits over every atom it is
// applied to; metadata records the parameters, t and dt.
PhaseMap flow_map(const TwoBodyParams& params, double t, const IntegratorConfig& config);

struct CircularOrbit {
    PhaseState state;
    double period = 0.0;
    double radius = 0.0;
    double speed = 0.0;
    bool mass_ratio_warning = false; // heavy-A mode with m_a < 100*m_b
};

// Circular-orbit initial data for the lambda=0 pair. heavy_a places A at
// rest at the origin with B at distance r and v = sqrt(alpha/(m_b r)),
// period 2*pi*sqrt(m_b r^3/alpha); otherwise both bodies orbit the common
// center of mass (exact circular solution for any mass ratio).
CircularOrbit circular_orbit_ic(const TwoBodyParams& params, double r, bool heavy_a);

// Exact angular model of the circular orbit: one full period maps the orbit
// phase theta to itself, so time t advances theta by 2*pi*(t/T). Keeps the
// case analysis free of integration error.
PhaseMap reduced_satellite_map(double t_over_period);

} // namespace dctc
