#include "dctc/quantum.hpp"

#include "dctc/errors.hpp"

#include <doctest.h>

#include <cmath>

using namespace dctc;

namespace {

const BipartiteDims kQubits{2, 2};

DensityMatrix bell_state() {
    // |Phi+><Phi+| with |Phi+> = (|00> + |11>)/sqrt(2)
    ComplexMatrix m(4, 4);
    m(0, 0) = 0.5;
    m(0, 3) = 0.5;
    m(3, 0) = 0.5;
    m(3, 3) = 0.5;
    return DensityMatrix(std::move(m));
}

ComplexMatrix pauli_x() {
    ComplexMatrix x(2, 2);
    x(0, 1) = 1.0;
    x(1, 0) = 1.0;
    return x;
}

} // namespace

TEST_CASE("density matrix validation") {
    CHECK_NOTHROW(DensityMatrix::maximally_mixed(3));
    CHECK_NOTHROW(DensityMatrix::diagonal({0.3, 0.7}));

    ComplexMatrix bad_trace(2, 2);
    bad_trace(0, 0) = 0.9;
    CHECK_THROWS_AS(DensityMatrix{bad_trace}, std::invalid_argument);

    ComplexMatrix not_herm(2, 2);
    not_herm(0, 0) = 0.5;
    not_herm(1, 1) = 0.5;
    not_herm(0, 1) = Complex{0, 0.3};
    not_herm(1, 0) = Complex{0, 0.3};
    CHECK_THROWS_AS(DensityMatrix{not_herm}, std::invalid_argument);

    ComplexMatrix not_psd(2, 2);
    not_psd(0, 0) = 1.5;
    not_psd(1, 1) = -0.5;
    CHECK_THROWS_AS(DensityMatrix{not_psd}, std::invalid_argument);

    ComplexMatrix with_nan(2, 2);
    with_nan(0, 0) = 0.5;
    with_nan(1, 1) = 0.5;
    with_nan(0, 1) = Complex{std::nan(""), 0.0};
    with_nan(1, 0) = Complex{std::nan(""), 0.0};
    CHECK_THROWS_AS(DensityMatrix{with_nan}, std::invalid_argument);
    CHECK_THROWS_AS(UnitaryMatrix{with_nan}, std::invalid_argument);
}

TEST_CASE("tensor products") {
    const DensityMatrix i2 = DensityMatrix::maximally_mixed(2);
    const DensityMatrix q = tensor_product(i2, i2, 64);
    CHECK(max_abs_diff(q.matrix(), 0.25 * ComplexMatrix::identity(4)) == 0.0);

    const DensityMatrix ket0 = DensityMatrix::basis_state(2, 0);
    const DensityMatrix ket1 = DensityMatrix::basis_state(2, 1);
    const DensityMatrix r01 = tensor_product(ket0, ket1);
    CHECK(r01.matrix()(1, 1).real() == 1.0); // |01><01|

    const DensityMatrix d = tensor_product(DensityMatrix::diagonal({0.3, 0.7}),
                                           DensityMatrix::diagonal({0.6, 0.4}));
    CHECK(d.matrix()(0, 0).real() == doctest::Approx(0.18).epsilon(1e-15));
    CHECK(d.matrix()(1, 1).real() == doctest::Approx(0.12).epsilon(1e-15));
    CHECK(d.matrix()(2, 2).real() == doctest::Approx(0.42).epsilon(1e-15));
    CHECK(d.matrix()(3, 3).real() == doctest::Approx(0.28).epsilon(1e-15));

    CHECK_THROWS_AS(tensor_product(DensityMatrix::maximally_mixed(8),
                                   DensityMatrix::maximally_mixed(16), 64),
                    ResourceLimitError);
}

TEST_CASE("partial traces recover product factors") {
    const DensityMatrix a = DensityMatrix::diagonal({0.3, 0.7});
    const DensityMatrix b = random_density_matrix(2, 42);
    const DensityMatrix joint = tensor_product(a, b);
    CHECK(max_abs_diff(partial_trace_a(joint, kQubits).matrix(), b.matrix()) < 1e-12);
    CHECK(max_abs_diff(partial_trace_b(joint, kQubits).matrix(), a.matrix()) < 1e-12);
}

TEST_CASE("partial traces of the Bell state are maximally mixed") {
    // Hand contraction of the 4x4: both marginals are I/2.
    const DensityMatrix bell = bell_state();
    const ComplexMatrix half = 0.5 * ComplexMatrix::identity(2);
    CHECK(max_abs_diff(partial_trace_a(bell, kQubits).matrix(), half) == 0.0);
    CHECK(max_abs_diff(partial_trace_b(bell, kQubits).matrix(), half) == 0.0);
}

TEST_CASE("partial trace sums diagonal blocks") {
    // tr_B diag(0.18,0.12,0.42,0.28) = diag(0.30, 0.70)
    ComplexMatrix m(4, 4);
    m(0, 0) = 0.18;
    m(1, 1) = 0.12;
    m(2, 2) = 0.42;
    m(3, 3) = 0.28;
    const DensityMatrix rb = partial_trace_b(DensityMatrix(m), kQubits);
    CHECK(rb.matrix()(0, 0).real() == doctest::Approx(0.30).epsilon(1e-15));
    CHECK(rb.matrix()(1, 1).real() == doctest::Approx(0.70).epsilon(1e-15));

    const DensityMatrix i4 = DensityMatrix::maximally_mixed(4);
    CHECK(max_abs_diff(partial_trace_a(i4, kQubits).matrix(),
                       0.5 * ComplexMatrix::identity(2)) == 0.0);
}

TEST_CASE("trace preservation under partial trace") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const DensityMatrix rho = random_density_matrix(4, 500 + seed);
        CHECK(std::abs(trace(partial_trace_a(rho, kQubits).matrix()) - trace(rho.matrix())) < 1e-12);
    }
    CHECK_THROWS_AS(partial_trace_a(DensityMatrix::maximally_mixed(3), kQubits),
                    std::invalid_argument);
}

TEST_CASE("deutsch map closed forms") {
    const DensityMatrix rho_a = DensityMatrix::diagonal({0.7, 0.3});
    const DensityMatrix rho_b = random_density_matrix(2, 9);

    // identity interaction leaves rho_B alone
    CHECK(max_abs_diff(deutsch_map(UnitaryMatrix::identity(4), rho_a, rho_b, kQubits).matrix(),
                       rho_b.matrix()) < 1e-14);

    // swap relabels the factors: S(rho_B) = rho_A
    CHECK(max_abs_diff(deutsch_map(UnitaryMatrix::swap(kQubits), rho_a, rho_b, kQubits).matrix(),
                       rho_a.matrix()) < 1e-14);
}

TEST_CASE("deutsch map of CNOT is the symbolically expanded channel") {
    // Control on A, rho_A = diag(a, 1-a): S(rho) = a*rho + (1-a)*X rho X.
    const double a = 0.35;
    const DensityMatrix rho_a = DensityMatrix::diagonal({a, 1.0 - a});
    const ComplexMatrix x = pauli_x();
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const DensityMatrix rho_b = random_density_matrix(2, 700 + seed);
        const ComplexMatrix expected =
            a * rho_b.matrix() + (1.0 - a) * (x * rho_b.matrix() * x);
        const DensityMatrix got = deutsch_map(UnitaryMatrix::cnot(), rho_a, rho_b, kQubits);
        CHECK(max_abs_diff(got.matrix(), expected) < 1e-13);
    }
}

TEST_CASE("deutsch map output is a state and is affine in rho_B") {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        const UnitaryMatrix u = random_unitary(4, 1000 + seed);
        const DensityMatrix rho_a = random_density_matrix(2, 2000 + seed);
        const DensityMatrix s1 = random_density_matrix(2, 3000 + seed);
        const DensityMatrix s2 = random_density_matrix(2, 4000 + seed);

        // channel property: valid density matrix at tight tolerance
        const DensityMatrix out = deutsch_map(u, rho_a, s1, kQubits);
        CHECK_NOTHROW(DensityMatrix(out.matrix(), 1e-10));

        // affine in the B input
        const double lam = 0.3;
        const DensityMatrix mix =
            DensityMatrix(lam * s1.matrix() + (1.0 - lam) * s2.matrix());
        const ComplexMatrix lhs = deutsch_map(u, rho_a, mix, kQubits).matrix();
        const ComplexMatrix rhs = lam * deutsch_map(u, rho_a, s1, kQubits).matrix() +
                                  (1.0 - lam) * deutsch_map(u, rho_a, s2, kQubits).matrix();
        CHECK(max_abs_diff(lhs, rhs) < 1e-12);
    }
}

TEST_CASE("fixed point: swap converges to rho_A in one averaging step") {
    const DensityMatrix rho_a = DensityMatrix::diagonal({0.6, 0.4});
    const DensityMatrix rho_b0 = DensityMatrix::basis_state(2, 0);
    const auto sol = solve_deutsch_fixed_point(UnitaryMatrix::swap(kQubits), rho_a, rho_b0,
                                               kQubits, 1000, 1e-12);
    CHECK(sol.diagnostics.converged);
    CHECK(sol.diagnostics.iterations == 1);
    CHECK(trace_distance(sol.rho_b_star, rho_a) < 1e-12);
}

TEST_CASE("fixed point: identity interaction keeps the seed exactly") {
    const DensityMatrix rho_a = DensityMatrix::maximally_mixed(2);
    const DensityMatrix rho_b0 = random_density_matrix(2, 77);
    const auto sol = solve_deutsch_fixed_point(UnitaryMatrix::identity(4), rho_a, rho_b0, kQubits,
                                               1000, 1e-12);
    CHECK(sol.diagnostics.converged);
    CHECK(max_abs_diff(sol.rho_b_star.matrix(), rho_b0.matrix()) == 0.0);
}

TEST_CASE("fixed point: CNOT with unbiased control averages to I/2") {
    // Oracle: iterate the 2x2 recursion rho <- 0.5 rho + 0.5 X rho X directly.
    const ComplexMatrix x = pauli_x();
    ComplexMatrix it(2, 2);
    it(0, 0) = 1.0; // |0><0|
    for (int n = 0; n < 64; ++n) it = 0.5 * it + Complex{0.5, 0.0} * (x * it * x);
    CHECK(max_abs_diff(it, 0.5 * ComplexMatrix::identity(2)) < 1e-15); // oracle limit

    const auto sol = solve_deutsch_fixed_point(UnitaryMatrix::cnot(),
                                               DensityMatrix::diagonal({0.5, 0.5}),
                                               DensityMatrix::basis_state(2, 0), kQubits, 1000,
                                               1e-12);
    CHECK(sol.diagnostics.converged);
    CHECK(max_abs_diff(sol.rho_b_star.matrix(), 0.5 * ComplexMatrix::identity(2)) < 1e-12);
}

TEST_CASE("fixed point: seeded random unitaries converge and verify") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const UnitaryMatrix u = random_unitary(4, 9000 + seed);
        const DensityMatrix rho_a = random_density_matrix(2, 9100 + seed);
        const auto sol = solve_deutsch_fixed_point(u, rho_a, DensityMatrix::maximally_mixed(2),
                                                   kQubits, 10000, 1e-10);
        REQUIRE(sol.diagnostics.converged);
        CHECK(sol.diagnostics.final_residual <= 1e-10);

        const auto report =
            verify_dctc_quantum(tensor_product(rho_a, sol.rho_b_star), u, rho_a, kQubits, 1e-9);
        CHECK(report.passed());
    }
}

TEST_CASE("verify_dctc_quantum flags a non-fixed B state under swap") {
    const DensityMatrix rho_a = DensityMatrix::diagonal({0.8, 0.2});
    const DensityMatrix rho_b0 = DensityMatrix::diagonal({0.5, 0.5});
    const auto report = verify_dctc_quantum(tensor_product(rho_a, rho_b0),
                                            UnitaryMatrix::swap(kQubits), rho_a, kQubits, 1e-9);
    CHECK(report.marginal_a_ok);
    CHECK_FALSE(report.invariance_ok);
    // swap algebra: deviation is exactly ||rho_A - rho_B0||_tr
    CHECK(report.invariance_deviation ==
          doctest::Approx(trace_distance(rho_a, rho_b0)).epsilon(1e-12));
}

TEST_CASE("verify_dctc_quantum: identity interaction never moves the B marginal") {
    const DensityMatrix rho = random_density_matrix(4, 321);
    const auto report = verify_dctc_quantum(rho, UnitaryMatrix::identity(4),
                                            partial_trace_b(rho, kQubits), kQubits, 1e-9);
    CHECK(report.invariance_deviation < 1e-13);
}

TEST_CASE("random unitaries are unitary and reproducible") {
    const UnitaryMatrix u1 = random_unitary(4, 5);
    const UnitaryMatrix u2 = random_unitary(4, 5);
    const UnitaryMatrix u3 = random_unitary(4, 6);
    CHECK(max_abs_diff(u1.matrix(), u2.matrix()) == 0.0);
    CHECK(max_abs_diff(u1.matrix(), u3.matrix()) > 1e-3);
    CHECK(max_abs_diff(dagger(u1.matrix()) * u1.matrix(), ComplexMatrix::identity(4)) < 1e-12);
}

TEST_CASE("dimension mismatches are rejected") {
    const DensityMatrix rho_a = DensityMatrix::maximally_mixed(2);
    const DensityMatrix rho_b = DensityMatrix::maximally_mixed(3);
    CHECK_THROWS_AS(deutsch_map(UnitaryMatrix::identity(4), rho_a, rho_b, kQubits),
                    std::invalid_argument);
    CHECK_THROWS_AS(verify_dctc_quantum(DensityMatrix::maximally_mixed(4),
                                        UnitaryMatrix::identity(4), rho_b, kQubits, 1e-9),
                    std::invalid_argument);
}
