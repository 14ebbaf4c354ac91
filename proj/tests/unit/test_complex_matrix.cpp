#include "dctc/complex_matrix.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace dctc;

namespace {

ComplexMatrix diag2(double a, double b) {
    ComplexMatrix m(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

ComplexMatrix random_hermitian(std::size_t d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    ComplexMatrix m(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        m(i, i) = g(rng);
        for (std::size_t j = i + 1; j < d; ++j) {
            m(i, j) = Complex{g(rng), g(rng)};
            m(j, i) = std::conj(m(i, j));
        }
    }
    return m;
}

} // namespace

TEST_CASE("kronecker of diagonal matrices, entrywise") {
    // diag(0.3,0.7) (x) diag(0.6,0.4) = diag(0.18, 0.12, 0.42, 0.28)
    const ComplexMatrix k = kronecker(diag2(0.3, 0.7), diag2(0.6, 0.4));
    REQUIRE(k.rows == 4);
    CHECK(k(0, 0).real() == doctest::Approx(0.18).epsilon(1e-15));
    CHECK(k(1, 1).real() == doctest::Approx(0.12).epsilon(1e-15));
    CHECK(k(2, 2).real() == doctest::Approx(0.42).epsilon(1e-15));
    CHECK(k(3, 3).real() == doctest::Approx(0.28).epsilon(1e-15));
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            if (i != j) CHECK(std::abs(k(i, j)) == 0.0);
}

TEST_CASE("matrix product against a hand-computed 2x2") {
    ComplexMatrix a(2, 2), b(2, 2);
    a(0, 0) = {1, 1};
    a(0, 1) = {0, 2};
    a(1, 0) = {3, 0};
    a(1, 1) = {0, -1};
    b(0, 0) = {2, 0};
    b(0, 1) = {0, 1};
    b(1, 0) = {1, 0};
    b(1, 1) = {1, 1};
    const ComplexMatrix c = a * b;
    CHECK(std::abs(c(0, 0) - Complex{2, 4}) < 1e-15);  // (1+i)*2 + 2i*1
    CHECK(std::abs(c(0, 1) - Complex{-3, 3}) < 1e-15); // (1+i)*i + 2i*(1+i)
    CHECK(std::abs(c(1, 0) - Complex{6, -1}) < 1e-15); // 3*2 + (-i)*1
    CHECK(std::abs(c(1, 1) - Complex{1, 2}) < 1e-15);  // 3*i + (-i)*(1+i)
}

TEST_CASE("dagger conjugate-transposes") {
    ComplexMatrix a(2, 3);
    a(0, 2) = Complex{1, 2};
    const ComplexMatrix d = dagger(a);
    REQUIRE(d.rows == 3);
    CHECK(std::abs(d(2, 0) - Complex{1, -2}) == 0.0);
}

TEST_CASE("hermitian eigenvalues: closed forms") {
    ComplexMatrix x(2, 2);
    x(0, 1) = 1.0;
    x(1, 0) = 1.0;
    auto ev = hermitian_eigenvalues(x); // Pauli X: -1, +1
    CHECK(ev[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(ev[1] == doctest::Approx(1.0).epsilon(1e-12));

    ComplexMatrix y(2, 2);
    y(0, 1) = Complex{0, -1};
    y(1, 0) = Complex{0, 1};
    ev = hermitian_eigenvalues(y); // Pauli Y: -1, +1
    CHECK(ev[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(ev[1] == doctest::Approx(1.0).epsilon(1e-12));

    ev = hermitian_eigenvalues(diag2(3.0, -4.0));
    CHECK(ev[0] == doctest::Approx(-4.0));
    CHECK(ev[1] == doctest::Approx(3.0));
}

TEST_CASE("hermitian eigenvalues: trace and Frobenius invariants on random input") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const std::size_t d = 2 + seed % 5;
        const ComplexMatrix h = random_hermitian(d, 100 + seed);
        const auto ev = hermitian_eigenvalues(h);
        double sum = 0.0, sq = 0.0, frob = 0.0;
        for (double e : ev) {
            sum += e;
            sq += e * e;
        }
        for (const Complex& z : h.entries) frob += std::norm(z);
        CHECK(sum == doctest::Approx(trace(h).real()).epsilon(1e-10));
        CHECK(sq == doctest::Approx(frob).epsilon(1e-10));
    }
}

TEST_CASE("gram matrices are PSD") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    ComplexMatrix m(4, 4);
    for (auto& z : m.entries) z = Complex{g(rng), g(rng)};
    const auto ev = hermitian_eigenvalues(m * dagger(m));
    CHECK(ev.front() >= -1e-12);
}

TEST_CASE("trace norm of a Hermitian matrix") {
    CHECK(trace_norm_hermitian(diag2(3.0, -4.0)) == doctest::Approx(7.0).epsilon(1e-12));
    ComplexMatrix x(2, 2);
    x(0, 1) = 0.5;
    x(1, 0) = 0.5;
    CHECK(trace_norm_hermitian(x) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("shape mismatches throw") {
    CHECK_THROWS_AS(ComplexMatrix(2, 2) + ComplexMatrix(3, 3), std::invalid_argument);
    CHECK_THROWS_AS(ComplexMatrix(2, 3) * ComplexMatrix(2, 3), std::invalid_argument);
    CHECK_THROWS_AS(trace(ComplexMatrix(2, 3)), std::invalid_argument);
}
