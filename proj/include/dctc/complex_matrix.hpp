#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace dctc {

using Complex = std::complex<double>;

// Dense row-major complex matrix. Carrier type for operators on the
// bipartite Hilbert space; all quantum-side operations build on it.
struct ComplexMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Complex> entries; // row-major, entries.size() == rows*cols

    ComplexMatrix() = default;
    ComplexMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), entries(r * c) {}

    Complex& operator()(std::size_t r, std::size_t c) { return entries[r * cols + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return entries[r * cols + c]; }

    bool square() const { return rows == cols; }

    static ComplexMatrix identity(std::size_t d);
    static ComplexMatrix zero(std::size_t r, std::size_t c);
};

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, const ComplexMatrix& a);
ComplexMatrix operator*(double s, const ComplexMatrix& a);

// Conjugate transpose.
ComplexMatrix dagger(const ComplexMatrix& a);

Complex trace(const ComplexMatrix& a);

// Kronecker product, (a ⊗ b)[(i,k),(j,l)] = a[i,j] * b[k,l].
ComplexMatrix kronecker(const ComplexMatrix& a, const ComplexMatrix& b);

// max_{i,j} |a[i,j] - b[i,j]|
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
double max_abs(const ComplexMatrix& a);

// Eigenvalues of a Hermitian matrix (ascending), by cyclic complex Jacobi
// rotations. Input is assumed Hermitian; only the upper triangle is trusted.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h);

// Trace norm ||a||_1 = sum of singular values; for Hermitian input this is
// the sum of absolute eigenvalues, which is all we need on state space.
double trace_norm_hermitian(const ComplexMatrix& a);

} // namespace dctc
