#include "dctc/complex_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dctc {

ComplexMatrix ComplexMatrix::identity(std::size_t d) {
    ComplexMatrix m(d, d);
    for (std::size_t i = 0; i < d; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::zero(std::size_t r, std::size_t c) { return ComplexMatrix(r, c); }

static void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols)
        throw std::invalid_argument("matrix shape mismatch");
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b);
    ComplexMatrix c(a.rows, a.cols);
    for (std::size_t i = 0; i < a.entries.size(); ++i) c.entries[i] = a.entries[i] + b.entries[i];
    return c;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b);
    ComplexMatrix c(a.rows, a.cols);
    for (std::size_t i = 0; i < a.entries.size(); ++i) c.entries[i] = a.entries[i] - b.entries[i];
    return c;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols != b.rows) throw std::invalid_argument("matrix product shape mismatch");
    ComplexMatrix c(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t k = 0; k < a.cols; ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{0.0, 0.0}) continue;
            for (std::size_t j = 0; j < b.cols; ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

ComplexMatrix operator*(Complex s, const ComplexMatrix& a) {
    ComplexMatrix c(a.rows, a.cols);
    for (std::size_t i = 0; i < a.entries.size(); ++i) c.entries[i] = s * a.entries[i];
    return c;
}

ComplexMatrix operator*(double s, const ComplexMatrix& a) { return Complex{s, 0.0} * a; }

ComplexMatrix dagger(const ComplexMatrix& a) {
    ComplexMatrix c(a.cols, a.rows);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) c(j, i) = std::conj(a(i, j));
    return c;
}

Complex trace(const ComplexMatrix& a) {
    if (!a.square()) throw std::invalid_argument("trace of non-square matrix");
    Complex t{0.0, 0.0};
    for (std::size_t i = 0; i < a.rows; ++i) t += a(i, i);
    return t;
}

ComplexMatrix kronecker(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix c(a.rows * b.rows, a.cols * b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) {
            const Complex aij = a(i, j);
            for (std::size_t k = 0; k < b.rows; ++k)
                for (std::size_t l = 0; l < b.cols; ++l)
                    c(i * b.rows + k, j * b.cols + l) = aij * b(k, l);
        }
    return c;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b);
    double m = 0.0;
    for (std::size_t i = 0; i < a.entries.size(); ++i)
        m = std::max(m, std::abs(a.entries[i] - b.entries[i]));
    return m;
}

double max_abs(const ComplexMatrix& a) {
    double m = 0.0;
    for (const Complex& z : a.entries) m = std::max(m, std::abs(z));
    return m;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h) {
    if (!h.square()) throw std::invalid_argument("eigenvalues of non-square matrix");
    const std::size_t n = h.rows;
    ComplexMatrix a = h;
    // Symmetrize from the upper triangle so tiny Hermiticity violations
    // cannot leak complex parts into the rotations.
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = Complex{a(i, i).real(), 0.0};
        for (std::size_t j = i + 1; j < n; ++j) a(j, i) = std::conj(a(i, j));
    }

    double scale = max_abs(a);
    if (scale == 0.0) return std::vector<double>(n, 0.0);

    const int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
        if (off <= 1e-15 * scale) break;

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                if (std::abs(apq) <= 1e-18 * scale) continue;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                // Unitary 2x2 rotation G = [[c, s*e^{i phi}], [-s*e^{-i phi}, c]]
                // chosen to annihilate a(p,q) in G^* A G.
                const double abs_apq = std::abs(apq);
                const Complex phase = apq / abs_apq;
                const double theta = 0.5 * std::atan2(2.0 * abs_apq, app - aqq);
                const double c = std::cos(theta);
                const double s = std::sin(theta);
                const Complex sp = s * phase;

                for (std::size_t k = 0; k < n; ++k) {
                    const Complex akp = a(k, p);
                    const Complex akq = a(k, q);
                    a(k, p) = c * akp + std::conj(sp) * akq;
                    a(k, q) = -sp * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex apk = a(p, k);
                    const Complex aqk = a(q, k);
                    a(p, k) = c * apk + sp * aqk;
                    a(q, k) = -std::conj(sp) * apk + c * aqk;
                }
                a(p, q) = Complex{0.0, 0.0};
                a(q, p) = Complex{0.0, 0.0};
            }
        }
    }

    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i).real();
    std::sort(ev.begin(), ev.end());
    return ev;
}

double trace_norm_hermitian(const ComplexMatrix& a) {
    double s = 0.0;
    for (double ev : hermitian_eigenvalues(a)) s += std::fabs(ev);
    return s;
}

} // namespace dctc
