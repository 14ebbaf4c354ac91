#include "dctc/quantum.hpp"

#include "dctc/errors.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace dctc {

namespace {

void require(bool cond, const std::string& what) {
    if (!cond) throw std::invalid_argument(what);
}

void require_finite(const ComplexMatrix& m, const std::string& what) {
    for (const Complex& z : m.entries)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw std::invalid_argument(what + " has a non-finite entry");
}

} // namespace

DensityMatrix::DensityMatrix(ComplexMatrix m, double tolerance) : mat_(std::move(m)), tol_(tolerance) {
    require(tol_ >= 0.0, "density matrix tolerance must be nonnegative");
    require(mat_.square() && mat_.rows > 0, "density matrix must be square and nonempty");
    require_finite(mat_, "density matrix");
    double herm = 0.0;
    for (std::size_t i = 0; i < mat_.rows; ++i)
        for (std::size_t j = i; j < mat_.cols; ++j)
            herm = std::max(herm, std::abs(mat_(i, j) - std::conj(mat_(j, i))));
    require(herm <= tol_, "density matrix not Hermitian within tolerance");
    require(std::abs(trace(mat_) - Complex{1.0, 0.0}) <= tol_, "density matrix trace != 1");
    const auto ev = hermitian_eigenvalues(mat_);
    require(ev.front() >= -tol_, "density matrix has negative eigenvalue");
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t d) {
    require(d > 0, "dimension must be positive");
    ComplexMatrix m(d, d);
    for (std::size_t i = 0; i < d; ++i) m(i, i) = 1.0 / static_cast<double>(d);
    return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::diagonal(const std::vector<double>& probs) {
    require(!probs.empty(), "empty diagonal");
    ComplexMatrix m(probs.size(), probs.size());
    for (std::size_t i = 0; i < probs.size(); ++i) m(i, i) = probs[i];
    return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::basis_state(std::size_t d, std::size_t k) {
    require(k < d, "basis index out of range");
    ComplexMatrix m(d, d);
    m(k, k) = 1.0;
    return DensityMatrix(std::move(m));
}

UnitaryMatrix::UnitaryMatrix(ComplexMatrix m, double tolerance) : mat_(std::move(m)), tol_(tolerance) {
    require(mat_.square() && mat_.rows > 0, "unitary must be square and nonempty");
    require_finite(mat_, "unitary matrix");
    const ComplexMatrix gram = dagger(mat_) * mat_;
    require(max_abs_diff(gram, ComplexMatrix::identity(mat_.rows)) <= tol_,
            "matrix is not unitary within tolerance");
}

UnitaryMatrix UnitaryMatrix::identity(std::size_t d) { return UnitaryMatrix(ComplexMatrix::identity(d)); }

UnitaryMatrix UnitaryMatrix::swap(const BipartiteDims& dims) {
    require(dims.d_a == dims.d_b, "SWAP needs d_a == d_b");
    const std::size_t d = dims.total();
    ComplexMatrix m(d, d);
    for (std::size_t i = 0; i < dims.d_a; ++i)
        for (std::size_t j = 0; j < dims.d_b; ++j) m(j * dims.d_a + i, i * dims.d_b + j) = 1.0;
    return UnitaryMatrix(std::move(m));
}

UnitaryMatrix UnitaryMatrix::cnot() {
    ComplexMatrix m(4, 4);
    m(0, 0) = 1.0;
    m(1, 1) = 1.0;
    m(2, 3) = 1.0;
    m(3, 2) = 1.0;
    return UnitaryMatrix(std::move(m));
}

DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b, std::size_t dim_cap) {
    if (a.dim() * b.dim() > dim_cap)
        throw ResourceLimitError("tensor product dimension " + std::to_string(a.dim() * b.dim()) +
                                 " exceeds cap " + std::to_string(dim_cap));
    return DensityMatrix(kronecker(a.matrix(), b.matrix()),
                         std::max(a.tolerance(), b.tolerance()));
}

ComplexMatrix partial_trace_a_raw(const ComplexMatrix& rho, const BipartiteDims& dims) {
    if (!rho.square() || rho.rows != dims.total())
        throw std::invalid_argument("partial trace: dimension mismatch");
    ComplexMatrix out(dims.d_b, dims.d_b);
    for (std::size_t j = 0; j < dims.d_b; ++j)
        for (std::size_t l = 0; l < dims.d_b; ++l) {
            Complex s{0.0, 0.0};
            for (std::size_t i = 0; i < dims.d_a; ++i)
                s += rho(i * dims.d_b + j, i * dims.d_b + l);
            out(j, l) = s;
        }
    return out;
}

ComplexMatrix partial_trace_b_raw(const ComplexMatrix& rho, const BipartiteDims& dims) {
    if (!rho.square() || rho.rows != dims.total())
        throw std::invalid_argument("partial trace: dimension mismatch");
    ComplexMatrix out(dims.d_a, dims.d_a);
    for (std::size_t i = 0; i < dims.d_a; ++i)
        for (std::size_t k = 0; k < dims.d_a; ++k) {
            Complex s{0.0, 0.0};
            for (std::size_t j = 0; j < dims.d_b; ++j)
                s += rho(i * dims.d_b + j, k * dims.d_b + j);
            out(i, k) = s;
        }
    return out;
}

DensityMatrix partial_trace_a(const DensityMatrix& rho, const BipartiteDims& dims) {
    return DensityMatrix(partial_trace_a_raw(rho.matrix(), dims), rho.tolerance());
}

DensityMatrix partial_trace_b(const DensityMatrix& rho, const BipartiteDims& dims) {
    return DensityMatrix(partial_trace_b_raw(rho.matrix(), dims), rho.tolerance());
}

DensityMatrix deutsch_map(const UnitaryMatrix& u, const DensityMatrix& rho_a,
                          const DensityMatrix& rho_b, const BipartiteDims& dims) {
    if (rho_a.dim() != dims.d_a || rho_b.dim() != dims.d_b || u.dim() != dims.total())
        throw std::invalid_argument("deutsch_map: dimension mismatch");
    const ComplexMatrix joint = kronecker(rho_a.matrix(), rho_b.matrix());
    const ComplexMatrix evolved = u.matrix() * joint * dagger(u.matrix());
    return DensityMatrix(partial_trace_a_raw(evolved, dims), rho_b.tolerance());
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
    return trace_norm_hermitian(a.matrix() - b.matrix());
}

DeutschSolution solve_deutsch_fixed_point(const UnitaryMatrix& u, const DensityMatrix& rho_a,
                                          const DensityMatrix& rho_b0, const BipartiteDims& dims,
                                          std::size_t max_iter, double tol) {
    if (tol <= 0.0) throw std::invalid_argument("solver tolerance must be positive");
    if (max_iter == 0) throw std::invalid_argument("max_iter must be positive");

    // Validation-free channel application on raw matrices; the result is
    // re-validated once at the end.
    const auto apply_channel = [&](const ComplexMatrix& rb) {
        const ComplexMatrix joint = kronecker(rho_a.matrix(), rb);
        return partial_trace_a_raw(u.matrix() * joint * dagger(u.matrix()), dims);
    };

    IterationDiagnostics diag;
    diag.residual_history.reserve(std::min<std::size_t>(max_iter, 4096));

    ComplexMatrix seed = rho_b0.matrix();
    ComplexMatrix best = seed;
    double best_residual = trace_norm_hermitian(apply_channel(seed) - seed);

    std::size_t epoch_len = 16;
    const std::size_t epoch_cap = 1024;

    while (diag.iterations < max_iter && best_residual > tol) {
        ComplexMatrix iterate = seed;
        ComplexMatrix avg = ComplexMatrix::zero(dims.d_b, dims.d_b);
        for (std::size_t n = 1; n <= epoch_len && diag.iterations < max_iter; ++n) {
            iterate = apply_channel(iterate);
            ++diag.iterations;
            const double wn = 1.0 / static_cast<double>(n);
            avg = (1.0 - wn) * avg + wn * iterate;

            const double residual = trace_norm_hermitian(apply_channel(avg) - avg);
            diag.residual_history.push_back(residual);
            if (residual < best_residual) {
                best_residual = residual;
                best = avg;
            }
            if (residual <= tol) break;
        }
        seed = avg;
        if (epoch_len < epoch_cap) epoch_len *= 2;
    }

    diag.final_residual = best_residual;
    diag.converged = best_residual <= tol;
    return DeutschSolution{DensityMatrix(best, rho_b0.tolerance()), diag};
}

QuantumDctcReport verify_dctc_quantum(const DensityMatrix& rho_full, const UnitaryMatrix& u,
                                      const DensityMatrix& rho_a, const BipartiteDims& dims,
                                      double tol) {
    if (rho_full.dim() != dims.total() || u.dim() != dims.total() || rho_a.dim() != dims.d_a)
        throw std::invalid_argument("verify_dctc_quantum: dimension mismatch");

    QuantumDctcReport rep;
    rep.tol = tol;

    const ComplexMatrix marg_a = partial_trace_b_raw(rho_full.matrix(), dims);
    rep.marginal_a_deviation = trace_norm_hermitian(marg_a - rho_a.matrix());

    const ComplexMatrix evolved = u.matrix() * rho_full.matrix() * dagger(u.matrix());
    const ComplexMatrix marg_b_after = partial_trace_a_raw(evolved, dims);
    const ComplexMatrix marg_b_before = partial_trace_a_raw(rho_full.matrix(), dims);
    rep.invariance_deviation = trace_norm_hermitian(marg_b_after - marg_b_before);

    rep.marginal_a_ok = rep.marginal_a_deviation <= tol;
    rep.invariance_ok = rep.invariance_deviation <= tol;
    return rep;
}

UnitaryMatrix random_unitary(std::size_t d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexMatrix g(d, d);
    for (auto& z : g.entries) z = Complex{gauss(rng), gauss(rng)};

    // Modified Gram-Schmidt on columns. Dividing by the (real, positive)
    // column norm is exactly the phase-fixed-R-diagonal convention that
    // makes QR of a complex Gaussian Haar-distributed.
    for (std::size_t c = 0; c < d; ++c) {
        for (std::size_t p = 0; p < c; ++p) {
            Complex dot{0.0, 0.0};
            for (std::size_t r = 0; r < d; ++r) dot += std::conj(g(r, p)) * g(r, c);
            for (std::size_t r = 0; r < d; ++r) g(r, c) -= dot * g(r, p);
        }
        double norm = 0.0;
        for (std::size_t r = 0; r < d; ++r) norm += std::norm(g(r, c));
        norm = std::sqrt(norm);
        if (norm < 1e-12) throw std::runtime_error("degenerate Gaussian sample");
        for (std::size_t r = 0; r < d; ++r) g(r, c) /= norm;
    }
    return UnitaryMatrix(std::move(g));
}

DensityMatrix random_density_matrix(std::size_t d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexMatrix g(d, d);
    for (auto& z : g.entries) z = Complex{gauss(rng), gauss(rng)};
    ComplexMatrix w = g * dagger(g);
    const double tr = trace(w).real();
    for (auto& z : w.entries) z /= tr;
    // Exact Hermitian symmetrization kills roundoff from the product.
    for (std::size_t i = 0; i < d; ++i) {
        w(i, i) = Complex{w(i, i).real(), 0.0};
        for (std::size_t j = i + 1; j < d; ++j) {
            const Complex avg = 0.5 * (w(i, j) + std::conj(w(j, i)));
            w(i, j) = avg;
            w(j, i) = std::conj(avg);
        }
    }
    return DensityMatrix(std::move(w));
}

} // namespace dctc
