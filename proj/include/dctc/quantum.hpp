#pragma once

#include "dctc/complex_matrix.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace dctc {

// Default constructor-validation tolerance: float64 headroom over the error
// accumulated by Kronecker products and index contractions at desk scale.
constexpr double kStateTolerance = 1e-9;

// Full-system dimensions are capped so a bad scenario fails loudly instead
// of allocating gigabytes. Configurable per call site.
constexpr std::size_t kDefaultDimCap = 64;

struct BipartiteDims {
    std::size_t d_a = 0;
    std::size_t d_b = 0;
    std::size_t total() const { return d_a * d_b; }
};

// Hermitian, positive semi-definite, unit-trace matrix. Validation happens
// at construction; the tolerance used is kept for reporting.
class DensityMatrix {
  public:
    explicit DensityMatrix(ComplexMatrix m, double tolerance = kStateTolerance);

    const ComplexMatrix& matrix() const { return mat_; }
    std::size_t dim() const { return mat_.rows; }
    double tolerance() const { return tol_; }

    static DensityMatrix maximally_mixed(std::size_t d);
    static DensityMatrix diagonal(const std::vector<double>& probs);
    // |k><k| on a d-dimensional space.
    static DensityMatrix basis_state(std::size_t d, std::size_t k);

  private:
    ComplexMatrix mat_;
    double tol_;
};

class UnitaryMatrix {
  public:
    explicit UnitaryMatrix(ComplexMatrix m, double tolerance = kStateTolerance);

    const ComplexMatrix& matrix() const { return mat_; }
    std::size_t dim() const { return mat_.rows; }

    static UnitaryMatrix identity(std::size_t d);
    // SWAP on H_A (x) H_B with d_a == d_b.
    static UnitaryMatrix swap(const BipartiteDims& dims);
    // CNOT with the A qubit as control, d_a == d_b == 2.
    static UnitaryMatrix cnot();

  private:
    ComplexMatrix mat_;
    double tol_;
};

DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b,
                             std::size_t dim_cap = kDefaultDimCap);

// tr over the A factor: d_a*d_b -> d_b.
DensityMatrix partial_trace_a(const DensityMatrix& rho, const BipartiteDims& dims);
// tr over the B factor: d_a*d_b -> d_a.
DensityMatrix partial_trace_b(const DensityMatrix& rho, const BipartiteDims& dims);

// Raw versions for intermediate matrices that need not be states.
ComplexMatrix partial_trace_a_raw(const ComplexMatrix& rho, const BipartiteDims& dims);
ComplexMatrix partial_trace_b_raw(const ComplexMatrix& rho, const BipartiteDims& dims);

// The Deutsch interaction channel S(rho_B) = tr_A( U (rho_A (x) rho_B) U* ).
DensityMatrix deutsch_map(const UnitaryMatrix& u, const DensityMatrix& rho_a,
                          const DensityMatrix& rho_b, const BipartiteDims& dims);

double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

struct IterationDiagnostics {
    bool converged = false;
    std::size_t iterations = 0;           // channel applications consumed
    double final_residual = 0.0;          // ||S(x) - x||_tr at the returned x
    std::vector<double> residual_history; // residual after each iteration
};

struct DeutschSolution {
    DensityMatrix rho_b_star;
    IterationDiagnostics diagnostics;
};

// Fixed point of S by Cesaro-averaged iteration, restarted in growing
// epochs: within an epoch the candidate is the running average
// (1/n) sum_{k<=n} S^k(seed) and the residual ||S(x)-x||_tr is checked at
// every n; at the epoch end the average becomes the next seed. Averaging
// handles channels with peripheral (rotational) spectrum, restarting keeps
// the convergence geometric instead of O(1/N).
DeutschSolution solve_deutsch_fixed_point(const UnitaryMatrix& u, const DensityMatrix& rho_a,
                                          const DensityMatrix& rho_b0, const BipartiteDims& dims,
                                          std::size_t max_iter, double tol);

struct QuantumDctcReport {
    double marginal_a_deviation = 0.0; // ||tr_B(rho) - rho_A||_tr
    double invariance_deviation = 0.0; // ||tr_A(U rho U*) - tr_A(rho)||_tr
    double tol = 0.0;
    bool marginal_a_ok = false;
    bool invariance_ok = false;
    bool passed() const { return marginal_a_ok && invariance_ok; }
};

// Checks both D-CTC conditions for a candidate full-system state:
// (1) the A marginal equals rho_A, (2) the B marginal is unchanged by U.
QuantumDctcReport verify_dctc_quantum(const DensityMatrix& rho_full, const UnitaryMatrix& u,
                                      const DensityMatrix& rho_a, const BipartiteDims& dims,
                                      double tol);

// Haar-like random unitary: QR-style orthonormalization of a seeded complex
// Gaussian matrix with the R diagonal phase-fixed. Reproducible per seed.
UnitaryMatrix random_unitary(std::size_t d, std::uint64_t seed);

// Wishart-normalized random density matrix, reproducible per seed.
DensityMatrix random_density_matrix(std::size_t d, std::uint64_t seed);

} // namespace dctc
