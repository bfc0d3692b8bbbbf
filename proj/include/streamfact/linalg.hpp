#pragma once

#include <cstddef>

#include "streamfact/dense.hpp"

namespace streamfact {

// Default cap on the number of entries a Kronecker product may produce.
inline constexpr std::size_t kDefaultKronCap = 100'000'000;

// y = A x. Throws ContractViolation on dimension mismatch.
DenseVector matvec(const DenseMatrix& A, const DenseVector& x);

// y = A^T x without forming the transpose.
DenseVector matvec_transposed(const DenseMatrix& A, const DenseVector& x);

// Rank-one matrix u v^T.
DenseMatrix outer(const DenseVector& u, const DenseVector& v);

// C = A B, straightforward dense product.
DenseMatrix matmul(const DenseMatrix& A, const DenseMatrix& B);

DenseMatrix transpose(const DenseMatrix& A);

double dot(const DenseVector& u, const DenseVector& v);
double norm(const DenseVector& v);
double frobenius_norm(const DenseMatrix& A);
double trace(const DenseMatrix& A);

// Lower-triangular Cholesky factor of an SPD matrix. Only the lower triangle
// of the input is read. A pivot below 1e-12 * max(diagonal) raises
// SingularSystem carrying the failed pivot index.
class CholeskyFactor {
public:
    explicit CholeskyFactor(const DenseMatrix& A);

    DenseVector solve(const DenseVector& b) const;
    DenseMatrix solve(const DenseMatrix& B) const;  // column-wise solves

    const DenseMatrix& lower() const noexcept { return lower_; }

private:
    DenseMatrix lower_;
};

// Solves A x = b for symmetric positive definite A via Cholesky plus one
// refinement pass. A must be symmetric within 1e-10 (relative to its largest
// entry); otherwise ContractViolation. Singular/non-SPD input raises
// SingularSystem with the failed pivot index.
DenseVector solve_spd(const DenseMatrix& A, const DenseVector& b);

// True iff A (lower triangle) admits a Cholesky factorisation with strictly
// positive, finite pivots. Never throws.
bool is_positive_definite(const DenseMatrix& A);

// Kronecker product. Result has (A.rows*B.rows) x (A.cols*B.cols) entries;
// exceeding entry_cap raises CapacityExceeded before any allocation.
DenseMatrix kron(const DenseMatrix& A, const DenseMatrix& B,
                 std::size_t entry_cap = kDefaultKronCap);

// Column-stacking vectorisation and its inverse. unvec checks the length.
DenseVector vec(const DenseMatrix& A);
DenseMatrix unvec(const DenseVector& v, std::size_t rows, std::size_t cols);

// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
// Only intended for the small symmetric matrices this library works with;
// the symmetric part (A + A^T)/2 of the input is what gets decomposed.
struct SymmetricEigen {
    DenseVector values;   // ascending
    DenseMatrix vectors;  // orthonormal columns, matching order
};
SymmetricEigen symmetric_eigen(const DenseMatrix& A);

double min_symmetric_eigenvalue(const DenseMatrix& A);

}  // namespace streamfact
