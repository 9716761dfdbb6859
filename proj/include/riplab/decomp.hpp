#pragma once

#include "riplab/matrix.hpp"

namespace riplab {

/// Convergence knobs for the Jacobi iterations. `off_tol` is relative to the
/// Frobenius norm of the (implicit) symmetric iterate; hitting `max_sweeps`
/// without meeting it raises NumericalError rather than returning silently.
struct JacobiOptions {
    double off_tol = 1e-14;
    int max_sweeps = 60;
};

/// Economy SVD: m = u * diag(singular_values) * v^T with orthonormal columns
/// in u (m x r) and v (n x r), r = min(m, n), singular values non-increasing.
struct SvdResult {
    DenseMatrix u;
    Vector singular_values;
    DenseMatrix v;
    /// Number of singular values above 1e-12 * s_max.
    std::size_t numerical_rank = 0;

    DenseMatrix reconstruct() const;
};

struct SymEigResult {
    Vector eigenvalues;        // non-increasing
    DenseMatrix eigenvectors;  // columns, same order
};

/// One-sided Jacobi SVD.
SvdResult svd(const DenseMatrix& m, const JacobiOptions& opts = {});

/// Cyclic Jacobi eigensolver for symmetric input (checked to 1e-12 relative).
SymEigResult sym_eig(const DenseMatrix& s, const JacobiOptions& opts = {});

/// Deterministic orthogonal completion of a unit vector: returns a d x d
/// orthogonal matrix whose first column is exactly v (Householder based).
DenseMatrix orthonormal_complete(const Vector& v);

/// Largest singular value.
double spectral_norm(const DenseMatrix& m, const JacobiOptions& opts = {});

/// Cholesky factor L (lower) of a symmetric positive definite matrix;
/// throws NumericalError if a pivot drops below `min_pivot` * max diagonal.
DenseMatrix cholesky_factor(const DenseMatrix& s, double min_pivot = 1e-14);
Vector cholesky_solve(const DenseMatrix& l, std::span<const double> b);

/// Minimum-norm least squares solution via SVD; also reports the residual.
struct LstsqResult {
    Vector x;
    double residual_norm;
    std::size_t rank;
};
LstsqResult lstsq(const DenseMatrix& a, std::span<const double> b,
                  double rank_tol = 1e-12);

/// Eigenvalues only (ascending storage avoided; returned non-increasing) of a
/// small symmetric matrix held in a caller-provided n x n row-major buffer.
/// The buffer is destroyed. No allocation for n <= 16.
void small_sym_eigenvalues(double* a, std::size_t n, double* eigenvalues);

/// Largest singular value of the r x c row-major block `b` (small sizes;
/// forms the smaller-side Gram matrix and runs Jacobi on it).
double small_sigma_max(const double* b, std::size_t r, std::size_t c);

/// Extreme eigenvalues of the k x k Gram block of columns `support` of a
/// precomputed Gram matrix g (p x p). Returns {lambda_min, lambda_max}.
struct EigExtremes {
    double min;
    double max;
};
EigExtremes gram_block_eig_extremes(const DenseMatrix& g, std::span<const int> support);

}  // namespace riplab
