#pragma once

#include <optional>

#include "riplab/decomp.hpp"
#include "riplab/matrix.hpp"

namespace riplab {

/// Measurement model y = A beta + z: n measurements of a p-dimensional signal.
struct SensingMatrix {
    DenseMatrix matrix;  // n x p

    SensingMatrix() = default;
    explicit SensingMatrix(DenseMatrix m);

    std::size_t n() const { return matrix.rows(); }
    std::size_t p() const { return matrix.cols(); }
};

/// Measurement model y = M(X) + z for m x n matrices X, stored as the
/// q x (m*n) matrix acting on the column-major vectorization of X.
struct MatrixSensingOperator {
    DenseMatrix matrix;  // q x (m*n)
    std::size_t m = 0;
    std::size_t n = 0;

    MatrixSensingOperator() = default;
    MatrixSensingOperator(DenseMatrix mat, std::size_t m, std::size_t n);

    std::size_t q() const { return matrix.rows(); }

    /// View of the same operator as a sensing matrix on R^(m*n).
    SensingMatrix as_sensing_matrix() const { return SensingMatrix(matrix); }
};

/// Signal with an optional sparsity annotation, validated on construction.
struct SparseSignal {
    Vector values;
    std::optional<std::size_t> declared_sparsity;

    explicit SparseSignal(Vector v, std::optional<std::size_t> k = std::nullopt);
    std::size_t support_size() const;
};

/// Matrix with an optional rank annotation (rank under threshold 1e-10 * s1).
struct LowRankMatrix {
    DenseMatrix values;
    std::optional<std::size_t> declared_rank;

    explicit LowRankMatrix(DenseMatrix x, std::optional<std::size_t> r = std::nullopt);
};

/// Column-major vectorization and its inverse.
Vector vec(const DenseMatrix& x);
DenseMatrix devec(std::span<const double> v, std::size_t m, std::size_t n);

Vector apply(const SensingMatrix& a, std::span<const double> beta);
Vector apply_map(const MatrixSensingOperator& op, const DenseMatrix& x);

Vector adjoint_apply(const SensingMatrix& a, std::span<const double> z);
DenseMatrix adjoint_map(const MatrixSensingOperator& op, std::span<const double> z);

/// ||A^T z||_inf, the dual norm appearing in the Dantzig constraint.
double dual_norm(const SensingMatrix& a, std::span<const double> z);
/// Spectral norm of M*(z).
double dual_norm_map(const MatrixSensingOperator& op, std::span<const double> z);

/// The |T1| x |T2| block of inner products of the indexed columns of A.
DenseMatrix gram_block(const SensingMatrix& a, std::span<const int> t1, std::span<const int> t2);

/// Full Gram matrix A^T A.
DenseMatrix gram(const SensingMatrix& a);

}  // namespace riplab
