#include "riplab/operators.hpp"

#include <cmath>

namespace riplab {

SensingMatrix::SensingMatrix(DenseMatrix m) : matrix(std::move(m)) {
    if (matrix.rows() == 0 || matrix.cols() == 0)
        throw std::invalid_argument("SensingMatrix: empty matrix");
    require_finite(matrix, "SensingMatrix");
}

MatrixSensingOperator::MatrixSensingOperator(DenseMatrix mat, std::size_t m_, std::size_t n_)
    : matrix(std::move(mat)), m(m_), n(n_) {
    if (m == 0 || n == 0) throw std::invalid_argument("MatrixSensingOperator: empty shape");
    if (matrix.cols() != m * n)
        throw std::invalid_argument("MatrixSensingOperator: expected " + std::to_string(m * n) +
                                    " columns, got " + std::to_string(matrix.cols()));
    require_finite(matrix, "MatrixSensingOperator");
}

SparseSignal::SparseSignal(Vector v, std::optional<std::size_t> k)
    : values(std::move(v)), declared_sparsity(k) {
    require_finite(values, "SparseSignal");
    if (declared_sparsity && support_size() > *declared_sparsity)
        throw std::invalid_argument("SparseSignal: support exceeds declared sparsity " +
                                    std::to_string(*declared_sparsity));
}

std::size_t SparseSignal::support_size() const {
    std::size_t c = 0;
    for (double x : values)
        if (x != 0.0) ++c;
    return c;
}

LowRankMatrix::LowRankMatrix(DenseMatrix x, std::optional<std::size_t> r)
    : values(std::move(x)), declared_rank(r) {
    require_finite(values, "LowRankMatrix");
    if (declared_rank) {
        const auto f = svd(values);
        // Singular values at or below 1e-10 * s1 count as zero.
        const double s1 = f.singular_values.front();
        std::size_t rank = 0;
        for (double s : f.singular_values)
            if (s > 1e-10 * s1 && s > 0.0) ++rank;
        if (rank > *declared_rank)
            throw std::invalid_argument("LowRankMatrix: numerical rank " + std::to_string(rank) +
                                        " exceeds declared rank " +
                                        std::to_string(*declared_rank));
    }
}

Vector vec(const DenseMatrix& x) {
    Vector v(x.rows() * x.cols());
    for (std::size_t j = 0; j < x.cols(); ++j)
        for (std::size_t i = 0; i < x.rows(); ++i) v[j * x.rows() + i] = x(i, j);
    return v;
}

DenseMatrix devec(std::span<const double> v, std::size_t m, std::size_t n) {
    if (v.size() != m * n) throw std::invalid_argument("devec: length mismatch");
    DenseMatrix x(m, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < m; ++i) x(i, j) = v[j * m + i];
    return x;
}

Vector apply(const SensingMatrix& a, std::span<const double> beta) {
    return matvec(a.matrix, beta);
}

Vector apply_map(const MatrixSensingOperator& op, const DenseMatrix& x) {
    if (x.rows() != op.m || x.cols() != op.n)
        throw std::invalid_argument("apply_map: shape mismatch");
    return matvec(op.matrix, vec(x));
}

Vector adjoint_apply(const SensingMatrix& a, std::span<const double> z) {
    return matvec_t(a.matrix, z);
}

DenseMatrix adjoint_map(const MatrixSensingOperator& op, std::span<const double> z) {
    return devec(matvec_t(op.matrix, z), op.m, op.n);
}

double dual_norm(const SensingMatrix& a, std::span<const double> z) {
    return norm_inf(adjoint_apply(a, z));
}

double dual_norm_map(const MatrixSensingOperator& op, std::span<const double> z) {
    return spectral_norm(adjoint_map(op, z));
}

DenseMatrix gram_block(const SensingMatrix& a, std::span<const int> t1,
                       std::span<const int> t2) {
    const auto check = [&](std::span<const int> t) {
        for (int j : t)
            if (j < 0 || static_cast<std::size_t>(j) >= a.p())
                throw std::invalid_argument("gram_block: column index " + std::to_string(j) +
                                            " out of range");
    };
    check(t1);
    check(t2);
    DenseMatrix b(t1.size(), t2.size());
    for (std::size_t i = 0; i < t1.size(); ++i)
        for (std::size_t j = 0; j < t2.size(); ++j) {
            double s = 0.0;
            for (std::size_t r = 0; r < a.n(); ++r)
                s += a.matrix(r, t1[i]) * a.matrix(r, t2[j]);
            b(i, j) = s;
        }
    return b;
}

DenseMatrix gram(const SensingMatrix& a) { return matmul(transpose(a.matrix), a.matrix); }

}  // namespace riplab
