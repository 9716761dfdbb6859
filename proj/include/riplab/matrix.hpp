#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace riplab {

using Vector = std::vector<double>;

/// Numerical failure (non-convergence, inconsistent system, ...).
/// Precondition violations use std::invalid_argument instead.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when an exhaustive enumeration would exceed the configured budget.
class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(const std::string& what, unsigned long long count)
        : std::runtime_error(what), required(count) {}
    unsigned long long required;
};

/// Dense real matrix, row-major storage.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    DenseMatrix(std::size_t rows, std::size_t cols, Vector entries);

    static DenseMatrix identity(std::size_t n);
    static DenseMatrix diag(const Vector& d);
    /// Rectangular m-by-n matrix with d on the main diagonal.
    static DenseMatrix diag(std::size_t rows, std::size_t cols, const Vector& d);
    static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::span<const double> entries() const { return data_; }

    /// Pointer to the start of row i (rows are contiguous).
    const double* row(std::size_t i) const { return data_.data() + i * cols_; }
    double* row(std::size_t i) { return data_.data() + i * cols_; }

    Vector column(std::size_t j) const;
    void set_column(std::size_t j, const Vector& v);

    bool all_finite() const;

    bool operator==(const DenseMatrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    Vector data_;
};

DenseMatrix transpose(const DenseMatrix& m);
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator*(double s, const DenseMatrix& m);

Vector matvec(const DenseMatrix& m, std::span<const double> x);
/// m^T x without forming the transpose.
Vector matvec_t(const DenseMatrix& m, std::span<const double> x);

/// a b^T (outer product).
DenseMatrix outer(std::span<const double> a, std::span<const double> b);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v);
double norm1(std::span<const double> v);
double norm_inf(std::span<const double> v);
double frobenius_norm(const DenseMatrix& m);
double max_abs(const DenseMatrix& m);
/// trace(a^T b), the Frobenius inner product.
double frobenius_dot(const DenseMatrix& a, const DenseMatrix& b);

Vector operator+(const Vector& a, const Vector& b);
Vector operator-(const Vector& a, const Vector& b);
Vector operator*(double s, const Vector& v);

void require_finite(const DenseMatrix& m, const char* what);
void require_finite(std::span<const double> v, const char* what);

}  // namespace riplab
