#pragma once

#include <cstdint>
#include <optional>

#include "riplab/operators.hpp"

namespace riplab::certify {

struct CertifyOptions {
    /// Maximum number of support tuples an exhaustive computation may
    /// enumerate; beyond this the call refuses (BudgetExceeded) rather than
    /// silently subsampling.
    unsigned long long budget = 2'000'000ULL;
    /// Worker threads for the enumeration; 0 = RIPLAB_THREADS env or 1.
    int threads = 0;
};

/// Alternating-maximization knobs for the matrix-case lower bounds.
struct AltMaxOptions {
    int max_iters = 500;
    double tol = 1e-12;
};

/// A computed delta or theta value together with the witness achieving it.
/// `exact` is true for exhaustive vector-case computations and false for the
/// matrix-case lower bounds.
struct RipReport {
    std::vector<int> orders;
    double value = 0.0;
    bool exact = false;

    // Vector-case witness: support set(s) and unit vector(s) in R^p.
    std::vector<int> support1;
    std::vector<int> support2;
    Vector witness1;
    Vector witness2;

    // Matrix-case witness (unit Frobenius norm).
    std::optional<DenseMatrix> witness_mat1;
    std::optional<DenseMatrix> witness_mat2;

    /// Supports/pairs enumerated, or restarts performed.
    unsigned long long enumerated = 0;
};

enum class Verdict { satisfied, boundary, violated };
const char* to_string(Verdict v);

/// Evaluation of delta_a + C_{a,b,k} theta_{a,b} against the threshold 1.
struct ConditionEvaluation {
    int a = 0;
    int b = 0;
    int k = 0;
    double c_value = 0.0;
    double delta_a = 0.0;
    double theta_ab = 0.0;
    double condition_value = 0.0;
    /// Strict: condition_value < 1 - 1e-9.
    bool satisfied = false;
    /// `boundary` when within 1e-9 of 1 (the sharpness constructions sit
    /// exactly at 1).
    Verdict verdict = Verdict::violated;
    RipReport delta_report;
    RipReport theta_report;
};

struct NspReport {
    int k = 0;
    bool holds = false;
    /// max over unit-l1 null-space vectors h of ||h_max(k)||_1.
    double worst_ratio = 0.0;
    Vector witness;
    std::vector<int> worst_support;
    std::vector<int> worst_signs;
    unsigned long long lp_count = 0;
};

/// Exact RIC delta_k by exhaustive support enumeration.
RipReport ric_vector(const SensingMatrix& a, int k, const CertifyOptions& opts = {});

/// Exact ROC theta_{k1,k2} by exhaustive enumeration of disjoint support
/// pairs (branch-and-bound pruned; the result is still exact).
RipReport roc_vector(const SensingMatrix& a, int k1, int k2, const CertifyOptions& opts = {});

/// Certified lower bound on delta_r via multi-start alternating maximization
/// over rank-r factor pairs. Zero restarts yields the trivial bound 0.
RipReport ric_matrix_lower(const MatrixSensingOperator& op, int r, int restarts,
                           std::uint64_t seed, const AltMaxOptions& opts = {});

/// Certified lower bound on theta_{r1,r2} via alternating truncated-SVD
/// ascent over simultaneously-diagonalizable disjoint pairs.
RipReport roc_matrix_lower(const MatrixSensingOperator& op, int r1, int r2, int restarts,
                           std::uint64_t seed, const AltMaxOptions& opts = {});

/// Null-space property at order k, solved exactly as one LP per
/// (support, sign-pattern): maximize sum_T s_i h_i over Ah = 0, ||h||_1 <= 1.
NspReport nsp_check(const SensingMatrix& a, int k, const CertifyOptions& opts = {});

/// delta_a + C_{a,b,k} theta_{a,b} against 1.
ConditionEvaluation evaluate_condition(const SensingMatrix& a, int a_order, int b_order, int k,
                                       const CertifyOptions& opts = {});

/// Recompute the value claimed by a report from its witness:
/// |  ||A w||^2 - 1 |    for delta reports,
/// | <A w1, A w2> |      for theta reports (unit witnesses).
double reevaluate_witness(const SensingMatrix& a, const RipReport& report);
double reevaluate_witness(const MatrixSensingOperator& op, const RipReport& report);

/// C(n, k) saturating at 2^64 - 1.
unsigned long long choose_saturating(int n, int k);

}  // namespace riplab::certify
