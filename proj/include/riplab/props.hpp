#pragma once

#include <cstdint>
#include <string>

#include "riplab/certify.hpp"
#include "riplab/operators.hpp"

namespace riplab::props {

/// Outcome of a lemma check: max_violation is (lhs - rhs) normalized by the
/// right side when nonzero, so anything <= 0 means the inequality held on
/// every evaluation. `worst_case` serializes the input achieving the max.
struct PropertyResult {
    std::string lemma_id;
    long trials = 0;
    long skipped = 0;  // hypothesis-violating draws (power inequality)
    double max_violation = -1.0;
    std::string worst_case;
};

/// theta_{k1, mu k2} <= sqrt(mu) theta_{k1, k2}, exact ROC on both sides.
PropertyResult check_theta_scaling(const SensingMatrix& a, int k1, int k2, int mu,
                                   const certify::CertifyOptions& opts = {});

/// The theta/delta relations at order k: theta_{k,k} <= 2 delta_k (k even)
/// or (2k/sqrt(k^2-1)) delta_k (k odd >= 3); theta_{k,k} <= delta_{2k}; and
/// the implication delta_k < 1/3 => delta_k + theta_{k,k} < 1 for even k
/// (< 1/3 + 2k/(3 sqrt(k^2-1)) for odd k).
PropertyResult check_theta_delta(const SensingMatrix& a, int k,
                                 const certify::CertifyOptions& opts = {});

/// Sparse-decomposition inner product bound: for disjointly supported alpha
/// (k1-sparse) and beta with ||beta||_1 <= lambda k2, ||beta||_inf <= lambda,
/// |<A alpha, A beta>| <= theta_{k1,k2} ||alpha||_2 lambda sqrt(k2).
/// Draws `trials` random (alpha, beta) pairs.
PropertyResult check_sparse_decomposition(const SensingMatrix& a, int k1, int k2,
                                          double lambda, int trials, std::uint64_t seed,
                                          const certify::CertifyOptions& opts = {});

/// Power-sum inequality: for non-increasing a_i >= 0 with
/// sum_{i<=r} a_i + lambda >= sum_{i>r} a_i and rho >= 1,
///   sum_{j>r} a_j^rho <= r ((sum_{i<=r} a_i^rho / r)^(1/rho) + lambda/r)^rho,
/// and with lambda = 0 the plain form sum_{j>r} a_j^rho <= sum_{i<=r} a_i^rho.
/// Hypothesis-violating input is reported as skipped, not failed.
PropertyResult check_power_inequality(const Vector& sequence, int r, double rho, double lambda);

/// Rank-constrained Cauchy-Schwarz: |<B, X>| <= ||B||_F sqrt(sum_{i<=r}
/// lambda_i(X)^2) over `trials` random rank-<=r matrices B, plus the aligned
/// top-r truncation (the equality case).
PropertyResult check_rank_cauchy_schwarz(const DenseMatrix& x, int r, int trials,
                                         std::uint64_t seed);

}  // namespace riplab::props
