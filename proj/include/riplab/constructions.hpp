#pragma once

#include <cstdint>

#include "riplab/operators.hpp"

namespace riplab::constructions {

/// Extremal tight-frame family: a p x p map that annihilates the flat unit
/// direction h1 (2k equal leading entries) and scales its orthogonal
/// complement by sqrt(2 / (2 - a/(2k))). It satisfies
/// delta_a + C_{a,b,k} theta_{a,b} = 1 exactly, and carries two k-sparse
/// signals u != v with A u = A v.
struct TightFrameFamily {
    int p = 0;
    int k = 0;
    int a = 0;
    int b = 0;
    double scale = 0.0;
    SensingMatrix A;
    Vector u;
    Vector v;
    Vector h1;
    double analytic_delta = 0.0;  // (a/2k) / (2 - a/2k)
    double analytic_theta = 0.0;  // (1 - delta) / C_{a,b,k}
    double analytic_condition = 1.0;
};

/// Odd-order family with theta_{k,k} = lambda and
/// delta_k = lambda sqrt(k^2 - 1) / (2k): identity plus rank-one boosts
/// sqrt(1 + lambda), sqrt(1 - lambda) along two flat directions.
struct OddFamily {
    int p = 0;
    int k = 0;
    double lambda = 0.0;
    SensingMatrix A;
    double analytic_delta = 0.0;
    double analytic_theta = 0.0;
};

/// Matrix analog of the tight-frame family on m x n matrices; the
/// annihilated direction is the unit-Frobenius matrix with 2r equal diagonal
/// entries, and U, V are rank-r diagonal matrices with M(U) = M(V).
struct TightFrameMatrixFamily {
    int m = 0;
    int n = 0;
    int r = 0;
    int a = 0;
    int b = 0;
    double scale = 0.0;
    MatrixSensingOperator op;
    DenseMatrix u;
    DenseMatrix v;
    double analytic_delta = 0.0;
    double analytic_theta = 0.0;
};

TightFrameFamily build_tight_frame(int p, int k, int a, int b);
TightFrameMatrixFamily build_tight_frame_matrix(int m, int n, int r, int a, int b);
OddFamily build_odd_family(int p, int k, double lambda);

enum class EnsembleKind { gaussian, bernoulli, ternary };
EnsembleKind parse_ensemble(const std::string& name);
const char* to_string(EnsembleKind k);

/// Random sensing matrix with i.i.d. entries of variance 1/n: N(0, 1/n);
/// +-1/sqrt(n) each w.p. 1/2; or +-sqrt(3/n) w.p. 1/6 each and 0 otherwise.
/// Deterministic (byte-exact) under the seed.
SensingMatrix random_sensing(int n, int p, EnsembleKind kind, std::uint64_t seed);

/// Random pair X1, X2 of ranks r1, r2 built from shared random orthonormal
/// bases with disjoint index sets, so X1^T X2 = 0 and X1 X2^T = 0.
std::pair<DenseMatrix, DenseMatrix> disjoint_rank_pair(int m, int n, int r1, int r2,
                                                       std::uint64_t seed);

/// Same pair construction from caller-provided orthonormal bases (columns
/// 0..r1-1 feed X1, the next r2 feed X2).
std::pair<DenseMatrix, DenseMatrix> disjoint_rank_pair_from(const DenseMatrix& left_basis,
                                                            const DenseMatrix& right_basis,
                                                            int r1, int r2,
                                                            std::span<const double> coeff1,
                                                            std::span<const double> coeff2);

/// Random m x n matrix of exact rank r (product of Gaussian factors),
/// scaled to unit Frobenius norm.
DenseMatrix random_low_rank(int m, int n, int r, std::uint64_t seed);

/// Random Gaussian linear map from m x n matrices to R^q with entry
/// variance 1/q, as a MatrixSensingOperator.
MatrixSensingOperator random_map(int q, int m, int n, std::uint64_t seed);

}  // namespace riplab::constructions
