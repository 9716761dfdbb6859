#pragma once

#include <optional>

#include "riplab/lp.hpp"
#include "riplab/operators.hpp"

namespace riplab::solvers {

enum class ConstraintKind { equality, l2_ball, dual_inf_ball, dual_spectral_ball };
const char* to_string(ConstraintKind k);

/// Constraint set B of the recovery programs; eta is absent for equality.
struct ConstraintSet {
    ConstraintKind kind = ConstraintKind::equality;
    double eta = 0.0;

    static ConstraintSet equality() { return {ConstraintKind::equality, 0.0}; }
    static ConstraintSet l2_ball(double eta);
    static ConstraintSet dual_inf_ball(double eta);
    static ConstraintSet dual_spectral_ball(double eta);
};

struct SolverOptions {
    LpOptions lp;
    /// Splitting-scheme controls.
    int admm_max_iters = 50'000;
    double admm_tol_abs = 1e-12;
    double admm_tol_rel = 1e-10;
    /// Fixed initial penalty with residual-balancing x2 / /2 adaptation when
    /// the primal/dual residual ratio exceeds 10.
    double admm_rho = 1.0;
};

struct RecoverySolution {
    Vector estimate;
    double objective = 0.0;            // l1 norm of the estimate
    double feasibility_residual = 0.0;  // distance of A beta - y to B
    int iterations = 0;
    SolveStatus status = SolveStatus::max_iter;
    /// Set by the LP paths; nullopt when the solver does not assess it.
    std::optional<bool> unique;
    ConstraintSet constraint;
};

struct MatrixRecoverySolution {
    DenseMatrix estimate;
    double objective = 0.0;            // nuclear norm of the estimate
    double feasibility_residual = 0.0;
    int iterations = 0;
    SolveStatus status = SolveStatus::max_iter;
    std::optional<bool> unique;
    ConstraintSet constraint;
};

/// min ||beta||_1 s.t. A beta = y, as an interior-point LP on the split
/// formulation. Inconsistent y (least-squares residual > 1e-8 ||y||) gives
/// status infeasible. Ties on the optimal face set unique = false.
RecoverySolution basis_pursuit(const SensingMatrix& a, const Vector& y,
                               const SolverOptions& opts = {});

/// min ||beta||_1 s.t. ||A beta - y||_2 <= eta, by ADMM splitting
/// (soft-threshold, l2-ball projection, linear consensus).
RecoverySolution bp_denoise_l2(const SensingMatrix& a, const Vector& y, double eta,
                               const SolverOptions& opts = {});

/// min ||beta||_1 s.t. ||A^T (A beta - y)||_inf <= eta, as an LP.
RecoverySolution dantzig_selector(const SensingMatrix& a, const Vector& y, double eta,
                                  const SolverOptions& opts = {});

/// min ||X||_* s.t. M(X) = y (ADMM; affine projection + singular value
/// soft-thresholding).
MatrixRecoverySolution nuclear_min(const MatrixSensingOperator& op, const Vector& y,
                                   const SolverOptions& opts = {});

/// min ||X||_* s.t. ||M(X) - y||_2 <= eta.
MatrixRecoverySolution nuclear_min_l2(const MatrixSensingOperator& op, const Vector& y,
                                      double eta, const SolverOptions& opts = {});

/// min ||X||_* s.t. ||M*(M(X) - y)|| <= eta (spectral-norm ball).
MatrixRecoverySolution matrix_dantzig(const MatrixSensingOperator& op, const Vector& y,
                                      double eta, const SolverOptions& opts = {});

/// Proximal operator of the l1 norm.
Vector soft_threshold(std::span<const double> v, double tau);

/// Proximal operator of the nuclear norm (soft-thresholding of the
/// singular values).
DenseMatrix singular_value_threshold(const DenseMatrix& x, double tau);

double nuclear_norm(const DenseMatrix& x);

}  // namespace riplab::solvers
