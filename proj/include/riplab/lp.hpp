#pragma once

#include "riplab/matrix.hpp"

namespace riplab {

/// Standard-form linear program: minimize cost . x subject to eq x = rhs, x >= 0.
struct LpProblem {
    DenseMatrix eq;
    Vector rhs;
    Vector cost;
};

struct LpOptions {
    double feas_tol = 1e-10;
    double gap_tol = 1e-10;
    int max_iter = 200;
    /// Reduced costs below this (relative) level count as zero in the
    /// optimal-face uniqueness test.
    double degeneracy_tol = 1e-9;
};

enum class SolveStatus { optimal, max_iter, infeasible };

const char* to_string(SolveStatus s);

struct LpResult {
    Vector x;
    Vector reduced_cost;
    SolveStatus status = SolveStatus::max_iter;
    int iterations = 0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    double gap = 0.0;
    double objective = 0.0;
    /// False when the optimal face is detected as non-singleton.
    bool unique = true;
};

/// Mehrotra predictor-corrector interior point with dense normal equations.
/// Dependent equality rows are removed up front via an SVD row basis (the
/// reduced system has orthonormal rows); inconsistent rows mean infeasible.
LpResult solve_lp(const LpProblem& problem, const LpOptions& opts = {});

}  // namespace riplab
