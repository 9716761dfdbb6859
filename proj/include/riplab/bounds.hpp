#pragma once

#include <optional>
#include <string>

#include "riplab/matrix.hpp"

namespace riplab::bounds {

/// Inputs of the stable-recovery error bounds. `k` is the sparsity (or rank)
/// order; `tail` is the compressibility deficit ||beta_-max(k)||_1 (or the
/// nuclear-norm tail in the matrix case). `a`, `b` select the general
/// condition delta_a + C_{a,b,k} theta_{a,b} < 1; when absent the special
/// case a = b = k applies.
struct ErrorBudget {
    double delta = 0.0;
    double theta = 0.0;
    double eps = 0.0;
    double eta = 0.0;
    double tail = 0.0;
    int k = 1;
    std::optional<int> a;
    std::optional<int> b;
    std::optional<double> sigma;
    std::optional<int> n;
    std::optional<int> p;

    void validate() const;
};

/// A bound evaluation; `applicable` is false when the recovery condition
/// fails (non-positive denominator), in which case `value` is meaningless.
struct BoundValue {
    std::string formula;
    double value = 0.0;
    bool applicable = false;
    std::optional<double> probability;  // Gaussian-noise bounds carry one
};

/// C_{a,b,k} = max{ (2k-a)/sqrt(ab), sqrt((2k-a)/a) }.
double c_abk(int a, int b, int k);

/// Error bound for l2-ball constrained l1 minimization (and its nuclear-norm
/// analog). `general` selects the (a, b) form; otherwise a = b = k.
BoundValue l2_noise_bound(const ErrorBudget& budget, bool general = false);

/// Error bound for the Dantzig selector constraint set.
BoundValue dantzig_noise_bound(const ErrorBudget& budget, bool general = false);

struct GaussianBounds {
    BoundValue dantzig;  // probability 1 - 1/sqrt(pi log p)
    BoundValue l2;       // probability 1 - 1/n
    double eta_dantzig = 0.0;  // sigma sqrt(2 log p)
    double eta_l2 = 0.0;       // sigma sqrt(n + 2 sqrt(n log n))
};

/// Both Gaussian-noise bounds with their probability qualifiers.
GaussianBounds gaussian_bounds(double sigma, int k, int p, int n, double delta, double theta,
                               double tail);

struct ProbabilityBound {
    double value = 0.0;   // may be negative (vacuous) or -inf
    bool vacuous = false;
    double log_failure_term = 0.0;  // log of 2 (12ep/(mt))^m exp(-n(t^2/16 - t^3/48))
};

/// Lower bound on P(delta_m^A < t) for the random ensembles.
ProbabilityBound rip_probability_lower(int n, int p, int m, double t);

struct MeasurementPlan {
    int k = 0;
    int p = 0;
    double eps_fail = 0.0;
    double n1 = 0.0;          // guards delta_k < 0.4
    double n2 = 0.0;          // guards delta_2k < 0.6
    double n_min = 0.0;       // max(n1, n2)
    double n_ref_delta_k = 0.0;    // classical count for delta_k < 1/3
    double n_ref_delta_2k = 0.0;   // classical count for delta_2k < 1/2
    double ratio_delta_k = 0.0;    // 115.4 / 162
    double ratio_delta_2k = 0.0;   // 115.4 / 153.6
};

/// Measurement counts for the relaxed condition, with the classical
/// reference counts and the leading-coefficient ratios.
MeasurementPlan min_measurements(int k, int p, double eps_fail);

}  // namespace riplab::bounds
