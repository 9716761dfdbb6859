#include "riplab/bounds.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace riplab::bounds {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

// Shared tail term 2 tail (sqrt(2k) C theta / ((1 - delta - C theta)(2k - a)) + 1/sqrt(k));
// at a = b = k it collapses to (2 tail / sqrt(k)) (sqrt(2) theta / (1 - delta - theta) + 1).
double tail_term(double theta_scaled, double tail, int k, int a, double denominator) {
    const double kk = static_cast<double>(k);
    return 2.0 * tail *
           (std::sqrt(2.0 * kk) * theta_scaled / (denominator * (2.0 * kk - a)) +
            1.0 / std::sqrt(kk));
}

struct GeneralParams {
    int a;
    int b;
    double c;             // C_{a,b,k}
    double theta_scaled;  // C_{a,b,k} * theta
    double denominator;   // 1 - delta - C theta
};

GeneralParams resolve(const ErrorBudget& budget, bool general) {
    GeneralParams g;
    if (general) {
        require(budget.a.has_value() && budget.b.has_value(),
                "general bound requires a and b");
        g.a = *budget.a;
        g.b = *budget.b;
    } else {
        g.a = budget.k;
        g.b = budget.k;
    }
    g.c = c_abk(g.a, g.b, budget.k);
    g.theta_scaled = g.c * budget.theta;
    g.denominator = 1.0 - budget.delta - g.theta_scaled;
    return g;
}

}  // namespace

void ErrorBudget::validate() const {
    require(k >= 1, "ErrorBudget: k must be >= 1");
    require(delta >= 0.0 && theta >= 0.0, "ErrorBudget: delta, theta must be non-negative");
    require(eps >= 0.0 && tail >= 0.0, "ErrorBudget: eps, tail must be non-negative");
    require(eta >= eps, "ErrorBudget: eta must be >= eps");
    if (a) require(*a >= 1 && *a <= k, "ErrorBudget: need 1 <= a <= k");
    if (b) require(*b >= 1, "ErrorBudget: need b >= 1");
    if (sigma) require(*sigma >= 0.0, "ErrorBudget: sigma must be non-negative");
}

double c_abk(int a, int b, int k) {
    require(a >= 1 && a <= k, "c_abk: need 1 <= a <= k");
    require(b >= 1, "c_abk: need b >= 1");
    const double da = a, db = b, dk = k;
    return std::max((2.0 * dk - da) / std::sqrt(da * db), std::sqrt((2.0 * dk - da) / da));
}

BoundValue l2_noise_bound(const ErrorBudget& budget, bool general) {
    budget.validate();
    const GeneralParams g = resolve(budget, general);
    BoundValue out;
    out.formula = general ? "l2_noise_general" : "l2_noise";
    if (g.denominator <= 0.0) return out;  // not applicable
    const double lead = std::sqrt(2.0 * (1.0 + budget.delta) * budget.k / g.a) / g.denominator;
    out.value = lead * (budget.eps + budget.eta) +
                tail_term(g.theta_scaled, budget.tail, budget.k, g.a, g.denominator);
    out.applicable = true;
    return out;
}

BoundValue dantzig_noise_bound(const ErrorBudget& budget, bool general) {
    budget.validate();
    const GeneralParams g = resolve(budget, general);
    BoundValue out;
    out.formula = general ? "dantzig_noise_general" : "dantzig_noise";
    if (g.denominator <= 0.0) return out;
    const double lead = std::sqrt(2.0 * budget.k) / g.denominator;
    out.value = lead * (budget.eps + budget.eta) +
                tail_term(g.theta_scaled, budget.tail, budget.k, g.a, g.denominator);
    out.applicable = true;
    return out;
}

GaussianBounds gaussian_bounds(double sigma, int k, int p, int n, double delta, double theta,
                               double tail) {
    require(sigma >= 0.0, "gaussian_bounds: sigma must be non-negative");
    require(k >= 1 && p >= 2 && n >= 1, "gaussian_bounds: need k >= 1, p >= 2, n >= 1");
    require(delta >= 0.0 && theta >= 0.0 && tail >= 0.0,
            "gaussian_bounds: constants must be non-negative");
    GaussianBounds out;
    out.eta_dantzig = sigma * std::sqrt(2.0 * std::log(static_cast<double>(p)));
    out.eta_l2 = sigma * std::sqrt(n + 2.0 * std::sqrt(n * std::log(static_cast<double>(n))));
    out.dantzig.formula = "gaussian_dantzig";
    out.l2.formula = "gaussian_l2";
    const double denom = 1.0 - delta - theta;
    if (denom <= 0.0) return out;
    const double tail_part =
        (2.0 * tail / std::sqrt(static_cast<double>(k))) * (std::sqrt(2.0) * theta / denom + 1.0);
    out.dantzig.value = (2.0 * std::sqrt(2.0) / denom) *
                            sigma * std::sqrt(2.0 * k * std::log(static_cast<double>(p))) +
                        tail_part;
    out.dantzig.applicable = true;
    out.dantzig.probability = 1.0 - 1.0 / std::sqrt(std::numbers::pi_v<double> *
                                                    std::log(static_cast<double>(p)));
    out.l2.value = (2.0 * std::sqrt(2.0 * (1.0 + delta)) / denom) * out.eta_l2 + tail_part;
    out.l2.applicable = true;
    out.l2.probability = 1.0 - 1.0 / static_cast<double>(n);
    return out;
}

ProbabilityBound rip_probability_lower(int n, int p, int m, double t) {
    require(n >= 1 && p >= 1, "rip_probability_lower: need n, p >= 1");
    require(m >= 1 && m < n, "rip_probability_lower: need 1 <= m < n");
    require(t > 0.0 && t < 1.0, "rip_probability_lower: need 0 < t < 1");
    ProbabilityBound out;
    // log of the failure term to survive extreme parameter ranges.
    out.log_failure_term = std::log(2.0) +
                           m * (std::log(12.0 * std::numbers::e_v<double> * p) -
                                std::log(m * t)) -
                           n * (t * t / 16.0 - t * t * t / 48.0);
    if (out.log_failure_term > 700.0) {
        out.value = -std::numeric_limits<double>::infinity();
        out.vacuous = true;
        return out;
    }
    out.value = 1.0 - std::exp(out.log_failure_term);
    out.vacuous = out.value < 0.0;
    return out;
}

MeasurementPlan min_measurements(int k, int p, double eps_fail) {
    require(k >= 1 && k <= p, "min_measurements: need 1 <= k <= p");
    require(eps_fail > 0.0 && eps_fail < 1.0, "min_measurements: need 0 < eps_fail < 1");
    MeasurementPlan plan;
    plan.k = k;
    plan.p = p;
    plan.eps_fail = eps_fail;
    const double kl = std::log(static_cast<double>(p) / static_cast<double>(k));
    const double l4 = std::log(eps_fail / 4.0);
    const double l2 = std::log(eps_fail / 2.0);
    plan.n1 = 115.4 * (k * (kl + 4.4) - l4);
    plan.n2 = 111.1 * (k * (kl + 3.3) - l4 / 2.0);
    plan.n_min = std::max(plan.n1, plan.n2);
    plan.n_ref_delta_k = 162.0 * (k * (kl + 4.6) - l2);
    plan.n_ref_delta_2k = 153.6 * (k * (kl + 3.5) - l2 / 2.0);
    plan.ratio_delta_k = 115.4 / 162.0;
    plan.ratio_delta_2k = 115.4 / 153.6;
    return plan;
}

}  // namespace riplab::bounds
