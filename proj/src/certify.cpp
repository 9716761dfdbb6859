#include "riplab/certify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include "riplab/bounds.hpp"
#include "riplab/decomp.hpp"
#include "riplab/lp.hpp"
#include "riplab/rng.hpp"

namespace riplab::certify {

namespace {

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("RIPLAB_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 1;
}

// Run `ntasks` independent tasks on `threads` workers pulling from a shared
// counter. Used for the embarrassingly parallel support enumerations.
template <typename Fn>
void run_tasks(int threads, std::size_t ntasks, Fn&& fn) {
    if (threads <= 1 || ntasks <= 1) {
        for (std::size_t t = 0; t < ntasks; ++t) fn(t, 0);
        return;
    }
    std::atomic<std::size_t> next{0};
    const int nworkers = std::min<std::size_t>(threads, ntasks);
    std::vector<std::thread> pool;
    pool.reserve(nworkers);
    std::vector<std::exception_ptr> errors(nworkers);
    for (int w = 0; w < nworkers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t t = next.fetch_add(1); t < ntasks; t = next.fetch_add(1))
                    fn(t, w);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

void atomic_max(std::atomic<double>& target, double value) {
    double cur = target.load(std::memory_order_relaxed);
    while (value > cur && !target.compare_exchange_weak(cur, value)) {
    }
}

// Visit all k-subsets of {first, ..., n-1} that contain `first`.
template <typename Fn>
void for_each_combination_from(int first, int n, int k, Fn&& fn) {
    std::vector<int> idx(k);
    idx[0] = first;
    for (int i = 1; i < k; ++i) idx[i] = first + i;
    if (idx.back() >= n) return;
    while (true) {
        fn(std::span<const int>(idx));
        int i = k - 1;
        while (i >= 1 && idx[i] == n - k + i) --i;
        if (i < 1) return;  // idx[0] stays fixed
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

Vector embed(std::span<const int> support, std::span<const double> coords, std::size_t p) {
    Vector v(p, 0.0);
    for (std::size_t i = 0; i < support.size(); ++i) v[support[i]] = coords[i];
    return v;
}

// Orthonormalize the columns of a rows x cols Gaussian draw (two passes of
// Gram-Schmidt); redraws a column if it degenerates.
DenseMatrix random_orthonormal(Rng& rng, std::size_t rows, std::size_t cols) {
    DenseMatrix q(rows, cols);
    for (std::size_t j = 0; j < cols; ++j) {
        while (true) {
            Vector w(rows);
            for (auto& x : w) x = rng.normal();
            for (int pass = 0; pass < 2; ++pass)
                for (std::size_t kcol = 0; kcol < j; ++kcol) {
                    double proj = 0.0;
                    for (std::size_t i = 0; i < rows; ++i) proj += q(i, kcol) * w[i];
                    for (std::size_t i = 0; i < rows; ++i) w[i] -= proj * q(i, kcol);
                }
            const double nw = norm2(w);
            if (nw > 1e-6) {
                for (std::size_t i = 0; i < rows; ++i) q(i, j) = w[i] / nw;
                break;
            }
        }
    }
    return q;
}

}  // namespace

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::satisfied: return "satisfied";
        case Verdict::boundary: return "boundary";
        case Verdict::violated: return "violated";
    }
    return "unknown";
}

unsigned long long choose_saturating(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    unsigned long long c = 1;
    for (int i = 1; i <= k; ++i) {
        const unsigned long long num = static_cast<unsigned long long>(n - k + i);
        if (c > std::numeric_limits<unsigned long long>::max() / num)
            return std::numeric_limits<unsigned long long>::max();
        c = c * num / static_cast<unsigned long long>(i);
    }
    return c;
}

RipReport ric_vector(const SensingMatrix& a, int k, const CertifyOptions& opts) {
    const int p = static_cast<int>(a.p());
    if (k < 1 || k > p) throw std::invalid_argument("ric_vector: need 1 <= k <= p");
    const unsigned long long count = choose_saturating(p, k);
    if (count > opts.budget) {
        std::ostringstream msg;
        msg << "ric_vector: " << count << " supports exceed budget " << opts.budget;
        throw BudgetExceeded(msg.str(), count);
    }

    const DenseMatrix g = gram(a);

    struct Best {
        double value = -1.0;
        std::vector<int> support;
        bool upper_side = true;  // lambda_max side vs lambda_min side
    };
    const int threads = resolve_threads(opts.threads);
    std::vector<Best> best(threads <= 1 ? 1 : threads);

    run_tasks(threads, static_cast<std::size_t>(p - k + 1), [&](std::size_t task, int worker) {
        Best& local = best[worker];
        for_each_combination_from(static_cast<int>(task), p, k, [&](std::span<const int> t) {
            const EigExtremes e = gram_block_eig_extremes(g, t);
            const double over = e.max - 1.0;
            const double under = 1.0 - e.min;
            const double d = std::max(over, under);
            if (d > local.value) {
                local.value = d;
                local.support.assign(t.begin(), t.end());
                local.upper_side = over >= under;
            }
        });
    });

    Best win;
    for (const auto& b : best)
        if (b.value > win.value) win = b;

    RipReport report;
    report.orders = {k};
    report.exact = true;
    report.enumerated = count;
    report.value = win.value;
    report.support1 = win.support;

    // Recover the extremal unit vector from the winning Gram block.
    DenseMatrix block(win.support.size(), win.support.size());
    for (std::size_t i = 0; i < win.support.size(); ++i)
        for (std::size_t j = 0; j < win.support.size(); ++j)
            block(i, j) = g(win.support[i], win.support[j]);
    const SymEigResult eig = sym_eig(block);
    const std::size_t col = win.upper_side ? 0 : win.support.size() - 1;
    report.witness1 = embed(win.support, eig.eigenvectors.column(col), p);
    return report;
}

RipReport roc_vector(const SensingMatrix& a, int k1, int k2, const CertifyOptions& opts) {
    const int p = static_cast<int>(a.p());
    if (k1 < 1 || k2 < 1 || k1 + k2 > p)
        throw std::invalid_argument("roc_vector: need k1, k2 >= 1 and k1 + k2 <= p");

    const bool dedupe = (k1 == k2);
    unsigned long long count = std::numeric_limits<unsigned long long>::max();
    {
        const unsigned long long c1 = choose_saturating(p, k1);
        const unsigned long long c2 = choose_saturating(p - k1, k2);
        if (c1 != 0 && c2 <= std::numeric_limits<unsigned long long>::max() / c1)
            count = c1 * c2 / (dedupe ? 2ULL : 1ULL);
    }
    if (count > opts.budget) {
        std::ostringstream msg;
        msg << "roc_vector: " << count << " support pairs exceed budget " << opts.budget;
        throw BudgetExceeded(msg.str(), count);
    }

    const DenseMatrix g = gram(a);

    // Coherence seeds the pruning bound: theta_{1,1} <= theta_{k1,k2} and the
    // seed value is achieved by some pair, so pruning stays exact.
    double seed_value = 0.0;
    int seed_i = 0, seed_j = 1;
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j)
            if (std::abs(g(i, j)) > seed_value) {
                seed_value = std::abs(g(i, j));
                seed_i = i;
                seed_j = j;
            }

    std::atomic<double> prune_sq{seed_value * seed_value};

    struct Best {
        double value = -1.0;
        std::vector<int> t1, t2;
    };
    const int threads = resolve_threads(opts.threads);
    std::vector<Best> best(threads <= 1 ? 1 : threads);

    constexpr int kStackCap = 16;
    if (std::max(k1, k2) > kStackCap)
        throw std::invalid_argument("roc_vector: orders above 16 are not supported");

    run_tasks(threads, static_cast<std::size_t>(p - k1 + 1), [&](std::size_t task, int worker) {
        Best& local = best[worker];
        std::vector<int> candidates;
        Vector w, prefix;
        std::vector<int> chosen(k2);
        double block[kStackCap * kStackCap];

        for_each_combination_from(static_cast<int>(task), p, k1, [&](std::span<const int> t1) {
            candidates.clear();
            const int lo = dedupe ? t1[0] + 1 : 0;
            for (int c = lo; c < p; ++c) {
                if (std::find(t1.begin(), t1.end(), c) == t1.end()) candidates.push_back(c);
            }
            if (static_cast<int>(candidates.size()) < k2) return;

            // Column weights: w[c] = || G(t1, c) ||^2; a k2-subset's weight
            // sum equals the squared Frobenius norm of its Gram block, which
            // dominates the largest singular value.
            w.resize(candidates.size());
            for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
                double s = 0.0;
                for (int t : t1) {
                    const double gtc = g(t, candidates[ci]);
                    s += gtc * gtc;
                }
                w[ci] = s;
            }
            std::vector<std::size_t> order(candidates.size());
            std::iota(order.begin(), order.end(), 0);
            std::sort(order.begin(), order.end(),
                      [&](std::size_t x, std::size_t y) { return w[x] > w[y]; });

            prefix.assign(candidates.size() + 1, 0.0);
            for (std::size_t i = 0; i < candidates.size(); ++i)
                prefix[i + 1] = prefix[i] + w[order[i]];

            // Depth-first over k2-subsets of the sorted candidates, pruning
            // branches whose optimistic Frobenius bound cannot beat the
            // incumbent.
            const std::size_t ncand = candidates.size();
            auto dfs = [&](auto&& self, std::size_t start, int depth, double sum) -> void {
                if (depth == k2) {
                    const double bound = prune_sq.load(std::memory_order_relaxed);
                    if (sum <= bound) return;
                    for (int i = 0; i < k1; ++i)
                        for (int j = 0; j < k2; ++j)
                            block[i * k2 + j] = g(t1[i], candidates[chosen[j]]);
                    const double sigma = small_sigma_max(block, k1, k2);
                    if (sigma > local.value) {
                        local.value = sigma;
                        local.t1.assign(t1.begin(), t1.end());
                        local.t2.resize(k2);
                        for (int j = 0; j < k2; ++j) local.t2[j] = candidates[chosen[j]];
                        atomic_max(prune_sq, sigma * sigma);
                    }
                    return;
                }
                const int remaining = k2 - depth;
                for (std::size_t i = start; i + remaining <= ncand; ++i) {
                    const double optimistic = sum + (prefix[i + remaining] - prefix[i]);
                    if (optimistic <= prune_sq.load(std::memory_order_relaxed)) break;
                    chosen[depth] = static_cast<int>(order[i]);
                    self(self, i + 1, depth + 1, sum + w[order[i]]);
                }
            };
            dfs(dfs, 0, 0, 0.0);
        });
    });

    Best win;
    for (const auto& b : best)
        if (b.value > win.value) win = b;

    if (win.value < 0.0) {
        // Nothing beat the coherence seed: theta equals it. Build a witness
        // pair around the seeding entry.
        win.value = seed_value;
        std::vector<int> used{seed_i, seed_j};
        auto fill = [&](std::vector<int>& t, int want) {
            for (int c = 0; c < p && static_cast<int>(t.size()) < want; ++c)
                if (std::find(used.begin(), used.end(), c) == used.end()) {
                    t.push_back(c);
                    used.push_back(c);
                }
            std::sort(t.begin(), t.end());
        };
        win.t1 = {seed_i};
        fill(win.t1, k1);
        win.t2 = {seed_j};
        fill(win.t2, k2);
    }

    RipReport report;
    report.orders = {k1, k2};
    report.exact = true;
    report.enumerated = count;
    report.value = std::max(win.value, 0.0);
    report.support1 = win.t1;
    report.support2 = win.t2;

    DenseMatrix block(k1, k2);
    for (int i = 0; i < k1; ++i)
        for (int j = 0; j < k2; ++j) block(i, j) = g(win.t1[i], win.t2[j]);
    const SvdResult f = svd(block);
    report.witness1 = embed(win.t1, f.u.column(0), p);
    report.witness2 = embed(win.t2, f.v.column(0), p);
    return report;
}

NspReport nsp_check(const SensingMatrix& a, int k, const CertifyOptions& opts) {
    const int p = static_cast<int>(a.p());
    const int n = static_cast<int>(a.n());
    if (k < 1 || k > p) throw std::invalid_argument("nsp_check: need 1 <= k <= p");

    const unsigned long long supports = choose_saturating(p, k);
    const unsigned long long patterns = k >= 1 ? (1ULL << (k - 1)) : 1ULL;
    if (supports > opts.budget / patterns) {
        std::ostringstream msg;
        msg << "nsp_check: " << supports << " supports x " << patterns
            << " sign patterns exceed budget " << opts.budget;
        throw BudgetExceeded(msg.str(), supports * patterns);
    }

    // Shared LP structure: variables (h+, h-, t), constraints
    // A h+ - A h- = 0 and sum(h+) + sum(h-) + t = 1.
    const std::size_t nvar = 2 * static_cast<std::size_t>(p) + 1;
    DenseMatrix eq(n + 1, nvar);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < p; ++j) {
            eq(i, j) = a.matrix(i, j);
            eq(i, p + j) = -a.matrix(i, j);
        }
    for (std::size_t j = 0; j < nvar; ++j) eq(n, j) = 1.0;
    Vector rhs(n + 1, 0.0);
    rhs[n] = 1.0;

    NspReport report;
    report.k = k;
    report.worst_ratio = -1.0;

    std::vector<int> signs(k);
    for (int first = 0; first + k <= p; ++first) {
        for_each_combination_from(first, p, k, [&](std::span<const int> t) {
            for (unsigned long long mask = 0; mask < patterns; ++mask) {
                signs[0] = 1;  // global sign symmetry: fix the first to +1
                for (int i = 1; i < k; ++i) signs[i] = (mask >> (i - 1)) & 1ULL ? -1 : 1;

                Vector cost(nvar, 0.0);
                for (int i = 0; i < k; ++i) {
                    cost[t[i]] = -static_cast<double>(signs[i]);
                    cost[p + t[i]] = static_cast<double>(signs[i]);
                }
                LpResult lp = solve_lp({eq, rhs, cost});
                if (lp.status != SolveStatus::optimal) {
                    std::ostringstream msg;
                    msg << "nsp_check: LP " << to_string(lp.status) << " for support {";
                    for (int i = 0; i < k; ++i) msg << (i ? "," : "") << t[i];
                    msg << "} signs {";
                    for (int i = 0; i < k; ++i) msg << (i ? "," : "") << signs[i];
                    msg << "}";
                    throw NumericalError(msg.str());
                }
                ++report.lp_count;
                const double value = -lp.objective;
                if (value > report.worst_ratio) {
                    report.worst_ratio = value;
                    report.worst_support.assign(t.begin(), t.end());
                    report.worst_signs = signs;
                    report.witness.assign(p, 0.0);
                    for (int j = 0; j < p; ++j)
                        report.witness[j] = lp.x[j] - lp.x[p + j];
                }
            }
        });
    }
    report.worst_ratio = std::max(report.worst_ratio, 0.0);
    report.holds = report.worst_ratio < 0.5 - 1e-9;
    return report;
}

ConditionEvaluation evaluate_condition(const SensingMatrix& a, int a_order, int b_order, int k,
                                       const CertifyOptions& opts) {
    const int p = static_cast<int>(a.p());
    if (!(a_order >= 1 && a_order <= k))
        throw std::invalid_argument("evaluate_condition: need 1 <= a <= k");
    if (a_order + b_order > p)
        throw std::invalid_argument("evaluate_condition: need a + b <= p");

    ConditionEvaluation ev;
    ev.a = a_order;
    ev.b = b_order;
    ev.k = k;
    ev.c_value = bounds::c_abk(a_order, b_order, k);
    ev.delta_report = ric_vector(a, a_order, opts);
    ev.theta_report = roc_vector(a, a_order, b_order, opts);
    ev.delta_a = ev.delta_report.value;
    ev.theta_ab = ev.theta_report.value;
    ev.condition_value = ev.delta_a + ev.c_value * ev.theta_ab;
    ev.satisfied = ev.condition_value < 1.0 - 1e-9;
    if (std::abs(ev.condition_value - 1.0) <= 1e-9)
        ev.verdict = Verdict::boundary;
    else
        ev.verdict = ev.satisfied ? Verdict::satisfied : Verdict::violated;
    return ev;
}

namespace {

// Quadratic form value ||M vec(X)||^2 through the precomputed Gram of M.
double map_energy(const DenseMatrix& q, const Vector& x) { return dot(x, matvec(q, x)); }

// Extreme eigenpair (largest if `top`) of K^T Q K where K maps vec(U) to
// vec(U V^T) for a fixed orthonormal V.
std::pair<double, DenseMatrix> factor_eig_step(const DenseMatrix& q, const DenseMatrix& v,
                                               std::size_t m, bool top) {
    const std::size_t n = v.rows(), r = v.cols();
    DenseMatrix kmat(m * n, m * r);
    for (std::size_t b = 0; b < r; ++b)
        for (std::size_t c = 0; c < n; ++c) {
            const double vcb = v(c, b);
            if (vcb == 0.0) continue;
            for (std::size_t row = 0; row < m; ++row) kmat(c * m + row, b * m + row) = vcb;
        }
    const DenseMatrix h = matmul(transpose(kmat), matmul(q, kmat));
    const SymEigResult eig = sym_eig(h);
    const std::size_t col = top ? 0 : h.rows() - 1;
    const double lambda = top ? eig.eigenvalues.front() : eig.eigenvalues.back();
    DenseMatrix u(m, r);
    for (std::size_t b = 0; b < r; ++b)
        for (std::size_t row = 0; row < m; ++row) u(row, b) = eig.eigenvectors(b * m + row, col);
    return {lambda, u};
}

}  // namespace

RipReport ric_matrix_lower(const MatrixSensingOperator& op, int r, int restarts,
                           std::uint64_t seed, const AltMaxOptions& opts) {
    const std::size_t m = op.m, n = op.n;
    if (r < 1 || static_cast<std::size_t>(r) > std::min(m, n))
        throw std::invalid_argument("ric_matrix_lower: need 1 <= r <= min(m, n)");
    if (restarts < 0) throw std::invalid_argument("ric_matrix_lower: negative restarts");

    RipReport report;
    report.orders = {r};
    report.exact = false;
    report.enumerated = static_cast<unsigned long long>(restarts);
    if (restarts == 0) return report;

    const DenseMatrix q = gram(op.as_sensing_matrix());

    // Deterministic spectral seeds (see roc_matrix_lower).
    const SymEigResult spec = sym_eig(q);
    auto right_factors = [&](std::size_t col) {
        const SvdResult f = svd(devec(spec.eigenvectors.column(col), m, n));
        DenseMatrix v(n, r);
        for (int b = 0; b < r; ++b)
            for (std::size_t row = 0; row < n; ++row) v(row, b) = f.v(row, b);
        return v;
    };

    double best_hi = 1.0, best_lo = 1.0;  // extreme energies found
    DenseMatrix best_hi_x, best_lo_x;

    for (int restart = 0; restart < restarts; ++restart) {
        for (const bool top : {true, false}) {
            Rng rng(seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(2 * restart + top));
            DenseMatrix v = restart == 0
                                ? right_factors(top ? 0 : spec.eigenvalues.size() - 1)
                                : random_orthonormal(rng, n, r);
            double lambda_prev = top ? -1e300 : 1e300;
            DenseMatrix x;
            for (int it = 0; it < opts.max_iters; ++it) {
                auto [lambda, u] = factor_eig_step(q, v, m, top);
                x = matmul(u, transpose(v));
                if (std::abs(lambda - lambda_prev) < opts.tol) {
                    lambda_prev = lambda;
                    break;
                }
                lambda_prev = lambda;
                const SvdResult f = svd(x);
                DenseMatrix vnew(n, r);
                for (int b = 0; b < r; ++b)
                    for (std::size_t row = 0; row < n; ++row) vnew(row, b) = f.v(row, b);
                v = std::move(vnew);
            }
            const double energy = map_energy(q, vec(x));
            if (top && energy > best_hi) {
                best_hi = energy;
                best_hi_x = x;
            }
            if (!top && energy < best_lo) {
                best_lo = energy;
                best_lo_x = x;
            }
        }
    }

    const double over = best_hi - 1.0;
    const double under = 1.0 - best_lo;
    report.value = std::max({over, under, 0.0});
    if (over >= under && !best_hi_x.empty())
        report.witness_mat1 = best_hi_x;
    else if (!best_lo_x.empty())
        report.witness_mat1 = best_lo_x;
    return report;
}

namespace {

// Orthonormal bases of the column and row spaces of x (rank from SVD).
struct Spaces {
    DenseMatrix left;   // m x rank
    DenseMatrix right;  // n x rank
};

Spaces spaces_of(const DenseMatrix& x) {
    const SvdResult f = svd(x);
    const std::size_t rank = std::max<std::size_t>(f.numerical_rank, 1);
    Spaces s{DenseMatrix(x.rows(), rank), DenseMatrix(x.cols(), rank)};
    for (std::size_t j = 0; j < rank; ++j) {
        for (std::size_t i = 0; i < x.rows(); ++i) s.left(i, j) = f.u(i, j);
        for (std::size_t i = 0; i < x.cols(); ++i) s.right(i, j) = f.v(i, j);
    }
    return s;
}

// (I - LL^T) c (I - RR^T): projection of c orthogonally to the given spaces.
DenseMatrix project_out(const DenseMatrix& c, const Spaces& s) {
    const DenseMatrix lt_c = matmul(transpose(s.left), c);
    DenseMatrix out = c - matmul(s.left, lt_c);
    const DenseMatrix out_r = matmul(out, s.right);
    out = out - matmul(out_r, transpose(s.right));
    return out;
}

// Best unit-Frobenius rank-<=r approximation direction of c; zero norm
// signalled by `ok = false`.
DenseMatrix truncate_normalized(const DenseMatrix& c, int r, bool& ok) {
    const SvdResult f = svd(c);
    DenseMatrix t(c.rows(), c.cols());
    double norm_sq = 0.0;
    const std::size_t use = std::min<std::size_t>(r, f.singular_values.size());
    for (std::size_t idx = 0; idx < use; ++idx) {
        const double s = f.singular_values[idx];
        if (s <= 0.0) break;
        for (std::size_t i = 0; i < c.rows(); ++i)
            for (std::size_t j = 0; j < c.cols(); ++j)
                t(i, j) += s * f.u(i, idx) * f.v(j, idx);
        norm_sq += s * s;
    }
    if (norm_sq <= 1e-300) {
        ok = false;
        return t;
    }
    ok = true;
    return (1.0 / std::sqrt(norm_sq)) * t;
}

}  // namespace

namespace {

// Split the SVD of a candidate direction into a disjoint (X, Y) start: the
// top r1 singular triplets feed X, the next r2 feed Y. Zero singular values
// fall back to the completed basis columns with unit coefficients.
std::pair<DenseMatrix, DenseMatrix> split_direction(const DenseMatrix& d, int r1, int r2) {
    const SvdResult f = svd(d);
    const std::size_t m = d.rows(), n = d.cols();
    DenseMatrix x(m, n), y(m, n);
    auto add = [&](DenseMatrix& target, std::size_t idx, double coef) {
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) target(i, j) += coef * f.u(i, idx) * f.v(j, idx);
    };
    for (int t = 0; t < r1; ++t)
        add(x, t, f.singular_values[t] > 1e-12 ? f.singular_values[t] : 1.0);
    for (int t = 0; t < r2; ++t) {
        const std::size_t idx = r1 + t;
        add(y, idx, f.singular_values[idx] > 1e-12 ? f.singular_values[idx] : 1.0);
    }
    const double nx = frobenius_norm(x), ny = frobenius_norm(y);
    if (nx > 0.0) x = (1.0 / nx) * x;
    if (ny > 0.0) y = (1.0 / ny) * y;
    return {std::move(x), std::move(y)};
}

}  // namespace

RipReport roc_matrix_lower(const MatrixSensingOperator& op, int r1, int r2, int restarts,
                           std::uint64_t seed, const AltMaxOptions& opts) {
    const std::size_t m = op.m, n = op.n;
    if (r1 < 1 || r2 < 1 || static_cast<std::size_t>(r1 + r2) > std::min(m, n))
        throw std::invalid_argument("roc_matrix_lower: need r1 + r2 <= min(m, n)");
    if (restarts < 0) throw std::invalid_argument("roc_matrix_lower: negative restarts");

    RipReport report;
    report.orders = {r1, r2};
    report.exact = false;
    report.enumerated = static_cast<unsigned long long>(restarts);
    if (restarts == 0) return report;

    // The extreme eigenvectors of M^T M point at the most non-isometric
    // matrix directions; splitting their SVD makes strong deterministic
    // starts (exact for the annihilating constructions).
    const SymEigResult spec = sym_eig(gram(op.as_sensing_matrix()));
    const DenseMatrix dir_min = devec(spec.eigenvectors.column(spec.eigenvalues.size() - 1), m, n);
    const DenseMatrix dir_max = devec(spec.eigenvectors.column(0), m, n);

    double best = -1.0;
    DenseMatrix best_x, best_y;

    for (int restart = 0; restart < restarts; ++restart) {
        Rng rng(seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(restart + 1));
        DenseMatrix x, y;
        if (restart == 0) {
            std::tie(x, y) = split_direction(dir_min, r1, r2);
        } else if (restart == 1) {
            std::tie(x, y) = split_direction(dir_max, r1, r2);
        } else {
            // Simultaneous-SVD start: shared bases, disjoint index blocks.
            const DenseMatrix ub = random_orthonormal(rng, m, r1 + r2);
            const DenseMatrix vb = random_orthonormal(rng, n, r1 + r2);
            x = DenseMatrix(m, n);
            y = DenseMatrix(m, n);
            for (int idx = 0; idx < r1 + r2; ++idx) {
                const double coef = (0.25 + rng.uniform()) / std::sqrt(idx < r1 ? r1 : r2);
                DenseMatrix& target = idx < r1 ? x : y;
                for (std::size_t i = 0; i < m; ++i)
                    for (std::size_t j = 0; j < n; ++j)
                        target(i, j) += coef * ub(i, idx) * vb(j, idx);
            }
            const double nx = frobenius_norm(x), ny = frobenius_norm(y);
            x = (1.0 / nx) * x;
            y = (1.0 / ny) * y;
        }

        double obj_prev = -1e300;
        for (int it = 0; it < opts.max_iters; ++it) {
            const double gval = dot(apply_map(op, x), apply_map(op, y));
            const double s = gval >= 0.0 ? 1.0 : -1.0;

            // X-update: maximize s <M(X), M(Y)> = <X, s M*(M(Y))> over
            // unit-Frobenius rank-<=r1 X orthogonal to Y's spaces.
            const DenseMatrix cy = adjoint_map(op, apply_map(op, y));
            bool ok = false;
            const DenseMatrix xc = truncate_normalized(project_out(s * cy, spaces_of(y)), r1, ok);
            if (ok) x = xc;

            const DenseMatrix cx = adjoint_map(op, apply_map(op, x));
            const double s2 = dot(apply_map(op, x), apply_map(op, y)) >= 0.0 ? 1.0 : -1.0;
            const DenseMatrix yc =
                truncate_normalized(project_out(s2 * cx, spaces_of(x)), r2, ok);
            if (ok) y = yc;

            const double obj = std::abs(dot(apply_map(op, x), apply_map(op, y)));
            if (std::abs(obj - obj_prev) < opts.tol) {
                obj_prev = obj;
                break;
            }
            obj_prev = obj;
        }
        if (obj_prev > best) {
            best = obj_prev;
            best_x = x;
            best_y = y;
        }
    }

    report.value = std::max(best, 0.0);
    report.witness_mat1 = best_x;
    report.witness_mat2 = best_y;
    return report;
}

double reevaluate_witness(const SensingMatrix& a, const RipReport& report) {
    if (!report.witness2.empty()) {
        const Vector lhs = riplab::apply(a, report.witness1);
        const Vector rhs = riplab::apply(a, report.witness2);
        return std::abs(dot(lhs, rhs));
    }
    const Vector img = riplab::apply(a, report.witness1);
    return std::abs(dot(img, img) - 1.0);
}

double reevaluate_witness(const MatrixSensingOperator& op, const RipReport& report) {
    if (report.witness_mat2.has_value()) {
        const Vector lhs = apply_map(op, *report.witness_mat1);
        const Vector rhs = apply_map(op, *report.witness_mat2);
        return std::abs(dot(lhs, rhs));
    }
    const Vector img = apply_map(op, *report.witness_mat1);
    return std::abs(dot(img, img) - 1.0);
}

}  // namespace riplab::certify
