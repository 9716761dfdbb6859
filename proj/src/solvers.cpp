#include "riplab/solvers.hpp"

#include <cmath>
#include <functional>

#include "riplab/decomp.hpp"

namespace riplab::solvers {

namespace {

void require_eta(double eta) {
    if (!(eta >= 0.0)) throw std::invalid_argument("constraint radius eta must be >= 0");
}

Vector project_l2_ball(Vector v, double radius) {
    const double nv = norm2(v);
    if (nv > radius) {
        const double s = radius > 0.0 ? radius / nv : 0.0;
        for (double& x : v) x *= s;
    }
    return v;
}

}  // namespace

const char* to_string(ConstraintKind k) {
    switch (k) {
        case ConstraintKind::equality: return "equality";
        case ConstraintKind::l2_ball: return "l2_ball";
        case ConstraintKind::dual_inf_ball: return "dual_inf_ball";
        case ConstraintKind::dual_spectral_ball: return "dual_spectral_ball";
    }
    return "unknown";
}

ConstraintSet ConstraintSet::l2_ball(double eta) {
    require_eta(eta);
    return {ConstraintKind::l2_ball, eta};
}

ConstraintSet ConstraintSet::dual_inf_ball(double eta) {
    require_eta(eta);
    return {ConstraintKind::dual_inf_ball, eta};
}

ConstraintSet ConstraintSet::dual_spectral_ball(double eta) {
    require_eta(eta);
    return {ConstraintKind::dual_spectral_ball, eta};
}

Vector soft_threshold(std::span<const double> v, double tau) {
    Vector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double mag = std::abs(v[i]) - tau;
        out[i] = mag > 0.0 ? (v[i] > 0.0 ? mag : -mag) : 0.0;
    }
    return out;
}

DenseMatrix singular_value_threshold(const DenseMatrix& x, double tau) {
    const SvdResult f = svd(x);
    DenseMatrix out(x.rows(), x.cols());
    for (std::size_t t = 0; t < f.singular_values.size(); ++t) {
        const double s = f.singular_values[t] - tau;
        if (s <= 0.0) continue;
        for (std::size_t i = 0; i < x.rows(); ++i)
            for (std::size_t j = 0; j < x.cols(); ++j) out(i, j) += s * f.u(i, t) * f.v(j, t);
    }
    return out;
}

double nuclear_norm(const DenseMatrix& x) {
    const SvdResult f = svd(x);
    double s = 0.0;
    for (double v : f.singular_values) s += v;
    return s;
}

RecoverySolution basis_pursuit(const SensingMatrix& a, const Vector& y,
                               const SolverOptions& opts) {
    const std::size_t n = a.n(), p = a.p();
    if (y.size() != n) throw std::invalid_argument("basis_pursuit: y has wrong length");

    RecoverySolution sol;
    sol.constraint = ConstraintSet::equality();

    const LstsqResult ls = lstsq(a.matrix, y);
    if (ls.residual_norm > 1e-8 * std::max(norm2(y), 1e-30)) {
        sol.status = SolveStatus::infeasible;
        sol.estimate.assign(p, 0.0);
        sol.feasibility_residual = ls.residual_norm;
        return sol;
    }

    // Split formulation: variables (beta+, beta-), G = [A | -A], cost 1.
    DenseMatrix g(n, 2 * p);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < p; ++j) {
            g(i, j) = a.matrix(i, j);
            g(i, p + j) = -a.matrix(i, j);
        }
    const LpResult lp = solve_lp({std::move(g), y, Vector(2 * p, 1.0)}, opts.lp);

    sol.estimate.resize(p);
    for (std::size_t j = 0; j < p; ++j) sol.estimate[j] = lp.x[j] - lp.x[p + j];
    sol.objective = norm1(sol.estimate);
    const Vector r = riplab::apply(a, sol.estimate) - y;
    sol.feasibility_residual = norm2(r);
    sol.iterations = lp.iterations;
    sol.status = lp.status;
    if (lp.status == SolveStatus::optimal) sol.unique = lp.unique;
    return sol;
}

RecoverySolution dantzig_selector(const SensingMatrix& a, const Vector& y, double eta,
                                  const SolverOptions& opts) {
    const std::size_t n = a.n(), p = a.p();
    if (y.size() != n) throw std::invalid_argument("dantzig_selector: y has wrong length");
    require_eta(eta);

    const DenseMatrix b = gram(a);
    const Vector d = adjoint_apply(a, y);

    // (beta+, beta-, s1, s2):  B(beta+ - beta-) + s1 = d + eta,
    //                         -B(beta+ - beta-) + s2 = eta - d.
    const std::size_t nvar = 4 * p;
    DenseMatrix g(2 * p, nvar);
    Vector rhs(2 * p);
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            g(i, j) = b(i, j);
            g(i, p + j) = -b(i, j);
            g(p + i, j) = -b(i, j);
            g(p + i, p + j) = b(i, j);
        }
        g(i, 2 * p + i) = 1.0;
        g(p + i, 3 * p + i) = 1.0;
        rhs[i] = d[i] + eta;
        rhs[p + i] = eta - d[i];
    }
    Vector cost(nvar, 0.0);
    for (std::size_t j = 0; j < 2 * p; ++j) cost[j] = 1.0;

    const LpResult lp = solve_lp({std::move(g), std::move(rhs), std::move(cost)}, opts.lp);

    RecoverySolution sol;
    sol.constraint = ConstraintSet::dual_inf_ball(eta);
    sol.estimate.resize(p);
    for (std::size_t j = 0; j < p; ++j) sol.estimate[j] = lp.x[j] - lp.x[p + j];
    sol.objective = norm1(sol.estimate);
    const Vector res = riplab::apply(a, sol.estimate) - y;
    sol.feasibility_residual = std::max(0.0, dual_norm(a, res) - eta);
    sol.iterations = lp.iterations;
    sol.status = lp.status;
    if (lp.status == SolveStatus::optimal) sol.unique = lp.unique;
    return sol;
}

namespace {

// Two-block ADMM for min f(z1) s.t. z1 = x, z2 = W x - w0, z2 in a ball,
// where f is the l1 or nuclear norm. The x-update solves the consensus
// normal equations (I + W^T W) x = rhs with a factorization reused across
// iterations and penalty changes.
struct SplitAdmm {
    // Problem pieces supplied by the caller.
    const DenseMatrix& w;       // second block operator
    Vector w0;                  // second block offset (z2 = W x - w0)
    std::function<Vector(const Vector&, double)> prox1;   // prox of f at scale 1/rho
    std::function<Vector(const Vector&)> project2;        // projection for z2

    int max_iters;
    double tol_abs;
    double tol_rel;
    double rho;

    Vector x;  // final iterate
    int iterations = 0;
    bool converged = false;

    void run() {
        const std::size_t p = w.cols(), n = w.rows();
        DenseMatrix normal = matmul(transpose(w), w);
        for (std::size_t i = 0; i < p; ++i) normal(i, i) += 1.0;
        const DenseMatrix chol = cholesky_factor(normal);

        x.assign(p, 0.0);
        Vector z1(p, 0.0), z2(n, 0.0), u1(p, 0.0), u2(n, 0.0);
        Vector z1_prev, z2_prev;

        for (int it = 0; it < max_iters; ++it) {
            iterations = it + 1;
            // x-update.
            Vector rhs(p);
            for (std::size_t j = 0; j < p; ++j) rhs[j] = z1[j] - u1[j];
            Vector t2(n);
            for (std::size_t i = 0; i < n; ++i) t2[i] = w0[i] + z2[i] - u2[i];
            const Vector wt = matvec_t(w, t2);
            for (std::size_t j = 0; j < p; ++j) rhs[j] += wt[j];
            x = cholesky_solve(chol, rhs);

            // z-updates (prox / projection).
            z1_prev = z1;
            z2_prev = z2;
            Vector v1(p);
            for (std::size_t j = 0; j < p; ++j) v1[j] = x[j] + u1[j];
            z1 = prox1(v1, 1.0 / rho);
            const Vector wx = matvec(w, x);
            Vector v2(n);
            for (std::size_t i = 0; i < n; ++i) v2[i] = wx[i] - w0[i] + u2[i];
            z2 = project2(v2);

            // scaled dual update and residuals.
            double prim2 = 0.0;
            for (std::size_t j = 0; j < p; ++j) {
                const double r = x[j] - z1[j];
                u1[j] += r;
                prim2 += r * r;
            }
            for (std::size_t i = 0; i < n; ++i) {
                const double r = wx[i] - w0[i] - z2[i];
                u2[i] += r;
                prim2 += r * r;
            }
            // dual residual rho * K^T (z - z_prev).
            Vector dz2(n);
            for (std::size_t i = 0; i < n; ++i) dz2[i] = z2[i] - z2_prev[i];
            Vector dual_vec = matvec_t(w, dz2);
            for (std::size_t j = 0; j < p; ++j) dual_vec[j] += z1[j] - z1_prev[j];
            const double dual = rho * norm2(dual_vec);
            const double prim = std::sqrt(prim2);

            double kx_norm = norm2(wx);
            kx_norm = std::sqrt(kx_norm * kx_norm + dot(x, x));
            double z_norm = std::sqrt(dot(z1, z1) + dot(z2, z2));
            const double eps_prim = std::sqrt(static_cast<double>(p + n)) * tol_abs +
                                    tol_rel * std::max({kx_norm, z_norm, norm2(w0)});
            Vector atu = matvec_t(w, u2);
            for (std::size_t j = 0; j < p; ++j) atu[j] += u1[j];
            const double eps_dual = std::sqrt(static_cast<double>(p)) * tol_abs +
                                    tol_rel * rho * norm2(atu);
            if (prim <= eps_prim && dual <= eps_dual) {
                converged = true;
                return;
            }

            // Residual balancing keeps the two rates comparable.
            if (prim > 10.0 * dual && dual > 0.0) {
                rho *= 2.0;
                for (double& v : u1) v *= 0.5;
                for (double& v : u2) v *= 0.5;
            } else if (dual > 10.0 * prim && prim > 0.0) {
                rho *= 0.5;
                for (double& v : u1) v *= 2.0;
                for (double& v : u2) v *= 2.0;
            }
        }
    }
};

}  // namespace

RecoverySolution bp_denoise_l2(const SensingMatrix& a, const Vector& y, double eta,
                               const SolverOptions& opts) {
    const std::size_t p = a.p();
    if (y.size() != a.n()) throw std::invalid_argument("bp_denoise_l2: y has wrong length");
    require_eta(eta);

    RecoverySolution sol;
    sol.constraint = ConstraintSet::l2_ball(eta);

    const LstsqResult ls = lstsq(a.matrix, y);
    if (ls.residual_norm > eta + 1e-8 * std::max(norm2(y), 1e-30)) {
        sol.status = SolveStatus::infeasible;
        sol.estimate.assign(p, 0.0);
        sol.feasibility_residual = ls.residual_norm - eta;
        return sol;
    }

    SplitAdmm admm{
        a.matrix,
        y,
        [](const Vector& v, double tau) { return soft_threshold(v, tau); },
        [eta](const Vector& v) { return project_l2_ball(v, eta); },
        opts.admm_max_iters,
        opts.admm_tol_abs,
        opts.admm_tol_rel,
        opts.admm_rho,
    };
    admm.run();

    sol.estimate = admm.x;
    sol.objective = norm1(sol.estimate);
    sol.feasibility_residual =
        std::max(0.0, norm2(riplab::apply(a, sol.estimate) - y) - eta);
    sol.iterations = admm.iterations;
    sol.status = admm.converged ? SolveStatus::optimal : SolveStatus::max_iter;
    return sol;
}

MatrixRecoverySolution nuclear_min(const MatrixSensingOperator& op, const Vector& y,
                                   const SolverOptions& opts) {
    const std::size_t mn = op.m * op.n;
    if (y.size() != op.q()) throw std::invalid_argument("nuclear_min: y has wrong length");

    MatrixRecoverySolution sol;
    sol.constraint = ConstraintSet::equality();

    // Affine projection onto {M x = y} built from the SVD row space; robust
    // to rank-deficient maps.
    const SvdResult f = svd(op.matrix);
    const double smax = f.singular_values.front();
    std::size_t rank = 0;
    for (double s : f.singular_values)
        if (s > 1e-12 * smax && s > 0.0) ++rank;
    Vector x_part(mn, 0.0);
    {
        const Vector uty = matvec_t(f.u, y);
        Vector coef(f.singular_values.size(), 0.0);
        for (std::size_t i = 0; i < rank; ++i) coef[i] = uty[i] / f.singular_values[i];
        x_part = matvec(f.v, coef);
    }
    const Vector consistency = matvec(op.matrix, x_part) - y;
    if (norm2(consistency) > 1e-8 * std::max(norm2(y), 1e-30)) {
        sol.status = SolveStatus::infeasible;
        sol.estimate = DenseMatrix(op.m, op.n);
        sol.feasibility_residual = norm2(consistency);
        return sol;
    }
    DenseMatrix vr(mn, rank);
    for (std::size_t i = 0; i < mn; ++i)
        for (std::size_t j = 0; j < rank; ++j) vr(i, j) = f.v(i, j);
    const auto project_affine = [&](const Vector& wvec) {
        const Vector coords = matvec_t(vr, wvec);
        Vector out = wvec - matvec(vr, coords);
        for (std::size_t i = 0; i < mn; ++i) out[i] += x_part[i];
        return out;
    };

    double rho = opts.admm_rho;
    Vector x = x_part, z(mn, 0.0), u(mn, 0.0), z_prev;
    bool converged = false;
    int iterations = 0;
    for (int it = 0; it < opts.admm_max_iters; ++it) {
        iterations = it + 1;
        Vector t(mn);
        for (std::size_t i = 0; i < mn; ++i) t[i] = z[i] - u[i];
        x = project_affine(t);

        z_prev = z;
        for (std::size_t i = 0; i < mn; ++i) t[i] = x[i] + u[i];
        z = vec(singular_value_threshold(devec(t, op.m, op.n), 1.0 / rho));

        double prim2 = 0.0;
        for (std::size_t i = 0; i < mn; ++i) {
            const double r = x[i] - z[i];
            u[i] += r;
            prim2 += r * r;
        }
        const double prim = std::sqrt(prim2);
        double dual2 = 0.0;
        for (std::size_t i = 0; i < mn; ++i) {
            const double d = z[i] - z_prev[i];
            dual2 += d * d;
        }
        const double dual = rho * std::sqrt(dual2);

        const double eps_prim = std::sqrt(static_cast<double>(mn)) * opts.admm_tol_abs +
                                opts.admm_tol_rel * std::max(norm2(x), norm2(z));
        const double eps_dual = std::sqrt(static_cast<double>(mn)) * opts.admm_tol_abs +
                                opts.admm_tol_rel * rho * norm2(u);
        if (prim <= eps_prim && dual <= eps_dual) {
            converged = true;
            break;
        }
        if (prim > 10.0 * dual && dual > 0.0) {
            rho *= 2.0;
            for (double& v : u) v *= 0.5;
        } else if (dual > 10.0 * prim && prim > 0.0) {
            rho *= 0.5;
            for (double& v : u) v *= 2.0;
        }
    }

    sol.estimate = devec(x, op.m, op.n);
    sol.objective = nuclear_norm(sol.estimate);
    sol.feasibility_residual = norm2(matvec(op.matrix, x) - y);
    sol.iterations = iterations;
    sol.status = converged ? SolveStatus::optimal : SolveStatus::max_iter;
    return sol;
}

MatrixRecoverySolution nuclear_min_l2(const MatrixSensingOperator& op, const Vector& y,
                                      double eta, const SolverOptions& opts) {
    const std::size_t mn = op.m * op.n;
    if (y.size() != op.q()) throw std::invalid_argument("nuclear_min_l2: y has wrong length");
    require_eta(eta);

    MatrixRecoverySolution sol;
    sol.constraint = ConstraintSet::l2_ball(eta);

    const LstsqResult ls = lstsq(op.matrix, y);
    if (ls.residual_norm > eta + 1e-8 * std::max(norm2(y), 1e-30)) {
        sol.status = SolveStatus::infeasible;
        sol.estimate = DenseMatrix(op.m, op.n);
        sol.feasibility_residual = ls.residual_norm - eta;
        return sol;
    }

    const std::size_t m = op.m, n = op.n;
    SplitAdmm admm{
        op.matrix,
        y,
        [m, n](const Vector& v, double tau) {
            return vec(singular_value_threshold(devec(v, m, n), tau));
        },
        [eta](const Vector& v) { return project_l2_ball(v, eta); },
        opts.admm_max_iters,
        opts.admm_tol_abs,
        opts.admm_tol_rel,
        opts.admm_rho,
    };
    admm.run();

    sol.estimate = devec(admm.x, m, n);
    sol.objective = nuclear_norm(sol.estimate);
    sol.feasibility_residual = std::max(0.0, norm2(matvec(op.matrix, admm.x) - y) - eta);
    sol.iterations = admm.iterations;
    sol.status = admm.converged ? SolveStatus::optimal : SolveStatus::max_iter;
    (void)mn;
    return sol;
}

MatrixRecoverySolution matrix_dantzig(const MatrixSensingOperator& op, const Vector& y,
                                      double eta, const SolverOptions& opts) {
    const std::size_t mn = op.m * op.n;
    if (y.size() != op.q()) throw std::invalid_argument("matrix_dantzig: y has wrong length");
    require_eta(eta);

    const DenseMatrix b = gram(op.as_sensing_matrix());
    const Vector d = matvec_t(op.matrix, y);

    const std::size_t m = op.m, n = op.n;
    // z2 = B x - d lives in matrix space; its projection clips singular
    // values at eta.
    SplitAdmm admm{
        b,
        d,
        [m, n](const Vector& v, double tau) {
            return vec(singular_value_threshold(devec(v, m, n), tau));
        },
        [m, n, eta](const Vector& v) {
            const SvdResult f = svd(devec(v, m, n));
            DenseMatrix out(m, n);
            for (std::size_t t = 0; t < f.singular_values.size(); ++t) {
                const double s = std::min(f.singular_values[t], eta);
                if (s <= 0.0) continue;
                for (std::size_t i = 0; i < m; ++i)
                    for (std::size_t j = 0; j < n; ++j) out(i, j) += s * f.u(i, t) * f.v(j, t);
            }
            return vec(out);
        },
        opts.admm_max_iters,
        opts.admm_tol_abs,
        opts.admm_tol_rel,
        opts.admm_rho,
    };
    admm.run();

    MatrixRecoverySolution sol;
    sol.constraint = ConstraintSet::dual_spectral_ball(eta);
    sol.estimate = devec(admm.x, m, n);
    sol.objective = nuclear_norm(sol.estimate);
    const Vector res = matvec(op.matrix, admm.x) - y;
    sol.feasibility_residual = std::max(0.0, dual_norm_map(op, res) - eta);
    sol.iterations = admm.iterations;
    sol.status = admm.converged ? SolveStatus::optimal : SolveStatus::max_iter;
    (void)mn;
    return sol;
}

}  // namespace riplab::solvers
