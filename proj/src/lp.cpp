#include "riplab/lp.hpp"

#include <algorithm>
#include <cmath>

#include "riplab/decomp.hpp"

namespace riplab {

namespace {

double max_step(const Vector& x, const Vector& dx) {
    double alpha = 1e30;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (dx[i] < 0.0) alpha = std::min(alpha, -x[i] / dx[i]);
    return alpha;
}

DenseMatrix normal_matrix(const DenseMatrix& g, const Vector& d) {
    const std::size_t m = g.rows(), n = g.cols();
    DenseMatrix nmat(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        const double* gi = g.row(i);
        for (std::size_t j = i; j < m; ++j) {
            const double* gj = g.row(j);
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += gi[k] * d[k] * gj[k];
            nmat(i, j) = nmat(j, i) = s;
        }
    }
    return nmat;
}

// Cholesky with escalating diagonal regularization.
DenseMatrix factor_regularized(DenseMatrix nmat) {
    double max_diag = 0.0;
    for (std::size_t i = 0; i < nmat.rows(); ++i)
        max_diag = std::max(max_diag, std::abs(nmat(i, i)));
    double reg = 0.0;
    for (int attempt = 0; attempt < 8; ++attempt) {
        try {
            return cholesky_factor(nmat, 1e-15);
        } catch (const NumericalError&) {
            const double bump =
                (reg == 0.0 ? 1e-13 * std::max(max_diag, 1.0) : reg * 100.0) - reg;
            reg += bump;
            for (std::size_t i = 0; i < nmat.rows(); ++i) nmat(i, i) += bump;
        }
    }
    throw NumericalError("lp: normal equations could not be factorized");
}

}  // namespace

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::max_iter: return "max_iter";
        case SolveStatus::infeasible: return "infeasible";
    }
    return "unknown";
}

LpResult solve_lp(const LpProblem& problem, const LpOptions& opts) {
    const std::size_t nvar = problem.cost.size();
    if (problem.eq.cols() != nvar || problem.eq.rows() != problem.rhs.size())
        throw std::invalid_argument("solve_lp: shape mismatch");
    require_finite(problem.eq, "solve_lp");
    require_finite(problem.rhs, "solve_lp");
    require_finite(problem.cost, "solve_lp");

    LpResult res;

    // Row-space reduction: G = U S V^T, keep rows V_r^T with rhs S^-1 U_r^T b.
    const SvdResult f = svd(problem.eq);
    const double smax = f.singular_values.front();
    std::size_t rank = 0;
    for (double s : f.singular_values)
        if (s > 1e-12 * smax && s > 0.0) ++rank;

    const Vector utb = matvec_t(f.u, problem.rhs);
    double dropped = 0.0;
    for (std::size_t i = rank; i < utb.size(); ++i) dropped += utb[i] * utb[i];
    // Components of b outside the row space: inconsistent system.
    const double bnorm = norm2(problem.rhs);
    if (std::sqrt(dropped) > 1e-9 * (1.0 + bnorm)) {
        res.status = SolveStatus::infeasible;
        res.x.assign(nvar, 0.0);
        res.reduced_cost = problem.cost;
        return res;
    }

    if (rank == 0) {
        // No effective constraints: x = 0 is optimal for the nonnegative
        // orthant whenever no cost coefficient is negative.
        for (double ci : problem.cost)
            if (ci < -1e-12) throw NumericalError("solve_lp: unbounded problem");
        res.status = SolveStatus::optimal;
        res.x.assign(nvar, 0.0);
        res.reduced_cost = problem.cost;
        res.unique = true;
        for (double ci : problem.cost)
            if (std::abs(ci) <= opts.degeneracy_tol) res.unique = false;
        return res;
    }

    DenseMatrix g(rank, nvar);
    Vector b(rank);
    for (std::size_t i = 0; i < rank; ++i) {
        for (std::size_t j = 0; j < nvar; ++j) g(i, j) = f.v(j, i);
        b[i] = utb[i] / f.singular_values[i];
    }
    const Vector& c = problem.cost;

    // Mehrotra starting point (G G^T = I by construction).
    Vector x = matvec_t(g, b);
    Vector y = matvec(g, c);
    Vector z = c;
    {
        const Vector gty = matvec_t(g, y);
        for (std::size_t j = 0; j < nvar; ++j) z[j] -= gty[j];
        double xmin = 0.0, zmin = 0.0;
        for (double v : x) xmin = std::min(xmin, v);
        for (double v : z) zmin = std::min(zmin, v);
        double dx = std::max(-1.5 * xmin, 0.0), dz = std::max(-1.5 * zmin, 0.0);
        double xz = 0.0, sx = 0.0, sz = 0.0;
        for (std::size_t j = 0; j < nvar; ++j) {
            xz += (x[j] + dx) * (z[j] + dz);
            sx += x[j] + dx;
            sz += z[j] + dz;
        }
        const double dxh = dx + (sz > 0.0 ? 0.5 * xz / sz : 1.0);
        const double dzh = dz + (sx > 0.0 ? 0.5 * xz / sx : 1.0);
        for (std::size_t j = 0; j < nvar; ++j) {
            x[j] += dxh;
            z[j] += dzh;
            x[j] = std::max(x[j], 1e-4);
            z[j] = std::max(z[j], 1e-4);
        }
    }

    const double bscale = 1.0 + norm2(b);
    const double cscale = 1.0 + norm_inf(c);
    const double x0scale = 1.0 + norm_inf(x);

    Vector rp(rank), rd(nvar), d(nvar), v(nvar);
    Vector dy_aff(rank), dz_aff(nvar), dx_aff(nvar), dy(rank), dz(nvar), dx(nvar);
    bool converged = false;

    for (int iter = 0; iter < opts.max_iter; ++iter) {
        res.iterations = iter;
        const Vector gx = matvec(g, x);
        for (std::size_t i = 0; i < rank; ++i) rp[i] = b[i] - gx[i];
        const Vector gty = matvec_t(g, y);
        for (std::size_t j = 0; j < nvar; ++j) rd[j] = c[j] - gty[j] - z[j];
        double gap = 0.0;
        for (std::size_t j = 0; j < nvar; ++j) gap += x[j] * z[j];
        const double mu = gap / static_cast<double>(nvar);
        const double obj = dot(c, x);

        res.primal_residual = norm2(rp) / bscale;
        res.dual_residual = norm_inf(rd) / cscale;
        res.gap = gap / (1.0 + std::abs(obj));
        if (res.primal_residual <= opts.feas_tol && res.dual_residual <= opts.feas_tol &&
            res.gap <= opts.gap_tol) {
            converged = true;
            break;
        }
        if (norm_inf(x) > 1e14 * x0scale)
            throw NumericalError("solve_lp: iterates diverged (problem may be unbounded)");

        for (std::size_t j = 0; j < nvar; ++j) d[j] = x[j] / z[j];
        const DenseMatrix l = factor_regularized(normal_matrix(g, d));

        // Affine scaling (predictor) direction.
        Vector tmp(nvar);
        for (std::size_t j = 0; j < nvar; ++j) tmp[j] = d[j] * rd[j] + x[j];
        Vector rhs = matvec(g, tmp);
        for (std::size_t i = 0; i < rank; ++i) rhs[i] += rp[i];
        dy_aff = cholesky_solve(l, rhs);
        {
            const Vector gtdy = matvec_t(g, dy_aff);
            for (std::size_t j = 0; j < nvar; ++j) {
                dz_aff[j] = rd[j] - gtdy[j];
                dx_aff[j] = -x[j] - d[j] * dz_aff[j];
            }
        }
        const double ap_aff = std::min(1.0, max_step(x, dx_aff));
        const double ad_aff = std::min(1.0, max_step(z, dz_aff));
        double mu_aff = 0.0;
        for (std::size_t j = 0; j < nvar; ++j)
            mu_aff += (x[j] + ap_aff * dx_aff[j]) * (z[j] + ad_aff * dz_aff[j]);
        mu_aff /= static_cast<double>(nvar);
        double sigma = mu > 0.0 ? std::pow(mu_aff / mu, 3) : 0.0;
        sigma = std::clamp(sigma, 0.0, 1.0);

        // Corrector.
        for (std::size_t j = 0; j < nvar; ++j)
            v[j] = (sigma * mu - dx_aff[j] * dz_aff[j]) / z[j] - x[j];
        for (std::size_t j = 0; j < nvar; ++j) tmp[j] = d[j] * rd[j] - v[j];
        rhs = matvec(g, tmp);
        for (std::size_t i = 0; i < rank; ++i) rhs[i] += rp[i];
        dy = cholesky_solve(l, rhs);
        {
            const Vector gtdy = matvec_t(g, dy);
            for (std::size_t j = 0; j < nvar; ++j) {
                dz[j] = rd[j] - gtdy[j];
                dx[j] = v[j] - d[j] * dz[j];
            }
        }
        const double eta = 0.99995;
        const double ap = std::min(1.0, eta * max_step(x, dx));
        const double ad = std::min(1.0, eta * max_step(z, dz));
        for (std::size_t j = 0; j < nvar; ++j) {
            x[j] += ap * dx[j];
            z[j] += ad * dz[j];
        }
        for (std::size_t i = 0; i < rank; ++i) y[i] += ad * dy[i];
    }

    res.x = x;
    res.reduced_cost = z;
    res.objective = dot(c, x);
    res.status = converged ? SolveStatus::optimal : SolveStatus::max_iter;

    if (converged) {
        // Optimal-face uniqueness: columns with (near) zero reduced cost span
        // the face; the face is a single vertex iff they are independent.
        const double ztol = opts.degeneracy_tol * std::max(1.0, norm_inf(c));
        std::vector<std::size_t> zero_rc;
        for (std::size_t j = 0; j < nvar; ++j)
            if (z[j] <= ztol) zero_rc.push_back(j);
        if (zero_rc.empty()) {
            res.unique = true;
        } else if (zero_rc.size() > rank) {
            res.unique = false;
        } else {
            DenseMatrix gz(rank, zero_rc.size());
            for (std::size_t i = 0; i < rank; ++i)
                for (std::size_t j = 0; j < zero_rc.size(); ++j) gz(i, j) = g(i, zero_rc[j]);
            const SvdResult fz = svd(gz);
            const double s1 = fz.singular_values.front();
            std::size_t rz = 0;
            for (double s : fz.singular_values)
                if (s > opts.degeneracy_tol * s1 && s > 0.0) ++rz;
            res.unique = (rz == zero_rc.size());
        }
    }
    return res;
}

}  // namespace riplab
