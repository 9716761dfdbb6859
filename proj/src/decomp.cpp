#include "riplab/decomp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace riplab {

namespace {

// Jacobi rotation parameters (c, s) that annihilate the (i, j) coupling of a
// symmetric 2x2 [[app, apq], [apq, aqq]].
inline void sym_rotation(double app, double aqq, double apq, double& c, double& s) {
    const double tau = (aqq - app) / (2.0 * apq);
    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    c = 1.0 / std::sqrt(1.0 + t * t);
    s = t * c;
}

void sort_desc_with(Vector& values, DenseMatrix* vectors_cols) {
    std::vector<std::size_t> idx(values.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    Vector sorted(values.size());
    for (std::size_t k = 0; k < idx.size(); ++k) sorted[k] = values[idx[k]];
    if (vectors_cols) {
        DenseMatrix perm(vectors_cols->rows(), vectors_cols->cols());
        for (std::size_t k = 0; k < idx.size(); ++k)
            for (std::size_t i = 0; i < vectors_cols->rows(); ++i)
                perm(i, k) = (*vectors_cols)(i, idx[k]);
        *vectors_cols = std::move(perm);
    }
    values = std::move(sorted);
}

// Fill columns [start, cols) of u with vectors orthonormal to the existing
// ones, deterministically: for each slot take the coordinate vector with the
// largest residual after two Gram-Schmidt passes (the largest residual norm
// is at least sqrt((m - j)/m), so this cannot degenerate).
void complete_orthonormal_columns(DenseMatrix& u, std::size_t start) {
    const std::size_t m = u.rows();
    for (std::size_t j = start; j < u.cols(); ++j) {
        Vector best;
        double best_norm = -1.0;
        for (std::size_t candidate = 0; candidate < m; ++candidate) {
            Vector w(m, 0.0);
            w[candidate] = 1.0;
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t k = 0; k < j; ++k) {
                    double proj = 0.0;
                    for (std::size_t i = 0; i < m; ++i) proj += u(i, k) * w[i];
                    for (std::size_t i = 0; i < m; ++i) w[i] -= proj * u(i, k);
                }
            }
            const double nw = norm2(w);
            if (nw > best_norm) {
                best_norm = nw;
                best = std::move(w);
            }
        }
        if (best_norm <= 0.0)
            throw NumericalError("orthonormal completion degenerated");
        for (std::size_t i = 0; i < m; ++i) u(i, j) = best[i] / best_norm;
    }
}

}  // namespace

DenseMatrix SvdResult::reconstruct() const {
    DenseMatrix us = u;
    for (std::size_t i = 0; i < us.rows(); ++i)
        for (std::size_t j = 0; j < us.cols(); ++j) us(i, j) *= singular_values[j];
    return matmul(us, transpose(v));
}

SvdResult svd(const DenseMatrix& m_in, const JacobiOptions& opts) {
    if (m_in.rows() == 0 || m_in.cols() == 0) throw std::invalid_argument("svd: empty matrix");
    require_finite(m_in, "svd");

    const bool transposed = m_in.rows() < m_in.cols();
    DenseMatrix b = transposed ? transpose(m_in) : m_in;
    const std::size_t m = b.rows(), n = b.cols();

    // Column-major working copy: one-sided Jacobi operates on columns.
    std::vector<Vector> col(n);
    for (std::size_t j = 0; j < n; ++j) col[j] = b.column(j);
    DenseMatrix v = DenseMatrix::identity(n);

    const double fro2 = dot(b.entries(), b.entries());
    const double off_threshold = opts.off_tol * std::max(fro2, 1e-300);

    bool converged = (n == 1);
    for (int sweep = 0; sweep < opts.max_sweeps && !converged; ++sweep) {
        double off2 = 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double app = dot(col[p], col[p]);
                const double aqq = dot(col[q], col[q]);
                const double apq = dot(col[p], col[q]);
                off2 += 2.0 * apq * apq;
                if (apq == 0.0) continue;
                // Skip numerically negligible couplings to avoid useless rotations.
                if (std::abs(apq) <= 1e-17 * std::sqrt(std::max(app * aqq, 1e-300))) continue;
                double c, s;
                sym_rotation(app, aqq, apq, c, s);
                for (std::size_t i = 0; i < m; ++i) {
                    const double bp = col[p][i], bq = col[q][i];
                    col[p][i] = c * bp - s * bq;
                    col[q][i] = s * bp + c * bq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vp = v(i, p), vq = v(i, q);
                    v(i, p) = c * vp - s * vq;
                    v(i, q) = s * vp + c * vq;
                }
            }
        }
        if (std::sqrt(off2) <= off_threshold) converged = true;
    }
    if (!converged) {
        // Measure the current state once more; max_sweeps may legitimately be
        // small when the input is already (near) column-orthogonal.
        double off2 = 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = dot(col[p], col[q]);
                off2 += 2.0 * apq * apq;
            }
        if (std::sqrt(off2) > off_threshold) {
            std::ostringstream msg;
            msg << "svd: one-sided Jacobi did not converge in " << opts.max_sweeps
                << " sweeps; off-diagonal residual " << std::sqrt(off2) << " vs threshold "
                << off_threshold;
            throw NumericalError(msg.str());
        }
    }

    Vector norms(n);
    for (std::size_t j = 0; j < n; ++j) norms[j] = norm2(col[j]);
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return norms[a] > norms[b]; });

    Vector sing(n);
    DenseMatrix u(m, n);
    DenseMatrix vp(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t j = idx[k];
        sing[k] = norms[j];
        if (norms[j] > 0.0)
            for (std::size_t i = 0; i < m; ++i) u(i, k) = col[j][i] / norms[j];
        for (std::size_t i = 0; i < n; ++i) vp(i, k) = v(i, j);
    }
    v = std::move(vp);

    const double smax = sing.empty() ? 0.0 : sing.front();
    std::size_t rank = 0;
    for (double s : sing)
        if (s > 1e-12 * smax && s > 0.0) ++rank;
    complete_orthonormal_columns(u, rank);

    SvdResult out;
    out.numerical_rank = rank;
    if (transposed) {
        out.u = std::move(v);
        out.v = std::move(u);
    } else {
        out.u = std::move(u);
        out.v = std::move(v);
    }
    out.singular_values = std::move(sing);
    return out;
}

SymEigResult sym_eig(const DenseMatrix& s_in, const JacobiOptions& opts) {
    if (s_in.rows() != s_in.cols() || s_in.rows() == 0)
        throw std::invalid_argument("sym_eig: matrix must be square and non-empty");
    require_finite(s_in, "sym_eig");
    const std::size_t n = s_in.rows();
    const double scale = std::max(max_abs(s_in), 1e-300);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(s_in(i, j) - s_in(j, i)) > 1e-12 * std::max(scale, 1.0))
                throw std::invalid_argument("sym_eig: input is not symmetric");

    DenseMatrix a = s_in;
    // Symmetrize exactly so the iteration sees one consistent value per pair.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double avg = 0.5 * (a(i, j) + a(j, i));
            a(i, j) = a(j, i) = avg;
        }
    DenseMatrix q = DenseMatrix::identity(n);
    const double off_threshold = opts.off_tol * std::max(frobenius_norm(s_in), 1e-300);

    bool converged = (n == 1);
    for (int sweep = 0; sweep < opts.max_sweeps && !converged; ++sweep) {
        double off2 = 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t r = p + 1; r < n; ++r) {
                const double apq = a(p, r);
                off2 += 2.0 * apq * apq;
                if (apq == 0.0) continue;
                double c, s;
                sym_rotation(a(p, p), a(r, r), apq, c, s);
                for (std::size_t i = 0; i < n; ++i) {
                    const double aip = a(i, p), aiq = a(i, r);
                    a(i, p) = c * aip - s * aiq;
                    a(i, r) = s * aip + c * aiq;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    const double apj = a(p, j), aqj = a(r, j);
                    a(p, j) = c * apj - s * aqj;
                    a(r, j) = s * apj + c * aqj;
                }
                a(p, r) = a(r, p) = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double qip = q(i, p), qiq = q(i, r);
                    q(i, p) = c * qip - s * qiq;
                    q(i, r) = s * qip + c * qiq;
                }
            }
        }
        if (std::sqrt(off2) <= off_threshold) converged = true;
    }
    if (!converged) {
        double off2 = 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t r = p + 1; r < n; ++r) off2 += 2.0 * a(p, r) * a(p, r);
        if (std::sqrt(off2) > off_threshold) {
            std::ostringstream msg;
            msg << "sym_eig: Jacobi did not converge in " << opts.max_sweeps
                << " sweeps; off-diagonal residual " << std::sqrt(off2) << " vs threshold "
                << off_threshold;
            throw NumericalError(msg.str());
        }
    }

    SymEigResult out;
    out.eigenvalues.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.eigenvalues[i] = a(i, i);
    out.eigenvectors = std::move(q);
    sort_desc_with(out.eigenvalues, &out.eigenvectors);
    return out;
}

DenseMatrix orthonormal_complete(const Vector& v) {
    const std::size_t d = v.size();
    if (d == 0) throw std::invalid_argument("orthonormal_complete: empty vector");
    require_finite(v, "orthonormal_complete");
    if (std::abs(norm2(v) - 1.0) > 1e-12)
        throw std::invalid_argument("orthonormal_complete: input is not a unit vector");

    // Householder reflector sending e1 to -sign(v1) v, with the first column
    // re-signed and then overwritten by v exactly.
    const double sign = v[0] >= 0.0 ? 1.0 : -1.0;
    Vector w = v;
    w[0] += sign;
    const double ww = dot(w, w);
    DenseMatrix q = DenseMatrix::identity(d);
    if (ww > 0.0) {
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) q(i, j) -= 2.0 * w[i] * w[j] / ww;
    }
    if (sign > 0.0)  // H e1 = -v; flip the first column
        for (std::size_t i = 0; i < d; ++i) q(i, 0) = -q(i, 0);
    for (std::size_t i = 0; i < d; ++i) q(i, 0) = v[i];
    return q;
}

double spectral_norm(const DenseMatrix& m, const JacobiOptions& opts) {
    if (std::min(m.rows(), m.cols()) <= 16) return small_sigma_max(m.data(), m.rows(), m.cols());
    return svd(m, opts).singular_values.front();
}

DenseMatrix cholesky_factor(const DenseMatrix& s, double min_pivot) {
    if (s.rows() != s.cols()) throw std::invalid_argument("cholesky: square matrix required");
    const std::size_t n = s.rows();
    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(s(i, i)));
    DenseMatrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = s(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (d <= min_pivot * std::max(max_diag, 1e-300))
            throw NumericalError("cholesky: matrix is not (numerically) positive definite");
        l(j, j) = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double x = s(i, j);
            for (std::size_t k = 0; k < j; ++k) x -= l(i, k) * l(j, k);
            l(i, j) = x / l(j, j);
        }
    }
    return l;
}

Vector cholesky_solve(const DenseMatrix& l, std::span<const double> b) {
    const std::size_t n = l.rows();
    if (b.size() != n) throw std::invalid_argument("cholesky_solve: dimension mismatch");
    Vector y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double x = b[i];
        for (std::size_t k = 0; k < i; ++k) x -= l(i, k) * y[k];
        y[i] = x / l(i, i);
    }
    Vector z(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double x = y[ii];
        for (std::size_t k = ii + 1; k < n; ++k) x -= l(k, ii) * z[k];
        z[ii] = x / l(ii, ii);
    }
    return z;
}

LstsqResult lstsq(const DenseMatrix& a, std::span<const double> b, double rank_tol) {
    if (b.size() != a.rows()) throw std::invalid_argument("lstsq: dimension mismatch");
    const SvdResult f = svd(a);
    const double smax = f.singular_values.front();
    LstsqResult out;
    out.rank = 0;
    Vector utb = matvec_t(f.u, b);
    Vector coef(f.singular_values.size(), 0.0);
    for (std::size_t i = 0; i < f.singular_values.size(); ++i) {
        if (f.singular_values[i] > rank_tol * smax && f.singular_values[i] > 0.0) {
            coef[i] = utb[i] / f.singular_values[i];
            ++out.rank;
        }
    }
    out.x = matvec(f.v, coef);
    Vector r = matvec(a, out.x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    out.residual_norm = norm2(r);
    return out;
}

void small_sym_eigenvalues(double* a, std::size_t n, double* eigenvalues) {
    if (n == 1) {
        eigenvalues[0] = a[0];
        return;
    }
    double fro2 = 0.0;
    for (std::size_t i = 0; i < n * n; ++i) fro2 += a[i] * a[i];
    const double thr = 1e-15 * std::sqrt(std::max(fro2, 1e-300));
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                off += 2.0 * apq * apq;
                if (apq == 0.0) continue;
                double c, s;
                sym_rotation(a[p * n + p], a[q * n + q], apq, c, s);
                for (std::size_t i = 0; i < n; ++i) {
                    const double aip = a[i * n + p], aiq = a[i * n + q];
                    a[i * n + p] = c * aip - s * aiq;
                    a[i * n + q] = s * aip + c * aiq;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    const double apj = a[p * n + j], aqj = a[q * n + j];
                    a[p * n + j] = c * apj - s * aqj;
                    a[q * n + j] = s * apj + c * aqj;
                }
                a[p * n + q] = a[q * n + p] = 0.0;
            }
        }
        if (std::sqrt(off) <= thr) break;
    }
    for (std::size_t i = 0; i < n; ++i) eigenvalues[i] = a[i * n + i];
    std::sort(eigenvalues, eigenvalues + n, std::greater<double>());
}

double small_sigma_max(const double* b, std::size_t r, std::size_t c) {
    const std::size_t n = std::min(r, c);
    constexpr std::size_t kStack = 16;
    double buf[kStack * kStack];
    double ev[kStack];
    std::vector<double> heap_buf, heap_ev;
    double* g = buf;
    double* evals = ev;
    if (n > kStack) {
        heap_buf.resize(n * n);
        heap_ev.resize(n);
        g = heap_buf.data();
        evals = heap_ev.data();
    }
    // Gram of the smaller side.
    if (r <= c) {
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = i; j < r; ++j) {
                double s = 0.0;
                for (std::size_t k = 0; k < c; ++k) s += b[i * c + k] * b[j * c + k];
                g[i * r + j] = g[j * r + i] = s;
            }
    } else {
        for (std::size_t i = 0; i < c; ++i)
            for (std::size_t j = i; j < c; ++j) {
                double s = 0.0;
                for (std::size_t k = 0; k < r; ++k) s += b[k * c + i] * b[k * c + j];
                g[i * c + j] = g[j * c + i] = s;
            }
    }
    small_sym_eigenvalues(g, n, evals);
    return std::sqrt(std::max(evals[0], 0.0));
}

EigExtremes gram_block_eig_extremes(const DenseMatrix& g, std::span<const int> support) {
    const std::size_t k = support.size();
    constexpr std::size_t kStack = 16;
    double buf[kStack * kStack];
    double ev[kStack];
    std::vector<double> heap_buf, heap_ev;
    double* a = buf;
    double* evals = ev;
    if (k > kStack) {
        heap_buf.resize(k * k);
        heap_ev.resize(k);
        a = heap_buf.data();
        evals = heap_ev.data();
    }
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) a[i * k + j] = g(support[i], support[j]);
    small_sym_eigenvalues(a, k, evals);
    return {evals[k - 1], evals[0]};
}

}  // namespace riplab
