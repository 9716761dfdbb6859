#include "riplab/constructions.hpp"

#include <cmath>
#include <stdexcept>

#include "riplab/bounds.hpp"
#include "riplab/decomp.hpp"
#include "riplab/rng.hpp"

namespace riplab::constructions {

namespace {

// scale * (I - h h^T) built through the orthonormal completion of h, i.e. the
// map x = sum c_i h_i  |->  scale * sum_{i >= 2} c_i h_i.
DenseMatrix annihilating_map(const Vector& h, double scale) {
    const std::size_t p = h.size();
    const DenseMatrix basis = orthonormal_complete(h);
    Vector diag(p, scale);
    diag[0] = 0.0;
    DenseMatrix scaled = basis;
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j) scaled(i, j) *= diag[j];
    return matmul(scaled, transpose(basis));
}

}  // namespace

TightFrameFamily build_tight_frame(int p, int k, int a, int b) {
    if (!(k >= 1 && 2 * k <= p)) throw std::invalid_argument("build_tight_frame: need 2k <= p");
    if (!(a >= 1 && a <= k)) throw std::invalid_argument("build_tight_frame: need 1 <= a <= k");
    if (b < 1) throw std::invalid_argument("build_tight_frame: need b >= 1");

    TightFrameFamily fam;
    fam.p = p;
    fam.k = k;
    fam.a = a;
    fam.b = b;
    const double c = static_cast<double>(a) / (2.0 * k);
    fam.scale = std::sqrt(2.0 / (2.0 - c));
    fam.h1.assign(p, 0.0);
    for (int i = 0; i < 2 * k; ++i) fam.h1[i] = 1.0 / std::sqrt(2.0 * k);
    fam.A = SensingMatrix(annihilating_map(fam.h1, fam.scale));

    fam.u.assign(p, 0.0);
    fam.v.assign(p, 0.0);
    for (int i = 0; i < k; ++i) fam.u[i] = 1.0;
    for (int i = k; i < 2 * k; ++i) fam.v[i] = -1.0;

    fam.analytic_delta = c / (2.0 - c);
    fam.analytic_theta = (1.0 - fam.analytic_delta) / bounds::c_abk(a, b, k);
    fam.analytic_condition = 1.0;
    return fam;
}

TightFrameMatrixFamily build_tight_frame_matrix(int m, int n, int r, int a, int b) {
    if (!(r >= 1 && 2 * r <= std::min(m, n)))
        throw std::invalid_argument("build_tight_frame_matrix: need 2r <= min(m, n)");
    if (!(a >= 1 && a <= r))
        throw std::invalid_argument("build_tight_frame_matrix: need 1 <= a <= r");
    if (b < 1) throw std::invalid_argument("build_tight_frame_matrix: need b >= 1");

    TightFrameMatrixFamily fam;
    fam.m = m;
    fam.n = n;
    fam.r = r;
    fam.a = a;
    fam.b = b;
    const double c = static_cast<double>(a) / (2.0 * r);
    fam.scale = std::sqrt(2.0 / (2.0 - c));

    Vector h1_diag(2 * r, 1.0 / std::sqrt(2.0 * r));
    const DenseMatrix h1 = DenseMatrix::diag(m, n, h1_diag);
    fam.op = MatrixSensingOperator(annihilating_map(vec(h1), fam.scale), m, n);

    Vector u_diag(r, 1.0);
    fam.u = DenseMatrix::diag(m, n, u_diag);
    Vector v_diag(2 * r, 0.0);
    for (int i = r; i < 2 * r; ++i) v_diag[i] = -1.0;
    fam.v = DenseMatrix::diag(m, n, v_diag);

    fam.analytic_delta = c / (2.0 - c);
    fam.analytic_theta = (1.0 - fam.analytic_delta) / bounds::c_abk(a, b, r);
    return fam;
}

OddFamily build_odd_family(int p, int k, double lambda) {
    if (!(k >= 3 && k % 2 == 1)) throw std::invalid_argument("build_odd_family: k must be odd >= 3");
    if (2 * k > p) throw std::invalid_argument("build_odd_family: need 2k <= p");
    if (!(lambda > 0.0 && lambda < 1.0))
        throw std::invalid_argument("build_odd_family: need 0 < lambda < 1");

    OddFamily fam;
    fam.p = p;
    fam.k = k;
    fam.lambda = lambda;

    Vector beta1(p, 0.0), beta2(p, 0.0);
    const double inv = 1.0 / std::sqrt(2.0 * k);
    for (int i = 0; i < 2 * k; ++i) beta1[i] = inv;
    for (int i = 0; i < k; ++i) beta2[i] = inv;
    for (int i = k; i < 2 * k; ++i) beta2[i] = -inv;

    // A = I + (sqrt(1+lambda) - 1) b1 b1^T + (sqrt(1-lambda) - 1) b2 b2^T:
    // the identity on the complement of span{b1, b2}.
    DenseMatrix a = DenseMatrix::identity(p);
    const double c1 = std::sqrt(1.0 + lambda) - 1.0;
    const double c2 = std::sqrt(1.0 - lambda) - 1.0;
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) a(i, j) += c1 * beta1[i] * beta1[j] + c2 * beta2[i] * beta2[j];
    fam.A = SensingMatrix(std::move(a));

    fam.analytic_theta = lambda;
    fam.analytic_delta = lambda * std::sqrt(static_cast<double>(k) * k - 1.0) / (2.0 * k);
    return fam;
}

EnsembleKind parse_ensemble(const std::string& name) {
    if (name == "gaussian") return EnsembleKind::gaussian;
    if (name == "bernoulli") return EnsembleKind::bernoulli;
    if (name == "ternary") return EnsembleKind::ternary;
    throw std::invalid_argument("unknown ensemble '" + name + "'");
}

const char* to_string(EnsembleKind k) {
    switch (k) {
        case EnsembleKind::gaussian: return "gaussian";
        case EnsembleKind::bernoulli: return "bernoulli";
        case EnsembleKind::ternary: return "ternary";
    }
    return "unknown";
}

SensingMatrix random_sensing(int n, int p, EnsembleKind kind, std::uint64_t seed) {
    if (n < 1 || p < 1) throw std::invalid_argument("random_sensing: need n, p >= 1");
    Rng rng(seed);
    DenseMatrix a(n, p);
    const double gauss_sd = 1.0 / std::sqrt(static_cast<double>(n));
    const double ternary_mag = std::sqrt(3.0 / static_cast<double>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < p; ++j) {
            switch (kind) {
                case EnsembleKind::gaussian:
                    a(i, j) = gauss_sd * rng.normal();
                    break;
                case EnsembleKind::bernoulli:
                    a(i, j) = rng.uniform() < 0.5 ? gauss_sd : -gauss_sd;
                    break;
                case EnsembleKind::ternary: {
                    // +-sqrt(3/n) w.p. 1/6 each, 0 w.p. 2/3: entry variance 1/n.
                    const double u = rng.uniform();
                    a(i, j) = u < 1.0 / 6.0 ? ternary_mag : (u < 2.0 / 6.0 ? -ternary_mag : 0.0);
                    break;
                }
            }
        }
    return SensingMatrix(std::move(a));
}

std::pair<DenseMatrix, DenseMatrix> disjoint_rank_pair_from(const DenseMatrix& left_basis,
                                                            const DenseMatrix& right_basis,
                                                            int r1, int r2,
                                                            std::span<const double> coeff1,
                                                            std::span<const double> coeff2) {
    const std::size_t m = left_basis.rows(), n = right_basis.rows();
    if (left_basis.cols() < static_cast<std::size_t>(r1 + r2) ||
        right_basis.cols() < static_cast<std::size_t>(r1 + r2))
        throw std::invalid_argument("disjoint_rank_pair_from: bases too small");
    if (coeff1.size() != static_cast<std::size_t>(r1) ||
        coeff2.size() != static_cast<std::size_t>(r2))
        throw std::invalid_argument("disjoint_rank_pair_from: coefficient length mismatch");
    DenseMatrix x1(m, n), x2(m, n);
    for (int t = 0; t < r1; ++t)
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j)
                x1(i, j) += coeff1[t] * left_basis(i, t) * right_basis(j, t);
    for (int t = 0; t < r2; ++t)
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j)
                x2(i, j) += coeff2[t] * left_basis(i, r1 + t) * right_basis(j, r1 + t);
    return {std::move(x1), std::move(x2)};
}

std::pair<DenseMatrix, DenseMatrix> disjoint_rank_pair(int m, int n, int r1, int r2,
                                                       std::uint64_t seed) {
    if (r1 < 1 || r2 < 1 || r1 + r2 > std::min(m, n))
        throw std::invalid_argument("disjoint_rank_pair: need r1 + r2 <= min(m, n)");
    Rng rng(seed);
    // Orthogonalized seeded Gaussian bases shared by the pair.
    DenseMatrix gl(m, r1 + r2), gr(n, r1 + r2);
    for (std::size_t i = 0; i < gl.rows(); ++i)
        for (std::size_t j = 0; j < gl.cols(); ++j) gl(i, j) = rng.normal();
    for (std::size_t i = 0; i < gr.rows(); ++i)
        for (std::size_t j = 0; j < gr.cols(); ++j) gr(i, j) = rng.normal();
    const SvdResult fl = svd(gl), fr = svd(gr);

    Vector c1(r1), c2(r2);
    for (auto& x : c1) x = std::abs(rng.normal()) + 0.1;
    for (auto& x : c2) x = std::abs(rng.normal()) + 0.1;
    return disjoint_rank_pair_from(fl.u, fr.u, r1, r2, c1, c2);
}

DenseMatrix random_low_rank(int m, int n, int r, std::uint64_t seed) {
    if (r < 1 || r > std::min(m, n))
        throw std::invalid_argument("random_low_rank: need 1 <= r <= min(m, n)");
    Rng rng(seed);
    DenseMatrix left(m, r), right(r, n);
    for (std::size_t i = 0; i < left.rows(); ++i)
        for (std::size_t j = 0; j < left.cols(); ++j) left(i, j) = rng.normal();
    for (std::size_t i = 0; i < right.rows(); ++i)
        for (std::size_t j = 0; j < right.cols(); ++j) right(i, j) = rng.normal();
    DenseMatrix x = matmul(left, right);
    const double nf = frobenius_norm(x);
    if (nf == 0.0) return random_low_rank(m, n, r, seed + 1);
    return (1.0 / nf) * x;
}

MatrixSensingOperator random_map(int q, int m, int n, std::uint64_t seed) {
    if (q < 1 || m < 1 || n < 1) throw std::invalid_argument("random_map: bad shape");
    Rng rng(seed);
    DenseMatrix mat(q, m * n);
    const double sd = 1.0 / std::sqrt(static_cast<double>(q));
    for (int i = 0; i < q; ++i)
        for (int j = 0; j < m * n; ++j) mat(i, j) = sd * rng.normal();
    return MatrixSensingOperator(std::move(mat), m, n);
}

}  // namespace riplab::constructions
