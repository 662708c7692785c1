#include "qmeas/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qmeas {

namespace {

void check_finite(const std::vector<cplx>& entries) {
    for (const cplx& z : entries) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw std::invalid_argument("Matrix: non-finite entry");
    }
}

size_t idx(int dim, int r, int c) { return static_cast<size_t>(r) * dim + c; }

}  // namespace

Matrix::Matrix(int dim) : dim_(dim), entries_(static_cast<size_t>(dim) * dim, cplx(0.0, 0.0)) {
    if (dim < 1) throw std::invalid_argument("Matrix: dim must be >= 1");
}

Matrix::Matrix(int dim, std::vector<cplx> entries) : dim_(dim), entries_(std::move(entries)) {
    if (dim < 1) throw std::invalid_argument("Matrix: dim must be >= 1");
    if (entries_.size() != static_cast<size_t>(dim) * dim)
        throw std::invalid_argument("Matrix: entry count " + std::to_string(entries_.size()) +
                                    " does not match dim " + std::to_string(dim));
    check_finite(entries_);
}

Matrix Matrix::identity(int dim) {
    Matrix m(dim);
    for (int i = 0; i < dim; ++i) m.entries_[idx(dim, i, i)] = cplx(1.0, 0.0);
    return m;
}

Matrix Matrix::diagonal(const std::vector<double>& diag) {
    Matrix m(static_cast<int>(diag.size()));
    for (int i = 0; i < m.dim_; ++i) m.entries_[idx(m.dim_, i, i)] = cplx(diag[static_cast<size_t>(i)], 0.0);
    check_finite(m.entries_);
    return m;
}

Matrix Matrix::adjoint() const {
    std::vector<cplx> out(entries_.size());
    for (int r = 0; r < dim_; ++r)
        for (int c = 0; c < dim_; ++c) out[idx(dim_, c, r)] = std::conj((*this)(r, c));
    return Matrix(dim_, std::move(out));
}

cplx Matrix::trace() const {
    cplx t(0.0, 0.0);
    for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
}

double Matrix::frobenius_norm() const {
    double s = 0.0;
    for (const cplx& z : entries_) s += std::norm(z);
    return std::sqrt(s);
}

double Matrix::max_abs() const {
    double m = 0.0;
    for (const cplx& z : entries_) m = std::max(m, std::abs(z));
    return m;
}

bool Matrix::is_hermitian(double tol) const {
    for (int r = 0; r < dim_; ++r)
        for (int c = r; c < dim_; ++c)
            if (std::abs((*this)(r, c) - std::conj((*this)(c, r))) > tol) return false;
    return true;
}

bool Matrix::is_psd(double tol) const {
    if (!is_hermitian(tol)) return false;
    // Symmetrise first so the eigensolver precondition holds regardless of tol.
    std::vector<cplx> h(entries_.size());
    for (int r = 0; r < dim_; ++r)
        for (int c = 0; c < dim_; ++c)
            h[idx(dim_, r, c)] = 0.5 * ((*this)(r, c) + std::conj((*this)(c, r)));
    EigenSystem es = hermitian_eigensystem(Matrix(dim_, std::move(h)));
    return es.eigenvalues.front() >= -tol;
}

bool Matrix::is_identity(double tol) const {
    for (int r = 0; r < dim_; ++r)
        for (int c = 0; c < dim_; ++c) {
            const cplx want = (r == c) ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
            if (std::abs((*this)(r, c) - want) > tol) return false;
        }
    return true;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("Matrix +: dimension mismatch");
    std::vector<cplx> out(a.entries());
    for (size_t i = 0; i < out.size(); ++i) out[i] += b.entries()[i];
    return Matrix(a.dim(), std::move(out));
}

Matrix operator-(const Matrix& a, const Matrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("Matrix -: dimension mismatch");
    std::vector<cplx> out(a.entries());
    for (size_t i = 0; i < out.size(); ++i) out[i] -= b.entries()[i];
    return Matrix(a.dim(), std::move(out));
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("Matrix *: dimension mismatch");
    const int n = a.dim();
    std::vector<cplx> out(static_cast<size_t>(n) * n, cplx(0.0, 0.0));
    for (int r = 0; r < n; ++r)
        for (int k = 0; k < n; ++k) {
            const cplx ark = a(r, k);
            if (ark == cplx(0.0, 0.0)) continue;
            for (int c = 0; c < n; ++c) out[idx(n, r, c)] += ark * b(k, c);
        }
    return Matrix(n, std::move(out));
}

Matrix operator*(cplx s, const Matrix& m) {
    std::vector<cplx> out(m.entries());
    for (cplx& z : out) z *= s;
    return Matrix(m.dim(), std::move(out));
}

Matrix operator*(double s, const Matrix& m) { return cplx(s, 0.0) * m; }

double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("max_abs_diff: dimension mismatch");
    double m = 0.0;
    for (size_t i = 0; i < a.entries().size(); ++i)
        m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
    return m;
}

Matrix tensor_product(const Matrix& a, const Matrix& b) {
    const int na = a.dim(), nb = b.dim(), n = na * nb;
    std::vector<cplx> out(static_cast<size_t>(n) * n);
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < na; ++j) {
            const cplx aij = a(i, j);
            for (int k = 0; k < nb; ++k)
                for (int l = 0; l < nb; ++l)
                    out[idx(n, i * nb + k, j * nb + l)] = aij * b(k, l);
        }
    return Matrix(n, std::move(out));
}

Matrix partial_trace(const Matrix& m, int d_a, int d_b, Subsystem keep) {
    if (d_a < 1 || d_b < 1 || m.dim() != d_a * d_b)
        throw std::invalid_argument("partial_trace: dim != d_a*d_b");
    if (keep == Subsystem::a) {
        std::vector<cplx> out(static_cast<size_t>(d_a) * d_a, cplx(0.0, 0.0));
        for (int i = 0; i < d_a; ++i)
            for (int j = 0; j < d_a; ++j)
                for (int k = 0; k < d_b; ++k)
                    out[idx(d_a, i, j)] += m(i * d_b + k, j * d_b + k);
        return Matrix(d_a, std::move(out));
    }
    std::vector<cplx> out(static_cast<size_t>(d_b) * d_b, cplx(0.0, 0.0));
    for (int k = 0; k < d_b; ++k)
        for (int l = 0; l < d_b; ++l)
            for (int i = 0; i < d_a; ++i)
                out[idx(d_b, k, l)] += m(i * d_b + k, i * d_b + l);
    return Matrix(d_b, std::move(out));
}

/*
 * Cyclic Jacobi for complex Hermitian matrices.
 *
 * Each rotation annihilates a_pq. Writing a_pq = r e^{i phi} and pulling the
 * phase out with D = diag(1, e^{-i phi}) reduces the 2x2 block to the real
 * symmetric case, solved by the classic stable formulas
 *     tau = (a_qq - a_pp) / (2 r),  t = sgn(tau) / (|tau| + sqrt(1 + tau^2)),
 *     c = 1 / sqrt(1 + t^2),        s = t c.
 * The combined plane rotation is
 *     U[p][p] = c,            U[p][q] = s,
 *     U[q][p] = -s e^{-i phi}, U[q][q] = c e^{-i phi},
 * applied as A <- U^dag A U, V <- V U. Sweep order p = 0..n-2, q = p+1..n-1
 * is fixed, so results are bit-stable across runs. Convergence: off-diagonal
 * Frobenius norm < 1e-12, hard cap 100 sweeps (plenty for dims <= 64).
 */
EigenSystem hermitian_eigensystem(const Matrix& m) {
    if (!m.is_hermitian(1e-10))
        throw std::invalid_argument("hermitian_eigensystem: matrix is not Hermitian");
    const int n = m.dim();

    // Work on an exactly Hermitian copy.
    std::vector<cplx> a(static_cast<size_t>(n) * n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) a[idx(n, r, c)] = 0.5 * (m(r, c) + std::conj(m(c, r)));

    std::vector<cplx> v(static_cast<size_t>(n) * n, cplx(0.0, 0.0));
    for (int i = 0; i < n; ++i) v[idx(n, i, i)] = cplx(1.0, 0.0);

    const double conv_tol = 1e-12;
    const int max_sweeps = 100;

    auto off_norm = [&]() {
        double s = 0.0;
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                if (r != c) s += std::norm(a[idx(n, r, c)]);
        return std::sqrt(s);
    };

    for (int sweep = 0; sweep < max_sweeps && off_norm() >= conv_tol; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const cplx apq = a[idx(n, p, q)];
                const double r = std::abs(apq);
                if (r == 0.0) continue;

                const double app = a[idx(n, p, p)].real();
                const double aqq = a[idx(n, q, q)].real();
                const cplx eiphi = apq / r;

                const double tau = (aqq - app) / (2.0 * r);
                const double sign = (tau >= 0.0) ? 1.0 : -1.0;
                const double t = sign / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cplx se = s * eiphi;

                // rows p,q of U^dag A
                for (int j = 0; j < n; ++j) {
                    const cplx ap = a[idx(n, p, j)], aq = a[idx(n, q, j)];
                    a[idx(n, p, j)] = c * ap - se * aq;
                    a[idx(n, q, j)] = s * ap + c * eiphi * aq;
                }
                // columns p,q of (U^dag A) U
                const cplx sec = s * std::conj(eiphi);
                for (int i = 0; i < n; ++i) {
                    const cplx ap = a[idx(n, i, p)], aq = a[idx(n, i, q)];
                    a[idx(n, i, p)] = c * ap - sec * aq;
                    a[idx(n, i, q)] = s * ap + c * std::conj(eiphi) * aq;
                }
                a[idx(n, p, q)] = cplx(0.0, 0.0);
                a[idx(n, q, p)] = cplx(0.0, 0.0);
                a[idx(n, p, p)] = cplx(app - t * r, 0.0);
                a[idx(n, q, q)] = cplx(aqq + t * r, 0.0);

                for (int i = 0; i < n; ++i) {
                    const cplx vp = v[idx(n, i, p)], vq = v[idx(n, i, q)];
                    v[idx(n, i, p)] = c * vp - sec * vq;
                    v[idx(n, i, q)] = s * vp + c * std::conj(eiphi) * vq;
                }
            }
        }
    }

    std::vector<double> eigs(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) eigs[static_cast<size_t>(i)] = a[idx(n, i, i)].real();

    // Ascending order, ties broken by original position (stable).
    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return eigs[static_cast<size_t>(x)] < eigs[static_cast<size_t>(y)]; });

    std::vector<double> sorted_eigs(static_cast<size_t>(n));
    std::vector<cplx> sorted_v(static_cast<size_t>(n) * n);
    for (int k = 0; k < n; ++k) {
        sorted_eigs[static_cast<size_t>(k)] = eigs[static_cast<size_t>(order[static_cast<size_t>(k)])];
        for (int i = 0; i < n; ++i) sorted_v[idx(n, i, k)] = v[idx(n, i, order[static_cast<size_t>(k)])];
    }
    return EigenSystem{std::move(sorted_eigs), Matrix(n, std::move(sorted_v))};
}

namespace {

// V f(lambda) V^dag for a Hermitian input already eigendecomposed.
Matrix reassemble(const EigenSystem& es, const std::vector<double>& f) {
    const int n = es.eigenvectors.dim();
    std::vector<cplx> out(static_cast<size_t>(n) * n, cplx(0.0, 0.0));
    for (int k = 0; k < n; ++k) {
        const double fk = f[static_cast<size_t>(k)];
        if (fk == 0.0) continue;
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                out[idx(n, r, c)] += fk * es.eigenvectors(r, k) * std::conj(es.eigenvectors(c, k));
    }
    return Matrix(n, std::move(out));
}

}  // namespace

Matrix psd_sqrt(const Matrix& m) {
    EigenSystem es = hermitian_eigensystem(m);
    std::vector<double> roots(es.eigenvalues.size());
    for (size_t k = 0; k < es.eigenvalues.size(); ++k) {
        double lam = es.eigenvalues[k];
        if (lam < -1e-9)
            throw std::domain_error("psd_sqrt: eigenvalue " + std::to_string(lam) + " below -1e-9");
        roots[k] = (lam > 0.0) ? std::sqrt(lam) : 0.0;
    }
    return reassemble(es, roots);
}

double trace_norm(const Matrix& m) {
    // Hermitian dilation [[0, A], [A^dag, 0]] has eigenvalues +-sigma_i, so
    // the singular values are read off directly. Going through A^dag A would
    // square them first and amplify round-off to sqrt(eps) near sigma = 0.
    const int n = m.dim();
    std::vector<cplx> d(static_cast<size_t>(2 * n) * (2 * n), cplx(0.0, 0.0));
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            d[idx(2 * n, r, n + c)] = m(r, c);
            d[idx(2 * n, n + c, r)] = std::conj(m(r, c));
        }
    EigenSystem es = hermitian_eigensystem(Matrix(2 * n, std::move(d)));
    double sum = 0.0;
    for (double lam : es.eigenvalues) sum += std::abs(lam);
    return 0.5 * sum;
}

Matrix project_psd(const Matrix& m) {
    EigenSystem es = hermitian_eigensystem(m);
    std::vector<double> clipped(es.eigenvalues.size());
    for (size_t k = 0; k < es.eigenvalues.size(); ++k)
        clipped[k] = std::max(es.eigenvalues[k], 0.0);
    return reassemble(es, clipped);
}

Matrix sigma_x() { return Matrix(2, {cplx(0, 0), cplx(1, 0), cplx(1, 0), cplx(0, 0)}); }
Matrix sigma_y() { return Matrix(2, {cplx(0, 0), cplx(0, -1), cplx(0, 1), cplx(0, 0)}); }
Matrix sigma_z() { return Matrix(2, {cplx(1, 0), cplx(0, 0), cplx(0, 0), cplx(-1, 0)}); }

Matrix bloch_observable(double nx, double ny, double nz) {
    return Matrix(2, {cplx(nz, 0), cplx(nx, -ny), cplx(nx, ny), cplx(-nz, 0)});
}

}  // namespace qmeas
