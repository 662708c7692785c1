#include "qmeas/compatibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace qmeas {

bool busch_pair_criterion(const UnsharpQubitSpec& a, const UnsharpQubitSpec& b) {
    double plus = 0.0, minus = 0.0;
    for (int k = 0; k < 3; ++k) {
        const double pa = a.eta * a.axis[static_cast<size_t>(k)];
        const double pb = b.eta * b.axis[static_cast<size_t>(k)];
        plus += (pa + pb) * (pa + pb);
        minus += (pa - pb) * (pa - pb);
    }
    return std::sqrt(plus) + std::sqrt(minus) <= 2.0;
}

std::string to_string(JmStatus s) {
    switch (s) {
        case JmStatus::compatible: return "compatible";
        case JmStatus::incompatible: return "incompatible";
        default: return "indeterminate";
    }
}

int product_space_size(const std::vector<int>& arities) {
    int total = 1;
    for (int n : arities) {
        if (n < 1) throw std::invalid_argument("product_space_size: arity < 1");
        total *= n;
    }
    return total;
}

std::vector<int> decode_product_label(int code, const std::vector<int>& arities) {
    const int total = product_space_size(arities);
    if (code < 0 || code >= total)
        throw std::invalid_argument("decode_product_label: code out of range");
    std::vector<int> pos(arities.size());
    for (size_t i = arities.size(); i-- > 0;) {
        pos[i] = code % arities[i];
        code /= arities[i];
    }
    return pos;
}

namespace {

using Block = std::vector<cplx>;  // d*d row-major entries of one G(lambda)

Block to_block(const Matrix& m) { return m.entries(); }

Matrix to_matrix(int d, const Block& b) { return Matrix(d, b); }

void add_scaled(Block& dst, const Block& src, double s) {
    for (size_t i = 0; i < dst.size(); ++i) dst[i] += s * src[i];
}

// Replaces the block with its nearest PSD matrix (exact hermitisation first,
// then eigenvalue clipping).
void clip_psd_inplace(int d, Block& b) {
    Block h(b.size());
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c)
            h[static_cast<size_t>(r) * d + c] =
                0.5 * (b[static_cast<size_t>(r) * d + c] +
                       std::conj(b[static_cast<size_t>(c) * d + r]));
    const EigenSystem es = hermitian_eigensystem(to_matrix(d, h));
    std::fill(b.begin(), b.end(), cplx(0.0, 0.0));
    for (int k = 0; k < d; ++k) {
        const double lam = std::max(es.eigenvalues[static_cast<size_t>(k)], 0.0);
        if (lam == 0.0) continue;
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c)
                b[static_cast<size_t>(r) * d + c] +=
                    lam * es.eigenvectors(r, k) * std::conj(es.eigenvectors(c, k));
    }
}

/*
 * Orthogonal projector onto the affine marginal subspace
 *   { G : sum_{lambda: lambda_i = x} G(lambda) = E_i(x)  for all i, x }.
 * The constraints act identically and independently on every matrix entry,
 * so per entry this is the projection of a vector in C^L onto {g : M g = e}
 * with a fixed 0/1 summation matrix M. The update g -= M^T (M M^T)^+ (M g - e)
 * needs only the pseudo-inverse of the small real Gram matrix M M^T, which
 * depends on the arities alone and is precomputed once per problem shape.
 * (M M^T is rank-deficient: the completeness row is shared by all settings.)
 */
class AffineProjector {
public:
    AffineProjector(int d, const std::vector<int>& arities, const std::vector<Povm>& povms)
        : d_(d), arities_(arities), total_(product_space_size(arities)) {
        offsets_.resize(arities.size());
        rows_ = 0;
        for (size_t i = 0; i < arities.size(); ++i) {
            offsets_[i] = rows_;
            rows_ += arities[i];
        }

        row_of_.assign(static_cast<size_t>(total_), {});
        for (int code = 0; code < total_; ++code) {
            const std::vector<int> pos = decode_product_label(code, arities);
            std::vector<int>& rows = row_of_[static_cast<size_t>(code)];
            rows.resize(arities.size());
            for (size_t i = 0; i < arities.size(); ++i) rows[i] = offsets_[i] + pos[i];
        }

        targets_.reserve(static_cast<size_t>(rows_));
        for (const Povm& p : povms)
            for (const Matrix& e : p.effects) targets_.push_back(to_block(e));

        gram_pinv_ = pinv(gram());
    }

    // In-place projection; also returns the pre-projection max constraint
    // violation (max-abs entry over all marginal defects).
    double project(std::vector<Block>& g) const {
        std::vector<Block> defect(static_cast<size_t>(rows_),
                                  Block(static_cast<size_t>(d_) * d_, cplx(0.0, 0.0)));
        for (int code = 0; code < total_; ++code)
            for (int r : row_of_[static_cast<size_t>(code)])
                add_scaled(defect[static_cast<size_t>(r)], g[static_cast<size_t>(code)], 1.0);
        double violation = 0.0;
        for (int r = 0; r < rows_; ++r) {
            add_scaled(defect[static_cast<size_t>(r)], targets_[static_cast<size_t>(r)], -1.0);
            for (const cplx& z : defect[static_cast<size_t>(r)])
                violation = std::max(violation, std::abs(z));
        }

        std::vector<Block> coeff(static_cast<size_t>(rows_),
                                 Block(static_cast<size_t>(d_) * d_, cplx(0.0, 0.0)));
        for (int rp = 0; rp < rows_; ++rp)
            for (int r = 0; r < rows_; ++r) {
                const double k = gram_pinv_[static_cast<size_t>(rp) * rows_ + r];
                if (k != 0.0) add_scaled(coeff[static_cast<size_t>(rp)], defect[static_cast<size_t>(r)], k);
            }

        for (int code = 0; code < total_; ++code)
            for (int r : row_of_[static_cast<size_t>(code)])
                add_scaled(g[static_cast<size_t>(code)], coeff[static_cast<size_t>(r)], -1.0);
        return violation;
    }

private:
    std::vector<double> gram() const {
        std::vector<double> mmt(static_cast<size_t>(rows_) * rows_, 0.0);
        for (size_t i = 0; i < arities_.size(); ++i)
            for (int x = 0; x < arities_[i]; ++x)
                for (size_t j = 0; j < arities_.size(); ++j)
                    for (int y = 0; y < arities_[j]; ++y) {
                        const int ri = offsets_[i] + x, rj = offsets_[j] + y;
                        double count;
                        if (i == j)
                            count = (x == y) ? static_cast<double>(total_) / arities_[i] : 0.0;
                        else
                            count = static_cast<double>(total_) / (arities_[i] * arities_[j]);
                        mmt[static_cast<size_t>(ri) * rows_ + rj] = count;
                    }
        return mmt;
    }

    std::vector<double> pinv(const std::vector<double>& sym) const {
        std::vector<cplx> entries(sym.size());
        for (size_t i = 0; i < sym.size(); ++i) entries[i] = cplx(sym[i], 0.0);
        const EigenSystem es = hermitian_eigensystem(Matrix(rows_, std::move(entries)));
        const double lam_max = std::max(std::abs(es.eigenvalues.front()), std::abs(es.eigenvalues.back()));
        std::vector<double> out(sym.size(), 0.0);
        for (int k = 0; k < rows_; ++k) {
            const double lam = es.eigenvalues[static_cast<size_t>(k)];
            if (lam <= 1e-12 * lam_max) continue;
            const double inv = 1.0 / lam;
            for (int r = 0; r < rows_; ++r)
                for (int c = 0; c < rows_; ++c)
                    out[static_cast<size_t>(r) * rows_ + c] +=
                        inv * (es.eigenvectors(r, k) * std::conj(es.eigenvectors(c, k))).real();
        }
        return out;
    }

    int d_;
    std::vector<int> arities_;
    int total_;
    int rows_;
    std::vector<int> offsets_;
    std::vector<std::vector<int>> row_of_;  // per code: one constraint row per setting
    std::vector<Block> targets_;
    std::vector<double> gram_pinv_;
};

// PSD warm start with the first marginal already exact: nested sandwich
// sqrt(E_1) sqrt(E_2) ... E_m ... sqrt(E_2) sqrt(E_1).
std::vector<Block> sandwich_start(const std::vector<int>& arities,
                                  const std::vector<Povm>& povms) {
    std::vector<std::vector<Matrix>> roots(povms.size());
    for (size_t i = 0; i + 1 < povms.size(); ++i)
        for (const Matrix& e : povms[i].effects) roots[i].push_back(psd_sqrt(e));

    const int total = product_space_size(arities);
    std::vector<Block> g;
    g.reserve(static_cast<size_t>(total));
    for (int code = 0; code < total; ++code) {
        const std::vector<int> pos = decode_product_label(code, arities);
        Matrix core = povms.back().effects[static_cast<size_t>(pos.back())];
        for (size_t i = povms.size() - 1; i-- > 0;) {
            const Matrix& r = roots[i][static_cast<size_t>(pos[i])];
            core = r * core * r;
        }
        g.push_back(to_block(core));
    }
    return g;
}

double min_block_eigenvalue(int d, const Block& b) {
    return hermitian_eigensystem(to_matrix(d, b)).eigenvalues.front();
}

}  // namespace

JmVerdict jm_feasibility(const std::vector<Povm>& povms, const SolverOptions& opts) {
    if (povms.empty()) throw std::invalid_argument("jm_feasibility: no POVMs given");
    const int d = povms.front().dim;
    std::vector<int> arities;
    for (const Povm& p : povms) {
        if (p.dim != d) throw std::invalid_argument("jm_feasibility: POVM dimension mismatch");
        if (p.size() < 1) throw std::invalid_argument("jm_feasibility: empty POVM");
        arities.push_back(p.size());
    }
    const int total = product_space_size(arities);
    if (total > opts.max_product_outcomes)
        throw std::invalid_argument("jm_feasibility: product outcome space " + std::to_string(total) +
                                    " exceeds cap " + std::to_string(opts.max_product_outcomes));

    const AffineProjector affine(d, arities, povms);
    std::vector<Block> g = sandwich_start(arities, povms);
    std::vector<Block> q(static_cast<size_t>(total), Block(static_cast<size_t>(d) * d, cplx(0.0, 0.0)));

    // Dykstra with the correction kept on the cone side only; the marginal
    // set is affine, where the correction has no effect. The verdict is
    // decided within max_iter; once feasibility is reached the iteration
    // continues (polish) so the returned witness is accurate well beyond
    // feas_tol and survives independent validation.
    const double polish_tol = 1e-11;
    const int polish_cap = opts.max_iter + 500000;
    const double plateau_rel = 1e-10;

    std::vector<double> history;
    history.reserve(1024);
    double residual = std::numeric_limits<double>::infinity();
    bool feasible_seen = false;
    int it = 0;

    while (it < opts.max_iter || (feasible_seen && it < polish_cap)) {
        ++it;
        std::vector<Block> h = g;
        affine.project(h);
        for (int code = 0; code < total; ++code) {
            Block sum = h[static_cast<size_t>(code)];
            add_scaled(sum, q[static_cast<size_t>(code)], 1.0);
            Block projected = sum;
            clip_psd_inplace(d, projected);
            for (size_t e = 0; e < sum.size(); ++e)
                q[static_cast<size_t>(code)][e] = sum[e] - projected[e];
            g[static_cast<size_t>(code)] = std::move(projected);
        }

        // g is PSD by construction; its residual is the marginal deviation.
        {
            std::vector<Block> probe = g;
            residual = affine.project(probe);
        }
        history.push_back(residual);
        if (residual < opts.feas_tol) feasible_seen = true;
        if (feasible_seen && residual < polish_tol) break;

        if (it > opts.plateau_window) {
            const double then = history[static_cast<size_t>(it - 1 - opts.plateau_window)];
            const double change = std::abs(residual - then);
            if (change < plateau_rel * std::max(then, 1e-300)) {
                if (!feasible_seen && residual > opts.infeas_tol)
                    return JmVerdict{JmStatus::incompatible, std::nullopt, residual, it};
                break;  // stuck; report what we have
            }
        }
    }

    if (!feasible_seen) return JmVerdict{JmStatus::indeterminate, std::nullopt, residual, it};

    // Witness construction: restore the marginals exactly, clip the (tiny)
    // negative part, then renormalise S^-1/2 G S^-1/2 so completeness is
    // machine-exact. The result is re-validated from scratch; if that fails
    // the verdict is downgraded rather than trusted.
    std::vector<Block> h = g;
    affine.project(h);
    std::vector<Matrix> blocks;
    blocks.reserve(static_cast<size_t>(total));
    double psd_defect = 0.0;
    for (int code = 0; code < total; ++code) {
        psd_defect = std::max(psd_defect, -min_block_eigenvalue(d, h[static_cast<size_t>(code)]));
        Block b = h[static_cast<size_t>(code)];
        clip_psd_inplace(d, b);
        blocks.push_back(to_matrix(d, b));
    }
    Matrix sum(d);
    for (const Matrix& b : blocks) sum = sum + b;
    const EigenSystem es = hermitian_eigensystem(sum);
    if (es.eigenvalues.front() <= 0.0)
        return JmVerdict{JmStatus::indeterminate, std::nullopt, residual, it};
    std::vector<cplx> inv_root_entries(static_cast<size_t>(d) * d, cplx(0.0, 0.0));
    for (int k = 0; k < d; ++k) {
        const double f = 1.0 / std::sqrt(es.eigenvalues[static_cast<size_t>(k)]);
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c)
                inv_root_entries[static_cast<size_t>(r) * d + c] +=
                    f * es.eigenvectors(r, k) * std::conj(es.eigenvectors(c, k));
    }
    const Matrix inv_root(d, std::move(inv_root_entries));

    Povm witness;
    witness.dim = d;
    for (int code = 0; code < total; ++code) {
        witness.outcomes.push_back(code);
        witness.effects.push_back(inv_root * blocks[static_cast<size_t>(code)] * inv_root);
    }

    if (!validate_povm(witness).valid())
        return JmVerdict{JmStatus::indeterminate, std::nullopt, residual, it};

    double witness_dev = psd_defect;
    for (size_t i = 0; i < povms.size(); ++i) {
        const Povm marg = marginal_of_grand(witness, static_cast<int>(i), arities);
        for (size_t k = 0; k < povms[i].effects.size(); ++k)
            witness_dev = std::max(witness_dev, max_abs_diff(marg.effects[k], povms[i].effects[k]));
    }
    if (witness_dev > opts.feas_tol)
        return JmVerdict{JmStatus::indeterminate, std::nullopt, std::max(residual, witness_dev), it};

    return JmVerdict{JmStatus::compatible, std::move(witness), witness_dev, it};
}

Povm marginal_of_grand(const Povm& grand, int setting_index, const std::vector<int>& arities) {
    if (setting_index < 0 || setting_index >= static_cast<int>(arities.size()))
        throw std::invalid_argument("marginal_of_grand: setting index out of range");
    const int total = product_space_size(arities);
    std::set<int> seen;
    for (int label : grand.outcomes) {
        if (label < 0 || label >= total)
            throw std::invalid_argument("marginal_of_grand: label " + std::to_string(label) +
                                        " is not a product code for the given arities");
        if (!seen.insert(label).second)
            throw std::invalid_argument("marginal_of_grand: duplicate product label");
    }

    const int arity = arities[static_cast<size_t>(setting_index)];
    Povm out;
    out.dim = grand.dim;
    std::vector<Matrix> sums(static_cast<size_t>(arity), Matrix(grand.dim));
    for (size_t k = 0; k < grand.effects.size(); ++k) {
        const int pos = decode_product_label(grand.outcomes[k], arities)[static_cast<size_t>(setting_index)];
        sums[static_cast<size_t>(pos)] = sums[static_cast<size_t>(pos)] + grand.effects[k];
    }
    for (int x = 0; x < arity; ++x) {
        out.outcomes.push_back(x);
        out.effects.push_back(sums[static_cast<size_t>(x)]);
    }
    return out;
}

}  // namespace qmeas
