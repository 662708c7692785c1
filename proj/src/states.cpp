#include "qmeas/states.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qmeas {

namespace {

constexpr double kStateTol = 1e-9;

double log2_safe(double x) { return std::log2(x); }

// -sum p log2 p over nonnegative weights; weights below the floor are
// treated as exact zeros.
double entropy_of_weights(const std::vector<double>& w) {
    double h = 0.0;
    for (double v : w)
        if (v > 0.0) h -= v * log2_safe(v);
    return h;
}

}  // namespace

BipartiteState::BipartiteState(Matrix rho_in, int d_a_in, int d_b_in)
    : rho(std::move(rho_in)), d_a(d_a_in), d_b(d_b_in) {
    if (d_a < 1 || d_b < 1 || rho.dim() != d_a * d_b)
        throw std::invalid_argument("BipartiteState: rho dim must equal d_a*d_b");
    if (!rho.is_psd(kStateTol))
        throw std::domain_error("BipartiteState: rho is not PSD");
    if (std::abs(rho.trace().real() - 1.0) > kStateTol || std::abs(rho.trace().imag()) > kStateTol)
        throw std::domain_error("BipartiteState: trace is not 1");
}

BipartiteState bell_singlet() {
    // |psi-> = (|01> - |10>)/sqrt(2); basis order |00>,|01>,|10>,|11>.
    std::vector<cplx> e(16, cplx(0.0, 0.0));
    e[1 * 4 + 1] = cplx(0.5, 0.0);
    e[2 * 4 + 2] = cplx(0.5, 0.0);
    e[1 * 4 + 2] = cplx(-0.5, 0.0);
    e[2 * 4 + 1] = cplx(-0.5, 0.0);
    return BipartiteState(Matrix(4, std::move(e)), 2, 2);
}

BipartiteState werner_state(double w) {
    if (!(w >= 0.0 && w <= 1.0)) throw std::domain_error("werner_state: w must lie in [0, 1]");
    const Matrix mix = w * bell_singlet().rho + (0.25 * (1.0 - w)) * Matrix::identity(4);
    return BipartiteState(mix, 2, 2);
}

JointDistribution::JointDistribution(std::vector<int> alice, std::vector<int> bob,
                                     std::vector<double> p_in)
    : alice_outcomes(std::move(alice)), bob_outcomes(std::move(bob)), p(std::move(p_in)) {
    if (p.size() != alice_outcomes.size() * bob_outcomes.size())
        throw std::invalid_argument("JointDistribution: table size mismatch");
    double sum = 0.0;
    for (double& v : p) {
        if (v < -1e-12) throw std::domain_error("JointDistribution: negative probability");
        if (v < 0.0) v = 0.0;
        sum += v;
    }
    if (std::abs(sum - 1.0) > kStateTol)
        throw std::domain_error("JointDistribution: probabilities sum to " + std::to_string(sum));
}

double JointDistribution::prob(int a_label, int b_label) const {
    for (size_t a = 0; a < alice_outcomes.size(); ++a)
        for (size_t b = 0; b < bob_outcomes.size(); ++b)
            if (alice_outcomes[a] == a_label && bob_outcomes[b] == b_label)
                return p[a * bob_outcomes.size() + b];
    throw std::invalid_argument("JointDistribution: unknown outcome pair");
}

std::vector<double> JointDistribution::alice_marginal() const {
    std::vector<double> m(alice_outcomes.size(), 0.0);
    for (size_t a = 0; a < alice_outcomes.size(); ++a)
        for (size_t b = 0; b < bob_outcomes.size(); ++b) m[a] += p[a * bob_outcomes.size() + b];
    return m;
}

std::vector<double> JointDistribution::bob_marginal() const {
    std::vector<double> m(bob_outcomes.size(), 0.0);
    for (size_t a = 0; a < alice_outcomes.size(); ++a)
        for (size_t b = 0; b < bob_outcomes.size(); ++b) m[b] += p[a * bob_outcomes.size() + b];
    return m;
}

JointDistribution joint_outcome_distribution(const BipartiteState& state, const Povm& alice,
                                             const Povm& bob) {
    if (alice.dim != state.d_a || bob.dim != state.d_b)
        throw std::invalid_argument("joint_outcome_distribution: POVM dimensions do not match state");
    std::vector<double> table;
    table.reserve(alice.effects.size() * bob.effects.size());
    for (const Matrix& ea : alice.effects)
        for (const Matrix& fb : bob.effects)
            table.push_back((state.rho * tensor_product(ea, fb)).trace().real());
    return JointDistribution(alice.outcomes, bob.outcomes, std::move(table));
}

double shannon_entropy(const std::vector<double>& p) {
    double sum = 0.0;
    std::vector<double> clipped(p.size());
    for (size_t i = 0; i < p.size(); ++i) {
        clipped[i] = std::max(p[i], 0.0);
        sum += clipped[i];
    }
    if (std::abs(sum - 1.0) > kStateTol)
        throw std::domain_error("shannon_entropy: distribution sums to " + std::to_string(sum));
    return entropy_of_weights(clipped);
}

double binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("binary_entropy: p must lie in [0, 1]");
    double h = 0.0;
    if (p > 0.0) h -= p * log2_safe(p);
    if (p < 1.0) h -= (1.0 - p) * log2_safe(1.0 - p);
    return h;
}

double conditional_shannon(const JointDistribution& j, Side condition_on) {
    const std::vector<double> marginal =
        (condition_on == Side::bob) ? j.bob_marginal() : j.alice_marginal();
    const double h = entropy_of_weights(j.p) - entropy_of_weights(marginal);
    // Nonnegative up to round-off.
    return (h < 0.0 && h > -1e-9) ? 0.0 : h;
}

double von_neumann_entropy(const Matrix& rho) {
    if (!rho.is_psd(kStateTol) || std::abs(rho.trace().real() - 1.0) > kStateTol)
        throw std::domain_error("von_neumann_entropy: not a valid density matrix");
    std::vector<double> lam = hermitian_eigensystem(rho).eigenvalues;
    for (double& v : lam) v = std::max(v, 0.0);
    return entropy_of_weights(lam);
}

double conditional_von_neumann(const BipartiteState& state) {
    return von_neumann_entropy(state.rho) - von_neumann_entropy(state.reduced_b());
}

CqState::CqState(std::vector<Block> blocks_in) : blocks(std::move(blocks_in)) {
    if (blocks.empty()) throw std::invalid_argument("CqState: no blocks");
    double total = 0.0;
    for (const Block& b : blocks) {
        if (!b.rho_b.is_psd(kStateTol)) throw std::domain_error("CqState: block is not PSD");
        total += b.rho_b.trace().real();
    }
    if (std::abs(total - 1.0) > kStateTol)
        throw std::domain_error("CqState: block traces sum to " + std::to_string(total));
}

CqState post_measurement_cq(const BipartiteState& state, const Povm& alice) {
    if (alice.dim != state.d_a)
        throw std::invalid_argument("post_measurement_cq: POVM dimension does not match state");
    const Matrix id_b = Matrix::identity(state.d_b);
    std::vector<CqState::Block> blocks;
    blocks.reserve(alice.effects.size());
    for (size_t k = 0; k < alice.effects.size(); ++k) {
        const Matrix cond =
            partial_trace(state.rho * tensor_product(alice.effects[k], id_b), state.d_a, state.d_b,
                          Subsystem::b);
        blocks.push_back({alice.outcomes[k], cond});
    }
    return CqState(std::move(blocks));
}

double conditional_entropy_after_measurement(const CqState& cq) {
    // S(rho^X_AB) = H({p(x)}) + sum_x p(x) S(rho_x) for block-diagonal states.
    std::vector<double> probs;
    double avg_block_entropy = 0.0;
    Matrix rho_b(cq.blocks.front().rho_b.dim());
    for (const CqState::Block& b : cq.blocks) {
        rho_b = rho_b + b.rho_b;
        std::vector<double> lam = hermitian_eigensystem(b.rho_b).eigenvalues;
        double px = 0.0;
        for (double& v : lam) {
            v = std::max(v, 0.0);
            px += v;
        }
        probs.push_back(px);
        if (px < 1e-12) continue;  // zero-probability outcome, limit contributes 0
        double s = 0.0;
        for (double v : lam)
            if (v > 0.0) s -= (v / px) * std::log2(v / px);
        avg_block_entropy += px * s;
    }
    return entropy_of_weights(probs) + avg_block_entropy - von_neumann_entropy(rho_b);
}

}  // namespace qmeas
