// states.hpp — bipartite states, joint outcome statistics, and the Shannon /
// von Neumann entropy functionals.

#pragma once

#include "qmeas/matrix.hpp"
#include "qmeas/povm.hpp"

#include <vector>

namespace qmeas {

// Density matrix with declared subsystem split. Construction validates PSD
// (tol 1e-9), unit trace (tol 1e-9) and dim = d_a * d_b.
struct BipartiteState {
    Matrix rho;
    int d_a;
    int d_b;

    BipartiteState(Matrix rho, int d_a, int d_b);

    Matrix reduced_a() const { return partial_trace(rho, d_a, d_b, Subsystem::a); }
    Matrix reduced_b() const { return partial_trace(rho, d_a, d_b, Subsystem::b); }
};

// (|01> - |10>)/sqrt(2) as a two-qubit density matrix.
BipartiteState bell_singlet();

// w |psi-><psi-| + (1-w) I/4, w in [0, 1].
BipartiteState werner_state(double w);

// Probability table over (Alice outcome, Bob outcome), stored Alice-major.
// Entries below -1e-12 are rejected; tiny negatives are clipped to zero.
struct JointDistribution {
    std::vector<int> alice_outcomes;
    std::vector<int> bob_outcomes;
    std::vector<double> p;  // p[a * n_bob + b]

    JointDistribution(std::vector<int> alice, std::vector<int> bob, std::vector<double> p);

    double prob(int a_label, int b_label) const;
    std::vector<double> alice_marginal() const;
    std::vector<double> bob_marginal() const;
};

// p(a,b) = Tr[rho (E_a (x) F_b)].
JointDistribution joint_outcome_distribution(const BipartiteState& state, const Povm& alice,
                                             const Povm& bob);

// Entropies, all in bits. 0 log 0 = 0 throughout.
double shannon_entropy(const std::vector<double>& p);
double binary_entropy(double p);

enum class Side { alice, bob };

// H(other | condition_on) = H(joint) - H(marginal of condition_on).
double conditional_shannon(const JointDistribution& j, Side condition_on);

double von_neumann_entropy(const Matrix& rho);

// S(A|B) = S(rho_AB) - S(rho_B); negative only for entangled states.
double conditional_von_neumann(const BipartiteState& state);

// Classical-quantum state sum_x |x><x| (x) rho_B^(x), kept as the list of
// unnormalized conditional blocks; p(x) = Tr[rho_B^(x)].
struct CqState {
    struct Block {
        int outcome;
        Matrix rho_b;  // unnormalized
    };
    std::vector<Block> blocks;

    explicit CqState(std::vector<Block> blocks);
};

// rho_B^(x) = Tr_A[rho_AB (E(x) (x) 1_B)] for Alice's POVM.
CqState post_measurement_cq(const BipartiteState& state, const Povm& alice);

// S(X|B) = H({p(x)}) + sum_x p(x) S(rho_B^(x)/p(x)) - S(rho_B), evaluated on
// the block spectra; zero-trace blocks contribute nothing.
double conditional_entropy_after_measurement(const CqState& cq);

}  // namespace qmeas
