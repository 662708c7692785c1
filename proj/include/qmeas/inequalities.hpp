// inequalities.hpp — the uncertainty-game inequalities: Maassen-Uffink bound,
// memory-assisted bound, entropic steering inequality and key-rate chain.

#pragma once

#include "qmeas/povm.hpp"
#include "qmeas/states.hpp"

namespace qmeas {

// One round of the uncertainty game: Alice's X/Z pair, Bob's X'/Z' pair and
// the shared state.
struct Scenario {
    BipartiteState state;
    Povm alice_x;
    Povm alice_z;
    Povm bob_x;
    Povm bob_z;

    Scenario(BipartiteState state, Povm alice_x, Povm alice_z, Povm bob_x, Povm bob_z);
};

// All inequality sides for one scenario, in bits.
struct UncertaintyReport {
    double c_overlap = 0.0;
    double mu_bound = 0.0;       // -2 log2 c_overlap
    double s_a_given_b = 0.0;
    double memory_bound = 0.0;   // mu_bound + s_a_given_b
    double h_x_given_xp = 0.0;
    double h_z_given_zp = 0.0;
    double lhs_sum = 0.0;        // h_x_given_xp + h_z_given_zp
    bool steering_satisfied = false;
    bool memory_inequality_satisfied = false;
    double key_rate_lower_bound = 0.0;  // mu_bound - lhs_sum
};

// C(X,Z) = max_{x,z} || sqrt(E_X(x)) sqrt(E_Z(z)) ||_1.
double overlap_c(const Povm& x, const Povm& z);

struct MuBoundCheck {
    double lhs;
    double rhs;
    bool satisfied;
};

// H(X) + H(Z) >= -2 log2 C(X,Z) on the given state.
MuBoundCheck mu_bound_check(const Povm& x, const Povm& z, const Matrix& rho);

UncertaintyReport memory_bound_report(const Scenario& s);

struct SteeringCheck {
    double lhs;
    double rhs;
    bool violated;
};

// H(X|X') + H(Z|Z') against -2 log2 C of Alice's pair; violation witnesses
// steering (and hence incompatibility of Bob's pair).
SteeringCheck steering_check(const Scenario& s);

// K >= -2 log2 C(X,Z) - [H(X|X') + H(Z|Z')]; may be negative (vacuous).
double key_rate_lower_bound(const Scenario& s);

// Purely algebraic check of S(X|E) + S(Z|B) >= -2 log2 c; Eve's side is
// never simulated, the entropies are caller-supplied.
bool eve_tradeoff_bound(double s_x_given_e, double s_z_given_b, double c);

// Closed form 2 H[(1+eta)/2] for the singlet game with sharp Alice and
// unsharp Bob; the analytic oracle for lhs_sum.
double closed_form_game_entropy(double eta);

// Numerical slack: inequalities hold with a one-sided 1e-9 margin so exact
// saturation reports as satisfied.
inline constexpr double kInequalitySlack = 1e-9;

}  // namespace qmeas
