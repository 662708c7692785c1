#include "qmeas/inequalities.hpp"

#include <cmath>
#include <stdexcept>

namespace qmeas {

Scenario::Scenario(BipartiteState state_in, Povm alice_x_in, Povm alice_z_in, Povm bob_x_in,
                   Povm bob_z_in)
    : state(std::move(state_in)),
      alice_x(std::move(alice_x_in)),
      alice_z(std::move(alice_z_in)),
      bob_x(std::move(bob_x_in)),
      bob_z(std::move(bob_z_in)) {
    if (alice_x.dim != state.d_a || alice_z.dim != state.d_a)
        throw std::invalid_argument("Scenario: Alice POVM dimension does not match d_a");
    if (bob_x.dim != state.d_b || bob_z.dim != state.d_b)
        throw std::invalid_argument("Scenario: Bob POVM dimension does not match d_b");
}

double overlap_c(const Povm& x, const Povm& z) {
    if (x.dim != z.dim) throw std::invalid_argument("overlap_c: dimension mismatch");
    double best = 0.0;
    for (const Matrix& ex : x.effects) {
        const Matrix rx = psd_sqrt(ex);
        for (const Matrix& ez : z.effects) best = std::max(best, trace_norm(rx * psd_sqrt(ez)));
    }
    return best;
}

MuBoundCheck mu_bound_check(const Povm& x, const Povm& z, const Matrix& rho) {
    const double lhs =
        shannon_entropy(outcome_distribution(x, rho)) + shannon_entropy(outcome_distribution(z, rho));
    const double rhs = -2.0 * std::log2(overlap_c(x, z));
    return MuBoundCheck{lhs, rhs, lhs >= rhs - kInequalitySlack};
}

UncertaintyReport memory_bound_report(const Scenario& s) {
    UncertaintyReport r;
    r.c_overlap = overlap_c(s.alice_x, s.alice_z);
    r.mu_bound = -2.0 * std::log2(r.c_overlap);
    r.s_a_given_b = conditional_von_neumann(s.state);
    r.memory_bound = r.mu_bound + r.s_a_given_b;
    r.h_x_given_xp =
        conditional_shannon(joint_outcome_distribution(s.state, s.alice_x, s.bob_x), Side::bob);
    r.h_z_given_zp =
        conditional_shannon(joint_outcome_distribution(s.state, s.alice_z, s.bob_z), Side::bob);
    r.lhs_sum = r.h_x_given_xp + r.h_z_given_zp;
    r.steering_satisfied = r.lhs_sum >= r.mu_bound - kInequalitySlack;
    r.memory_inequality_satisfied = r.lhs_sum >= r.memory_bound - kInequalitySlack;
    r.key_rate_lower_bound = r.mu_bound - r.lhs_sum;
    return r;
}

SteeringCheck steering_check(const Scenario& s) {
    const UncertaintyReport r = memory_bound_report(s);
    return SteeringCheck{r.lhs_sum, r.mu_bound, r.lhs_sum < r.mu_bound - kInequalitySlack};
}

double key_rate_lower_bound(const Scenario& s) {
    const UncertaintyReport r = memory_bound_report(s);
    return r.key_rate_lower_bound;
}

bool eve_tradeoff_bound(double s_x_given_e, double s_z_given_b, double c) {
    if (!(c > 0.0 && c <= 1.0)) throw std::domain_error("eve_tradeoff_bound: c must lie in (0, 1]");
    return s_x_given_e + s_z_given_b >= -2.0 * std::log2(c) - kInequalitySlack;
}

double closed_form_game_entropy(double eta) {
    if (!(eta >= 0.0 && eta <= 1.0))
        throw std::domain_error("closed_form_game_entropy: eta must lie in [0, 1]");
    return 2.0 * binary_entropy(0.5 * (1.0 + eta));
}

}  // namespace qmeas
