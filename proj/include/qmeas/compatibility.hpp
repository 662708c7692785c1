// compatibility.hpp — joint-measurability decisions: the analytic pair
// criterion for unbiased qubit POVMs and a Dykstra alternating-projection
// feasibility solver for grand POVMs with prescribed marginals.

#pragma once

#include "qmeas/povm.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qmeas {

// |eta_a a + eta_b b| + |eta_a a - eta_b b| <= 2 for unbiased dichotomic
// qubit pairs. For orthogonal axes and equal eta this is eta <= 1/sqrt(2).
bool busch_pair_criterion(const UnsharpQubitSpec& a, const UnsharpQubitSpec& b);

struct SolverOptions {
    double feas_tol = 1e-7;        // residual below this => compatible
    double infeas_tol = 1e-4;      // plateau above this => incompatible
    int max_iter = 10000;
    int plateau_window = 500;      // relative change < 1e-10 over this window
    int max_product_outcomes = 64;
};

enum class JmStatus { compatible, incompatible, indeterminate };

std::string to_string(JmStatus s);

struct JmVerdict {
    JmStatus status = JmStatus::indeterminate;
    std::optional<Povm> witness;  // present iff compatible; validated grand POVM
    double residual = 0.0;        // final max marginal/PSD constraint violation
    int iterations = 0;
};

// Searches for a grand POVM G over the product outcome space whose marginals
// reproduce the given POVMs, alternating Dykstra projections between the
// per-block PSD cone and the affine marginal subspace. Infeasibility is
// reported heuristically via a residual plateau; near the boundary the
// verdict may be indeterminate. Grand outcome labels are the row-major codes
// of the product tuples (first POVM major).
JmVerdict jm_feasibility(const std::vector<Povm>& povms, const SolverOptions& opts = {});

// Sums a grand POVM down to the marginal for one setting. Grand outcome
// labels must be row-major product codes for the given arities; the returned
// POVM carries positional labels 0..arity-1.
Povm marginal_of_grand(const Povm& grand, int setting_index, const std::vector<int>& arities);

// Row-major product-code helpers shared by the solver and its callers.
int product_space_size(const std::vector<int>& arities);
std::vector<int> decode_product_label(int code, const std::vector<int>& arities);

}  // namespace qmeas
