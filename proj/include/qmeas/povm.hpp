// povm.hpp — POVMs, sharp and unsharp qubit observables, Born-rule
// distributions and grand-POVM post-processing.

#pragma once

#include "qmeas/matrix.hpp"

#include <array>
#include <string>
#include <vector>

namespace qmeas {

// A POVM as plain data: validity is checked explicitly (validate_povm), so
// candidates loaded from files can be inspected without throwing. The named
// constructors below always return validated instances.
struct Povm {
    int dim = 0;
    std::vector<int> outcomes;     // distinct integer labels, one per effect
    std::vector<Matrix> effects;   // same order as outcomes

    int size() const { return static_cast<int>(effects.size()); }
    int index_of(int outcome) const;  // -1 if absent
};

struct Violation {
    std::string constraint;
    double residual = 0.0;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool valid() const { return violations.empty(); }
    std::string summary() const;
};

// Checks: shape, every effect PSD (tol 1e-9) and <= identity (tol 1e-9),
// completeness sum(E) = identity within 1e-9 entrywise, distinct labels.
ValidationReport validate_povm(const Povm& p);

// Rank-1 spectral projectors of a nondegenerate Hermitian observable
// (spectral gap > 1e-9). Effects ordered by ascending eigenvalue; labels are
// the rounded eigenvalues when all are near-integral and distinct, otherwise
// positional indices.
Povm projective_from_observable(const Matrix& obs);

// Unbiased dichotomic qubit measurement: effects (1 +- eta n.sigma)/2.
struct UnsharpQubitSpec {
    std::array<double, 3> axis;  // unit Bloch vector, |axis| = 1 within 1e-12
    double eta;                  // unsharpness, in [0, 1]; 1 = sharp

    UnsharpQubitSpec(std::array<double, 3> axis, double eta);
};

// Outcomes (-1, +1) with effects (1 - eta n.sigma)/2 and (1 + eta n.sigma)/2.
// At eta = 1 this coincides with projective_from_observable(n.sigma).
Povm unsharp_qubit_povm(const UnsharpQubitSpec& spec);

// Born rule p(x) = Tr[rho E(x)], aligned with p.outcomes. rho must be a valid
// density matrix (PSD and unit trace within 1e-9).
std::vector<double> outcome_distribution(const Povm& p, const Matrix& rho);

// Conditional probabilities p(x | setting i, lambda) used to post-process a
// grand POVM's outcomes. One stochastic table per setting; rows are indexed
// by the grand outcome position, columns by the setting's outcome labels.
struct ResponseFunctions {
    struct Setting {
        std::vector<int> outcomes;
        std::vector<std::vector<double>> table;  // table[lambda][k] = p(outcomes[k] | lambda)
    };
    std::vector<Setting> settings;

    explicit ResponseFunctions(std::vector<Setting> settings);
};

// p(x|i) = sum_lambda p(lambda) p(x|i,lambda) with p(lambda) the grand POVM's
// Born distribution on rho. The table must cover every grand outcome.
std::vector<double> post_process_distribution(const Povm& grand, const ResponseFunctions& rf,
                                              int setting, const Matrix& rho);

}  // namespace qmeas
