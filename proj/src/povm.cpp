#include "qmeas/povm.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace qmeas {

namespace {

constexpr double kPovmTol = 1e-9;

double min_eigenvalue(const Matrix& m) {
    return hermitian_eigensystem(m).eigenvalues.front();
}

// Internal sanity check for the named constructors: they must always
// produce valid POVMs, so a failure here is a bug, not bad input.
Povm checked(Povm p, const char* who) {
    ValidationReport rep = validate_povm(p);
    if (!rep.valid())
        throw std::logic_error(std::string(who) + ": constructed POVM failed validation: " + rep.summary());
    return p;
}

}  // namespace

int Povm::index_of(int outcome) const {
    for (size_t k = 0; k < outcomes.size(); ++k)
        if (outcomes[k] == outcome) return static_cast<int>(k);
    return -1;
}

std::string ValidationReport::summary() const {
    if (valid()) return "valid";
    std::ostringstream os;
    for (size_t i = 0; i < violations.size(); ++i) {
        if (i) os << "; ";
        os << violations[i].constraint << " (residual " << violations[i].residual << ")";
    }
    return os.str();
}

ValidationReport validate_povm(const Povm& p) {
    ValidationReport rep;
    auto fail = [&](std::string what, double residual) {
        rep.violations.push_back({std::move(what), residual});
    };

    if (p.dim < 1) {
        fail("dim must be >= 1", 0.0);
        return rep;
    }
    if (p.effects.empty()) {
        fail("no effects", 0.0);
        return rep;
    }
    if (p.outcomes.size() != p.effects.size()) {
        fail("outcome/effect count mismatch",
             std::abs(static_cast<double>(p.outcomes.size()) - static_cast<double>(p.effects.size())));
        return rep;
    }
    for (size_t k = 0; k < p.effects.size(); ++k) {
        if (p.effects[k].dim() != p.dim) {
            fail("effect " + std::to_string(k) + " has wrong dimension", 0.0);
            return rep;
        }
    }

    const Matrix id = Matrix::identity(p.dim);
    for (size_t k = 0; k < p.effects.size(); ++k) {
        const Matrix& e = p.effects[k];
        if (!e.is_hermitian(kPovmTol)) {
            double asym = 0.0;
            for (int r = 0; r < e.dim(); ++r)
                for (int c = 0; c < e.dim(); ++c)
                    asym = std::max(asym, std::abs(e(r, c) - std::conj(e(c, r))));
            fail("effect " + std::to_string(k) + " not Hermitian", asym);
            continue;
        }
        const double lo = min_eigenvalue(e);
        if (lo < -kPovmTol) fail("effect " + std::to_string(k) + " not PSD", -lo);
        const double hi = min_eigenvalue(id - e);
        if (hi < -kPovmTol) fail("effect " + std::to_string(k) + " exceeds identity", -hi);
    }

    Matrix sum(p.dim);
    for (const Matrix& e : p.effects) sum = sum + e;
    const double completeness = max_abs_diff(sum, id);
    if (completeness > kPovmTol) fail("effects do not sum to identity", completeness);

    std::set<int> seen(p.outcomes.begin(), p.outcomes.end());
    if (seen.size() != p.outcomes.size()) fail("duplicate outcome labels", 0.0);

    return rep;
}

Povm projective_from_observable(const Matrix& obs) {
    if (!obs.is_hermitian(1e-10))
        throw std::invalid_argument("projective_from_observable: observable is not Hermitian");
    EigenSystem es = hermitian_eigensystem(obs);
    const int n = obs.dim();
    for (int k = 0; k + 1 < n; ++k)
        if (es.eigenvalues[static_cast<size_t>(k + 1)] - es.eigenvalues[static_cast<size_t>(k)] <= 1e-9)
            throw std::invalid_argument("projective_from_observable: degenerate spectrum");

    bool integral = true;
    std::vector<int> labels(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double lam = es.eigenvalues[static_cast<size_t>(k)];
        const double rounded = std::round(lam);
        if (std::abs(lam - rounded) > 1e-8) {
            integral = false;
            break;
        }
        labels[static_cast<size_t>(k)] = static_cast<int>(rounded);
    }
    if (integral) {
        std::set<int> distinct(labels.begin(), labels.end());
        integral = distinct.size() == labels.size();
    }
    if (!integral)
        for (int k = 0; k < n; ++k) labels[static_cast<size_t>(k)] = k;

    Povm p;
    p.dim = n;
    p.outcomes = labels;
    for (int k = 0; k < n; ++k) {
        std::vector<cplx> proj(static_cast<size_t>(n) * n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                proj[static_cast<size_t>(r) * n + c] =
                    es.eigenvectors(r, k) * std::conj(es.eigenvectors(c, k));
        p.effects.emplace_back(n, std::move(proj));
    }
    return checked(std::move(p), "projective_from_observable");
}

UnsharpQubitSpec::UnsharpQubitSpec(std::array<double, 3> axis_in, double eta_in)
    : axis(axis_in), eta(eta_in) {
    const double len = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
    if (std::abs(len - 1.0) > 1e-12)
        throw std::invalid_argument("UnsharpQubitSpec: axis must be a unit vector");
    if (!(eta >= 0.0 && eta <= 1.0))
        throw std::invalid_argument("UnsharpQubitSpec: eta must lie in [0, 1]");
}

Povm unsharp_qubit_povm(const UnsharpQubitSpec& spec) {
    const Matrix obs = bloch_observable(spec.axis[0], spec.axis[1], spec.axis[2]);
    const Matrix id = Matrix::identity(2);
    Povm p;
    p.dim = 2;
    p.outcomes = {-1, +1};
    p.effects = {0.5 * (id - spec.eta * obs), 0.5 * (id + spec.eta * obs)};
    return checked(std::move(p), "unsharp_qubit_povm");
}

std::vector<double> outcome_distribution(const Povm& p, const Matrix& rho) {
    if (rho.dim() != p.dim) throw std::invalid_argument("outcome_distribution: dimension mismatch");
    if (!rho.is_psd(kPovmTol) || std::abs(rho.trace().real() - 1.0) > kPovmTol ||
        std::abs(rho.trace().imag()) > kPovmTol)
        throw std::domain_error("outcome_distribution: rho is not a valid density matrix");

    std::vector<double> probs(p.effects.size());
    double sum = 0.0;
    for (size_t k = 0; k < p.effects.size(); ++k) {
        double pk = (rho * p.effects[k]).trace().real();
        if (pk < 0.0 && pk > -1e-12) pk = 0.0;
        probs[k] = pk;
        sum += pk;
    }
    if (std::abs(sum - 1.0) > kPovmTol)
        throw std::domain_error("outcome_distribution: probabilities sum to " + std::to_string(sum));
    return probs;
}

ResponseFunctions::ResponseFunctions(std::vector<Setting> settings_in)
    : settings(std::move(settings_in)) {
    for (size_t i = 0; i < settings.size(); ++i) {
        const Setting& s = settings[i];
        for (size_t lam = 0; lam < s.table.size(); ++lam) {
            const auto& row = s.table[lam];
            if (row.size() != s.outcomes.size())
                throw std::invalid_argument("ResponseFunctions: row width mismatch at setting " +
                                            std::to_string(i));
            double sum = 0.0;
            for (double v : row) {
                if (v < 0.0) throw std::invalid_argument("ResponseFunctions: negative entry");
                sum += v;
            }
            if (std::abs(sum - 1.0) > 1e-12)
                throw std::invalid_argument("ResponseFunctions: row not normalized at setting " +
                                            std::to_string(i) + ", lambda " + std::to_string(lam));
        }
    }
}

std::vector<double> post_process_distribution(const Povm& grand, const ResponseFunctions& rf,
                                              int setting, const Matrix& rho) {
    if (setting < 0 || setting >= static_cast<int>(rf.settings.size()))
        throw std::invalid_argument("post_process_distribution: no such setting");
    const ResponseFunctions::Setting& s = rf.settings[static_cast<size_t>(setting)];
    if (s.table.size() != grand.effects.size())
        throw std::invalid_argument(
            "post_process_distribution: response table does not cover all grand outcomes");

    const std::vector<double> grand_probs = outcome_distribution(grand, rho);
    std::vector<double> probs(s.outcomes.size(), 0.0);
    for (size_t lam = 0; lam < grand_probs.size(); ++lam)
        for (size_t k = 0; k < probs.size(); ++k) probs[k] += grand_probs[lam] * s.table[lam][k];
    return probs;
}

}  // namespace qmeas
