// serialization.hpp — JSON and CSV wire formats: matrices, POVMs, solver
// options, scenario files, sweep specs and uncertainty reports.

#pragma once

#include "qmeas/compatibility.hpp"
#include "qmeas/inequalities.hpp"

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>

namespace qmeas {

// Structural problems in input files (missing keys, wrong shapes). Domain
// invariant violations keep their std::domain_error / std::invalid_argument
// types so callers can distinguish the two failure classes.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using json = nlohmann::json;

// {"dim": n, "entries": [[re, im], ...]} row-major; entry count must be dim^2.
json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);

// {"dim": n, "outcomes": [..], "effects": [matrix, ..]}. The result is NOT
// validated; run validate_povm on it.
json povm_to_json(const Povm& p);
Povm povm_from_json(const json& j);

// {"axis": [x, y, z], "eta": r}
json unsharp_spec_to_json(const UnsharpQubitSpec& s);
UnsharpQubitSpec unsharp_spec_from_json(const json& j);

// {"feas_tol": .., "infeas_tol": .., "max_iter": .., "plateau_window": ..};
// absent keys keep their defaults.
SolverOptions solver_options_from_json(const json& j);

// All UncertaintyReport fields under their exact names; doubles rounded to
// 12 significant digits.
json report_to_json(const UncertaintyReport& r);

// Scenario files: a state plus the four measurements. An unsharp eta or a
// Werner weight may be the string "sweep", leaving the value to be filled in
// by a sweep; instantiating such a template without a parameter is an error.
struct StateSpec {
    enum class Kind { singlet, werner, matrix };
    Kind kind = Kind::singlet;
    std::optional<double> w;  // werner only; nullopt = swept
    std::optional<Matrix> rho;
    int d_a = 2;
    int d_b = 2;
};

struct PovmSpec {
    enum class Kind { projective, unsharp, explicit_effects };
    Kind kind = Kind::projective;
    std::optional<Matrix> observable;            // projective
    std::array<double, 3> axis = {0.0, 0.0, 1.0};  // unsharp
    std::optional<double> eta;                   // unsharp; nullopt = swept
    std::optional<Povm> povm;                    // explicit_effects
};

struct ScenarioSpec {
    StateSpec state;
    PovmSpec alice_x, alice_z, bob_x, bob_z;
};

enum class SweepParameter { eta, werner_w };

struct SweepSpec {
    SweepParameter parameter = SweepParameter::eta;
    double start = 0.0;
    double stop = 1.0;
    int steps = 2;
    ScenarioSpec scenario;
};

ScenarioSpec scenario_spec_from_json(const json& j);
SweepSpec sweep_spec_from_json(const json& j);

// Replaces every swept slot with param and builds the validated Scenario.
// A swept slot with no parameter raises std::domain_error.
Scenario instantiate_scenario(const ScenarioSpec& spec, std::optional<double> param = std::nullopt);

// (axis, eta) view of a Bob measurement for the analytic compatibility
// column: direct for unsharp specs, eta = 1 for qubit projective specs.
// Empty when the spec has no such form.
std::optional<UnsharpQubitSpec> unsharp_form(const PovmSpec& spec, std::optional<double> param);

// Deterministic number formatting shared by every CSV/JSON emitter:
// 12 significant digits, booleans as lowercase true/false.
std::string format_double(double v);
double round_to_12_digits(double v);

// CSV: alice_outcome,bob_outcome,probability rows in alice-major order.
std::string joint_distribution_csv(const JointDistribution& j);

}  // namespace qmeas
