#include "qmeas/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace qmeas {

namespace {

const json& require(const json& j, const char* key, const char* ctx) {
    if (!j.is_object() || !j.contains(key))
        throw ParseError(std::string(ctx) + ": missing key \"" + key + "\"");
    return j.at(key);
}

double require_number(const json& j, const char* key, const char* ctx) {
    const json& v = require(j, key, ctx);
    if (!v.is_number()) throw ParseError(std::string(ctx) + ": \"" + key + "\" must be a number");
    return v.get<double>();
}

int require_int(const json& j, const char* key, const char* ctx) {
    const json& v = require(j, key, ctx);
    if (!v.is_number_integer())
        throw ParseError(std::string(ctx) + ": \"" + key + "\" must be an integer");
    return v.get<int>();
}

}  // namespace

json matrix_to_json(const Matrix& m) {
    json entries = json::array();
    for (const cplx& z : m.entries()) entries.push_back(json::array({z.real(), z.imag()}));
    return json{{"dim", m.dim()}, {"entries", std::move(entries)}};
}

Matrix matrix_from_json(const json& j) {
    const int dim = require_int(j, "dim", "matrix");
    const json& entries = require(j, "entries", "matrix");
    if (!entries.is_array()) throw ParseError("matrix: \"entries\" must be an array");
    if (dim < 1) throw ParseError("matrix: dim must be >= 1");
    if (entries.size() != static_cast<size_t>(dim) * static_cast<size_t>(dim))
        throw ParseError("matrix: " + std::to_string(entries.size()) +
                         " entries do not fill a " + std::to_string(dim) + "x" +
                         std::to_string(dim) + " square");
    std::vector<cplx> out;
    out.reserve(entries.size());
    for (const json& e : entries) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
            throw ParseError("matrix: each entry must be an [re, im] pair");
        out.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    try {
        return Matrix(dim, std::move(out));
    } catch (const std::invalid_argument& ex) {
        throw ParseError(std::string("matrix: ") + ex.what());
    }
}

json povm_to_json(const Povm& p) {
    json effects = json::array();
    for (const Matrix& e : p.effects) effects.push_back(matrix_to_json(e));
    return json{{"dim", p.dim}, {"outcomes", p.outcomes}, {"effects", std::move(effects)}};
}

Povm povm_from_json(const json& j) {
    Povm p;
    p.dim = require_int(j, "dim", "povm");
    const json& outcomes = require(j, "outcomes", "povm");
    const json& effects = require(j, "effects", "povm");
    if (!outcomes.is_array() || !effects.is_array())
        throw ParseError("povm: \"outcomes\" and \"effects\" must be arrays");
    for (const json& o : outcomes) {
        if (!o.is_number_integer()) throw ParseError("povm: outcome labels must be integers");
        p.outcomes.push_back(o.get<int>());
    }
    for (const json& e : effects) p.effects.push_back(matrix_from_json(e));
    return p;
}

json unsharp_spec_to_json(const UnsharpQubitSpec& s) {
    return json{{"axis", {s.axis[0], s.axis[1], s.axis[2]}}, {"eta", s.eta}};
}

UnsharpQubitSpec unsharp_spec_from_json(const json& j) {
    const json& axis = require(j, "axis", "unsharp spec");
    if (!axis.is_array() || axis.size() != 3)
        throw ParseError("unsharp spec: \"axis\" must be a 3-vector");
    std::array<double, 3> a{};
    for (size_t k = 0; k < 3; ++k) {
        if (!axis[k].is_number()) throw ParseError("unsharp spec: axis entries must be numbers");
        a[k] = axis[k].get<double>();
    }
    return UnsharpQubitSpec(a, require_number(j, "eta", "unsharp spec"));
}

SolverOptions solver_options_from_json(const json& j) {
    SolverOptions opts;
    if (!j.is_object()) throw ParseError("solver options: expected an object");
    if (j.contains("feas_tol")) opts.feas_tol = require_number(j, "feas_tol", "solver options");
    if (j.contains("infeas_tol")) opts.infeas_tol = require_number(j, "infeas_tol", "solver options");
    if (j.contains("max_iter")) opts.max_iter = require_int(j, "max_iter", "solver options");
    if (j.contains("plateau_window"))
        opts.plateau_window = require_int(j, "plateau_window", "solver options");
    if (j.contains("max_product_outcomes"))
        opts.max_product_outcomes = require_int(j, "max_product_outcomes", "solver options");
    return opts;
}

json report_to_json(const UncertaintyReport& r) {
    return json{{"c_overlap", round_to_12_digits(r.c_overlap)},
                {"mu_bound", round_to_12_digits(r.mu_bound)},
                {"s_a_given_b", round_to_12_digits(r.s_a_given_b)},
                {"memory_bound", round_to_12_digits(r.memory_bound)},
                {"h_x_given_xp", round_to_12_digits(r.h_x_given_xp)},
                {"h_z_given_zp", round_to_12_digits(r.h_z_given_zp)},
                {"lhs_sum", round_to_12_digits(r.lhs_sum)},
                {"steering_satisfied", r.steering_satisfied},
                {"memory_inequality_satisfied", r.memory_inequality_satisfied},
                {"key_rate_lower_bound", round_to_12_digits(r.key_rate_lower_bound)}};
}

namespace {

// A numeric field that may carry the literal string "sweep".
std::optional<double> sweepable_number(const json& j, const char* key, const char* ctx) {
    const json& v = require(j, key, ctx);
    if (v.is_string()) {
        if (v.get<std::string>() == "sweep") return std::nullopt;
        throw ParseError(std::string(ctx) + ": \"" + key + "\" must be a number or \"sweep\"");
    }
    if (!v.is_number()) throw ParseError(std::string(ctx) + ": \"" + key + "\" must be a number");
    return v.get<double>();
}

StateSpec state_spec_from_json(const json& j) {
    StateSpec s;
    const json& type = require(j, "type", "state");
    if (!type.is_string()) throw ParseError("state: \"type\" must be a string");
    const std::string kind = type.get<std::string>();
    if (kind == "singlet") {
        s.kind = StateSpec::Kind::singlet;
    } else if (kind == "werner") {
        s.kind = StateSpec::Kind::werner;
        s.w = sweepable_number(j, "w", "werner state");
    } else if (kind == "matrix") {
        s.kind = StateSpec::Kind::matrix;
        s.d_a = require_int(j, "d_a", "state");
        s.d_b = require_int(j, "d_b", "state");
        s.rho = matrix_from_json(require(j, "rho", "state"));
    } else {
        throw ParseError("state: unknown type \"" + kind + "\"");
    }
    return s;
}

PovmSpec povm_spec_from_json(const json& j, const char* ctx) {
    PovmSpec s;
    const json& type = require(j, "type", ctx);
    if (!type.is_string()) throw ParseError(std::string(ctx) + ": \"type\" must be a string");
    const std::string kind = type.get<std::string>();
    if (kind == "projective") {
        s.kind = PovmSpec::Kind::projective;
        s.observable = matrix_from_json(require(j, "observable", ctx));
    } else if (kind == "unsharp") {
        s.kind = PovmSpec::Kind::unsharp;
        const json& axis = require(j, "axis", ctx);
        if (!axis.is_array() || axis.size() != 3)
            throw ParseError(std::string(ctx) + ": \"axis\" must be a 3-vector");
        for (size_t k = 0; k < 3; ++k) {
            if (!axis[k].is_number())
                throw ParseError(std::string(ctx) + ": axis entries must be numbers");
            s.axis[k] = axis[k].get<double>();
        }
        s.eta = sweepable_number(j, "eta", ctx);
    } else if (kind == "explicit") {
        s.kind = PovmSpec::Kind::explicit_effects;
        s.povm = povm_from_json(require(j, "povm", ctx));
    } else {
        throw ParseError(std::string(ctx) + ": unknown type \"" + kind + "\"");
    }
    return s;
}

bool spec_is_swept(const PovmSpec& s) {
    return s.kind == PovmSpec::Kind::unsharp && !s.eta.has_value();
}

}  // namespace

ScenarioSpec scenario_spec_from_json(const json& j) {
    ScenarioSpec spec;
    spec.state = state_spec_from_json(require(j, "state", "scenario"));
    spec.alice_x = povm_spec_from_json(require(j, "alice_x", "scenario"), "alice_x");
    spec.alice_z = povm_spec_from_json(require(j, "alice_z", "scenario"), "alice_z");
    spec.bob_x = povm_spec_from_json(require(j, "bob_x", "scenario"), "bob_x");
    spec.bob_z = povm_spec_from_json(require(j, "bob_z", "scenario"), "bob_z");
    return spec;
}

SweepSpec sweep_spec_from_json(const json& j) {
    SweepSpec s;
    const json& parameter = require(j, "parameter", "sweep");
    if (!parameter.is_string()) throw ParseError("sweep: \"parameter\" must be a string");
    const std::string p = parameter.get<std::string>();
    if (p == "eta")
        s.parameter = SweepParameter::eta;
    else if (p == "werner_w")
        s.parameter = SweepParameter::werner_w;
    else
        throw ParseError("sweep: unknown parameter \"" + p + "\"");

    s.start = require_number(j, "start", "sweep");
    s.stop = require_number(j, "stop", "sweep");
    s.steps = require_int(j, "steps", "sweep");
    if (s.steps < 2) throw ParseError("sweep: steps must be >= 2");
    if (!(s.start <= s.stop)) throw ParseError("sweep: start must be <= stop");
    s.scenario = scenario_spec_from_json(require(j, "scenario", "sweep"));

    const bool state_swept =
        s.scenario.state.kind == StateSpec::Kind::werner && !s.scenario.state.w.has_value();
    const bool povm_swept = spec_is_swept(s.scenario.alice_x) || spec_is_swept(s.scenario.alice_z) ||
                            spec_is_swept(s.scenario.bob_x) || spec_is_swept(s.scenario.bob_z);
    if (s.parameter == SweepParameter::eta && !povm_swept)
        throw ParseError("sweep: eta sweep needs an unsharp measurement with \"eta\": \"sweep\"");
    if (s.parameter == SweepParameter::werner_w && !state_swept)
        throw ParseError("sweep: werner_w sweep needs a werner state with \"w\": \"sweep\"");
    if (s.parameter == SweepParameter::eta && state_swept)
        throw ParseError("sweep: state w is swept but the parameter is eta");
    if (s.parameter == SweepParameter::werner_w && povm_swept)
        throw ParseError("sweep: a measurement eta is swept but the parameter is werner_w");
    return s;
}

namespace {

BipartiteState instantiate_state(const StateSpec& s, std::optional<double> param) {
    switch (s.kind) {
        case StateSpec::Kind::singlet:
            return bell_singlet();
        case StateSpec::Kind::werner: {
            const std::optional<double> w = s.w.has_value() ? s.w : param;
            if (!w.has_value())
                throw std::domain_error("scenario: werner weight is swept but no parameter given");
            return werner_state(*w);
        }
        default:
            return BipartiteState(*s.rho, s.d_a, s.d_b);
    }
}

Povm instantiate_povm(const PovmSpec& s, std::optional<double> param) {
    switch (s.kind) {
        case PovmSpec::Kind::projective:
            return projective_from_observable(*s.observable);
        case PovmSpec::Kind::unsharp: {
            const std::optional<double> eta = s.eta.has_value() ? s.eta : param;
            if (!eta.has_value())
                throw std::domain_error("scenario: eta is swept but no parameter given");
            return unsharp_qubit_povm(UnsharpQubitSpec(s.axis, *eta));
        }
        default: {
            const ValidationReport rep = validate_povm(*s.povm);
            if (!rep.valid())
                throw std::domain_error("scenario: explicit POVM is invalid: " + rep.summary());
            return *s.povm;
        }
    }
}

}  // namespace

Scenario instantiate_scenario(const ScenarioSpec& spec, std::optional<double> param) {
    return Scenario(instantiate_state(spec.state, param), instantiate_povm(spec.alice_x, param),
                    instantiate_povm(spec.alice_z, param), instantiate_povm(spec.bob_x, param),
                    instantiate_povm(spec.bob_z, param));
}

std::optional<UnsharpQubitSpec> unsharp_form(const PovmSpec& spec, std::optional<double> param) {
    if (spec.kind == PovmSpec::Kind::unsharp) {
        const std::optional<double> eta = spec.eta.has_value() ? spec.eta : param;
        if (!eta.has_value()) return std::nullopt;
        return UnsharpQubitSpec(spec.axis, *eta);
    }
    if (spec.kind == PovmSpec::Kind::projective && spec.observable && spec.observable->dim() == 2) {
        // Sharp qubit measurement = eta 1 along the observable's Bloch axis.
        const Matrix& o = *spec.observable;
        const double nx = o(0, 1).real();
        const double ny = o(1, 0).imag();
        const double nz = 0.5 * (o(0, 0).real() - o(1, 1).real());
        const double len = std::sqrt(nx * nx + ny * ny + nz * nz);
        if (len < 1e-12) return std::nullopt;
        return UnsharpQubitSpec({nx / len, ny / len, nz / len}, 1.0);
    }
    return std::nullopt;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

double round_to_12_digits(double v) { return std::strtod(format_double(v).c_str(), nullptr); }

std::string joint_distribution_csv(const JointDistribution& j) {
    std::ostringstream os;
    os << "alice_outcome,bob_outcome,probability\n";
    for (size_t a = 0; a < j.alice_outcomes.size(); ++a)
        for (size_t b = 0; b < j.bob_outcomes.size(); ++b)
            os << j.alice_outcomes[a] << ',' << j.bob_outcomes[b] << ','
               << format_double(j.p[a * j.bob_outcomes.size() + b]) << '\n';
    return os.str();
}

}  // namespace qmeas
