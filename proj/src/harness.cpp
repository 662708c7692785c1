#include "qmeas/harness.hpp"

#include <sstream>
#include <stdexcept>

namespace qmeas {

std::vector<double> grid_points(double start, double stop, int steps) {
    if (steps < 2) throw std::invalid_argument("grid_points: steps must be >= 2");
    std::vector<double> pts(static_cast<size_t>(steps));
    const double span = stop - start;
    for (int k = 0; k < steps; ++k)
        pts[static_cast<size_t>(k)] = start + span * static_cast<double>(k) / (steps - 1);
    pts.back() = stop;
    return pts;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    std::vector<SweepRow> rows;
    for (double param : grid_points(spec.start, spec.stop, spec.steps)) {
        SweepRow row;
        row.param = param;
        row.report = memory_bound_report(instantiate_scenario(spec.scenario, param));

        const std::optional<UnsharpQubitSpec> bx = unsharp_form(spec.scenario.bob_x, param);
        const std::optional<UnsharpQubitSpec> bz = unsharp_form(spec.scenario.bob_z, param);
        if (!bx || !bz)
            throw std::domain_error(
                "sweep: Bob's measurements need an (axis, eta) form for the compatibility column");
        row.busch_compatible = busch_pair_criterion(*bx, *bz);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "param,h_x_given_xp,h_z_given_zp,lhs_sum,mu_bound,memory_bound,"
          "key_rate_lower_bound,steering_violated,busch_compatible\n";
    for (const SweepRow& r : rows) {
        os << format_double(r.param) << ',' << format_double(r.report.h_x_given_xp) << ','
           << format_double(r.report.h_z_given_zp) << ',' << format_double(r.report.lhs_sum) << ','
           << format_double(r.report.mu_bound) << ',' << format_double(r.report.memory_bound) << ','
           << format_double(r.report.key_rate_lower_bound) << ','
           << (r.report.steering_satisfied ? "false" : "true") << ','
           << (r.busch_compatible ? "true" : "false") << '\n';
    }
    return os.str();
}

JmScanSpec jm_scan_spec_from_json(const json& j) {
    JmScanSpec spec;
    auto read_axis = [&](const char* key, std::array<double, 3>& out) {
        if (!j.is_object() || !j.contains(key))
            throw ParseError(std::string("jm scan: missing key \"") + key + "\"");
        const json& side = j.at(key);
        if (!side.is_object() || !side.contains("axis"))
            throw ParseError(std::string("jm scan: \"") + key + "\" needs an \"axis\"");
        const json& axis = side.at("axis");
        if (!axis.is_array() || axis.size() != 3)
            throw ParseError("jm scan: axis must be a 3-vector");
        for (size_t k = 0; k < 3; ++k) {
            if (!axis[k].is_number()) throw ParseError("jm scan: axis entries must be numbers");
            out[k] = axis[k].get<double>();
        }
    };
    read_axis("a", spec.axis_a);
    read_axis("b", spec.axis_b);

    if (!j.contains("grid")) throw ParseError("jm scan: missing key \"grid\"");
    const json& grid = j.at("grid");
    if (!grid.is_object()) throw ParseError("jm scan: \"grid\" must be an object");
    if (!grid.contains("start") || !grid.contains("stop") || !grid.contains("steps"))
        throw ParseError("jm scan: grid needs start, stop and steps");
    spec.start = grid.at("start").get<double>();
    spec.stop = grid.at("stop").get<double>();
    spec.steps = grid.at("steps").get<int>();
    if (spec.steps < 2) throw ParseError("jm scan: steps must be >= 2");
    if (!(spec.start <= spec.stop)) throw ParseError("jm scan: start must be <= stop");

    if (j.contains("solver")) spec.solver = solver_options_from_json(j.at("solver"));
    return spec;
}

std::vector<JmScanRow> run_jm_scan(const JmScanSpec& spec) {
    std::vector<JmScanRow> rows;
    for (double eta : grid_points(spec.start, spec.stop, spec.steps)) {
        const UnsharpQubitSpec a(spec.axis_a, eta);
        const UnsharpQubitSpec b(spec.axis_b, eta);
        JmScanRow row;
        row.param = eta;
        row.busch_compatible = busch_pair_criterion(a, b);

        const JmVerdict verdict =
            jm_feasibility({unsharp_qubit_povm(a), unsharp_qubit_povm(b)}, spec.solver);
        row.solver_status = verdict.status;
        row.residual = verdict.residual;
        row.iterations = verdict.iterations;
        const bool definite = verdict.status != JmStatus::indeterminate;
        const bool agrees =
            definite && (verdict.status == JmStatus::compatible) == row.busch_compatible;
        row.flagged = !agrees;
        rows.push_back(row);
    }
    return rows;
}

std::string jm_scan_csv(const std::vector<JmScanRow>& rows) {
    std::ostringstream os;
    os << "param,busch_compatible,solver_status,residual,iterations,flagged\n";
    for (const JmScanRow& r : rows) {
        os << format_double(r.param) << ',' << (r.busch_compatible ? "true" : "false") << ','
           << to_string(r.solver_status) << ',' << format_double(r.residual) << ',' << r.iterations
           << ',' << (r.flagged ? "true" : "false") << '\n';
    }
    return os.str();
}

}  // namespace qmeas
