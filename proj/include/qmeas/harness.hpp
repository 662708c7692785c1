// harness.hpp — the evaluation loops behind the CLI: single-scenario runs,
// parameter sweeps and joint-measurability scans, with their CSV formats.

#pragma once

#include "qmeas/serialization.hpp"

#include <vector>

namespace qmeas {

struct SweepRow {
    double param = 0.0;
    UncertaintyReport report;
    bool busch_compatible = false;
};

// Evaluates the template at `steps` evenly spaced parameter values in
// [start, stop], ascending. The analytic compatibility column is computed
// from Bob's pair, which must have an (axis, eta) form.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

// param,h_x_given_xp,h_z_given_zp,lhs_sum,mu_bound,memory_bound,
// key_rate_lower_bound,steering_violated,busch_compatible
std::string sweep_csv(const std::vector<SweepRow>& rows);

struct JmScanSpec {
    std::array<double, 3> axis_a = {1.0, 0.0, 0.0};
    std::array<double, 3> axis_b = {0.0, 0.0, 1.0};
    double start = 0.0;
    double stop = 1.0;
    int steps = 2;
    SolverOptions solver;
};

JmScanSpec jm_scan_spec_from_json(const json& j);

struct JmScanRow {
    double param = 0.0;
    bool busch_compatible = false;
    JmStatus solver_status = JmStatus::indeterminate;
    double residual = 0.0;
    int iterations = 0;
    bool flagged = false;  // solver indeterminate or contradicting the analytic verdict
};

// Scans the unsharpness grid with both deciders; every returned witness has
// already passed independent validation inside jm_feasibility.
std::vector<JmScanRow> run_jm_scan(const JmScanSpec& spec);

// param,busch_compatible,solver_status,residual,iterations,flagged
std::string jm_scan_csv(const std::vector<JmScanRow>& rows);

// Grid helper shared by sweeps and scans: start + k*(stop-start)/(steps-1).
std::vector<double> grid_points(double start, double stop, int steps);

}  // namespace qmeas
