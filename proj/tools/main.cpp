// main.cpp — qmeas command line: validate POVM files, evaluate uncertainty
// scenarios, run parameter sweeps and joint-measurability scans.
//
// Exit codes: 0 success, 1 output I/O failure, 2 input parse failure,
// 3 invariant violation in an otherwise well-formed input.

#include "qmeas/harness.hpp"
#include "qmeas/serialization.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

qmeas::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw qmeas::ParseError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return qmeas::json::parse(buf.str());
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << content;
    if (!out) throw std::runtime_error("write to " + path + " failed");
}

int cmd_validate(const std::string& path) {
    const qmeas::Povm povm = qmeas::povm_from_json(load_json(path));
    const qmeas::ValidationReport report = qmeas::validate_povm(povm);
    if (report.valid()) {
        std::cout << "valid\n";
    } else {
        std::cout << "invalid\n";
        for (const qmeas::Violation& v : report.violations)
            std::cout << "  " << v.constraint << " (max residual " << qmeas::format_double(v.residual)
                      << ")\n";
    }
    return 0;
}

int cmd_run(const std::string& path, const std::string& out_path) {
    const qmeas::ScenarioSpec spec = qmeas::scenario_spec_from_json(load_json(path));
    const qmeas::Scenario scenario = qmeas::instantiate_scenario(spec);
    const std::string text = qmeas::report_to_json(qmeas::memory_bound_report(scenario)).dump(2) + "\n";
    if (!out_path.empty())
        write_file(out_path, text);
    else
        std::cout << text;
    return 0;
}

int cmd_sweep(const std::string& path, const std::string& out_path) {
    const qmeas::SweepSpec spec = qmeas::sweep_spec_from_json(load_json(path));
    const std::string csv = qmeas::sweep_csv(qmeas::run_sweep(spec));
    if (!out_path.empty())
        write_file(out_path, csv);
    else
        std::cout << csv;
    return 0;
}

int cmd_jm_scan(const std::string& path, const std::string& out_path) {
    const qmeas::JmScanSpec spec = qmeas::jm_scan_spec_from_json(load_json(path));
    const std::string csv = qmeas::jm_scan_csv(qmeas::run_jm_scan(spec));
    if (!out_path.empty())
        write_file(out_path, csv);
    else
        std::cout << csv;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"POVM compatibility, entropic uncertainty and steering toolkit"};
    app.require_subcommand(1);

    std::string input, output;

    CLI::App* validate = app.add_subcommand("validate", "Check a POVM file against all invariants");
    validate->add_option("povm", input, "POVM JSON file")->required();

    CLI::App* run = app.add_subcommand("run", "Evaluate one scenario and print its report");
    run->add_option("scenario", input, "scenario JSON file")->required();
    run->add_option("-o,--output", output, "write the report here instead of stdout");

    CLI::App* sweep = app.add_subcommand("sweep", "Tabulate a scenario across a parameter grid");
    sweep->add_option("spec", input, "sweep JSON file")->required();
    sweep->add_option("-o,--output", output, "CSV output path");

    CLI::App* jm = app.add_subcommand("jm-scan", "Joint-measurability scan over an unsharpness grid");
    jm->add_option("pair", input, "POVM pair JSON file")->required();
    jm->add_option("-o,--output", output, "CSV output path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) return cmd_validate(input);
        if (run->parsed()) return cmd_run(input, output);
        if (sweep->parsed()) return cmd_sweep(input, output);
        return cmd_jm_scan(input, output);
    } catch (const qmeas::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
