// abphase: solenoid loop-phase laboratory.
//
// Subcommands:
//   phase   compute the loop phase by one route or all four
//   verify  run the cross-route consistency suite
//   sweep   repeat the phase computation over one varying parameter
//
// Exit codes: 0 success, 2 verification/convergence failure, 64 usage error,
// 65 invalid scenario.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "abphase/consistency.hpp"
#include "abphase/phase.hpp"
#include "abphase/report_io.hpp"
#include "abphase/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerification = 2;
constexpr int kExitUsage = 64;
constexpr int kExitBadScenario = 65;

// strict "v1,v2,..." -> doubles; CLI11's own vector splitting would greedily
// swallow a trailing positional scenario path, so the list stays one token
std::vector<double> parse_value_list(const std::string& csv) {
    std::vector<double> out;
    std::size_t start = 0;
    for (;;) {
        std::size_t end = csv.find(',', start);
        std::string tok = csv.substr(
            start, end == std::string::npos ? std::string::npos : end - start);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != tok.size() || tok.empty())
            throw std::invalid_argument("--values: '" + tok + "' is not a number");
        out.push_back(v);
        if (end == std::string::npos) break;
        start = end + 1;
    }
    return out;
}

abphase::Scenario load_or_default(const std::string& path, int workers) {
    abphase::Scenario sc =
        path.empty() ? abphase::default_scenario() : abphase::load_scenario(path);
    if (workers > 0) sc.quadrature.workers = workers;
    sc.validate();
    return sc;
}

std::vector<abphase::PhaseMethod> resolve_methods(const std::string& name) {
    using M = abphase::PhaseMethod;
    if (name == "all")
        return {M::ab_vector_potential, M::field_momentum, M::interference_energy,
                M::hidden_momentum};
    if (name == "ab" || name == "ab_vector_potential") return {M::ab_vector_potential};
    if (name == "field-momentum" || name == "field_momentum")
        return {M::field_momentum};
    if (name == "energy" || name == "interference_energy")
        return {M::interference_energy};
    if (name == "hidden-momentum" || name == "hidden_momentum")
        return {M::hidden_momentum};
    throw std::invalid_argument(
        "unknown method '" + name +
        "' (expected ab, field-momentum, energy, hidden-momentum, or all)");
}

abphase::PhaseReport compute_phase(const abphase::Scenario& sc,
                                   abphase::PhaseMethod m) {
    using M = abphase::PhaseMethod;
    switch (m) {
        case M::ab_vector_potential:
            return abphase::phase_ab(sc.trajectory, sc.solenoid, sc.quadrature,
                                     sc.units, sc.charge_q);
        case M::field_momentum:
            return abphase::phase_field_momentum(sc.trajectory, sc.solenoid,
                                                 sc.quadrature, sc.units, sc.charge_q);
        case M::interference_energy:
            return abphase::phase_interference_energy(
                sc.trajectory, sc.solenoid, sc.quadrature, sc.units, sc.charge_q);
        case M::hidden_momentum:
            return abphase::phase_hidden_momentum(sc.trajectory, sc.solenoid,
                                                  sc.quadrature, sc.units, sc.charge_q);
    }
    throw std::logic_error("unreachable method");
}

int run_phase(const std::string& scenario_path, const std::string& method,
              const std::string& format, int workers) {
    abphase::ReportFormat fmt = abphase::parse_report_format(format);
    std::vector<abphase::PhaseMethod> methods = resolve_methods(method);
    abphase::Scenario sc = load_or_default(scenario_path, workers);

    std::vector<abphase::PhaseReport> rows;
    for (abphase::PhaseMethod m : methods) rows.push_back(compute_phase(sc, m));
    std::cout << abphase::render_phases(rows, fmt);

    for (const abphase::PhaseReport& r : rows)
        if (!r.converged()) return kExitVerification;
    return kExitOk;
}

int run_verify(const std::string& scenario_path, const std::string& format,
               int workers) {
    abphase::ReportFormat fmt = abphase::parse_report_format(format);
    abphase::Scenario sc = load_or_default(scenario_path, workers);
    abphase::ConsistencyReport rep = abphase::run_consistency_suite(sc);
    std::cout << abphase::render_consistency(rep, fmt);
    return rep.all_ok() ? kExitOk : kExitVerification;
}

int run_sweep(const std::string& scenario_path, const std::string& param,
              const std::vector<double>& values, int workers) {
    if (!abphase::is_sweepable_param(param))
        throw std::invalid_argument("--param '" + param +
                                    "' is not a sweepable parameter");
    abphase::Scenario base = load_or_default(scenario_path, workers);

    std::vector<abphase::SweepRow> rows;
    for (double v : values) {
        abphase::SweepRow row;
        row.param_value = v;
        abphase::Scenario sc = base;
        try {
            abphase::set_scenario_param(sc, param, v);
            sc.validate();
            for (abphase::PhaseMethod m :
                 {abphase::PhaseMethod::ab_vector_potential,
                  abphase::PhaseMethod::field_momentum,
                  abphase::PhaseMethod::interference_energy,
                  abphase::PhaseMethod::hidden_momentum})
                row.phases.push_back(compute_phase(sc, m));
        } catch (const std::exception& e) {
            row.skipped = true;
            row.skip_reason = e.what();
            row.phases.clear();
        }
        rows.push_back(std::move(row));
    }
    std::cout << abphase::render_sweep_csv(param, rows);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Solenoid loop-phase laboratory: one phase, four routes"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string method = "all";
    std::string format = "table";
    std::string sweep_param;
    std::string sweep_values_csv;
    int workers = 0;     // 0: take the scenario's value
    bool seedless = false;

    CLI::App* phase_cmd =
        app.add_subcommand("phase", "Compute the loop phase by the chosen route(s)");
    phase_cmd->add_option("--method", method,
                          "ab | field-momentum | energy | hidden-momentum | all");
    phase_cmd->add_option("--format", format, "table | csv | json");
    phase_cmd->add_option("--workers", workers, "override quadrature worker count");
    phase_cmd->add_flag("--seedless", seedless,
                        "no-op: every computation is deterministic already");
    phase_cmd->add_option("scenario", scenario_path, "scenario JSON (default: built-in)");

    CLI::App* verify_cmd =
        app.add_subcommand("verify", "Run the cross-route consistency suite");
    verify_cmd->add_option("--format", format, "table | csv | json");
    verify_cmd->add_option("--workers", workers, "override quadrature worker count");
    verify_cmd->add_flag("--seedless", seedless,
                         "no-op: every computation is deterministic already");
    verify_cmd->add_option("scenario", scenario_path,
                           "scenario JSON (default: built-in)");

    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "Phase-vs-parameter sweep, CSV output");
    sweep_cmd->add_option("--param", sweep_param, "dotted field, e.g. trajectory.rho0")
        ->required();
    sweep_cmd->add_option("--values", sweep_values_csv,
                          "comma-separated values, e.g. 1.5,2,4")
        ->required();
    sweep_cmd->add_option("--workers", workers, "override quadrature worker count");
    sweep_cmd->add_flag("--seedless", seedless,
                        "no-op: every computation is deterministic already");
    sweep_cmd->add_option("scenario", scenario_path,
                          "scenario JSON (default: built-in)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (phase_cmd->parsed()) return run_phase(scenario_path, method, format, workers);
        if (verify_cmd->parsed()) return run_verify(scenario_path, format, workers);
        return run_sweep(scenario_path, sweep_param, parse_value_list(sweep_values_csv),
                         workers);
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const abphase::ScenarioError& e) {
        std::cerr << "scenario error: " << e.what() << "\n";
        return kExitBadScenario;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadScenario;
    }
}
