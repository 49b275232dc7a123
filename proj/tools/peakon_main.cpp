#include <cstdio>
#include <cstdlib>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "peakon/scenario.hpp"

namespace {

// Exit codes: 0 ok, 1 check failure, 2 schema/config error,
// 3 state invariant violation, 4 integrator failure.
enum ExitCode : int {
    kOk = 0,
    kCheckFailed = 1,
    kConfigError = 2,
    kInvariantError = 3,
    kIntegratorError = 4,
};

std::string resolve_out_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("PEAKON_OUT_DIR"); env && *env) return env;
    return ".";
}

peakon::cli::FormatFilter parse_format(const std::string& format) {
    if (format == "csv") return peakon::cli::FormatFilter::csv_only;
    if (format == "json") return peakon::cli::FormatFilter::json_only;
    return peakon::cli::FormatFilter::all;
}

std::vector<double> parse_eps_list(const std::string& csv) {
    std::vector<double> out;
    std::string token;
    for (char c : csv + ",") {
        if (c == ',') {
            if (!token.empty()) {
                try {
                    std::size_t used = 0;
                    out.push_back(std::stod(token, &used));
                    if (used != token.size()) throw std::invalid_argument(token);
                } catch (const std::exception&) {
                    throw peakon::ConfigError("--eps: not a number: '" + token + "'");
                }
            }
            token.clear();
        } else {
            token += c;
        }
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Conservative sticky N-peakon simulator for the modified Camassa-Holm equation"};
    app.require_subcommand(1);

    std::string scenario_arg, out_dir_flag, format = "all";
    double dt_override = 0.0, t_end_override = 0.0;
    std::string eps_flag;
    std::uint64_t seed = 42;
    std::vector<std::string> suites;

    CLI::App* run = app.add_subcommand("run", "Run one scenario and write its output files");
    run->add_option("--scenario", scenario_arg, "Scenario file path or stock name")->required();
    run->add_option("--out-dir", out_dir_flag, "Output directory (default: $PEAKON_OUT_DIR or .)");
    run->add_option("--dt", dt_override, "Override the scenario step size");
    run->add_option("--t-end", t_end_override, "Override the scenario horizon");
    run->add_option("--format", format, "Restrict outputs: csv, json, or all")
        ->check(CLI::IsMember({"csv", "json", "all"}));

    CLI::App* study = app.add_subcommand("study", "Run an eps convergence study");
    study->add_option("--scenario", scenario_arg, "Study file path or stock name")->required();
    study->add_option("--out-dir", out_dir_flag, "Output directory (default: $PEAKON_OUT_DIR or .)");
    study->add_option("--eps", eps_flag, "Override eps list (comma separated, decreasing)");
    study->add_option("--dt", dt_override, "Override the base scenario step size");
    study->add_option("--t-end", t_end_override, "Override the base scenario horizon");
    study->add_option("--format", format, "Restrict outputs: csv, json, or all")
        ->check(CLI::IsMember({"csv", "json", "all"}));

    CLI::App* check = app.add_subcommand("check", "Run the verification suites");
    check->add_option("--suite", suites,
                      "Suites to run (identities, splitting, ch-splitting, energy, residual); "
                      "default: all");
    check->add_option("--seed", seed, "RNG seed for the randomized suites");
    check->add_option("--out-dir", out_dir_flag, "Directory for the JSON report (optional)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            peakon::cli::Scenario scenario = peakon::cli::load_scenario(scenario_arg);
            if (dt_override > 0.0) scenario.sim.dt = dt_override;
            if (t_end_override > 0.0) scenario.sim.t_end = t_end_override;
            const auto outcome = peakon::cli::run_scenario(scenario, resolve_out_dir(out_dir_flag),
                                                           parse_format(format));
            std::printf("scenario %s: %zu samples, %zu events\n", scenario.name.c_str(),
                        outcome.scenario.system == peakon::cli::SystemKind::ch
                            ? outcome.ch_samples.size()
                            : outcome.trajectory.samples.size(),
                        outcome.trajectory.events.size());
            if (!outcome.note.empty()) std::printf("note: %s\n", outcome.note.c_str());
            for (const auto& f : outcome.files_written) std::printf("wrote %s\n", f.c_str());
            return kOk;
        }
        if (study->parsed()) {
            peakon::cli::StudySpec spec = peakon::cli::load_study(scenario_arg);
            if (!eps_flag.empty()) spec.eps_list = parse_eps_list(eps_flag);
            if (dt_override > 0.0) spec.base.sim.dt = dt_override;
            if (t_end_override > 0.0) spec.base.sim.t_end = t_end_override;
            std::vector<std::string> files;
            const auto report = peakon::cli::run_study(spec, resolve_out_dir(out_dir_flag),
                                                       parse_format(format), &files);
            for (std::size_t i = 0; i < report.eps_values.size(); ++i)
                std::printf("eps %-8g sup_distance %-12g scaled_gap %s\n", report.eps_values[i],
                            report.sup_distances[i],
                            report.has_collision
                                ? peakon::cli::format_double(report.scaled_gaps[i]).c_str()
                                : "n/a");
            for (const auto& f : files) std::printf("wrote %s\n", f.c_str());
            return kOk;
        }
        if (check->parsed()) {
            peakon::cli::CheckOptions options;
            options.suites = suites;
            options.seed = seed;
            options.out_dir = out_dir_flag;
            const auto result = peakon::cli::run_checks(options);
            for (const auto& item : result.items)
                std::printf("[%s] %s / %s (value %.3g, threshold %.3g)\n",
                            item.passed ? "PASS" : "FAIL", item.suite.c_str(), item.name.c_str(),
                            item.value, item.threshold);
            for (const auto& f : result.files_written) std::printf("wrote %s\n", f.c_str());
            std::printf("%s\n", result.all_passed ? "all checks passed" : "CHECK FAILURES");
            return result.all_passed ? kOk : kCheckFailed;
        }
    } catch (const peakon::ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return kConfigError;
    } catch (const peakon::OrderingError& e) {
        std::fprintf(stderr, "invariant violation: %s\n", e.what());
        return kInvariantError;
    } catch (const peakon::IntegratorError& e) {
        std::fprintf(stderr, "integrator failure: %s\n", e.what());
        return kIntegratorError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kCheckFailed;
    }
    return kOk;
}
