#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "peakon/dispersive.hpp"
#include "peakon/integrate.hpp"
#include "peakon/mollifier.hpp"
#include "peakon/sticky.hpp"

namespace peakon::cli {

enum class SystemKind { mch_conservative, mch_nonconservative, mch_regularized, ch };

SystemKind system_from_string(const std::string& name);
std::string to_string(SystemKind kind);

enum class OutputKind { trajectory_csv, energy_csv, events_json, report_json };

/// One simulation setup: system, initial data, mollifier (iff regularized),
/// stepping parameters, requested output files.
struct Scenario {
    int schema_version = 1;
    std::string name;
    SystemKind system = SystemKind::mch_conservative;
    std::vector<double> momenta;
    std::vector<double> positions;
    std::optional<mollifier::MollifierSpec> mollifier_spec;
    integrate::SimConfig sim;
    std::vector<OutputKind> outputs;
    std::string positions_note;

    PeakonState initial_state() const;
};

/// Strict parse: unknown keys are rejected, cross-field invariants enforced.
Scenario parse_scenario(const nlohmann::ordered_json& j);

/// Loads a scenario from a stock name (fig1a, fig1b, ...) or a JSON file path.
Scenario load_scenario(const std::string& path_or_stock);

std::vector<std::string> stock_scenario_names();
nlohmann::ordered_json stock_scenario(const std::string& name);

struct RunOutcome {
    Scenario scenario;
    sticky::Trajectory trajectory;                ///< mCH systems
    std::vector<integrate::ChSample> ch_samples;  ///< ch system
    bool stopped_at_event = false;                ///< non-conservative run hit a collision
    double regularized_min_gap = -1.0;            ///< smallest gap seen (regularized runs only)
    std::string note;
    std::vector<std::string> files_written;
};

/// Output format filter: write everything the scenario asks for, or only the
/// CSV / only the JSON subset.
enum class FormatFilter { all, csv_only, json_only };

RunOutcome run_scenario(const Scenario& scenario, const std::string& out_dir,
                        FormatFilter format = FormatFilter::all);

/// eps sweep driven by a conservative base scenario.
struct StudySpec {
    int schema_version = 1;
    std::string name;
    Scenario base;
    std::vector<double> eps_list;
    mollifier::BumpFamily family = mollifier::BumpFamily::cosine_bump;
    double probe_offset = 0.5;
};

StudySpec parse_study(const nlohmann::ordered_json& j);
StudySpec load_study(const std::string& path_or_stock);
std::vector<std::string> stock_study_names();
nlohmann::ordered_json stock_study(const std::string& name);

dispersive::ConvergenceReport run_study(const StudySpec& spec, const std::string& out_dir,
                                        FormatFilter format = FormatFilter::all,
                                        std::vector<std::string>* files_written = nullptr);

struct CheckOptions {
    std::vector<std::string> suites; ///< empty means all
    std::uint64_t seed = 42;
    std::string out_dir;             ///< empty: no JSON report file
};

struct CheckItem {
    std::string suite;
    std::string name;
    bool passed = false;
    double value = 0.0;
    double threshold = 0.0;
};

struct CheckResult {
    std::vector<CheckItem> items;
    bool all_passed = true;
    std::vector<std::string> files_written;
};

std::vector<std::string> check_suite_names();
CheckResult run_checks(const CheckOptions& options);

/// 17-significant-digit representation used by every CSV emitter.
std::string format_double(double value);

} // namespace peakon::cli
