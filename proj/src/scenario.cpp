#include "peakon/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "peakon/dynamics.hpp"
#include "peakon/kernel.hpp"
#include "peakon/verify.hpp"

namespace peakon::cli {

using nlohmann::ordered_json;

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

SystemKind system_from_string(const std::string& name) {
    if (name == "mch_conservative") return SystemKind::mch_conservative;
    if (name == "mch_nonconservative") return SystemKind::mch_nonconservative;
    if (name == "mch_regularized") return SystemKind::mch_regularized;
    if (name == "ch") return SystemKind::ch;
    throw ConfigError("unknown system: " + name);
}

std::string to_string(SystemKind kind) {
    switch (kind) {
    case SystemKind::mch_conservative: return "mch_conservative";
    case SystemKind::mch_nonconservative: return "mch_nonconservative";
    case SystemKind::mch_regularized: return "mch_regularized";
    case SystemKind::ch: return "ch";
    }
    return "?";
}

namespace {

OutputKind output_from_string(const std::string& name) {
    if (name == "trajectory_csv") return OutputKind::trajectory_csv;
    if (name == "energy_csv") return OutputKind::energy_csv;
    if (name == "events_json") return OutputKind::events_json;
    if (name == "report_json") return OutputKind::report_json;
    throw ConfigError("unknown output kind: " + name);
}

void check_keys(const ordered_json& j, const std::vector<std::string>& known,
                const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + ": expected a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (std::find(known.begin(), known.end(), it.key()) == known.end())
            throw ConfigError(where + ": unknown key '" + it.key() + "'");
}

const ordered_json& need(const ordered_json& j, const std::string& key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) throw ConfigError(where + ": missing key '" + key + "'");
    return *it;
}

double as_number(const ordered_json& j, const std::string& where) {
    if (!j.is_number()) throw ConfigError(where + ": expected a number");
    return j.get<double>();
}

std::vector<double> as_number_list(const ordered_json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) throw ConfigError(where + ": expected a non-empty array");
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& v : j) out.push_back(as_number(v, where));
    return out;
}

integrate::SimConfig parse_sim(const ordered_json& j) {
    check_keys(j, {"dt", "t_end", "merge_gap_tol", "bisect_tol", "sample_every"}, "sim");
    integrate::SimConfig sim;
    sim.t_end = as_number(need(j, "t_end", "sim"), "sim.t_end");
    if (j.contains("dt")) sim.dt = as_number(j.at("dt"), "sim.dt");
    if (j.contains("merge_gap_tol")) sim.merge_gap_tol = as_number(j.at("merge_gap_tol"), "sim.merge_gap_tol");
    if (j.contains("bisect_tol")) sim.bisect_tol = as_number(j.at("bisect_tol"), "sim.bisect_tol");
    if (j.contains("sample_every")) {
        if (!j.at("sample_every").is_number_integer())
            throw ConfigError("sim.sample_every: expected an integer");
        const auto se = j.at("sample_every").get<long long>();
        if (se < 1) throw ConfigError("sim.sample_every: must be >= 1");
        sim.sample_every = static_cast<std::size_t>(se);
    }
    return sim;
}

mollifier::MollifierSpec parse_mollifier(const ordered_json& j) {
    check_keys(j, {"family", "eps"}, "mollifier");
    mollifier::MollifierSpec spec;
    const ordered_json& fam = need(j, "family", "mollifier");
    if (!fam.is_string()) throw ConfigError("mollifier.family: expected a string");
    spec.family = mollifier::family_from_string(fam.get<std::string>());
    spec.eps = as_number(need(j, "eps", "mollifier"), "mollifier.eps");
    mollifier::validate(spec);
    return spec;
}

} // namespace

PeakonState Scenario::initial_state() const {
    return PeakonState(0.0, positions, momenta);
}

Scenario parse_scenario(const ordered_json& j) {
    check_keys(j,
               {"schema_version", "name", "system", "momenta", "positions", "mollifier", "sim",
                "outputs", "positions_note"},
               "scenario");
    Scenario s;
    const ordered_json& version = need(j, "schema_version", "scenario");
    if (!version.is_number_integer() || version.get<int>() != 1)
        throw ConfigError("scenario.schema_version: expected 1");
    const ordered_json& name = need(j, "name", "scenario");
    if (!name.is_string()) throw ConfigError("scenario.name: expected a string");
    s.name = name.get<std::string>();
    s.system = system_from_string(need(j, "system", "scenario").get<std::string>());
    s.momenta = as_number_list(need(j, "momenta", "scenario"), "scenario.momenta");
    s.positions = as_number_list(need(j, "positions", "scenario"), "scenario.positions");
    if (s.momenta.size() != s.positions.size())
        throw ConfigError("scenario: momenta and positions must have equal length");
    for (std::size_t i = 0; i + 1 < s.positions.size(); ++i)
        if (!(s.positions[i] < s.positions[i + 1]))
            throw ConfigError("scenario: positions must be strictly increasing (x_" +
                              std::to_string(i + 1) + " = " + format_double(s.positions[i]) +
                              " >= x_" + std::to_string(i + 2) + " = " +
                              format_double(s.positions[i + 1]) + ")");
    if (j.contains("mollifier")) {
        if (s.system != SystemKind::mch_regularized)
            throw ConfigError("scenario: mollifier is only valid for system mch_regularized");
        s.mollifier_spec = parse_mollifier(j.at("mollifier"));
    } else if (s.system == SystemKind::mch_regularized) {
        throw ConfigError("scenario: system mch_regularized requires a mollifier");
    }
    s.sim = parse_sim(need(j, "sim", "scenario"));
    if (j.contains("outputs")) {
        const ordered_json& outs = j.at("outputs");
        if (!outs.is_array()) throw ConfigError("scenario.outputs: expected an array");
        for (const auto& o : outs) {
            if (!o.is_string()) throw ConfigError("scenario.outputs: expected strings");
            s.outputs.push_back(output_from_string(o.get<std::string>()));
        }
    } else {
        s.outputs = {OutputKind::trajectory_csv, OutputKind::energy_csv, OutputKind::events_json,
                     OutputKind::report_json};
    }
    if (j.contains("positions_note")) {
        if (!j.at("positions_note").is_string())
            throw ConfigError("scenario.positions_note: expected a string");
        s.positions_note = j.at("positions_note").get<std::string>();
    }
    return s;
}

namespace {

ordered_json default_sim(double t_end, std::size_t sample_every = 10) {
    return ordered_json{{"dt", 1e-3},
                        {"t_end", t_end},
                        {"merge_gap_tol", 1e-9},
                        {"bisect_tol", 1e-12},
                        {"sample_every", sample_every}};
}

const char* kDefaultPositionsNote = "positions: implementation default (the source figures do not specify initial positions)";

} // namespace

std::vector<std::string> stock_scenario_names() {
    return {"fig1a", "fig1b", "single", "single_nonconservative", "two_equal", "four_peakon",
            "fig1a_regularized"};
}

ordered_json stock_scenario(const std::string& name) {
    if (name == "fig1a")
        return ordered_json{{"schema_version", 1},
                            {"name", "fig1a"},
                            {"system", "mch_conservative"},
                            {"momenta", {15.0, 2.0, 3.0}},
                            {"positions", {-2.0, -1.0, 0.0}},
                            {"positions_note", kDefaultPositionsNote},
                            {"sim", default_sim(2.0)},
                            {"outputs", {"trajectory_csv", "energy_csv", "events_json", "report_json"}}};
    if (name == "fig1b")
        return ordered_json{{"schema_version", 1},
                            {"name", "fig1b"},
                            {"system", "mch_conservative"},
                            {"momenta", {5.0, 5.0, -1.0}},
                            {"positions", {-1.0, 0.0, 1.0}},
                            {"positions_note", kDefaultPositionsNote},
                            {"sim", default_sim(2.0)},
                            {"outputs", {"trajectory_csv", "energy_csv", "events_json", "report_json"}}};
    if (name == "single")
        return ordered_json{{"schema_version", 1},
                            {"name", "single"},
                            {"system", "mch_conservative"},
                            {"momenta", {4.0}},
                            {"positions", {0.0}},
                            {"sim", default_sim(10.0)},
                            {"outputs", {"trajectory_csv", "energy_csv", "report_json"}}};
    if (name == "single_nonconservative")
        return ordered_json{{"schema_version", 1},
                            {"name", "single_nonconservative"},
                            {"system", "mch_nonconservative"},
                            {"momenta", {2.0}},
                            {"positions", {0.0}},
                            {"sim", default_sim(10.0)},
                            {"outputs", {"trajectory_csv", "report_json"}}};
    if (name == "two_equal")
        return ordered_json{{"schema_version", 1},
                            {"name", "two_equal"},
                            {"system", "mch_conservative"},
                            {"momenta", {1.0, 1.0}},
                            {"positions", {0.0, 0.6931471805599453}},
                            {"sim", default_sim(2.0)},
                            {"outputs", {"trajectory_csv", "energy_csv", "events_json", "report_json"}}};
    if (name == "four_peakon")
        return ordered_json{{"schema_version", 1},
                            {"name", "four_peakon"},
                            {"system", "mch_conservative"},
                            {"momenta", {15.0, 2.0, 3.0, -2.0}},
                            {"positions", {-2.0, -1.0, 2.0, 5.0}},
                            {"positions_note",
                             "positions: implementation default; x_3 raised to 2 to keep strict "
                             "ordering (source figure lists a non-increasing value)"},
                            {"sim", default_sim(2.0)},
                            {"outputs", {"trajectory_csv", "energy_csv", "events_json", "report_json"}}};
    if (name == "fig1a_regularized")
        return ordered_json{{"schema_version", 1},
                            {"name", "fig1a_regularized"},
                            {"system", "mch_regularized"},
                            {"momenta", {15.0, 2.0, 3.0}},
                            {"positions", {-2.0, -1.0, 0.0}},
                            {"positions_note", kDefaultPositionsNote},
                            {"mollifier", {{"family", "cosine_bump"}, {"eps", 0.1}}},
                            {"sim",
                             ordered_json{{"dt", 1e-5},
                                          {"t_end", 2.0},
                                          {"merge_gap_tol", 1e-9},
                                          {"bisect_tol", 1e-12},
                                          {"sample_every", 1000}}},
                            {"outputs", {"trajectory_csv", "energy_csv", "report_json"}}};
    throw ConfigError("unknown stock scenario: " + name);
}

namespace {

ordered_json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open file: " + path);
    ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("JSON parse error in " + path + ": " + e.what());
    }
    return j;
}

} // namespace

Scenario load_scenario(const std::string& path_or_stock) {
    const auto names = stock_scenario_names();
    if (std::find(names.begin(), names.end(), path_or_stock) != names.end())
        return parse_scenario(stock_scenario(path_or_stock));
    return parse_scenario(load_json_file(path_or_stock));
}

std::vector<std::string> stock_study_names() { return {"fig2", "fig3", "single_study"}; }

ordered_json stock_study(const std::string& name) {
    auto base_without_outputs = [](const std::string& scenario_name) {
        ordered_json base = stock_scenario(scenario_name);
        base.erase("outputs");
        return base;
    };
    if (name == "fig2")
        return ordered_json{{"schema_version", 1},
                            {"name", "fig2"},
                            {"base", base_without_outputs("fig1a")},
                            {"eps_list", {0.2, 0.1, 0.05}},
                            {"mollifier_family", "cosine_bump"},
                            {"probe_offset", 0.5}};
    if (name == "fig3")
        return ordered_json{{"schema_version", 1},
                            {"name", "fig3"},
                            {"base", base_without_outputs("four_peakon")},
                            {"eps_list", {0.2, 0.1, 0.05}},
                            {"mollifier_family", "cosine_bump"},
                            {"probe_offset", 0.5}};
    if (name == "single_study")
        return ordered_json{{"schema_version", 1},
                            {"name", "single_study"},
                            {"base", base_without_outputs("single")},
                            {"eps_list", {0.2, 0.1}},
                            {"mollifier_family", "cosine_bump"},
                            {"probe_offset", 0.5}};
    throw ConfigError("unknown stock study: " + name);
}

StudySpec parse_study(const ordered_json& j) {
    check_keys(j, {"schema_version", "name", "base", "eps_list", "mollifier_family", "probe_offset"},
               "study");
    StudySpec spec;
    const ordered_json& version = need(j, "schema_version", "study");
    if (!version.is_number_integer() || version.get<int>() != 1)
        throw ConfigError("study.schema_version: expected 1");
    spec.name = need(j, "name", "study").get<std::string>();
    spec.base = parse_scenario(need(j, "base", "study"));
    if (spec.base.system != SystemKind::mch_conservative)
        throw ConfigError("study.base: must use system mch_conservative");
    spec.eps_list = as_number_list(need(j, "eps_list", "study"), "study.eps_list");
    for (std::size_t i = 0; i + 1 < spec.eps_list.size(); ++i)
        if (!(spec.eps_list[i] > spec.eps_list[i + 1]))
            throw ConfigError("study.eps_list: values must be strictly decreasing");
    for (double e : spec.eps_list)
        if (!(e > 0.0)) throw ConfigError("study.eps_list: values must be positive");
    if (j.contains("mollifier_family"))
        spec.family = mollifier::family_from_string(j.at("mollifier_family").get<std::string>());
    if (j.contains("probe_offset"))
        spec.probe_offset = as_number(j.at("probe_offset"), "study.probe_offset");
    return spec;
}

StudySpec load_study(const std::string& path_or_stock) {
    const auto names = stock_study_names();
    if (std::find(names.begin(), names.end(), path_or_stock) != names.end())
        return parse_study(stock_study(path_or_stock));
    return parse_study(load_json_file(path_or_stock));
}

namespace {

bool format_allows(FormatFilter f, OutputKind kind) {
    const bool is_csv = kind == OutputKind::trajectory_csv || kind == OutputKind::energy_csv;
    if (f == FormatFilter::csv_only) return is_csv;
    if (f == FormatFilter::json_only) return !is_csv;
    return true;
}

std::string output_path(const std::string& out_dir, const std::string& name, const std::string& suffix) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    return (fs::path(out_dir) / (name + suffix)).string();
}

void write_text(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write file: " + path);
    out << body;
}

std::string trajectory_csv_mch(const sticky::Trajectory& traj) {
    std::string csv = "t";
    for (std::size_t i = 0; i < traj.original_count; ++i)
        csv += ",x_" + std::to_string(i + 1);
    csv += ",H\n";
    for (std::size_t s = 0; s < traj.samples.size(); ++s) {
        csv += format_double(traj.samples[s].t);
        for (std::size_t i = 0; i < traj.original_count; ++i)
            csv += "," + format_double(traj.position_of_original(i, s));
        csv += "," + format_double(kernel::energy(traj.samples[s].state));
        csv += "\n";
    }
    return csv;
}

std::string trajectory_csv_ch(const std::vector<integrate::ChSample>& samples) {
    const std::size_t n = samples.front().state.positions.size();
    std::string csv = "t";
    for (std::size_t i = 0; i < n; ++i) csv += ",x_" + std::to_string(i + 1);
    csv += ",H\n";
    for (const auto& s : samples) {
        csv += format_double(s.t);
        for (std::size_t i = 0; i < n; ++i) csv += "," + format_double(s.state.positions[i]);
        csv += "," + format_double(dynamics::ch_hamiltonian(s.state));
        csv += "\n";
    }
    return csv;
}

std::string energy_csv_mch(const sticky::Trajectory& traj) {
    std::string csv = "t,H,rel_drift\n";
    const double h0 = kernel::energy(traj.samples.front().state);
    for (const auto& s : traj.samples) {
        const double h = kernel::energy(s.state);
        csv += format_double(s.t);
        csv += "," + format_double(h);
        csv += "," + format_double(std::abs(h - h0) / std::max(std::abs(h0), 1e-300));
        csv += "\n";
    }
    return csv;
}

std::string energy_csv_ch(const std::vector<integrate::ChSample>& samples) {
    std::string csv = "t,H,rel_drift\n";
    const double h0 = dynamics::ch_hamiltonian(samples.front().state);
    for (const auto& s : samples) {
        const double h = dynamics::ch_hamiltonian(s.state);
        csv += format_double(s.t);
        csv += "," + format_double(h);
        csv += "," + format_double(std::abs(h - h0) / std::max(std::abs(h0), 1e-300));
        csv += "\n";
    }
    return csv;
}

ordered_json events_json(const sticky::Trajectory& traj) {
    ordered_json events = ordered_json::array();
    for (const auto& ev : traj.events) {
        ordered_json groups = ordered_json::array();
        for (const auto& g : ev.partition.groups) {
            ordered_json group = ordered_json::array();
            for (std::size_t idx : g) group.push_back(idx + 1); // 1-based like the CSV columns
            groups.push_back(group);
        }
        events.push_back(ordered_json{
            {"t", ev.t},
            {"kind", ev.kind == integrate::EventKind::ordering_breach ? "ordering_breach"
                                                                      : "gap_below_tol"},
            {"groups", groups},
            {"momenta_before", ev.pre_state.momenta()},
            {"momenta_after", ev.post_state.momenta()},
        });
    }
    return events;
}

ordered_json report_json_mch(const RunOutcome& outcome) {
    const sticky::Trajectory& traj = outcome.trajectory;
    const verify::EnergyAudit audit = verify::energy_audit(traj);
    const PeakonState& final_state = traj.samples.back().state;
    ordered_json report{
        {"schema_version", 1},
        {"name", outcome.scenario.name},
        {"system", to_string(outcome.scenario.system)},
        {"m0", traj.m0_initial},
        {"samples", traj.samples.size()},
        {"events", traj.events.size()},
        {"stopped_at_event", outcome.stopped_at_event},
        {"note", outcome.note},
        {"positions_note", outcome.scenario.positions_note},
        {"energy",
         ordered_json{{"initial", audit.initial_energy},
                      {"max_rel_drift", audit.max_rel_drift},
                      {"event_jumps", audit.event_jumps}}},
        {"final",
         ordered_json{{"t", final_state.t()},
                      {"positions", final_state.positions()},
                      {"momenta", final_state.momenta()}}},
    };
    if (outcome.scenario.system == SystemKind::mch_regularized)
        report["min_gap"] = outcome.regularized_min_gap;
    return report;
}

ordered_json report_json_ch(const RunOutcome& outcome) {
    const auto& samples = outcome.ch_samples;
    const double h0 = dynamics::ch_hamiltonian(samples.front().state);
    double drift = 0.0;
    for (const auto& s : samples)
        drift = std::max(drift, std::abs(dynamics::ch_hamiltonian(s.state) - h0));
    const auto& last = samples.back().state;
    return ordered_json{
        {"schema_version", 1},
        {"name", outcome.scenario.name},
        {"system", "ch"},
        {"samples", samples.size()},
        {"hamiltonian", ordered_json{{"initial", h0}, {"max_abs_drift", drift}}},
        {"final",
         ordered_json{{"t", last.t}, {"positions", last.positions}, {"momenta", last.momenta}}},
    };
}

} // namespace

RunOutcome run_scenario(const Scenario& scenario, const std::string& out_dir, FormatFilter format) {
    RunOutcome outcome;
    outcome.scenario = scenario;

    if (scenario.system == SystemKind::ch) {
        dynamics::ChState init;
        init.t = 0.0;
        init.positions = scenario.positions;
        init.momenta = scenario.momenta;
        outcome.ch_samples =
            integrate::evolve_ch(init, scenario.sim.dt, scenario.sim.t_end, scenario.sim.sample_every);
    } else {
        const PeakonState init = scenario.initial_state();
        switch (scenario.system) {
        case SystemKind::mch_conservative:
            outcome.trajectory = sticky::evolve_sticky(init, scenario.sim);
            break;
        case SystemKind::mch_nonconservative: {
            const auto rhs = [](const PeakonState& s) { return dynamics::mch_nonconservative_rhs(s); };
            integrate::Segment seg = integrate::evolve_until_event(rhs, init, scenario.sim);
            outcome.stopped_at_event = seg.event.has_value();
            if (outcome.stopped_at_event)
                outcome.note = "stopped at first collision (t = " + format_double(seg.event->t_event) +
                               "): the non-conservative system has no merge continuation here";
            outcome.trajectory = sticky::single_epoch_trajectory(std::move(seg.samples), init.size());
            break;
        }
        case SystemKind::mch_regularized: {
            dispersive::RegularizedRun run =
                dispersive::evolve_regularized(init, *scenario.mollifier_spec, scenario.sim);
            outcome.trajectory = std::move(run.trajectory);
            outcome.regularized_min_gap = run.min_gap;
            break;
        }
        case SystemKind::ch:
            break;
        }
    }

    for (OutputKind kind : scenario.outputs) {
        if (!format_allows(format, kind)) continue;
        switch (kind) {
        case OutputKind::trajectory_csv: {
            const std::string path = output_path(out_dir, scenario.name, "_trajectory.csv");
            write_text(path, scenario.system == SystemKind::ch
                                 ? trajectory_csv_ch(outcome.ch_samples)
                                 : trajectory_csv_mch(outcome.trajectory));
            outcome.files_written.push_back(path);
            break;
        }
        case OutputKind::energy_csv: {
            const std::string path = output_path(out_dir, scenario.name, "_energy.csv");
            write_text(path, scenario.system == SystemKind::ch ? energy_csv_ch(outcome.ch_samples)
                                                               : energy_csv_mch(outcome.trajectory));
            outcome.files_written.push_back(path);
            break;
        }
        case OutputKind::events_json: {
            const std::string path = output_path(out_dir, scenario.name, "_events.json");
            ordered_json events = scenario.system == SystemKind::ch
                                      ? ordered_json::array()
                                      : events_json(outcome.trajectory);
            write_text(path, events.dump(2) + "\n");
            outcome.files_written.push_back(path);
            break;
        }
        case OutputKind::report_json: {
            const std::string path = output_path(out_dir, scenario.name, "_report.json");
            ordered_json report = scenario.system == SystemKind::ch ? report_json_ch(outcome)
                                                                    : report_json_mch(outcome);
            write_text(path, report.dump(2) + "\n");
            outcome.files_written.push_back(path);
            break;
        }
        }
    }
    return outcome;
}

dispersive::ConvergenceReport run_study(const StudySpec& spec, const std::string& out_dir,
                                        FormatFilter format, std::vector<std::string>* files_written) {
    const PeakonState init = spec.base.initial_state();
    dispersive::ConvergenceReport report =
        dispersive::convergence_study(init, spec.eps_list, spec.base.sim, spec.family,
                                      spec.probe_offset);

    if (format != FormatFilter::json_only) {
        std::string csv = "eps,sup_distance,scaled_gap,min_gap,dt\n";
        for (std::size_t i = 0; i < report.eps_values.size(); ++i) {
            csv += format_double(report.eps_values[i]);
            csv += "," + format_double(report.sup_distances[i]);
            csv += "," + (report.has_collision ? format_double(report.scaled_gaps[i]) : std::string("nan"));
            csv += "," + format_double(report.min_gaps[i]);
            csv += "," + format_double(report.dt_used[i]);
            csv += "\n";
        }
        const std::string path = output_path(out_dir, spec.name, "_study.csv");
        write_text(path, csv);
        if (files_written) files_written->push_back(path);
    }
    if (format != FormatFilter::csv_only) {
        ordered_json j{{"schema_version", 1},
                       {"name", spec.name},
                       {"mollifier_family", mollifier::to_string(spec.family)},
                       {"eps", report.eps_values},
                       {"sup_distances", report.sup_distances},
                       {"scaled_gaps", report.scaled_gaps},
                       {"min_gaps", report.min_gaps},
                       {"dt_used", report.dt_used},
                       {"has_collision", report.has_collision},
                       {"probe_time", report.probe_time}};
        const std::string path = output_path(out_dir, spec.name, "_study.json");
        write_text(path, j.dump(2) + "\n");
        if (files_written) files_written->push_back(path);
    }
    return report;
}

namespace {

void add_item(CheckResult& result, const std::string& suite, const std::string& name, double value,
              double threshold) {
    CheckItem item;
    item.suite = suite;
    item.name = name;
    item.value = value;
    item.threshold = threshold;
    item.passed = value <= threshold;
    result.all_passed = result.all_passed && item.passed;
    result.items.push_back(item);
}

void check_identities(CheckResult& result, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> momentum(-5.0, 5.0);
    std::uniform_real_distribution<double> position(-5.0, 5.0);
    std::uniform_int_distribution<std::size_t> count(2, 10);

    double worst_alternating = 0.0, worst_energy = 0.0, worst_route = 0.0, worst_fast = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = count(rng);
        std::vector<double> xs(n), ps(n);
        for (auto& x : xs) x = position(rng);
        for (auto& p : ps) p = momentum(rng);
        std::sort(xs.begin(), xs.end());
        bool distinct = true;
        for (std::size_t i = 0; i + 1 < n; ++i)
            if (!(xs[i] < xs[i + 1])) distinct = false;
        if (!distinct) continue;

        const PeakonState state(0.0, xs, ps);
        const double m0 = state.m0();
        worst_alternating = std::max(
            worst_alternating, std::abs(dynamics::alternating_identity_residual(state)) / (m0 * m0));
        worst_energy = std::max(worst_energy, std::abs(dynamics::energy_identity_residual(state)) /
                                                  (m0 * m0 * m0 * m0));

        const std::vector<double> via_intervals = dynamics::mch_conservative_rhs(state);
        const std::vector<double> via_couplings = dynamics::PairCouplings(state).speeds();
        const dynamics::IntervalConstants fast = dynamics::interval_constants_fast(state);
        const dynamics::IntervalConstants robust = dynamics::interval_constants(state);
        const double scale = std::max(0.5 * m0 * m0, 1e-12);
        for (std::size_t i = 0; i < n; ++i)
            worst_route =
                std::max(worst_route, std::abs(via_intervals[i] - via_couplings[i]) / scale);
        for (std::size_t i = 0; i <= n; ++i)
            worst_fast = std::max(worst_fast, std::abs(fast.values[i] - robust.values[i]) / scale);
    }
    add_item(result, "identities", "alternating_identity (per M0^2)", worst_alternating, 1e-12);
    add_item(result, "identities", "energy_identity (per M0^4)", worst_energy, 1e-12);
    add_item(result, "identities", "velocity route agreement (relative)", worst_route, 1e-14);
    add_item(result, "identities", "fast interval constants (relative)", worst_fast, 1e-13);
}

void check_splitting(CheckResult& result) {
    const verify::SplittingReport report = verify::splitting_demo(0.5, 1e-3, 10);
    add_item(result, "splitting", "initial field distance", report.field_distance.front(), 0.0);
    add_item(result, "splitting", "|H_single(0) - 8|", std::abs(report.energy_single.front() - 8.0),
             0.0);
    add_item(result, "splitting", "|H_split(0) - 8|", std::abs(report.energy_split.front() - 8.0),
             0.0);
    add_item(result, "splitting", "distance at t_end (want >= 1e-3)",
             report.field_distance.back() >= 1e-3 ? 0.0 : 1.0, 0.0);
    double energy_err = 0.0;
    for (std::size_t i = 0; i < report.times.size(); ++i) {
        energy_err = std::max(energy_err, std::abs(report.energy_single[i] - 8.0));
        energy_err = std::max(energy_err, std::abs(report.energy_split[i] - 8.0));
    }
    add_item(result, "splitting", "max |H - 8| along both runs", energy_err, 1e-6);
}

void check_ch_splitting(CheckResult& result, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> total(-5.0, 5.0);
    std::uniform_real_distribution<double> part(-6.0, 6.0);
    double worst_gap = 0.0, worst_exact = 0.0, worst_drift = 0.0;
    int failures = 0;
    for (int trial = 0; trial < 20; ++trial) {
        double c = total(rng);
        if (std::abs(c) < 0.1) c = c < 0 ? -0.1 : 0.1;
        const double p1 = part(rng);
        const verify::ChSplittingReport r = verify::ch_splitting_demo(c, p1, 0.0, 2.0, 1e-3);
        worst_gap = std::max(worst_gap, r.max_pair_gap);
        worst_exact = std::max(worst_exact, r.final_position_error);
        worst_drift = std::max(worst_drift, r.hamiltonian_drift);
        if (!r.passed) ++failures;
    }
    add_item(result, "ch-splitting", "max |x1 - x2|", worst_gap, 1e-8);
    add_item(result, "ch-splitting", "max |x1(T) - cT - x0|", worst_exact, 1e-6);
    add_item(result, "ch-splitting", "max Hamiltonian drift", worst_drift, 1e-8);
    add_item(result, "ch-splitting", "failed splits", failures, 0.0);
}

void check_energy(CheckResult& result) {
    for (const char* name : {"fig1a", "fig1b"}) {
        const Scenario sc = parse_scenario(stock_scenario(name));
        const sticky::Trajectory traj = sticky::evolve_sticky(sc.initial_state(), sc.sim);
        const verify::EnergyAudit audit = verify::energy_audit(traj);
        add_item(result, "energy", std::string(name) + " max relative drift", audit.max_rel_drift,
                 1e-6);
    }
}

void check_residual(CheckResult& result) {
    const Scenario sc = parse_scenario(stock_scenario("fig1a"));
    integrate::SimConfig sim = sc.sim;
    sim.sample_every = 1;
    const sticky::Trajectory traj = sticky::evolve_sticky(sc.initial_state(), sim);
    verify::TestFunction tf;
    tf.t_cut = 1.5;
    tf.x_center = 2.0;
    tf.x_halfwidth = 12.0;
    const verify::ResidualReport report = verify::weak_residual(traj, tf);
    add_item(result, "residual", "fig1a weak residual", report.value, 1e-4);
}

} // namespace

std::vector<std::string> check_suite_names() {
    return {"identities", "splitting", "ch-splitting", "energy", "residual"};
}

CheckResult run_checks(const CheckOptions& options) {
    std::vector<std::string> suites = options.suites;
    if (suites.empty()) suites = check_suite_names();

    CheckResult result;
    for (const std::string& suite : suites) {
        if (suite == "identities")
            check_identities(result, options.seed);
        else if (suite == "splitting")
            check_splitting(result);
        else if (suite == "ch-splitting")
            check_ch_splitting(result, options.seed);
        else if (suite == "energy")
            check_energy(result);
        else if (suite == "residual")
            check_residual(result);
        else
            throw ConfigError("unknown check suite: " + suite);
    }

    if (!options.out_dir.empty()) {
        ordered_json items = ordered_json::array();
        for (const auto& item : result.items)
            items.push_back(ordered_json{{"suite", item.suite},
                                         {"name", item.name},
                                         {"passed", item.passed},
                                         {"value", item.value},
                                         {"threshold", item.threshold}});
        ordered_json j{{"schema_version", 1},
                       {"seed", options.seed},
                       {"all_passed", result.all_passed},
                       {"items", items}};
        const std::string path = output_path(options.out_dir, "check", "_report.json");
        write_text(path, j.dump(2) + "\n");
        result.files_written.push_back(path);
    }
    return result;
}

} // namespace peakon::cli
