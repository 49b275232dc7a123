#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "peakon/scenario.hpp"

namespace cli = peakon::cli;
namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::string temp_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("peakon_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir.string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

} // namespace

TEST_CASE("stock scenarios parse and validate") {
    for (const std::string& name : cli::stock_scenario_names()) {
        const cli::Scenario s = cli::load_scenario(name);
        CHECK(s.name == name);
        CHECK(s.momenta.size() == s.positions.size());
    }
    const cli::Scenario fig1a = cli::load_scenario("fig1a");
    CHECK(fig1a.system == cli::SystemKind::mch_conservative);
    CHECK(fig1a.momenta == std::vector<double>{15.0, 2.0, 3.0});
    CHECK(!fig1a.positions_note.empty());
}

TEST_CASE("schema is strict: unknown keys, bad ordering, mollifier pairing") {
    ordered_json base = cli::stock_scenario("fig1a");

    ordered_json extra = base;
    extra["typo_key"] = 1;
    CHECK_THROWS_WITH_AS(static_cast<void>(cli::parse_scenario(extra)),
                         doctest::Contains("unknown key"), peakon::ConfigError);

    ordered_json unordered = base;
    unordered["positions"] = {0.0, 0.0, 1.0};
    CHECK_THROWS_WITH_AS(static_cast<void>(cli::parse_scenario(unordered)),
                         doctest::Contains("strictly increasing"), peakon::ConfigError);

    ordered_json moll = base;
    moll["mollifier"] = {{"family", "cosine_bump"}, {"eps", 0.1}};
    CHECK_THROWS_WITH_AS(static_cast<void>(cli::parse_scenario(moll)),
                         doctest::Contains("mollifier"), peakon::ConfigError);

    ordered_json reg = cli::stock_scenario("fig1a_regularized");
    reg.erase("mollifier");
    CHECK_THROWS_WITH_AS(static_cast<void>(cli::parse_scenario(reg)),
                         doctest::Contains("requires a mollifier"), peakon::ConfigError);

    ordered_json version = base;
    version["schema_version"] = 2;
    CHECK_THROWS_AS(static_cast<void>(cli::parse_scenario(version)), peakon::ConfigError);

    ordered_json mismatch = base;
    mismatch["momenta"] = {1.0, 2.0};
    CHECK_THROWS_AS(static_cast<void>(cli::parse_scenario(mismatch)), peakon::ConfigError);
}

TEST_CASE("run_scenario writes the requested files with stable schema") {
    const std::string dir = temp_dir("run");
    const cli::Scenario sc = cli::load_scenario("fig1a");
    const cli::RunOutcome outcome = cli::run_scenario(sc, dir);
    REQUIRE(outcome.files_written.size() == 4);
    CHECK(fs::exists(dir + "/fig1a_trajectory.csv"));
    CHECK(fs::exists(dir + "/fig1a_energy.csv"));
    CHECK(fs::exists(dir + "/fig1a_events.json"));
    CHECK(fs::exists(dir + "/fig1a_report.json"));

    const std::string csv = slurp(dir + "/fig1a_trajectory.csv");
    CHECK(csv.rfind("t,x_1,x_2,x_3,H\n", 0) == 0);

    const ordered_json events = ordered_json::parse(slurp(dir + "/fig1a_events.json"));
    REQUIRE(events.is_array());
    REQUIRE(!events.empty());
    CHECK(events[0].contains("t"));
    CHECK(events[0].contains("groups"));
    CHECK(events[0].contains("momenta_before"));
    CHECK(events[0].contains("momenta_after"));

    const ordered_json report = ordered_json::parse(slurp(dir + "/fig1a_report.json"));
    CHECK(report["events"] == 1);
    CHECK(report["energy"]["max_rel_drift"].get<double>() <= 1e-6);

    // After the merge of peakons 2 and 3 the lineage-resolved columns x_2 and
    // x_3 repeat the shared representative trajectory.
    std::istringstream rows(csv);
    std::string line, last;
    while (std::getline(rows, line))
        if (!line.empty()) last = line;
    std::vector<double> cells;
    std::istringstream split(last);
    std::string cell;
    while (std::getline(split, cell, ',')) cells.push_back(std::stod(cell));
    REQUIRE(cells.size() == 5); // t, x_1..x_3, H
    CHECK(cells[0] == doctest::Approx(2.0));
    CHECK(cells[2] == cells[3]);
    CHECK(cells[1] < cells[2]);
}

TEST_CASE("repeated runs are byte-identical") {
    const std::string dir_a = temp_dir("det_a");
    const std::string dir_b = temp_dir("det_b");
    const cli::Scenario sc = cli::load_scenario("fig1b");
    cli::run_scenario(sc, dir_a);
    cli::run_scenario(sc, dir_b);
    for (const char* suffix :
         {"_trajectory.csv", "_energy.csv", "_events.json", "_report.json"}) {
        CHECK(slurp(dir_a + "/fig1b" + suffix) == slurp(dir_b + "/fig1b" + suffix));
    }
}

TEST_CASE("format filter restricts output kinds") {
    const std::string dir = temp_dir("fmt");
    const cli::Scenario sc = cli::load_scenario("two_equal");
    const cli::RunOutcome csv_only = cli::run_scenario(sc, dir, cli::FormatFilter::csv_only);
    for (const auto& f : csv_only.files_written) CHECK(f.find(".csv") != std::string::npos);
    const cli::RunOutcome json_only = cli::run_scenario(sc, dir, cli::FormatFilter::json_only);
    for (const auto& f : json_only.files_written) CHECK(f.find(".json") != std::string::npos);
}

TEST_CASE("non-conservative runs stop at the first collision with a note") {
    ordered_json j = cli::stock_scenario("fig1a");
    j["name"] = "fig1a_nc";
    j["system"] = "mch_nonconservative";
    j["outputs"] = {"report_json"};
    const cli::Scenario sc = cli::parse_scenario(j);
    const std::string dir = temp_dir("nc");
    const cli::RunOutcome outcome = cli::run_scenario(sc, dir);
    CHECK(outcome.stopped_at_event);
    CHECK(!outcome.note.empty());
    CHECK(outcome.trajectory.events.empty());
}

TEST_CASE("ch system runs through the scenario driver") {
    ordered_json j{{"schema_version", 1},
                   {"name", "ch_pair"},
                   {"system", "ch"},
                   {"momenta", {2.0, 1.0}},
                   {"positions", {0.0, 1.0}},
                   {"sim", {{"dt", 1e-3}, {"t_end", 1.0}, {"sample_every", 10}}},
                   {"outputs", {"trajectory_csv", "energy_csv", "report_json"}}};
    const cli::Scenario sc = cli::parse_scenario(j);
    const std::string dir = temp_dir("ch");
    const cli::RunOutcome outcome = cli::run_scenario(sc, dir);
    CHECK(outcome.ch_samples.size() > 1);
    const ordered_json report = ordered_json::parse(slurp(dir + "/ch_pair_report.json"));
    CHECK(report["hamiltonian"]["max_abs_drift"].get<double>() <= 1e-9);
}

TEST_CASE("study driver: stock fig2 schema and degenerate single study") {
    const cli::StudySpec fig2 = cli::load_study("fig2");
    CHECK(fig2.base.system == cli::SystemKind::mch_conservative);
    CHECK(fig2.eps_list == std::vector<double>{0.2, 0.1, 0.05});

    // Degenerate single-peakon study: all distances at integrator tolerance.
    cli::StudySpec single = cli::load_study("single_study");
    single.base.sim.t_end = 1.0;
    const std::string dir = temp_dir("study");
    std::vector<std::string> files;
    const auto report = cli::run_study(single, dir, cli::FormatFilter::all, &files);
    CHECK(files.size() == 2);
    for (double d : report.sup_distances) CHECK(d <= 1e-12);
    CHECK(!report.has_collision);
    const std::string csv = slurp(dir + "/single_study_study.csv");
    CHECK(csv.rfind("eps,sup_distance,scaled_gap,min_gap,dt\n", 0) == 0);
}

TEST_CASE("study schema rejects non-decreasing eps and wrong base system") {
    ordered_json j = cli::stock_study("fig2");
    j["eps_list"] = {0.1, 0.2};
    CHECK_THROWS_AS(static_cast<void>(cli::parse_study(j)), peakon::ConfigError);

    ordered_json j2 = cli::stock_study("fig2");
    j2["base"]["system"] = "ch";
    CHECK_THROWS_AS(static_cast<void>(cli::parse_study(j2)), peakon::ConfigError);
}

TEST_CASE("check driver: fast suites pass and report items") {
    cli::CheckOptions options;
    options.suites = {"identities", "splitting", "ch-splitting"};
    options.seed = 42;
    options.out_dir = temp_dir("check");
    const cli::CheckResult result = cli::run_checks(options);
    CHECK(result.all_passed);
    CHECK(!result.items.empty());
    REQUIRE(result.files_written.size() == 1);
    const ordered_json report = ordered_json::parse(slurp(result.files_written[0]));
    CHECK(report["all_passed"] == true);
    CHECK(report["seed"] == 42);

    CHECK_THROWS_AS(cli::run_checks(cli::CheckOptions{{"nope"}, 1, ""}), peakon::ConfigError);
}

TEST_CASE("scenario file round-trip through disk") {
    const std::string dir = temp_dir("file");
    const std::string path = dir + "/custom.json";
    ordered_json j = cli::stock_scenario("two_equal");
    j["name"] = "custom";
    {
        std::ofstream out(path);
        out << j.dump(2);
    }
    const cli::Scenario sc = cli::load_scenario(path);
    CHECK(sc.name == "custom");
    CHECK_THROWS_AS(cli::load_scenario(dir + "/missing.json"), peakon::ConfigError);
}
