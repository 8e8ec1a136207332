// Copyright 2026 The bsmcert Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <array>
#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "bsmcert/bsmcert.h"
#include "json.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailed = 1;
constexpr int kExitInputError = 2;

using Json = nlohmann::ordered_json;

// Raised for any failed library call; carries the library's message.
class ApiError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

void check(bsmcert_status status) {
    if (status != BSMCERT_OK) {
        throw ApiError(std::string(bsmcert_status_string(status)) + ": " + bsmcert_last_error());
    }
}

struct StringDeleter {
    void operator()(char *p) const { bsmcert_string_free(p); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

struct StatsDeleter {
    void operator()(bsmcert_stats *p) const { bsmcert_stats_destroy(p); }
};
struct ReportDeleter {
    void operator()(bsmcert_report *p) const { bsmcert_report_destroy(p); }
};
struct ScenarioDeleter {
    void operator()(bsmcert_scenario *p) const { bsmcert_scenario_destroy(p); }
};
using Stats = std::unique_ptr<bsmcert_stats, StatsDeleter>;
using Report = std::unique_ptr<bsmcert_report, ReportDeleter>;
using Scenario = std::unique_ptr<bsmcert_scenario, ScenarioDeleter>;

std::string take(char *raw) {
    OwnedString owned(raw);
    return std::string(owned.get());
}

void emit(const std::string &text, const std::string &output) {
    if (output.empty() || output == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(output, std::ios::binary | std::ios::trunc);
    if (!out) throw ApiError("cannot write '" + output + "'");
    out << text;
}

bsmcert_mode parse_mode(const std::string &name) {
    if (name == "deterministic") return BSMCERT_MODE_DETERMINISTIC;
    if (name == "independent-sources") return BSMCERT_MODE_INDEPENDENT_SOURCES;
    return BSMCERT_MODE_PARTIAL;
}

bsmcert_delta_model parse_delta_model(const std::string &name) {
    return name == "explicit" ? BSMCERT_DELTA_EXPLICIT : BSMCERT_DELTA_CHSH_SCALED;
}

bsmcert_format parse_format(const std::string &name) { return name == "csv" ? BSMCERT_FORMAT_CSV : BSMCERT_FORMAT_JSON; }

std::string render(const bsmcert_report *report, bsmcert_format format) {
    char *raw = nullptr;
    check(bsmcert_report_render(report, format, &raw));
    return take(raw);
}

Report certify(const bsmcert_stats *stats, bsmcert_mode mode) {
    bsmcert_report *raw = nullptr;
    check(bsmcert_certify(stats, mode, &raw));
    return Report(raw);
}

std::optional<double> tolerance_from_env() {
    const char *env = std::getenv("BSMCERT_TOLERANCE");
    if (env == nullptr || *env == '\0') return std::nullopt;
    const std::string text(env);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || !(value > 0.0)) {
        throw ApiError("BSMCERT_TOLERANCE must be a positive number, got '" + text + "'");
    }
    return value;
}

struct BoundsArgs {
    std::array<std::optional<double>, 4> beta;
    std::array<std::optional<double>, 4> p;
    std::optional<double> delta;
    std::optional<std::string> delta_model;
    std::string mode = "deterministic";
    std::string input;
    std::string format = "json";
    std::string output;
};

struct SimulateArgs {
    std::string config;
    std::optional<double> visibility;
    std::optional<double> source1_visibility;
    std::optional<double> source2_visibility;
    std::optional<double> bsm_depolarization;
    std::optional<double> misalignment;
    std::optional<std::uint64_t> shots;
    std::optional<std::uint64_t> seed;
    std::optional<double> delta;
    std::optional<std::string> delta_model;
    std::string mode = "deterministic";
    bool oracle = false;
    std::string format = "json";
    std::string output;
};

struct VerifyArgs {
    std::string suite = "all";
    bool negative_control = false;
    std::optional<int> grid;
    std::optional<std::uint64_t> seed;
    std::string format = "json";
    std::string output;
};

struct FiguresArgs {
    std::string which = "fig3";
    int resolution = 101;
    std::string format = "csv";
    std::string output;
};

int run_bounds(const BoundsArgs &args) {
    bsmcert_stats *raw = nullptr;
    check(bsmcert_stats_create(&raw));
    Stats stats(raw);
    if (!args.input.empty()) check(bsmcert_stats_load_file(stats.get(), args.input.c_str()));
    for (int k = 0; k < 4; ++k) {
        if (args.beta[k]) check(bsmcert_stats_set_beta(stats.get(), k, *args.beta[k]));
        if (args.p[k]) check(bsmcert_stats_set_p(stats.get(), k, *args.p[k]));
    }
    if (args.delta) check(bsmcert_stats_set_delta(stats.get(), *args.delta));
    if (args.delta_model) check(bsmcert_stats_set_delta_model(stats.get(), parse_delta_model(*args.delta_model)));
    const Report report = certify(stats.get(), parse_mode(args.mode));
    emit(render(report.get(), parse_format(args.format)), args.output);
    return kExitOk;
}

int run_simulate(const SimulateArgs &args) {
    bsmcert_scenario *raw = nullptr;
    check(bsmcert_scenario_create(&raw));
    Scenario scenario(raw);
    if (!args.config.empty()) check(bsmcert_scenario_load_config_file(scenario.get(), args.config.c_str()));
    if (args.visibility) check(bsmcert_scenario_set_visibility(scenario.get(), *args.visibility));
    if (args.source1_visibility) check(bsmcert_scenario_set_source_visibility(scenario.get(), 0, *args.source1_visibility));
    if (args.source2_visibility) check(bsmcert_scenario_set_source_visibility(scenario.get(), 1, *args.source2_visibility));
    if (args.bsm_depolarization) check(bsmcert_scenario_set_bsm_depolarization(scenario.get(), *args.bsm_depolarization));
    if (args.misalignment) check(bsmcert_scenario_set_misalignment(scenario.get(), *args.misalignment));
    if (args.shots) check(bsmcert_scenario_set_shots(scenario.get(), *args.shots));
    if (args.seed) check(bsmcert_scenario_set_seed(scenario.get(), *args.seed));
    if (args.delta_model) check(bsmcert_scenario_set_delta_model(scenario.get(), parse_delta_model(*args.delta_model)));
    if (args.delta) check(bsmcert_scenario_set_delta(scenario.get(), *args.delta));

    bsmcert_stats *stats_raw = nullptr;
    check(bsmcert_simulate(scenario.get(), &stats_raw));
    Stats stats(stats_raw);
    const Report report = certify(stats.get(), parse_mode(args.mode));

    if (parse_format(args.format) == BSMCERT_FORMAT_CSV) {
        emit(render(report.get(), BSMCERT_FORMAT_CSV), args.output);
        return kExitOk;
    }
    char *stats_json = nullptr;
    check(bsmcert_stats_to_json(stats.get(), &stats_json));
    Json doc;
    doc["statistics"] = Json::parse(take(stats_json));
    doc["certificate"] = Json::parse(render(report.get(), BSMCERT_FORMAT_JSON));
    if (args.oracle) {
        char *oracle = nullptr;
        check(bsmcert_scenario_oracle_json(scenario.get(), &oracle));
        doc["oracle"] = Json::parse(take(oracle));
    }
    emit(doc.dump(2) + "\n", args.output);
    return kExitOk;
}

int run_verify(const VerifyArgs &args) {
    static const std::array<std::pair<const char *, bsmcert_suite>, 6> suites{{
        {"all", BSMCERT_SUITE_ALL},
        {"operator_inequality", BSMCERT_SUITE_OPERATOR_INEQUALITY},
        {"relabeling", BSMCERT_SUITE_RELABELING},
        {"teleport", BSMCERT_SUITE_TELEPORT},
        {"lemma1", BSMCERT_SUITE_LEMMA1},
        {"soundness", BSMCERT_SUITE_SOUNDNESS},
    }};
    bsmcert_suite suite = BSMCERT_SUITE_ALL;
    for (const auto &[name, value] : suites) {
        if (args.suite == name) suite = value;
    }
    bsmcert_verify_options options;
    bsmcert_verify_options_default(&options);
    if (const auto tol = tolerance_from_env()) options.tolerance = *tol;
    if (args.grid) options.grid_points = *args.grid;
    if (args.seed) options.seed = *args.seed;
    if (args.negative_control) options.convention = BSMCERT_GAIN_UNCORRECTED;

    int passed = 0;
    char *raw = nullptr;
    check(bsmcert_verify(suite, &options, &passed, &raw));
    const std::string report = take(raw);
    if (parse_format(args.format) == BSMCERT_FORMAT_CSV) {
        const Json doc = Json::parse(report);
        std::string csv = "check,passed\n";
        for (const auto &c : doc.at("checks")) {
            csv += c.at("name").get<std::string>() + "," + (c.at("passed").get<bool>() ? "true" : "false") + "\n";
        }
        emit(csv, args.output);
    } else {
        emit(report, args.output);
    }
    if (!passed) std::cerr << "verification failed\n";
    return passed ? kExitOk : kExitVerificationFailed;
}

int run_figures(const FiguresArgs &args) {
    if (args.format != "csv") throw ApiError("figures are emitted as CSV only");
    bsmcert_figure which = BSMCERT_FIG3;
    if (args.which == "fig5") which = BSMCERT_FIG5;
    if (args.which == "fig6") which = BSMCERT_FIG6;
    char *raw = nullptr;
    check(bsmcert_figure_csv(which, args.resolution, &raw));
    emit(take(raw), args.output);
    return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Device-independent certification of Bell state measurements"};
    app.set_version_flag("--version", std::string(bsmcert_version()));
    app.require_subcommand(1, 1);

    const std::vector<std::string> formats{"json", "csv"};
    const std::vector<std::string> delta_models{"explicit", "chsh-scaled"};
    const std::vector<std::string> modes{"deterministic", "independent-sources", "partial"};

    BoundsArgs bounds;
    CLI::App *bounds_cmd = app.add_subcommand("bounds", "Certify a BSM from observed statistics");
    for (int k = 0; k < 4; ++k) {
        bounds_cmd->add_option("--beta" + std::to_string(k), bounds.beta[k], "CHSH value after outcome " + std::to_string(k));
        bounds_cmd->add_option("--p" + std::to_string(k), bounds.p[k], "Probability of outcome " + std::to_string(k));
    }
    bounds_cmd->add_option("--delta", bounds.delta, "Source Bell value in [0, 1]");
    bounds_cmd->add_option("--delta-model", bounds.delta_model, "explicit or chsh-scaled")->check(CLI::IsMember(delta_models));
    bounds_cmd->add_option("--mode", bounds.mode, "deterministic, independent-sources or partial")
        ->check(CLI::IsMember(modes));
    bounds_cmd->add_option("--input", bounds.input, "Statistics JSON file")->check(CLI::ExistingFile);
    bounds_cmd->add_option("--format", bounds.format, "json or csv")->check(CLI::IsMember(formats));
    bounds_cmd->add_option("--output", bounds.output, "Output path (default stdout)");

    SimulateArgs sim;
    CLI::App *sim_cmd = app.add_subcommand("simulate", "Simulate the protocol and certify the result");
    sim_cmd->add_option("--config", sim.config, "key = value scenario file")->check(CLI::ExistingFile);
    sim_cmd->add_option("--visibility", sim.visibility, "Werner visibility of both sources");
    sim_cmd->add_option("--source1-visibility", sim.source1_visibility, "Werner visibility of source 1");
    sim_cmd->add_option("--source2-visibility", sim.source2_visibility, "Werner visibility of source 2");
    sim_cmd->add_option("--bsm-depolarization", sim.bsm_depolarization, "BSM depolarization w in [0, 1]");
    sim_cmd->add_option("--misalignment", sim.misalignment, "Measurement misalignment (radians)");
    sim_cmd->add_option("--shots", sim.shots, "Number of rounds; 0 or absent for exact statistics");
    sim_cmd->add_option("--seed", sim.seed, "Random seed (required with --shots)");
    sim_cmd->add_option("--delta", sim.delta, "Explicit source Bell value");
    sim_cmd->add_option("--delta-model", sim.delta_model, "explicit or chsh-scaled")->check(CLI::IsMember(delta_models));
    sim_cmd->add_option("--mode", sim.mode, "Certificate to compute")->check(CLI::IsMember(modes));
    sim_cmd->add_flag("--oracle", sim.oracle, "Append brute-force fidelities of the simulated devices");
    sim_cmd->add_option("--format", sim.format, "json or csv")->check(CLI::IsMember(formats));
    sim_cmd->add_option("--output", sim.output, "Output path (default stdout)");

    VerifyArgs ver;
    CLI::App *ver_cmd = app.add_subcommand("verify", "Run the numerical verification suite");
    ver_cmd->add_option("--suite", ver.suite, "all, operator_inequality, relabeling, teleport, lemma1 or soundness")
        ->check(CLI::IsMember({"all", "operator_inequality", "relabeling", "teleport", "lemma1", "soundness"}));
    ver_cmd->add_flag("--negative-control", ver.negative_control, "Use the uncorrected extraction gain");
    ver_cmd->add_option("--grid", ver.grid, "Angle grid points per axis")->check(CLI::Range(2, 2001));
    ver_cmd->add_option("--seed", ver.seed, "Seed of the randomized checks");
    ver_cmd->add_option("--format", ver.format, "json or csv")->check(CLI::IsMember(formats));
    ver_cmd->add_option("--output", ver.output, "Output path (default stdout)");

    FiguresArgs fig;
    CLI::App *fig_cmd = app.add_subcommand("figures", "Emit figure data as CSV");
    fig_cmd->add_option("--which", fig.which, "fig3, fig5 or fig6")->check(CLI::IsMember({"fig3", "fig5", "fig6"}));
    fig_cmd->add_option("--resolution", fig.resolution, "Number of abscissa points")->check(CLI::Range(2, 1000000));
    fig_cmd->add_option("--format", fig.format, "csv")->check(CLI::IsMember({"csv"}));
    fig_cmd->add_option("--output", fig.output, "Output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (bounds_cmd->parsed()) return run_bounds(bounds);
        if (sim_cmd->parsed()) return run_simulate(sim);
        if (ver_cmd->parsed()) return run_verify(ver);
        if (fig_cmd->parsed()) return run_figures(fig);
    } catch (const ApiError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const nlohmann::json::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
