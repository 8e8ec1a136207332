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

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string &args, const std::string &env = "") {
    const std::string command = env + (env.empty() ? "" : " ") + "\"" BSMCERT_CLI_PATH "\" " + args + " 2>/dev/null";
    RunResult result;
    FILE *pipe = popen(command.c_str(), "r");
    if (pipe == nullptr) return result;
    std::array<char, 4096> buf{};
    size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) result.out.append(buf.data(), n);
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::filesystem::path temp_file(const std::string &name) {
    return std::filesystem::temp_directory_path() / ("bsmcert_cli_test_" + name);
}

std::string slurp(const std::filesystem::path &path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const std::string kIdealArgs =
    "--beta0 2.8284271247461903 --beta1 2.8284271247461903 --beta2 2.8284271247461903 --beta3 2.8284271247461903 "
    "--p0 0.25 --p1 0.25 --p2 0.25 --p3 0.25";

TEST(CliTest, HelpExitsZero) {
    EXPECT_EQ(run("--help").exit_code, 0);
    EXPECT_EQ(run("bounds --help").exit_code, 0);
}

TEST(CliTest, BoundsIdealDeterministic) {
    const RunResult r = run("bounds " + kIdealArgs + " --delta 1");
    ASSERT_EQ(r.exit_code, 0);
    const auto doc = nlohmann::json::parse(r.out);
    EXPECT_DOUBLE_EQ(doc.at("f_bsm").get<double>(), 1.0);
    EXPECT_EQ(doc.at("mode"), "deterministic");
}

TEST(CliTest, BoundsCsvAndPartial) {
    const RunResult r = run("bounds --beta0 2.8284271247461903 --p0 0.1 --delta-model chsh-scaled --mode partial --format csv");
    ASSERT_EQ(r.exit_code, 0);
    EXPECT_EQ(r.out.rfind("mode,f_o_0", 0), 0u);
    EXPECT_NE(r.out.find("\npartial,1,,,,"), std::string::npos);
}

TEST(CliTest, InputErrorsExitTwo) {
    EXPECT_EQ(run("bounds --beta0 2.8 --p1 0.25 --delta 1").exit_code, 2);
    EXPECT_EQ(run("bounds " + kIdealArgs + " --delta 1.5").exit_code, 2);
    EXPECT_EQ(run("bounds --input /nonexistent/file.json").exit_code, 2);
    EXPECT_EQ(run("bounds " + kIdealArgs + " --mode fastest").exit_code, 2);
    EXPECT_EQ(run("nonsense").exit_code, 2);
    EXPECT_EQ(run("simulate --shots 100").exit_code, 2);
    EXPECT_EQ(run("simulate --visibility 1.3").exit_code, 2);
}

TEST(CliTest, SimulateIsDeterministicInSeed) {
    const std::string args = "simulate --visibility 0.95 --bsm-depolarization 0.03 --shots 5000 --seed 11";
    const RunResult a = run(args);
    const RunResult b = run(args);
    ASSERT_EQ(a.exit_code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out, run("simulate --visibility 0.95 --bsm-depolarization 0.03 --shots 5000 --seed 12").out);
}

TEST(CliTest, SimulateOutputRoundTripsThroughBounds) {
    const auto path = temp_file("sim.json");
    const RunResult sim = run("simulate --visibility 0.96 --misalignment 0.15 --output " + path.string());
    ASSERT_EQ(sim.exit_code, 0);
    const auto doc = nlohmann::json::parse(slurp(path));
    ASSERT_TRUE(doc.contains("statistics"));
    const RunResult bounds = run("bounds --input " + path.string());
    ASSERT_EQ(bounds.exit_code, 0);
    EXPECT_EQ(nlohmann::json::parse(bounds.out), doc.at("certificate"));
    std::filesystem::remove(path);
}

TEST(CliTest, SimulateWithConfigAndOracle) {
    const auto path = temp_file("scenario.cfg");
    std::ofstream(path) << "visibility = 0.97\nbsm_depolarization = 0.02\n";
    const RunResult r = run("simulate --config " + path.string() + " --oracle");
    ASSERT_EQ(r.exit_code, 0);
    const auto doc = nlohmann::json::parse(r.out);
    ASSERT_TRUE(doc.contains("oracle"));
    EXPECT_GE(doc.at("oracle").at("bsm_fidelity").get<double>(), doc.at("certificate").at("f_bsm").get<double>());
    std::ofstream(path) << "visibility = 0.97\ncolour = blue\n";
    EXPECT_EQ(run("simulate --config " + path.string()).exit_code, 2);
    std::filesystem::remove(path);
}

TEST(CliTest, VerifyExitCodes) {
    const RunResult ok = run("verify --suite relabeling --grid 11");
    EXPECT_EQ(ok.exit_code, 0);
    EXPECT_EQ(nlohmann::json::parse(ok.out).at("passed"), true);
    EXPECT_EQ(run("verify --suite operator_inequality --grid 11 --negative-control").exit_code, 1);
    EXPECT_EQ(run("verify --suite sideways").exit_code, 2);
    const RunResult csv = run("verify --suite lemma1 --format csv");
    EXPECT_EQ(csv.exit_code, 0);
    EXPECT_EQ(csv.out.rfind("check,passed\n", 0), 0u);
}

TEST(CliTest, ToleranceEnvironmentVariable) {
    EXPECT_EQ(run("verify --suite relabeling --grid 11", "BSMCERT_TOLERANCE=banana").exit_code, 2);
    EXPECT_EQ(run("verify --suite relabeling --grid 11", "BSMCERT_TOLERANCE=-1").exit_code, 2);
    EXPECT_EQ(run("verify --suite relabeling --grid 11", "BSMCERT_TOLERANCE=1e-8").exit_code, 0);
}

TEST(CliTest, FiguresCsv) {
    const RunResult r = run("figures --which fig3 --resolution 5");
    ASSERT_EQ(r.exit_code, 0);
    EXPECT_EQ(r.out.rfind("beta,f_bsm_delta_1,f_bsm_delta_scaled,f_bsm_independent_sources\n", 0), 0u);
    EXPECT_NE(r.out.find("\n2.82842712475,1,1,1\n"), std::string::npos);
    EXPECT_EQ(run("figures --which fig4").exit_code, 2);
    EXPECT_EQ(run("figures --which fig3 --resolution 1").exit_code, 2);
}

}  // namespace
