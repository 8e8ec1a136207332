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

#include "bsmcert/serialize.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "bsmcert/error.hpp"

namespace bsmcert {

namespace {

using OptArray = std::array<std::optional<double>, 4>;

Json optional_array(const OptArray &values) {
    Json arr = Json::array();
    for (const auto &v : values) arr.push_back(v ? Json(*v) : Json(nullptr));
    return arr;
}

bool any_set(const OptArray &values) {
    for (const auto &v : values) {
        if (v) return true;
    }
    return false;
}

OptArray read_array(const Json &doc, const char *key) {
    OptArray out{};
    if (!doc.contains(key) || doc.at(key).is_null()) return out;
    const Json &arr = doc.at(key);
    if (!arr.is_array() || arr.size() != 4) fail(ErrorCode::parse, std::string("'") + key + "' must be an array of 4 entries");
    for (std::size_t k = 0; k < 4; ++k) {
        if (arr[k].is_null()) continue;
        if (!arr[k].is_number()) fail(ErrorCode::parse, std::string("'") + key + "' entries must be numbers or null");
        out[k] = arr[k].get<double>();
    }
    return out;
}

Json number_or_null(double v) { return std::isnan(v) ? Json(nullptr) : Json(v); }

std::string trim(const std::string &s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string &text, const std::string &key, int line) {
    double value = 0.0;
    const char *begin = text.data();
    const char *end = begin + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
        fail(ErrorCode::parse, "line " + std::to_string(line) + ": '" + key + "' expects a number, got '" + text + "'");
    }
    return value;
}

std::uint64_t parse_unsigned(const std::string &text, const std::string &key, int line) {
    std::uint64_t value = 0;
    const char *begin = text.data();
    const char *end = begin + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
        fail(ErrorCode::parse,
             "line " + std::to_string(line) + ": '" + key + "' expects a non-negative integer, got '" + text + "'");
    }
    return value;
}

}  // namespace

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 12);
    if (ec != std::errc()) fail(ErrorCode::numerical, "number formatting failed");
    return std::string(buf.data(), ptr);
}

const char *delta_model_name(DeltaModel model) {
    return model == DeltaModel::explicit_value ? "explicit" : "chsh-scaled";
}

DeltaModel parse_delta_model(const std::string &name) {
    if (name == "explicit") return DeltaModel::explicit_value;
    if (name == "chsh-scaled") return DeltaModel::chsh_scaled;
    fail(ErrorCode::invalid_argument, "delta model must be 'explicit' or 'chsh-scaled', got '" + name + "'");
}

const char *mode_name(CertificationMode mode) {
    switch (mode) {
        case CertificationMode::deterministic:
            return "deterministic";
        case CertificationMode::independent_sources:
            return "independent-sources";
        case CertificationMode::partial:
            return "partial";
    }
    return "deterministic";
}

CertificationMode parse_mode(const std::string &name) {
    if (name == "deterministic") return CertificationMode::deterministic;
    if (name == "independent-sources") return CertificationMode::independent_sources;
    if (name == "partial") return CertificationMode::partial;
    fail(ErrorCode::invalid_argument,
         "mode must be 'deterministic', 'independent-sources' or 'partial', got '" + name + "'");
}

Json stats_to_json(const ExperimentStatistics &stats) {
    Json doc;
    doc["beta"] = optional_array(stats.beta);
    doc["p"] = optional_array(stats.p);
    doc["delta"] = stats.delta ? Json(*stats.delta) : Json(nullptr);
    doc["delta_model"] = delta_model_name(stats.delta_model);
    doc["shots"] = stats.shots;
    if (any_set(stats.beta_stderr)) doc["beta_stderr"] = optional_array(stats.beta_stderr);
    if (any_set(stats.p_stderr)) doc["p_stderr"] = optional_array(stats.p_stderr);
    if (any_set(stats.beta_raw)) doc["beta_raw"] = optional_array(stats.beta_raw);
    return doc;
}

ExperimentStatistics stats_from_json(const Json &doc) {
    if (!doc.is_object()) fail(ErrorCode::parse, "statistics document must be a JSON object");
    static const std::set<std::string> known{"beta", "p", "delta", "delta_model", "shots", "beta_stderr", "p_stderr",
                                             "beta_raw"};
    for (const auto &item : doc.items()) {
        if (!known.count(item.key())) fail(ErrorCode::parse, "unknown statistics field '" + item.key() + "'");
    }
    if (!doc.contains("beta")) fail(ErrorCode::missing_field, "statistics need a 'beta' array");
    if (!doc.contains("p")) fail(ErrorCode::missing_field, "statistics need a 'p' array");
    ExperimentStatistics stats;
    stats.beta = read_array(doc, "beta");
    stats.p = read_array(doc, "p");
    stats.beta_stderr = read_array(doc, "beta_stderr");
    stats.p_stderr = read_array(doc, "p_stderr");
    stats.beta_raw = read_array(doc, "beta_raw");
    if (doc.contains("delta") && !doc.at("delta").is_null()) {
        if (!doc.at("delta").is_number()) fail(ErrorCode::parse, "'delta' must be a number");
        stats.delta = doc.at("delta").get<double>();
    }
    if (doc.contains("delta_model")) {
        if (!doc.at("delta_model").is_string()) fail(ErrorCode::parse, "'delta_model' must be a string");
        stats.delta_model = parse_delta_model(doc.at("delta_model").get<std::string>());
    }
    if (doc.contains("shots")) {
        if (!doc.at("shots").is_number_unsigned()) fail(ErrorCode::parse, "'shots' must be a non-negative integer");
        stats.shots = doc.at("shots").get<std::uint64_t>();
    }
    stats.validate();
    return stats;
}

std::string stats_to_string(const ExperimentStatistics &stats) { return stats_to_json(stats).dump(2) + "\n"; }

ExperimentStatistics parse_stats(const std::string &text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        fail(ErrorCode::parse, std::string("malformed statistics JSON: ") + e.what());
    }
    // Accept the output of the simulate command as well as a bare statistics document.
    if (doc.is_object() && doc.contains("statistics")) return stats_from_json(doc.at("statistics"));
    return stats_from_json(doc);
}

Json report_to_json(const CertificateReport &report) {
    Json doc;
    doc["mode"] = mode_name(report.mode);
    Json fk = Json::array();
    for (double v : report.f_o_k) fk.push_back(number_or_null(v));
    doc["f_o_k"] = fk;
    doc["f_o"] = number_or_null(report.f_o);
    doc["f_i"] = number_or_null(report.f_i);
    doc["f_bsm"] = number_or_null(report.f_bsm);
    doc["f_bsm_independent_sources"] = number_or_null(report.f_bsm_independent_sources);
    doc["f_cond"] = number_or_null(report.f_cond);
    doc["zeta_0"] = number_or_null(report.zeta_0);
    doc["delta_used"] = number_or_null(report.delta_used);
    doc["flags"] = report.flags.names();
    return doc;
}

std::string report_to_csv(const CertificateReport &report) {
    auto cell = [](double v) { return std::isnan(v) ? std::string() : format_number(v); };
    std::ostringstream out;
    out << "mode,f_o_0,f_o_1,f_o_2,f_o_3,f_o,f_i,f_bsm,f_bsm_independent_sources,f_cond,zeta_0,delta_used,flags\n";
    out << mode_name(report.mode);
    for (double v : report.f_o_k) out << ',' << cell(v);
    out << ',' << cell(report.f_o) << ',' << cell(report.f_i) << ',' << cell(report.f_bsm) << ','
        << cell(report.f_bsm_independent_sources) << ',' << cell(report.f_cond) << ',' << cell(report.zeta_0) << ','
        << cell(report.delta_used) << ',';
    const auto names = report.flags.names();
    for (std::size_t i = 0; i < names.size(); ++i) out << (i ? ";" : "") << names[i];
    out << '\n';
    return out.str();
}

Json truth_to_json(const GroundTruth &truth) {
    Json doc;
    Json fk = Json::array();
    for (double v : truth.extracted_fidelity) fk.push_back(number_or_null(v));
    doc["extracted_fidelity"] = fk;
    doc["output_fidelity"] = truth.output_fidelity;
    doc["source_fidelity"] = truth.source_fidelity;
    doc["bsm_fidelity"] = truth.bsm_fidelity;
    doc["bsm_fidelity_passthrough"] = truth.bsm_fidelity_passthrough;
    doc["bsm_fidelity_teleport"] = truth.bsm_fidelity_teleport;
    doc["conditional_fidelity"] = truth.conditional_fidelity;
    doc["conditional_fidelity_passthrough"] = truth.conditional_fidelity_passthrough;
    doc["conditional_fidelity_teleport"] = truth.conditional_fidelity_teleport;
    doc["zeta_0"] = truth.zeta_0;
    doc["schmidt_q"] = truth.schmidt_q;
    return doc;
}

Json verification_to_json(const VerificationSummary &summary) {
    Json doc;
    doc["suite"] = suite_name(summary.suite);
    doc["passed"] = summary.passed();
    Json checks = Json::array();
    for (const CheckResult &c : summary.checks) {
        Json item;
        item["name"] = c.name;
        item["passed"] = c.passed;
        Json metrics = Json::object();
        for (const auto &[key, value] : c.metrics) metrics[key] = number_or_null(value);
        item["metrics"] = metrics;
        item["notes"] = c.notes;
        checks.push_back(item);
    }
    doc["checks"] = checks;
    return doc;
}

ScenarioConfig parse_scenario_config(const std::string &text) {
    ScenarioConfig config;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string content = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (content.empty()) continue;
        const auto eq = content.find('=');
        if (eq == std::string::npos) fail(ErrorCode::parse, "line " + std::to_string(line) + ": expected key = value");
        const std::string key = trim(content.substr(0, eq));
        const std::string value = trim(content.substr(eq + 1));
        if (key == "visibility") {
            const double v = parse_double(value, key, line);
            config.noise.source_visibility = {v, v};
        } else if (key == "source1_visibility") {
            config.noise.source_visibility[0] = parse_double(value, key, line);
        } else if (key == "source2_visibility") {
            config.noise.source_visibility[1] = parse_double(value, key, line);
        } else if (key == "bsm_depolarization") {
            config.noise.bsm_depolarization = parse_double(value, key, line);
        } else if (key == "misalignment") {
            config.noise.setting_misalignment = parse_double(value, key, line);
        } else if (key == "shots") {
            config.shots = parse_unsigned(value, key, line);
        } else if (key == "seed") {
            config.seed = parse_unsigned(value, key, line);
        } else if (key == "delta_model") {
            config.delta_model = parse_delta_model(value);
        } else if (key == "delta") {
            config.delta = parse_double(value, key, line);
        } else {
            fail(ErrorCode::parse, "line " + std::to_string(line) + ": unknown key '" + key + "'");
        }
    }
    config.validate();
    return config;
}

std::string figure_to_csv(const FigureTable &table) {
    std::ostringstream out;
    out << table.x_label;
    for (const auto &label : table.curve_labels) out << ',' << label;
    out << '\n';
    for (std::size_t i = 0; i < table.x.size(); ++i) {
        out << format_number(table.x[i]);
        for (const BoundValue &v : table.rows[i]) {
            out << ',' << (v.flags.has(BoundFlag::regime_violated) ? std::string("regime_violated") : format_number(v.value));
        }
        out << '\n';
    }
    return out.str();
}

std::string read_text_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::io, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string &path, const std::string &contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::io, "cannot write '" + path + "'");
    out << contents;
    if (!out) fail(ErrorCode::io, "write to '" + path + "' failed");
}

}  // namespace bsmcert
