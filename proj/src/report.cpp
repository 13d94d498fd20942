#include "secoda/report.hpp"

#include "secoda/csv.hpp"
#include "secoda/error.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include <fmt/format.h>
#include <json.hpp>

namespace secoda {

using Json = nlohmann::ordered_json;

void write_scores(std::ostream& out, const ScoreVector& scores) {
    out << "case_id,score,rank,pruned_at\n";
    for (const auto id : scores.order()) {
        out << id << ',' << format_number(scores.scores[id]) << ',' << scores.ranks[id] << ',';
        if (scores.pruned_at[id]) out << *scores.pruned_at[id];
        out << '\n';
    }
    if (!out) throw IoError("failed to write score file");
}

std::vector<double> read_scores(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw InputError("score file is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> fields;
    if (!split_record(line, fields) || fields.size() < 2 || fields[0] != "case_id" || fields[1] != "score") {
        throw InputError("score file must start with a case_id,score header");
    }
    std::vector<std::optional<double>> by_id;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!split_record(line, fields) || fields.size() < 2) throw InputError(fmt::format("score row {}: malformed", row));
        const auto id = parse_real(fields[0]);
        const auto score = parse_real(fields[1]);
        if (!id || *id < 0 || *id != std::floor(*id) || *id > 4e9) {
            throw InputError(fmt::format("score row {}: bad case_id '{}'", row, fields[0]));
        }
        if (!score || !std::isfinite(*score)) throw InputError(fmt::format("score row {}: bad score '{}'", row, fields[1]));
        const auto index = static_cast<std::size_t>(*id);
        if (index >= by_id.size()) by_id.resize(index + 1);
        if (by_id[index]) throw InputError(fmt::format("score row {}: case_id {} repeated", row, index));
        by_id[index] = *score;
    }
    std::vector<double> scores(by_id.size());
    for (std::size_t i = 0; i < by_id.size(); ++i) {
        if (!by_id[i]) throw InputError(fmt::format("score file has no row for case_id {}", i));
        scores[i] = *by_id[i];
    }
    return scores;
}

void write_report_text(std::ostream& out, const EvalReport& report) {
    out << "n_cases=" << report.n_cases << '\n';
    out << "task=" << report.task << '\n';
    out << "positives=" << report.positives << '\n';
    out << "k=" << report.k << '\n';
    out << "auc=" << format_number(report.auc) << '\n';
    for (const auto& p : report.partial_aucs) {
        out << "pauc_" << format_number(p.floor) << '=' << format_number(p.value) << '\n';
    }
    for (const auto label : kAllLabels) {
        out << "topk_" << label_token(label) << '=' << report.topk_hits[label_index(label)] << '\n';
    }
    for (const auto label : kAllLabels) {
        out << "total_" << label_token(label) << '=' << report.label_totals[label_index(label)] << '\n';
    }
    if (!out) throw IoError("failed to write report");
}

namespace {

Json histogram_json(const LabelHistogram& h) {
    Json j = Json::object();
    for (const auto label : kAllLabels) j[std::string(label_token(label))] = h[label_index(label)];
    return j;
}

Json curve_json(const std::vector<CurvePoint>& curve) {
    Json j = Json::array();
    for (const auto& p : curve) j.push_back({p.x, p.y});
    return j;
}

}  // namespace

void write_report_json(std::ostream& out, const EvalReport& report) {
    Json j;
    j["n_cases"] = report.n_cases;
    j["task"] = report.task;
    j["positives"] = report.positives;
    j["k"] = report.k;
    j["auc"] = report.auc;
    j["partial_auc"] = Json::array();
    for (const auto& p : report.partial_aucs) j["partial_auc"].push_back({{"floor", p.floor}, {"value", p.value}});
    j["topk_hits"] = histogram_json(report.topk_hits);
    j["label_totals"] = histogram_json(report.label_totals);
    j["roc"] = curve_json(report.roc);
    j["prc"] = curve_json(report.prc);
    out << j.dump(2) << '\n';
    if (!out) throw IoError("failed to write report");
}

void write_manifest(std::ostream& out, const RunManifest& m) {
    const auto& c = m.config;
    Json j;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    j["command"] = "detect";
    j["input"] = m.input;
    j["schema"] = m.schema;
    j["method"] = to_string(c.method);
    j["engine"] = {{"min_iterations", c.min_iterations},
                   {"max_iterations", c.max_iterations},
                   {"start_arity", c.start_arity},
                   {"arity_growth", c.arity_growth},
                   {"pruning", c.pruning_enabled},
                   {"prune_start_iteration", c.prune_start_iteration},
                   {"prune_cutoff", c.prune_cutoff},
                   {"arity_schedule", c.arity_schedule},
                   {"counting_partitions", c.counting_partitions}};
    j["seed"] = m.seed ? Json(*m.seed) : Json(nullptr);
    j["outputs"] = {{"scores", m.scores_path}};
    j["iterations"] = m.iterations;
    j["wall_time_seconds"] = m.wall_time_seconds;
    out << j.dump(2) << '\n';
    if (!out) throw IoError("failed to write manifest");
}

RunManifest read_manifest(std::istream& in) {
    try {
        const auto j = Json::parse(in);
        if (j.at("tool").get<std::string>() != kToolName) throw ConfigError("manifest was not written by secoda");
        RunManifest m;
        m.input = j.at("input").get<std::string>();
        m.schema = j.at("schema").get<std::string>();
        auto& c = m.config;
        c.method = parse_binning_method(j.at("method").get<std::string>());
        const auto& e = j.at("engine");
        c.min_iterations = e.at("min_iterations").get<std::size_t>();
        c.max_iterations = e.at("max_iterations").get<std::size_t>();
        c.start_arity = e.at("start_arity").get<std::size_t>();
        c.arity_growth = e.at("arity_growth").get<double>();
        c.pruning_enabled = e.at("pruning").get<bool>();
        c.prune_start_iteration = e.at("prune_start_iteration").get<std::size_t>();
        c.prune_cutoff = e.at("prune_cutoff").get<double>();
        c.arity_schedule = e.at("arity_schedule").get<std::vector<std::size_t>>();
        c.counting_partitions = e.at("counting_partitions").get<std::size_t>();
        if (!j.at("seed").is_null()) m.seed = j.at("seed").get<std::uint64_t>();
        m.scores_path = j.at("outputs").at("scores").get<std::string>();
        m.iterations = j.value("iterations", std::size_t{0});
        m.wall_time_seconds = j.value("wall_time_seconds", 0.0);
        return m;
    } catch (const Json::exception& e) {
        throw ConfigError(fmt::format("bad manifest: {}", e.what()));
    }
}

void write_plot_records(std::ostream& out, const Dataset& data, const std::vector<AnomalyLabel>* labels,
                        std::span<const double> scores, std::size_t top_k) {
    if (scores.size() != data.n_cases()) {
        throw InputError(fmt::format("{} scores for {} cases", scores.size(), data.n_cases()));
    }
    const auto ranks = rank_scores(scores);
    for (std::size_t i = 0; i < data.n_cases(); ++i) {
        Json j;
        j["case_id"] = i;
        if (labels) j["label"] = label_token((*labels)[i]);
        j["score"] = scores[i];
        j["rank"] = ranks[i];
        j["top_k"] = ranks[i] <= top_k;
        Json values = Json::object();
        for (const auto& column : data.columns()) {
            if (column.is_missing(i)) {
                values[column.name()] = nullptr;
            } else if (column.is_numeric()) {
                values[column.name()] = column.number(i);
            } else {
                values[column.name()] = std::string(column.token(i));
            }
        }
        j["values"] = std::move(values);
        out << j.dump() << '\n';
    }
    if (!out) throw IoError("failed to write plot records");
}

void write_comparison(std::ostream& out, const MethodComparison& comparison) {
    auto auc = [](const std::optional<double>& v) { return v ? fmt::format("{:.4f}", *v) : std::string("-"); };
    out << fmt::format("{:<6}{:>8}{:>8}{:>8}{:>9}{:>9}  {:<9}{}\n", "type", "planted", "EW@k", "ED@k", "AUC EW",
                       "AUC ED", "verdict", "favored");
    for (const auto& row : comparison.rows) {
        out << fmt::format("{:<6}{:>8}{:>8}{:>8}{:>9}{:>9}  {:<9}{}\n", label_token(row.label), row.planted,
                           row.hits_ew, row.hits_ed, auc(row.auc_ew), auc(row.auc_ed), row.verdict, row.favored);
    }
    out << "k=" << comparison.k << '\n';
}

}  // namespace secoda
