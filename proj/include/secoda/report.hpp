#pragma once

#include "secoda/dataset.hpp"
#include "secoda/engine.hpp"
#include "secoda/evaluation.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace secoda {

inline constexpr std::string_view kToolName = "secoda";
inline constexpr std::string_view kToolVersion = "1.0.0";

// Score file: header `case_id,score,rank,pruned_at`, one row per case in rank
// order. case_id is the 0-based row index of the input, score is written in
// shortest round-trip form, pruned_at is empty for cases never pruned.
void write_scores(std::ostream& out, const ScoreVector& scores);

// Scores indexed by case id. Throws InputError unless the ids are exactly
// 0..n-1, each once.
std::vector<double> read_scores(std::istream& in);

// `key=value` lines in a fixed order.
void write_report_text(std::ostream& out, const EvalReport& report);
void write_report_json(std::ostream& out, const EvalReport& report);

// Everything needed to repeat a detect run.
struct RunManifest {
    std::string input;
    std::string schema;  // resolved schema of the scored columns
    EngineConfig config;
    std::optional<std::uint64_t> seed;  // detect runs draw no random numbers
    std::string scores_path;
    std::size_t iterations = 0;
    double wall_time_seconds = 0.0;
};

void write_manifest(std::ostream& out, const RunManifest& manifest);
// Throws ConfigError on malformed or incomplete manifests.
RunManifest read_manifest(std::istream& in);

// One JSON object per line: case_id, label (when known), score, rank, top_k,
// and a `values` object mapping column names to numbers, tokens or null.
void write_plot_records(std::ostream& out, const Dataset& data, const std::vector<AnomalyLabel>* labels,
                        std::span<const double> scores, std::size_t top_k);

void write_comparison(std::ostream& out, const MethodComparison& comparison);

}  // namespace secoda
