#pragma once

#include "secoda/dataset.hpp"
#include "secoda/discretization.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace secoda {

struct EngineConfig {
    BinningMethod method = BinningMethod::Equiwidth;
    std::size_t min_iterations = 3;
    std::size_t max_iterations = 30;
    std::size_t start_arity = 2;
    double arity_growth = 1.3;
    bool pruning_enabled = true;
    std::size_t prune_start_iteration = 10;
    double prune_cutoff = 10.0;
    // Overrides the geometric schedule when non-empty; the run ends once it
    // is exhausted.
    std::vector<std::size_t> arity_schedule;
    // Concurrent chunks used for frequency counting. Scores do not depend on it.
    std::size_t counting_partitions = 1;

    // Throws ConfigError.
    void validate() const;
};

// Arity of 1-based iteration i: schedule[i-1] when an explicit schedule is
// given (nullopt past its end), otherwise b1 = start_arity and
// b_i = max(ceil(b_{i-1} * growth), b_{i-1} + 1).
std::optional<std::size_t> arity_schedule(const EngineConfig& config, std::size_t iteration);

// Weight of an iteration run at the given arity: w = b.
double iteration_weight(std::size_t arity);

// Incremental weighted mean: (prev_avg*prev_weight + freq*weight) / (prev_weight + weight).
double combine_scores(double prev_average, double prev_weight, std::uint64_t frequency, double weight);

struct IterationState {
    std::size_t iteration = 0;  // 1-based; 0 before the first iteration
    std::size_t arity = 0;
    double weight = 0.0;
    std::vector<CaseId> active;
    // Aligned with `active`: constellation frequency in the latest iteration.
    std::vector<std::uint32_t> frequencies;
    // Per case (all n): running weighted average and its accumulated weight.
    std::vector<double> average;
    std::vector<double> accumulated_weight;
    // Per case: iteration in which the case was pruned, 0 if never.
    std::vector<std::size_t> pruned_at;
    // Every numeric column has each active distinct value alone in its bin, so
    // finer arities cannot change any frequency.
    bool resolution_exhausted = false;
};

// Active set after pruning: drops cases whose running average exceeds the
// cutoff, but never a case holding the current minimum average. Returns the
// active set unchanged when pruning is disabled or not yet due.
std::vector<CaseId> prune(const IterationState& state, const EngineConfig& config);

bool should_stop(const IterationState& state, const EngineConfig& config);

struct ScoreVector {
    // Per case: running weighted-average frequency; lower is more anomalous.
    std::vector<double> scores;
    // Per case: 1 = most anomalous, ties broken by ascending case id.
    std::vector<std::size_t> ranks;
    // Per case: pruning iteration, nullopt if never pruned.
    std::vector<std::optional<std::size_t>> pruned_at;
    // Per case: last iteration the case took part in.
    std::vector<std::size_t> last_iteration;

    std::size_t iterations = 0;
    std::vector<std::size_t> arities;             // per iteration
    std::vector<ColumnCuts> cuts_per_iteration;   // per iteration

    std::size_t size() const { return scores.size(); }
    // Case ids from rank 1 to rank n.
    std::vector<CaseId> order() const;
};

// Ranks of `scores`: ascending score, ties by ascending index.
std::vector<std::size_t> rank_scores(std::span<const double> scores);

// Throws InputError for an empty dataset, ConfigError for a bad config.
ScoreVector run_secoda(const Dataset& data, const EngineConfig& config);

struct CaseReport {
    CaseId case_id = 0;
    double score = 0.0;
    std::size_t rank = 0;
    std::optional<std::size_t> pruned_at;
    std::size_t last_iteration = 0;
    std::size_t last_arity = 0;
    ConstellationKey key;  // held in last_iteration

    std::string to_text(const Dataset& data) const;
};

// Throws LookupError for an unknown case id.
CaseReport explain_case(const Dataset& data, const ScoreVector& scores, CaseId case_id);

}  // namespace secoda
