#include "secoda/engine.hpp"

#include "secoda/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

namespace secoda {

void EngineConfig::validate() const {
    if (min_iterations < 1) throw ConfigError("min_iterations must be at least 1");
    if (min_iterations > max_iterations) {
        throw ConfigError(fmt::format("min_iterations ({}) exceeds max_iterations ({})", min_iterations,
                                      max_iterations));
    }
    if (start_arity < 1) throw ConfigError("start_arity must be at least 1");
    if (!(arity_growth > 1.0) || !std::isfinite(arity_growth)) {
        throw ConfigError("arity_growth must be a finite value above 1");
    }
    if (prune_start_iteration < 1) throw ConfigError("prune_start_iteration must be at least 1");
    if (!(prune_cutoff > 1.0)) throw ConfigError("prune_cutoff must exceed 1");
    if (counting_partitions < 1) throw ConfigError("counting_partitions must be at least 1");
    for (std::size_t i = 0; i < arity_schedule.size(); ++i) {
        if (arity_schedule[i] < 1) throw ConfigError("arities must be at least 1");
        if (i > 0 && arity_schedule[i] <= arity_schedule[i - 1]) {
            throw ConfigError("explicit arity schedule must be strictly increasing");
        }
    }
}

std::optional<std::size_t> arity_schedule(const EngineConfig& config, std::size_t iteration) {
    if (iteration < 1) throw ParameterError("iterations are numbered from 1");
    if (!config.arity_schedule.empty()) {
        for (std::size_t i = 1; i < config.arity_schedule.size(); ++i) {
            if (config.arity_schedule[i] <= config.arity_schedule[i - 1]) {
                throw ConfigError("explicit arity schedule must be strictly increasing");
            }
        }
        if (iteration > config.arity_schedule.size()) return std::nullopt;
        return config.arity_schedule[iteration - 1];
    }
    std::size_t arity = config.start_arity;
    for (std::size_t i = 1; i < iteration; ++i) {
        const double grown = static_cast<double>(arity) * config.arity_growth;
        if (grown > 1e15) throw ConfigError("arity schedule overflows");
        // b*g that is an integer in exact arithmetic (20 * 1.3) must not be
        // pushed up by representation error in g.
        const auto stepped = static_cast<std::size_t>(std::ceil(grown * (1.0 - 1e-12)));
        arity = std::max(stepped, arity + 1);
    }
    return arity;
}

double iteration_weight(std::size_t arity) { return static_cast<double>(arity); }

double combine_scores(double prev_average, double prev_weight, std::uint64_t frequency, double weight) {
    const double f = static_cast<double>(frequency);
    if (prev_weight == 0.0) return f;
    return (prev_average * prev_weight + f * weight) / (prev_weight + weight);
}

std::vector<CaseId> prune(const IterationState& state, const EngineConfig& config) {
    if (!config.pruning_enabled || state.iteration < config.prune_start_iteration ||
        state.active.empty()) {
        return state.active;
    }
    double minimum = state.average[state.active.front()];
    for (const auto id : state.active) minimum = std::min(minimum, state.average[id]);

    std::vector<CaseId> kept;
    kept.reserve(state.active.size());
    for (const auto id : state.active) {
        const double avg = state.average[id];
        if (avg <= config.prune_cutoff || avg == minimum) kept.push_back(id);
    }
    return kept;
}

bool should_stop(const IterationState& state, const EngineConfig& config) {
    const std::size_t i = state.iteration;
    // Without a next arity there is nothing left to run, whatever min_iterations says.
    if (!config.arity_schedule.empty() && i >= config.arity_schedule.size()) return true;
    if (i >= config.max_iterations) return true;
    if (i < config.min_iterations) return false;
    const bool all_unique = std::all_of(state.frequencies.begin(), state.frequencies.end(),
                                        [](std::uint32_t f) { return f == 1; });
    return all_unique || state.resolution_exhausted;
}

std::vector<CaseId> ScoreVector::order() const {
    std::vector<CaseId> ids(ranks.size());
    for (std::size_t i = 0; i < ranks.size(); ++i) ids[ranks[i] - 1] = static_cast<CaseId>(i);
    return ids;
}

std::vector<std::size_t> rank_scores(std::span<const double> scores) {
    std::vector<CaseId> ids(scores.size());
    std::iota(ids.begin(), ids.end(), CaseId{0});
    std::stable_sort(ids.begin(), ids.end(),
                     [&](CaseId a, CaseId b) { return scores[a] < scores[b]; });
    std::vector<std::size_t> ranks(scores.size());
    for (std::size_t r = 0; r < ids.size(); ++r) ranks[ids[r]] = r + 1;
    return ranks;
}

namespace {

bool resolution_exhausted(const Dataset& data, std::span<const CaseId> active, const ColumnCuts& cuts) {
    std::vector<double> first;
    for (std::size_t c = 0; c < data.n_columns(); ++c) {
        const auto& column = data.column(c);
        if (!column.is_numeric()) continue;
        const auto& col_cuts = *cuts[c];
        first.assign(col_cuts.effective_arity(), std::nan(""));
        for (const auto id : active) {
            const double v = column.number(id);
            if (std::isnan(v)) continue;
            double& seen = first[assign_bin(v, col_cuts)];
            if (std::isnan(seen)) {
                seen = v;
            } else if (seen != v) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace

ScoreVector run_secoda(const Dataset& data, const EngineConfig& config) {
    config.validate();
    if (data.empty()) throw InputError("cannot score an empty dataset");
    const std::size_t n = data.n_cases();

    IterationState state;
    state.active.resize(n);
    std::iota(state.active.begin(), state.active.end(), CaseId{0});
    state.average.assign(n, 0.0);
    state.accumulated_weight.assign(n, 0.0);
    state.pruned_at.assign(n, 0);

    ScoreVector result;
    result.last_iteration.assign(n, 0);

    for (std::size_t i = 1;; ++i) {
        const auto arity = arity_schedule(config, i);
        if (!arity) break;
        state.iteration = i;
        state.arity = *arity;
        state.weight = iteration_weight(*arity);

        auto cuts = discretize(data, state.active, config.method, *arity);
        state.frequencies =
            constellation_frequencies(data, state.active, cuts, config.counting_partitions);
        for (std::size_t k = 0; k < state.active.size(); ++k) {
            const auto id = state.active[k];
            state.average[id] = combine_scores(state.average[id], state.accumulated_weight[id],
                                               state.frequencies[k], state.weight);
            state.accumulated_weight[id] += state.weight;
            result.last_iteration[id] = i;
        }
        state.resolution_exhausted = resolution_exhausted(data, state.active, cuts);
        result.arities.push_back(*arity);
        result.cuts_per_iteration.push_back(std::move(cuts));
        result.iterations = i;

        if (should_stop(state, config)) break;

        auto kept = prune(state, config);
        if (kept.size() != state.active.size()) {
            std::vector<bool> keep(n, false);
            for (const auto id : kept) keep[id] = true;
            for (const auto id : state.active) {
                if (!keep[id]) state.pruned_at[id] = i;
            }
            const double minimum = state.average[kept.front()];
            const bool only_minimum = std::all_of(kept.begin(), kept.end(), [&](CaseId id) {
                return state.average[id] == minimum;
            });
            state.active = std::move(kept);
            if (only_minimum) break;
        }
    }

    result.scores = std::move(state.average);
    result.ranks = rank_scores(result.scores);
    result.pruned_at.resize(n);
    for (std::size_t id = 0; id < n; ++id) {
        if (state.pruned_at[id] != 0) result.pruned_at[id] = state.pruned_at[id];
    }
    return result;
}

std::string CaseReport::to_text(const Dataset& data) const {
    std::string key_text;
    for (std::size_t c = 0; c < key.tokens.size(); ++c) {
        if (c > 0) key_text += ", ";
        key_text += data.column(c).name();
        key_text += '=';
        const auto& token = key.tokens[c];
        if (std::holds_alternative<MissingToken>(token)) {
            key_text += "NA";
        } else if (const auto* bin = std::get_if<BinIndex>(&token)) {
            key_text += fmt::format("bin {}", *bin);
        } else {
            key_text += std::get<std::string>(token);
        }
    }
    return fmt::format(
        "case {}\nscore {}\nrank {}\npruned_at {}\nlast_iteration {} (arity {})\nconstellation <{}>\n",
        case_id, score, rank, pruned_at ? fmt::format("{}", *pruned_at) : std::string("never"),
        last_iteration, last_arity, key_text);
}

CaseReport explain_case(const Dataset& data, const ScoreVector& scores, CaseId case_id) {
    if (case_id >= scores.size() || case_id >= data.n_cases()) {
        throw LookupError(fmt::format("case {} out of range (n = {})", case_id, scores.size()));
    }
    CaseReport report;
    report.case_id = case_id;
    report.score = scores.scores[case_id];
    report.rank = scores.ranks[case_id];
    report.pruned_at = scores.pruned_at[case_id];
    report.last_iteration = scores.last_iteration[case_id];
    report.last_arity = scores.arities[report.last_iteration - 1];
    report.key = encode_constellation(data, case_id, scores.cuts_per_iteration[report.last_iteration - 1]);
    return report;
}

}  // namespace secoda
