#include "secoda/evaluation.hpp"

#include "secoda/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

namespace secoda {

DetectionTask DetectionTask::any_anomaly() {
    DetectionTask task;
    for (const auto label : kAllLabels) task.positive_[label_index(label)] = label != AnomalyLabel::Normal;
    return task;
}

DetectionTask DetectionTask::of(std::span<const AnomalyLabel> labels) {
    if (labels.empty()) throw ParameterError("a detection task needs at least one anomaly type");
    DetectionTask task;
    for (const auto label : labels) {
        if (label == AnomalyLabel::Normal) throw ParameterError("NORMAL cannot be a positive class");
        task.positive_[label_index(label)] = true;
    }
    return task;
}

std::string DetectionTask::to_string() const {
    if (*this == any_anomaly()) return "any";
    std::string text;
    for (const auto label : kAllLabels) {
        if (!is_positive(label)) continue;
        if (!text.empty()) text += ',';
        text += label_token(label);
    }
    return text;
}

DetectionTask parse_task(std::string_view text) {
    if (text == "any") return DetectionTask::any_anomaly();
    std::vector<AnomalyLabel> labels;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = std::min(text.find(',', start), text.size());
        const auto token = text.substr(start, comma - start);
        const auto label = parse_label_token(token);
        if (!label || *label == AnomalyLabel::Normal) {
            throw ParameterError(fmt::format("bad task '{}': expected 'any' or a list such as II,V,VI", text));
        }
        labels.push_back(*label);
        start = comma + 1;
    }
    return DetectionTask::of(labels);
}

void check_task(std::span<const AnomalyLabel> labels, const DetectionTask& task) {
    const auto positives = std::count_if(labels.begin(), labels.end(), [&](AnomalyLabel l) { return task.is_positive(l); });
    if (positives == 0) throw TaskError(fmt::format("task '{}' has no positive cases", task.to_string()));
    if (static_cast<std::size_t>(positives) == labels.size()) {
        throw TaskError(fmt::format("task '{}' has no negative cases", task.to_string()));
    }
}

namespace {

void check_sizes(std::span<const double> scores, std::span<const AnomalyLabel> labels) {
    if (scores.size() != labels.size()) {
        throw InputError(fmt::format("{} scores but {} labels", scores.size(), labels.size()));
    }
}

// Cumulative (false positive, true positive) counts after each group of tied
// scores, in ascending score order, starting from (0, 0).
struct Sweep {
    std::uint64_t positives = 0;
    std::uint64_t negatives = 0;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> points;
};

Sweep sweep(std::span<const double> scores, std::span<const AnomalyLabel> labels, const DetectionTask& task) {
    check_sizes(scores, labels);
    check_task(labels, task);
    std::vector<CaseId> order(scores.size());
    std::iota(order.begin(), order.end(), CaseId{0});
    std::stable_sort(order.begin(), order.end(), [&](CaseId a, CaseId b) { return scores[a] < scores[b]; });

    Sweep s;
    s.points.emplace_back(0, 0);
    std::uint64_t fp = 0, tp = 0;
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) {
            if (task.is_positive(labels[order[j]])) {
                ++tp;
            } else {
                ++fp;
            }
            ++j;
        }
        s.points.emplace_back(fp, tp);
        i = j;
    }
    s.positives = tp;
    s.negatives = fp;
    return s;
}

// Twice the trapezoid area in count units up to `fp_limit` false positives.
// Segments wholly inside the limit contribute exact integers.
std::pair<std::uint64_t, double> doubled_area(const Sweep& s, double fp_limit) {
    std::uint64_t whole = 0;
    double clipped = 0.0;
    for (std::size_t i = 1; i < s.points.size(); ++i) {
        const auto [f0, t0] = s.points[i - 1];
        const auto [f1, t1] = s.points[i];
        if (static_cast<double>(f1) <= fp_limit) {
            whole += (f1 - f0) * (t0 + t1);
            continue;
        }
        if (static_cast<double>(f0) < fp_limit) {
            const double width = fp_limit - static_cast<double>(f0);
            const double t_at = static_cast<double>(t0) +
                                static_cast<double>(t1 - t0) * width / static_cast<double>(f1 - f0);
            clipped += width * (static_cast<double>(t0) + t_at);
        }
        break;
    }
    return {whole, clipped};
}

}  // namespace

double roc_auc(std::span<const double> scores, std::span<const AnomalyLabel> labels, const DetectionTask& task) {
    return partial_auc(scores, labels, task, 0.0);
}

double partial_auc(std::span<const double> scores, std::span<const AnomalyLabel> labels, const DetectionTask& task,
                   double specificity_floor) {
    if (!(specificity_floor >= 0.0 && specificity_floor < 1.0)) {
        throw ParameterError(fmt::format("specificity floor {} outside [0, 1)", specificity_floor));
    }
    const auto s = sweep(scores, labels, task);
    const double width = 1.0 - specificity_floor;
    const double limit = width * static_cast<double>(s.negatives);
    const auto [whole, clipped] = doubled_area(s, limit);
    const double total = 2.0 * static_cast<double>(s.positives) * static_cast<double>(s.negatives);
    const double area = (static_cast<double>(whole) + clipped) / total;
    return specificity_floor == 0.0 ? area : area / width;
}

std::vector<CurvePoint> roc_curve(std::span<const double> scores, std::span<const AnomalyLabel> labels,
                                  const DetectionTask& task) {
    const auto s = sweep(scores, labels, task);
    std::vector<CurvePoint> curve;
    curve.reserve(s.points.size());
    for (const auto& [fp, tp] : s.points) {
        curve.push_back({static_cast<double>(fp) / static_cast<double>(s.negatives),
                         static_cast<double>(tp) / static_cast<double>(s.positives)});
    }
    return curve;
}

std::vector<CurvePoint> pr_curve(std::span<const double> scores, std::span<const AnomalyLabel> labels,
                                 const DetectionTask& task) {
    const auto s = sweep(scores, labels, task);
    std::vector<CurvePoint> curve;
    for (std::size_t i = 1; i < s.points.size(); ++i) {
        const auto [fp, tp] = s.points[i];
        curve.push_back({static_cast<double>(tp) / static_cast<double>(s.positives),
                         static_cast<double>(tp) / static_cast<double>(tp + fp)});
    }
    return curve;
}

LabelHistogram topk_report(std::span<const double> scores, std::span<const AnomalyLabel> labels, std::size_t k) {
    check_sizes(scores, labels);
    if (k < 1 || k > scores.size()) {
        throw ParameterError(fmt::format("k = {} outside [1, {}]", k, scores.size()));
    }
    const auto ranks = rank_scores(scores);
    LabelHistogram hits{};
    for (std::size_t i = 0; i < ranks.size(); ++i) {
        if (ranks[i] <= k) ++hits[label_index(labels[i])];
    }
    return hits;
}

namespace {

// Cut points restated from the binning rules, without the discretization
// module: equal-width cuts lo + k*(hi-lo)/b, and equal-count cuts at the
// midpoint of sorted ranks r-1 and r, r = round(k*n/b) clamped to [1, n-1].
std::vector<double> reference_cuts(const Column& column, std::size_t arity, BinningMethod method) {
    std::vector<double> present;
    for (const double v : column.values()) {
        if (v == v) present.push_back(v);
    }
    std::vector<double> cuts;
    if (present.size() < 2) return cuts;
    std::sort(present.begin(), present.end());
    const double lo = present.front();
    const double hi = present.back();
    const double b = static_cast<double>(arity);
    for (std::size_t k = 1; k < arity; ++k) {
        double cut = 0.0;
        if (method == BinningMethod::Equiwidth) {
            if (lo == hi) break;
            const double range = hi - lo;
            cut = std::isfinite(range) ? lo + static_cast<double>(k) * range / b
                                       : lo + static_cast<double>(k) * (hi / b - lo / b);
            if (cut <= (cuts.empty() ? lo : cuts.back())) continue;
        } else {
            const double exact = static_cast<double>(k) * static_cast<double>(present.size()) / b;
            auto r = static_cast<std::size_t>(std::floor(exact + 0.5));
            r = std::clamp<std::size_t>(r, 1, present.size() - 1);
            const double below = present[r - 1];
            const double above = present[r];
            if (below == above) continue;
            cut = below / 2 + above / 2;
            if (std::isfinite(below + above)) cut = (below + above) / 2;
            if (cut <= below) cut = above;
            if (!cuts.empty() && cut <= cuts.back()) continue;
        }
        cuts.push_back(cut);
    }
    return cuts;
}

}  // namespace

std::vector<std::uint64_t> brute_force_scores(const Dataset& data, std::size_t arity, BinningMethod method) {
    if (arity < 1) throw ParameterError("arity must be at least 1");
    const std::size_t n = data.n_cases();
    const std::size_t m = data.n_columns();
    // Key cell (case, column): bin index, or class code, with -1 for Missing.
    std::vector<std::int64_t> keys(n * m);
    for (std::size_t c = 0; c < m; ++c) {
        const auto& column = data.column(c);
        if (column.is_numeric()) {
            const auto cuts = reference_cuts(column, arity, method);
            for (std::size_t i = 0; i < n; ++i) {
                const double v = column.number(i);
                std::int64_t bin = -1;
                if (v == v) {
                    bin = 0;
                    for (const double cut : cuts) bin += cut <= v ? 1 : 0;
                }
                keys[i * m + c] = bin;
            }
        } else {
            for (std::size_t i = 0; i < n; ++i) keys[i * m + c] = column.code(i);
        }
    }
    std::vector<std::uint64_t> freq(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (std::equal(keys.begin() + i * m, keys.begin() + (i + 1) * m, keys.begin() + j * m)) ++freq[i];
        }
    }
    return freq;
}

EvalReport evaluate(std::span<const double> scores, std::span<const AnomalyLabel> labels, const DetectionTask& task,
                    std::size_t k, std::span<const double> floors) {
    EvalReport report;
    report.n_cases = scores.size();
    report.k = k;
    report.task = task.to_string();
    report.auc = roc_auc(scores, labels, task);
    report.positives = static_cast<std::size_t>(
        std::count_if(labels.begin(), labels.end(), [&](AnomalyLabel l) { return task.is_positive(l); }));
    for (const double floor : floors) report.partial_aucs.push_back({floor, partial_auc(scores, labels, task, floor)});
    report.topk_hits = topk_report(scores, labels, k);
    report.label_totals = label_histogram(labels);
    report.roc = roc_curve(scores, labels, task);
    report.prc = pr_curve(scores, labels, task);
    return report;
}

const TypeComparison& MethodComparison::row(AnomalyLabel label) const {
    for (const auto& r : rows) {
        if (r.label == label) return r;
    }
    throw LookupError(fmt::format("no comparison row for {}", label_token(label)));
}

MethodComparison compare_methods(const LabeledDataset& data, const EngineConfig& ew, const EngineConfig& ed,
                                 std::size_t k) {
    auto ew_config = ew;
    ew_config.method = BinningMethod::Equiwidth;
    auto ed_config = ed;
    ed_config.method = BinningMethod::Equidepth;

    MethodComparison result;
    result.k = k;
    result.ew = run_secoda(data.data, ew_config);
    result.ed = run_secoda(data.data, ed_config);
    const auto hits_ew = topk_report(result.ew.scores, data.labels, k);
    const auto hits_ed = topk_report(result.ed.scores, data.labels, k);
    const auto totals = label_histogram(data.labels);

    for (const auto label : kAllLabels) {
        if (label == AnomalyLabel::Normal) continue;
        TypeComparison row;
        row.label = label;
        row.planted = totals[label_index(label)];
        row.hits_ew = hits_ew[label_index(label)];
        row.hits_ed = hits_ed[label_index(label)];
        if (row.planted == 0) {
            row.verdict = "n/a";
            row.favored = "n/a";
            result.rows.push_back(std::move(row));
            continue;
        }
        const auto task = DetectionTask::of(label);
        if (row.planted < data.labels.size()) {
            row.auc_ew = roc_auc(result.ew.scores, data.labels, task);
            row.auc_ed = roc_auc(result.ed.scores, data.labels, task);
        }
        const std::size_t needed = (row.planted + 1) / 2;
        const bool by_ew = row.hits_ew >= needed;
        const bool by_ed = row.hits_ed >= needed;
        row.verdict = by_ew && by_ed ? "both" : by_ew ? "EW only" : by_ed ? "ED only" : "neither";
        if (!row.auc_ew) {
            row.favored = "n/a";
        } else if (std::abs(*row.auc_ew - *row.auc_ed) <= 1e-12) {
            row.favored = "tie";
        } else {
            row.favored = *row.auc_ew > *row.auc_ed ? "EW" : "ED";
        }
        result.rows.push_back(std::move(row));
    }
    return result;
}

MethodComparison compare_methods(const LabeledDataset& data, const EngineConfig& config, std::size_t k) {
    return compare_methods(data, config, config, k);
}

}  // namespace secoda
