#pragma once

#include "secoda/dataset.hpp"
#include "secoda/discretization.hpp"
#include "secoda/engine.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace secoda {

// Which labels count as positives. Normal is never positive.
class DetectionTask {
public:
    // Every non-Normal label.
    static DetectionTask any_anomaly();
    // Throws ParameterError if the list is empty or names Normal.
    static DetectionTask of(std::span<const AnomalyLabel> labels);
    static DetectionTask of(AnomalyLabel label) { return of(std::span(&label, 1)); }

    bool is_positive(AnomalyLabel label) const { return positive_[label_index(label)]; }
    // "any", or label tokens joined by commas ("II,V,VI").
    std::string to_string() const;

    bool operator==(const DetectionTask&) const = default;

private:
    std::array<bool, kLabelCount> positive_{};
};

// Accepts "any" or a comma list of I..VI. Throws ParameterError.
DetectionTask parse_task(std::string_view text);

// Throws TaskError unless the labels hold at least one positive and one
// negative under the task.
void check_task(std::span<const AnomalyLabel> labels, const DetectionTask& task);

// Mann-Whitney AUC with lower scores treated as more anomalous; tied
// positive/negative pairs count one half.
double roc_auc(std::span<const double> scores, std::span<const AnomalyLabel> labels, const DetectionTask& task);

// Trapezoidal area under the empirical ROC curve over FPR in [0, 1 - floor],
// divided by (1 - floor). floor must lie in [0, 1). partial_auc(.., 0) equals
// roc_auc exactly.
double partial_auc(std::span<const double> scores, std::span<const AnomalyLabel> labels, const DetectionTask& task,
                   double specificity_floor);

struct CurvePoint {
    double x = 0.0;
    double y = 0.0;
};

// (FPR, TPR) from (0, 0) to (1, 1), one point per distinct score.
std::vector<CurvePoint> roc_curve(std::span<const double> scores, std::span<const AnomalyLabel> labels,
                                  const DetectionTask& task);
// (recall, precision), one point per distinct score.
std::vector<CurvePoint> pr_curve(std::span<const double> scores, std::span<const AnomalyLabel> labels,
                                 const DetectionTask& task);

// Label counts among the k best-ranked cases (ties by case index). Throws
// ParameterError unless 1 <= k <= n.
LabelHistogram topk_report(std::span<const double> scores, std::span<const AnomalyLabel> labels, std::size_t k);

// Per-case constellation frequency at one arity over all cases, by comparing
// every pair of keys directly. Quadratic; meant as a reference for small n.
std::vector<std::uint64_t> brute_force_scores(const Dataset& data, std::size_t arity, BinningMethod method);

inline const std::vector<double> kDefaultFloors{0.9, 0.95, 0.99};

struct PartialAuc {
    double floor = 0.0;
    double value = 0.0;
};

struct EvalReport {
    std::size_t n_cases = 0;
    std::size_t k = 0;
    std::string task;
    std::size_t positives = 0;
    double auc = 0.0;
    std::vector<PartialAuc> partial_aucs;
    LabelHistogram topk_hits{};
    LabelHistogram label_totals{};
    std::vector<CurvePoint> roc;
    std::vector<CurvePoint> prc;
};

EvalReport evaluate(std::span<const double> scores, std::span<const AnomalyLabel> labels, const DetectionTask& task,
                    std::size_t k, std::span<const double> floors = kDefaultFloors);

struct TypeComparison {
    AnomalyLabel label = AnomalyLabel::TypeI;
    std::size_t planted = 0;
    std::size_t hits_ew = 0;
    std::size_t hits_ed = 0;
    std::optional<double> auc_ew;  // nullopt when the type is absent
    std::optional<double> auc_ed;
    // "EW only", "ED only", "both", "neither", or "n/a" for absent types. A
    // method detects a type when at least half its planted cases (rounded up)
    // are in the top k.
    std::string verdict;
    // Method with the higher single-type AUC: "EW", "ED", "tie" or "n/a".
    std::string favored;
};

struct MethodComparison {
    std::size_t k = 0;
    std::vector<TypeComparison> rows;  // Type I to Type VI
    ScoreVector ew;
    ScoreVector ed;

    const TypeComparison& row(AnomalyLabel label) const;
};

// Runs both configs (their `method` fields are overridden to equiwidth and
// equidepth respectively) and tabulates per-type results.
MethodComparison compare_methods(const LabeledDataset& data, const EngineConfig& ew, const EngineConfig& ed,
                                 std::size_t k);
MethodComparison compare_methods(const LabeledDataset& data, const EngineConfig& config, std::size_t k);

}  // namespace secoda
