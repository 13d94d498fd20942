#include "secoda/discretization.hpp"

#include "secoda/error.hpp"
#include "secoda/frequency_table.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include <fmt/format.h>

namespace secoda {

namespace {

std::vector<double> present_values(std::span<const double> values) {
    std::vector<double> present;
    present.reserve(values.size());
    for (const double v : values) {
        if (!std::isnan(v)) present.push_back(v);
    }
    return present;
}

void check_arity(std::size_t arity) {
    if (arity < 1) throw ParameterError("arity must be at least 1");
}

// Largest mixed-radix code space before codes are re-numbered densely.
constexpr std::uint64_t kCodeSpaceLimit = std::uint64_t{1} << 62;

}  // namespace

std::string_view to_string(BinningMethod method) {
    return method == BinningMethod::Equiwidth ? "equiwidth" : "equidepth";
}

BinningMethod parse_binning_method(std::string_view text) {
    if (text == "equiwidth" || text == "ew") return BinningMethod::Equiwidth;
    if (text == "equidepth" || text == "ed") return BinningMethod::Equidepth;
    throw ParameterError(fmt::format("unknown binning method '{}' (expected equiwidth or equidepth)", text));
}

CutPoints equiwidth_cutpoints(std::span<const double> values, std::size_t arity) {
    check_arity(arity);
    double lo = 0.0;
    double hi = 0.0;
    bool any = false;
    for (const double v : values) {
        if (std::isnan(v)) continue;
        if (!any) {
            lo = hi = v;
            any = true;
        } else {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (!any) throw EmptyColumnError("cannot discretize a column without present values");

    CutPoints result{BinningMethod::Equiwidth, arity, {}};
    if (lo == hi) return result;
    const double b = static_cast<double>(arity);
    const double range = hi - lo;
    result.cuts.reserve(arity - 1);
    for (std::size_t k = 1; k < arity; ++k) {
        const double kd = static_cast<double>(k);
        double cut = lo + kd * range / b;
        if (!std::isfinite(range)) cut = lo + kd * (hi / b - lo / b);
        // Ranges narrower than arity ulps produce repeated cuts.
        if (result.cuts.empty() ? cut > lo : cut > result.cuts.back()) result.cuts.push_back(cut);
    }
    return result;
}

CutPoints equidepth_cutpoints(std::span<const double> values, std::size_t arity) {
    check_arity(arity);
    auto sorted = present_values(values);
    if (sorted.empty()) throw EmptyColumnError("cannot discretize a column without present values");
    std::sort(sorted.begin(), sorted.end());

    CutPoints result{BinningMethod::Equidepth, arity, {}};
    const std::size_t n = sorted.size();
    if (n < 2) return result;
    for (std::size_t k = 1; k < arity; ++k) {
        // r = round(k*n/b), halves rounded up, clamped to [1, n-1]: r values
        // fall below the cut.
        auto r = static_cast<std::size_t>((2 * static_cast<std::uint64_t>(k) * n + arity) /
                                          (2 * static_cast<std::uint64_t>(arity)));
        r = std::clamp<std::size_t>(r, 1, n - 1);
        const double below = sorted[r - 1];
        const double above = sorted[r];
        if (below == above) continue;  // boundary inside a run of ties
        double cut = std::midpoint(below, above);
        if (cut <= below) cut = above;  // adjacent doubles
        if (result.cuts.empty() || cut > result.cuts.back()) result.cuts.push_back(cut);
    }
    return result;
}

CutPoints compute_cutpoints(BinningMethod method, std::span<const double> values, std::size_t arity) {
    return method == BinningMethod::Equiwidth ? equiwidth_cutpoints(values, arity)
                                              : equidepth_cutpoints(values, arity);
}

BinIndex assign_bin(double x, const CutPoints& cuts) {
    if (std::isnan(x)) return kMissingBin;
    return static_cast<BinIndex>(std::upper_bound(cuts.cuts.begin(), cuts.cuts.end(), x) -
                                 cuts.cuts.begin());
}

std::string ConstellationKey::to_string() const {
    std::string text = "<";
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i > 0) text += ", ";
        const auto& token = tokens[i];
        if (std::holds_alternative<MissingToken>(token)) {
            text += "NA";
        } else if (const auto* bin = std::get_if<BinIndex>(&token)) {
            text += fmt::format("{}", *bin);
        } else {
            text += std::get<std::string>(token);
        }
    }
    text += ">";
    return text;
}

namespace {

const CutPoints& cuts_for(const ColumnCuts& cuts, const Dataset& data, std::size_t column) {
    if (column >= cuts.size() || !cuts[column]) {
        throw ParameterError(
            fmt::format("no cut points for numeric column '{}'", data.column(column).name()));
    }
    return *cuts[column];
}

}  // namespace

ConstellationKey encode_constellation(const Dataset& data, CaseId case_id, const ColumnCuts& cuts) {
    if (case_id >= data.n_cases()) {
        throw LookupError(fmt::format("case {} out of range (n = {})", case_id, data.n_cases()));
    }
    ConstellationKey key;
    key.tokens.reserve(data.n_columns());
    for (std::size_t c = 0; c < data.n_columns(); ++c) {
        const auto& column = data.column(c);
        if (column.is_missing(case_id)) {
            key.tokens.emplace_back(MissingToken{});
        } else if (column.is_numeric()) {
            key.tokens.emplace_back(assign_bin(column.number(case_id), cuts_for(cuts, data, c)));
        } else {
            key.tokens.emplace_back(std::string(column.token(case_id)));
        }
    }
    return key;
}

std::vector<std::uint64_t> constellation_codes(const Dataset& data, std::span<const CaseId> active,
                                               const ColumnCuts& cuts) {
    std::vector<std::uint64_t> codes(active.size(), 0);
    std::uint64_t space = 1;  // number of representable codes so far

    for (std::size_t c = 0; c < data.n_columns(); ++c) {
        const auto& column = data.column(c);
        // The extra digit value is Missing.
        const std::uint64_t radix = column.is_numeric()
                                        ? cuts_for(cuts, data, c).effective_arity() + 1
                                        : column.dictionary().size() + 1;
        if (space > kCodeSpaceLimit / radix) {
            // Renumber the prefix codes densely in order of first appearance.
            std::unordered_map<std::uint64_t, std::uint64_t> dense;
            dense.reserve(active.size());
            for (auto& code : codes) {
                code = dense.try_emplace(code, dense.size()).first->second;
            }
            space = std::max<std::uint64_t>(dense.size(), 1);
        }
        if (column.is_numeric()) {
            const auto& col_cuts = cuts_for(cuts, data, c);
            const auto missing_digit = radix - 1;
            for (std::size_t i = 0; i < active.size(); ++i) {
                const auto bin = assign_bin(column.number(active[i]), col_cuts);
                codes[i] = codes[i] * radix + (bin == kMissingBin ? missing_digit : bin);
            }
        } else {
            const auto missing_digit = radix - 1;
            for (std::size_t i = 0; i < active.size(); ++i) {
                const auto code = column.code(active[i]);
                codes[i] = codes[i] * radix +
                           (code == Column::kMissingCode ? missing_digit
                                                         : static_cast<std::uint64_t>(code));
            }
        }
        space *= radix;
    }
    return codes;
}

std::vector<std::uint32_t> constellation_frequencies(const Dataset& data,
                                                     std::span<const CaseId> active,
                                                     const ColumnCuts& cuts, std::size_t partitions) {
    const auto codes = constellation_codes(data, active, cuts);
    return count_codes(codes, partitions);
}

ColumnCuts discretize(const Dataset& data, std::span<const CaseId> active, BinningMethod method,
                      std::size_t arity) {
    ColumnCuts result(data.n_columns());
    std::vector<double> buffer;
    buffer.reserve(active.size());
    for (std::size_t c = 0; c < data.n_columns(); ++c) {
        const auto& column = data.column(c);
        if (!column.is_numeric()) continue;
        buffer.clear();
        for (const auto id : active) {
            const double v = column.number(id);
            if (!std::isnan(v)) buffer.push_back(v);
        }
        if (buffer.empty()) {
            check_arity(arity);
            result[c] = CutPoints{method, arity, {}};
        } else {
            result[c] = compute_cutpoints(method, buffer, arity);
        }
    }
    return result;
}

}  // namespace secoda
