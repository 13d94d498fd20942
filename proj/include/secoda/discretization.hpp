#pragma once

#include "secoda/dataset.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace secoda {

enum class BinningMethod : std::uint8_t { Equiwidth, Equidepth };

std::string_view to_string(BinningMethod method);
// Accepts "equiwidth" / "equidepth" (also "ew" / "ed"); throws ParameterError.
BinningMethod parse_binning_method(std::string_view text);

using BinIndex = std::uint32_t;
inline constexpr BinIndex kMissingBin = std::numeric_limits<BinIndex>::max();

// Ordered cut points of one numeric column. Bin i is the half-open interval
// [cuts[i-1], cuts[i]) with -inf/+inf sentinels at both ends, so the
// effective arity is cuts.size() + 1 and may be below the requested arity
// when values tie or the column is constant.
struct CutPoints {
    BinningMethod method = BinningMethod::Equiwidth;
    std::size_t arity_requested = 1;
    std::vector<double> cuts;

    std::size_t effective_arity() const { return cuts.size() + 1; }
    bool operator==(const CutPoints&) const = default;
};

// Missing (NaN) cells are ignored. Throws ParameterError for b < 1 and
// EmptyColumnError when no value is present.
CutPoints equiwidth_cutpoints(std::span<const double> values, std::size_t arity);
CutPoints equidepth_cutpoints(std::span<const double> values, std::size_t arity);
CutPoints compute_cutpoints(BinningMethod method, std::span<const double> values, std::size_t arity);

// Index of the bin holding x; kMissingBin for NaN.
BinIndex assign_bin(double x, const CutPoints& cuts);

// Per-column discretization of a Dataset; engaged exactly for numeric columns.
using ColumnCuts = std::vector<std::optional<CutPoints>>;

struct MissingToken {
    bool operator==(const MissingToken&) const = default;
};
using KeyToken = std::variant<MissingToken, BinIndex, std::string>;

// Concatenated bins and class tokens of one case: the histogram cell it
// occupies.
struct ConstellationKey {
    std::vector<KeyToken> tokens;

    bool operator==(const ConstellationKey&) const = default;
    // e.g. "<1, red, NA>"
    std::string to_string() const;
};

// Throws ParameterError if a numeric column has no cut points in `cuts`.
ConstellationKey encode_constellation(const Dataset& data, CaseId case_id, const ColumnCuts& cuts);

// Integer image of encode_constellation: equal codes iff equal keys, for the
// given active set. Missing bins and class codes get their own digit.
std::vector<std::uint64_t> constellation_codes(const Dataset& data, std::span<const CaseId> active,
                                               const ColumnCuts& cuts);

// For each active case, how many active cases share its constellation.
// Counting may be split into `partitions` concurrent chunks; the merged
// result is identical for any partition count.
std::vector<std::uint32_t> constellation_frequencies(const Dataset& data,
                                                     std::span<const CaseId> active,
                                                     const ColumnCuts& cuts,
                                                     std::size_t partitions = 1);

// Cut points for every numeric column at one arity, computed over the active
// cases only. A numeric column with no present active value gets no cuts.
ColumnCuts discretize(const Dataset& data, std::span<const CaseId> active, BinningMethod method,
                      std::size_t arity);

}  // namespace secoda
