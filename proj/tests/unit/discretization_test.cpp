#include "secoda/discretization.hpp"
#include "secoda/error.hpp"

#include "random_tables.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace secoda {
namespace {

using Cuts = std::vector<double>;
const double kNaN = std::nan("");

std::vector<CaseId> all_cases(const Dataset& d) {
    std::vector<CaseId> ids(d.n_cases());
    std::iota(ids.begin(), ids.end(), CaseId{0});
    return ids;
}

std::vector<std::size_t> bin_counts(std::span<const double> values, const CutPoints& cuts) {
    std::vector<std::size_t> counts(cuts.effective_arity(), 0);
    for (const double v : values) ++counts[assign_bin(v, cuts)];
    return counts;
}

TEST(EquiwidthTest, SpanZeroToTenInFiveBins) {
    EXPECT_EQ(equiwidth_cutpoints(std::vector{0.0, 3.0, 10.0}, 5).cuts, (Cuts{2, 4, 6, 8}));
}

TEST(EquiwidthTest, ConstantColumnHasOneBin) {
    const auto c = equiwidth_cutpoints(std::vector{3.0, 3.0, 3.0}, 4);
    EXPECT_TRUE(c.cuts.empty());
    EXPECT_EQ(c.effective_arity(), 1u);
    EXPECT_EQ(c.arity_requested, 4u);
}

TEST(EquiwidthTest, SymmetricSpanSplitsAtZero) {
    EXPECT_EQ(equiwidth_cutpoints(std::vector{-1.0, 0.25, 1.0}, 2).cuts, (Cuts{0}));
}

TEST(EquiwidthTest, IgnoresMissing) {
    EXPECT_EQ(equiwidth_cutpoints(std::vector{kNaN, 0.0, 10.0, kNaN}, 2).cuts, (Cuts{5}));
}

TEST(EquiwidthTest, ErrorsOnAllMissingAndZeroArity) {
    EXPECT_THROW(equiwidth_cutpoints(std::vector{kNaN, kNaN}, 2), EmptyColumnError);
    EXPECT_THROW(equiwidth_cutpoints(std::vector{1.0}, 0), ParameterError);
    EXPECT_THROW(equidepth_cutpoints(std::vector<double>{}, 2), EmptyColumnError);
    EXPECT_THROW(equidepth_cutpoints(std::vector{1.0}, 0), ParameterError);
}

TEST(EquidepthTest, MedianSplitOfOneToTen) {
    std::vector<double> v(10);
    std::iota(v.begin(), v.end(), 1.0);
    const auto c = equidepth_cutpoints(v, 2);
    EXPECT_EQ(c.cuts, (Cuts{5.5}));
    EXPECT_EQ(bin_counts(v, c), (std::vector<std::size_t>{5, 5}));
}

TEST(EquidepthTest, EvenThirdsOfOneToTwelve) {
    std::vector<double> v(12);
    std::iota(v.begin(), v.end(), 1.0);
    const auto c = equidepth_cutpoints(v, 3);
    EXPECT_EQ(c.cuts, (Cuts{4.5, 8.5}));
    EXPECT_EQ(bin_counts(v, c), (std::vector<std::size_t>{4, 4, 4}));
}

// Hand trace of {1,1,1,1,9}, b = 2: n = 5, k = 1, r = round(5/2) = 3 (halves
// round up). s[r-1] = s[2] = 1 and s[r] = s[3] = 1 coincide, so the cut is
// dropped: no cuts, one bin holding all five cases.
TEST(EquidepthTest, HandTraceOfTiedBoundary) {
    const std::vector<double> v{9, 1, 1, 1, 1};
    const auto c = equidepth_cutpoints(v, 2);
    EXPECT_TRUE(c.cuts.empty());
    EXPECT_EQ(bin_counts(v, c), (std::vector<std::size_t>{5}));
}

TEST(EquidepthTest, CollapsedCutsReduceEffectiveArity) {
    // Ranks 2 and 4 of {1,1,1,2,2,2} (b = 3) straddle 1|1 and 2|2: both dropped.
    // With b = 2, r = 3 sits on the 1|2 boundary: one cut at 1.5.
    const std::vector<double> v{1, 1, 1, 2, 2, 2};
    EXPECT_TRUE(equidepth_cutpoints(v, 3).cuts.empty());
    EXPECT_EQ(equidepth_cutpoints(v, 2).cuts, (Cuts{1.5}));
    // More bins than distinct values.
    const auto c = equidepth_cutpoints(std::vector{1.0, 2.0, 3.0}, 10);
    EXPECT_EQ(c.cuts, (Cuts{1.5, 2.5}));
}

TEST(AssignBinTest, LeftClosedIntervals) {
    const CutPoints c{BinningMethod::Equiwidth, 3, {2, 4}};
    EXPECT_EQ(assign_bin(2.0, c), 1u);
    EXPECT_EQ(assign_bin(1.9, c), 0u);
    EXPECT_EQ(assign_bin(4.0, c), 2u);
    EXPECT_EQ(assign_bin(1e300, c), 2u);
    EXPECT_EQ(assign_bin(kNaN, c), kMissingBin);
}

TEST(ParseMethodTest, AcceptsLongAndShortNames) {
    EXPECT_EQ(parse_binning_method("equiwidth"), BinningMethod::Equiwidth);
    EXPECT_EQ(parse_binning_method("ed"), BinningMethod::Equidepth);
    EXPECT_THROW(parse_binning_method("quantile"), ParameterError);
}

TEST(EncodeTest, ComposesBinsAndTokens) {
    const std::vector<std::optional<std::string>> colors{"red", "red", "blue"};
    const Dataset d({Column::numeric("x", {3.0, kNaN, 3.5}), Column::categorical("color", colors)});
    ColumnCuts cuts{CutPoints{BinningMethod::Equiwidth, 3, {2, 4}}, std::nullopt};
    const auto k0 = encode_constellation(d, 0, cuts);
    EXPECT_EQ(k0.tokens, (std::vector<KeyToken>{BinIndex{1}, std::string("red")}));
    EXPECT_EQ(k0.to_string(), "<1, red>");
    const auto k1 = encode_constellation(d, 1, cuts);
    EXPECT_EQ(k1.tokens, (std::vector<KeyToken>{MissingToken{}, std::string("red")}));
    EXPECT_EQ(k1.to_string(), "<NA, red>");
    // Same bin, different class.
    EXPECT_FALSE(encode_constellation(d, 2, cuts) == k0);
    EXPECT_EQ(encode_constellation(d, 0, cuts), k0);
    EXPECT_THROW(encode_constellation(d, 3, cuts), LookupError);
    EXPECT_THROW(encode_constellation(d, 0, ColumnCuts(2)), ParameterError);
}

TEST(FrequenciesTest, DirectCount) {
    const std::vector<std::optional<std::string>> cells{"a", "a", "a", "b"};
    const Dataset d({Column::categorical("c", cells)});
    const auto ids = all_cases(d);
    EXPECT_EQ(constellation_frequencies(d, ids, ColumnCuts(1)), (std::vector<std::uint32_t>{3, 3, 3, 1}));
}

TEST(FrequenciesTest, AllDistinctKeysGiveOnes) {
    const Dataset d({Column::numeric("x", {1, 2, 3, 4, 5})});
    const auto ids = all_cases(d);
    const auto cuts = discretize(d, ids, BinningMethod::Equiwidth, 5);
    EXPECT_EQ(constellation_frequencies(d, ids, cuts), (std::vector<std::uint32_t>(5, 1)));
}

TEST(FrequenciesTest, OnlyActiveCasesAreCounted) {
    const std::vector<std::optional<std::string>> cells{"a", "a", "a", "b"};
    const Dataset d({Column::categorical("c", cells)});
    const std::vector<CaseId> active{1, 3};
    EXPECT_EQ(constellation_frequencies(d, active, ColumnCuts(1)), (std::vector<std::uint32_t>{1, 1}));
}

TEST(DiscretizeTest, AllMissingActiveColumnGetsEmptyCuts) {
    const Dataset d({Column::numeric("x", {kNaN, 1.0, 2.0})});
    const std::vector<CaseId> active{0};
    const auto cuts = discretize(d, active, BinningMethod::Equidepth, 4);
    ASSERT_TRUE(cuts[0].has_value());
    EXPECT_TRUE(cuts[0]->cuts.empty());
}

// Nested-loop reference for constellation_frequencies.
std::vector<std::uint32_t> nested_count(const Dataset& d, std::span<const CaseId> active, const ColumnCuts& cuts) {
    std::vector<ConstellationKey> keys;
    for (const auto id : active) keys.push_back(encode_constellation(d, id, cuts));
    std::vector<std::uint32_t> freq(active.size(), 0);
    for (std::size_t i = 0; i < keys.size(); ++i) {
        for (std::size_t j = 0; j < keys.size(); ++j) freq[i] += keys[i] == keys[j] ? 1 : 0;
    }
    return freq;
}

TEST(FrequenciesProperty, MatchesNestedCountOnRandomSubsets) {
    testing::Gen g(99);
    testing::TableShape shape;
    shape.max_rows = 80;
    shape.missing_rate = 0.15;
    for (int trial = 0; trial < 150; ++trial) {
        const auto d = testing::random_table(g, shape);
        std::vector<CaseId> active;
        for (CaseId i = 0; i < d.n_cases(); ++i) {
            if (g.chance(0.7)) active.push_back(i);
        }
        if (active.empty()) active.push_back(0);
        const auto method = g.chance(0.5) ? BinningMethod::Equiwidth : BinningMethod::Equidepth;
        const auto cuts = discretize(d, active, method, static_cast<std::size_t>(g.integer(1, 12)));
        const auto freq = constellation_frequencies(d, active, cuts);
        ASSERT_EQ(freq, nested_count(d, active, cuts)) << "trial " << trial;

        // Sum over cases of freq equals the sum over keys of count squared.
        std::map<std::string, std::uint64_t> cells;
        for (const auto id : active) ++cells[encode_constellation(d, id, cuts).to_string()];
        std::uint64_t squares = 0;
        for (const auto& [key, count] : cells) squares += count * count;
        EXPECT_EQ(std::accumulate(freq.begin(), freq.end(), std::uint64_t{0}), squares);
    }
}

TEST(FrequenciesProperty, PartitionCountDoesNotChangeResult) {
    testing::Gen g(5);
    testing::TableShape shape;
    shape.min_rows = 100;
    shape.max_rows = 3000;
    for (int trial = 0; trial < 20; ++trial) {
        const auto d = testing::random_table(g, shape);
        const auto ids = all_cases(d);
        const auto cuts = discretize(d, ids, BinningMethod::Equidepth, 7);
        const auto one = constellation_frequencies(d, ids, cuts, 1);
        EXPECT_EQ(constellation_frequencies(d, ids, cuts, 2), one);
        EXPECT_EQ(constellation_frequencies(d, ids, cuts, 8), one);
        EXPECT_EQ(constellation_frequencies(d, ids, cuts, 300), one);
    }
}

TEST(CutProperty, CutsStrictlyIncreaseAndBinsPartitionPresentValues) {
    testing::Gen g(11);
    for (int trial = 0; trial < 300; ++trial) {
        const auto n = static_cast<std::size_t>(g.integer(1, 150));
        const auto values = testing::random_numeric(g, n, 0.1);
        if (std::all_of(values.begin(), values.end(), [](double v) { return std::isnan(v); })) continue;
        const auto b = static_cast<std::size_t>(g.integer(1, 40));
        for (const auto method : {BinningMethod::Equiwidth, BinningMethod::Equidepth}) {
            const auto c = compute_cutpoints(method, values, b);
            ASSERT_LE(c.cuts.size(), b - 1);
            for (std::size_t i = 1; i < c.cuts.size(); ++i) ASSERT_LT(c.cuts[i - 1], c.cuts[i]);
            std::size_t present = 0, binned = 0;
            for (const double v : values) {
                if (std::isnan(v)) continue;
                ++present;
                const auto bin = assign_bin(v, c);
                ASSERT_LT(bin, c.effective_arity());
                // Left-closed: cuts[bin-1] <= v < cuts[bin].
                if (bin > 0) {
                    ASSERT_LE(c.cuts[bin - 1], v);
                }
                if (bin < c.cuts.size()) {
                    ASSERT_LT(v, c.cuts[bin]);
                }
                ++binned;
            }
            EXPECT_EQ(present, binned);
        }
    }
}

TEST(CutProperty, FullArityWhenEnoughDistinctValues) {
    testing::Gen g(12);
    for (int trial = 0; trial < 200; ++trial) {
        const auto b = static_cast<std::size_t>(g.integer(1, 30));
        const auto n = b + static_cast<std::size_t>(g.integer(0, 100));
        std::vector<double> values(n);
        for (auto& v : values) v = g.unit() * 100.0 - 50.0;
        EXPECT_EQ(equidepth_cutpoints(values, b).cuts.size(), b - 1);
        EXPECT_EQ(equiwidth_cutpoints(values, b).cuts.size(), b - 1);
    }
}

// Bin widths stay within a few ulps of (M - m) / b, measured at the magnitude
// of the cuts involved or of the range, whichever is larger.
TEST(CutProperty, EquiwidthBinsHaveEqualWidth) {
    testing::Gen g(13);
    for (int trial = 0; trial < 300; ++trial) {
        const double lo = (g.unit() - 0.5) * std::ldexp(1.0, static_cast<int>(g.integer(-10, 30)));
        const double range = g.unit() * std::ldexp(1.0, static_cast<int>(g.integer(-10, 30))) + 1e-3;
        const std::vector<double> values{lo, lo + range / 3.0, lo + range};
        const auto b = static_cast<std::size_t>(g.integer(2, 64));
        const auto c = equiwidth_cutpoints(values, b);
        ASSERT_EQ(c.cuts.size(), b - 1);
        const double width = (values[2] - values[0]) / static_cast<double>(b);
        std::vector<double> edges{values[0]};
        edges.insert(edges.end(), c.cuts.begin(), c.cuts.end());
        edges.push_back(values[2]);
        for (std::size_t i = 1; i < edges.size(); ++i) {
            const double scale = std::max({std::abs(edges[i]), std::abs(edges[i - 1]), values[2] - values[0]});
            const double ulp = std::nextafter(scale, INFINITY) - scale;
            EXPECT_NEAR(edges[i] - edges[i - 1], width, 4 * ulp) << "trial " << trial << " bin " << i;
        }
    }
}

TEST(CutProperty, EquidepthExactCountsWhenDivisible) {
    testing::Gen g(14);
    for (int trial = 0; trial < 200; ++trial) {
        const auto b = static_cast<std::size_t>(g.integer(1, 20));
        const auto n = b * static_cast<std::size_t>(g.integer(1, 40));
        std::vector<double> values(n);
        // Distinct by construction, shuffled.
        for (std::size_t i = 0; i < n; ++i) values[i] = static_cast<double>(i) * 0.37 + g.unit() * 0.3;
        for (std::size_t i = n; i > 1; --i) std::swap(values[i - 1], values[g.raw() % i]);
        const auto c = equidepth_cutpoints(values, b);
        EXPECT_EQ(bin_counts(values, c), std::vector<std::size_t>(b, n / b));
    }
}

TEST(CutProperty, EquidepthBinsAreInvariantUnderMonotoneTransforms) {
    testing::Gen g(15);
    for (int trial = 0; trial < 200; ++trial) {
        const auto n = static_cast<std::size_t>(g.integer(2, 200));
        std::vector<double> values(n);
        for (std::size_t i = 0; i < n; ++i) values[i] = static_cast<double>(i) + g.unit() * 0.5 - 100.0;
        std::vector<double> transformed(n);
        std::transform(values.begin(), values.end(), transformed.begin(),
                       [](double x) { return std::exp(x / 40.0) + x * x * x; });
        const auto b = static_cast<std::size_t>(g.integer(1, 30));
        const auto a = equidepth_cutpoints(values, b);
        const auto t = equidepth_cutpoints(transformed, b);
        for (std::size_t i = 0; i < n; ++i) ASSERT_EQ(assign_bin(values[i], a), assign_bin(transformed[i], t));
    }
}

TEST(CutProperty, EquiwidthBinsAreInvariantUnderAffineMaps) {
    testing::Gen g(16);
    for (int trial = 0; trial < 200; ++trial) {
        const auto n = static_cast<std::size_t>(g.integer(2, 200));
        std::vector<double> values(n);
        for (auto& v : values) v = g.unit() * 10.0 - 3.0;
        const double scale = 0.01 + g.unit() * 100.0;
        const double shift = (g.unit() - 0.5) * 1000.0;
        std::vector<double> mapped(n);
        std::transform(values.begin(), values.end(), mapped.begin(), [&](double x) { return scale * x + shift; });
        const auto b = static_cast<std::size_t>(g.integer(1, 30));
        const auto a = equiwidth_cutpoints(values, b);
        const auto m = equiwidth_cutpoints(mapped, b);
        for (std::size_t i = 0; i < n; ++i) ASSERT_EQ(assign_bin(values[i], a), assign_bin(mapped[i], m));
    }
}

TEST(EncodeProperty, EqualKeysIffEqualBinsAndTokens) {
    testing::Gen g(17);
    testing::TableShape shape;
    shape.max_rows = 40;
    shape.missing_rate = 0.2;
    for (int trial = 0; trial < 100; ++trial) {
        const auto d = testing::random_table(g, shape);
        const auto ids = all_cases(d);
        const auto cuts = discretize(d, ids, BinningMethod::Equiwidth, static_cast<std::size_t>(g.integer(1, 6)));
        const auto codes = constellation_codes(d, ids, cuts);
        for (CaseId i = 0; i < d.n_cases(); ++i) {
            for (CaseId j = 0; j < d.n_cases(); ++j) {
                bool same = true;
                for (std::size_t c = 0; c < d.n_columns(); ++c) {
                    const auto& col = d.column(c);
                    if (col.is_numeric()) {
                        same &= assign_bin(col.number(i), *cuts[c]) == assign_bin(col.number(j), *cuts[c]);
                    } else {
                        same &= col.code(i) == col.code(j);
                    }
                }
                ASSERT_EQ(encode_constellation(d, i, cuts) == encode_constellation(d, j, cuts), same);
                ASSERT_EQ(codes[i] == codes[j], same);
            }
        }
    }
}

}  // namespace
}  // namespace secoda
