#pragma once

// Hand-rolled generators for property tests. They draw from std::mt19937_64
// directly so that they share nothing with the library's own Rng.

#include "secoda/dataset.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace secoda::testing {

class Gen {
public:
    explicit Gen(std::uint64_t seed) : engine_(seed) {}

    // Uniform integer in [lo, hi].
    std::int64_t integer(std::int64_t lo, std::int64_t hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(engine_() % span);
    }
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    bool chance(double p) { return unit() < p; }
    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

struct TableShape {
    std::size_t min_rows = 1;
    std::size_t max_rows = 200;
    std::size_t max_numeric = 3;
    std::size_t max_categorical = 3;
    double missing_rate = 0.05;
};

// Numeric columns mix coarse integer grids (many ties, values landing on cut
// points) with continuous draws; categorical columns use small alphabets.
inline std::vector<double> random_numeric(Gen& g, std::size_t n, double missing_rate) {
    std::vector<double> values(n);
    const auto style = g.integer(0, 2);
    const double scale = std::ldexp(1.0, static_cast<int>(g.integer(-3, 6)));
    for (auto& v : values) {
        if (g.chance(missing_rate)) {
            v = std::nan("");
        } else if (style == 0) {
            v = static_cast<double>(g.integer(-5, 5));
        } else if (style == 1) {
            v = scale * (g.unit() - 0.3);
        } else {
            v = static_cast<double>(g.integer(0, 40)) * 0.25 - 3.0;
        }
    }
    return values;
}

inline std::vector<std::optional<std::string>> random_categorical(Gen& g, std::size_t n, double missing_rate) {
    const auto alphabet = g.integer(1, 5);
    std::vector<std::optional<std::string>> cells(n);
    for (auto& c : cells) {
        if (!g.chance(missing_rate)) c = std::string(1, static_cast<char>('a' + g.integer(0, alphabet - 1)));
    }
    return cells;
}

inline Dataset random_table(Gen& g, const TableShape& shape) {
    const auto n = static_cast<std::size_t>(
        g.integer(static_cast<std::int64_t>(shape.min_rows), static_cast<std::int64_t>(shape.max_rows)));
    std::size_t numeric = static_cast<std::size_t>(g.integer(0, static_cast<std::int64_t>(shape.max_numeric)));
    std::size_t categorical = static_cast<std::size_t>(g.integer(0, static_cast<std::int64_t>(shape.max_categorical)));
    if (numeric + categorical == 0) {
        if (shape.max_numeric > 0) {
            numeric = 1;
        } else {
            categorical = 1;
        }
    }
    std::vector<Column> columns;
    for (std::size_t c = 0; c < numeric; ++c) {
        columns.push_back(Column::numeric("n" + std::to_string(c), random_numeric(g, n, shape.missing_rate)));
    }
    for (std::size_t c = 0; c < categorical; ++c) {
        const auto cells = random_categorical(g, n, shape.missing_rate);
        columns.push_back(Column::categorical("c" + std::to_string(c), cells));
    }
    return Dataset(std::move(columns));
}

}  // namespace secoda::testing
