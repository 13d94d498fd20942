#include "secoda/dataset.hpp"

#include "secoda/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>

namespace secoda {

namespace {

constexpr std::array<std::string_view, kLabelCount> kLabelTokens{"NORMAL", "I",  "II", "III",
                                                                 "IV",     "V",  "VI"};

bool same_cell(double a, double b) {
    if (std::isnan(a) || std::isnan(b)) return std::isnan(a) && std::isnan(b);
    return a == b;
}

}  // namespace

std::string_view to_string(AttributeKind kind) {
    return kind == AttributeKind::Numeric ? "num" : "cat";
}

std::string_view label_token(AnomalyLabel label) { return kLabelTokens[label_index(label)]; }

std::optional<AnomalyLabel> parse_label_token(std::string_view token) {
    for (std::size_t i = 0; i < kLabelCount; ++i) {
        if (kLabelTokens[i] == token) return kAllLabels[i];
    }
    return std::nullopt;
}

LabelHistogram label_histogram(std::span<const AnomalyLabel> labels) {
    LabelHistogram histogram{};
    for (const auto label : labels) ++histogram[label_index(label)];
    return histogram;
}

Schema parse_schema(std::string_view text) {
    Schema schema;
    std::unordered_set<std::string> seen;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = std::min(text.find(',', pos), text.size());
        const auto item = text.substr(pos, comma - pos);
        const auto colon = item.rfind(':');
        if (colon == std::string_view::npos || colon == 0) {
            throw SchemaError(fmt::format("schema entry '{}' is not of the form name:num|cat", item));
        }
        const auto name = item.substr(0, colon);
        const auto kind = item.substr(colon + 1);
        ColumnSpec spec{std::string(name), AttributeKind::Numeric};
        if (kind == "num") {
            spec.kind = AttributeKind::Numeric;
        } else if (kind == "cat") {
            spec.kind = AttributeKind::Categorical;
        } else {
            throw SchemaError(fmt::format("unknown kind '{}' for column '{}' (expected num or cat)",
                                          kind, name));
        }
        if (!seen.insert(spec.name).second) {
            throw SchemaError(fmt::format("duplicate column name '{}' in schema", name));
        }
        schema.push_back(std::move(spec));
        pos = comma + 1;
    }
    return schema;
}

std::string format_schema(const Schema& schema) {
    std::string text;
    for (const auto& spec : schema) {
        if (!text.empty()) text += ',';
        text += spec.name;
        text += ':';
        text += to_string(spec.kind);
    }
    return text;
}

Column Column::numeric(std::string name, std::vector<double> values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (std::isinf(values[i])) {
            throw InputError(fmt::format("column '{}' row {}: non-finite numeric value", name, i + 1));
        }
    }
    Column column(std::move(name), AttributeKind::Numeric);
    column.values_ = std::move(values);
    return column;
}

Column Column::categorical(std::string name, std::span<const std::optional<std::string>> cells) {
    Column column(std::move(name), AttributeKind::Categorical);
    std::unordered_map<std::string_view, std::int32_t> index;
    column.codes_.reserve(cells.size());
    for (const auto& cell : cells) {
        if (!cell) {
            column.codes_.push_back(kMissingCode);
            continue;
        }
        auto it = index.find(*cell);
        if (it == index.end()) {
            const auto code = static_cast<std::int32_t>(column.dictionary_.size());
            column.dictionary_.push_back(*cell);
            // Keys view the caller's storage, which outlives this loop.
            it = index.emplace(std::string_view(*cell), code).first;
        }
        column.codes_.push_back(it->second);
    }
    return column;
}

bool Column::is_missing(std::size_t row) const {
    return is_numeric() ? std::isnan(values_[row]) : codes_[row] == kMissingCode;
}

std::string_view Column::token(std::size_t row) const {
    return dictionary_[static_cast<std::size_t>(codes_[row])];
}

bool operator==(const Column& a, const Column& b) {
    if (a.name_ != b.name_ || a.kind_ != b.kind_ || a.size() != b.size()) return false;
    if (a.is_numeric()) {
        return std::equal(a.values_.begin(), a.values_.end(), b.values_.begin(), same_cell);
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        const bool am = a.is_missing(i);
        if (am != b.is_missing(i)) return false;
        if (!am && a.token(i) != b.token(i)) return false;
    }
    return true;
}

Dataset::Dataset(std::vector<Column> columns) : columns_(std::move(columns)) {
    std::unordered_set<std::string_view> names;
    for (const auto& column : columns_) {
        if (!names.insert(column.name()).second) {
            throw SchemaError(fmt::format("duplicate column name '{}'", column.name()));
        }
    }
    if (!columns_.empty()) {
        n_cases_ = columns_.front().size();
        for (const auto& column : columns_) {
            if (column.size() != n_cases_) {
                throw InputError(fmt::format("column '{}' has {} cells, expected {}", column.name(),
                                             column.size(), n_cases_));
            }
        }
    }
}

std::optional<std::size_t> Dataset::find_column(std::string_view name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (columns_[i].name() == name) return i;
    }
    return std::nullopt;
}

std::size_t Dataset::column_index(std::string_view name) const {
    if (const auto index = find_column(name)) return *index;
    throw LookupError(fmt::format("unknown column '{}'", name));
}

Schema Dataset::schema() const {
    Schema schema;
    schema.reserve(columns_.size());
    for (const auto& column : columns_) schema.push_back({column.name(), column.kind()});
    return schema;
}

std::size_t Dataset::numeric_column_count() const {
    return static_cast<std::size_t>(
        std::count_if(columns_.begin(), columns_.end(), [](const Column& c) { return c.is_numeric(); }));
}

bool operator==(const Dataset& a, const Dataset& b) {
    return a.n_cases_ == b.n_cases_ && a.columns_ == b.columns_;
}

LabeledDataset::LabeledDataset(Dataset data_in, std::vector<AnomalyLabel> labels_in)
    : data(std::move(data_in)), labels(std::move(labels_in)) {
    if (labels.size() != data.n_cases()) {
        throw InputError(fmt::format("{} labels for {} cases", labels.size(), data.n_cases()));
    }
}

ColumnStats column_stats(const Dataset& data, std::string_view name) {
    const auto& column = data.column(name);
    ColumnStats stats;
    if (column.is_numeric()) {
        std::vector<double> present;
        present.reserve(column.size());
        for (const double v : column.values()) {
            if (std::isnan(v)) {
                ++stats.missing;
            } else {
                present.push_back(v);
            }
        }
        if (!present.empty()) {
            std::sort(present.begin(), present.end());
            stats.min = present.front();
            stats.max = present.back();
            // -0.0 and 0.0 compare equal and count once.
            stats.distinct = static_cast<std::size_t>(
                std::unique(present.begin(), present.end()) - present.begin());
        }
    } else {
        std::vector<bool> used(column.dictionary().size(), false);
        for (const auto code : column.codes()) {
            if (code == Column::kMissingCode) {
                ++stats.missing;
            } else {
                used[static_cast<std::size_t>(code)] = true;
            }
        }
        stats.distinct = static_cast<std::size_t>(std::count(used.begin(), used.end(), true));
    }
    return stats;
}

}  // namespace secoda
