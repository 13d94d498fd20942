#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace secoda {

using CaseId = std::uint32_t;

enum class AttributeKind : std::uint8_t { Numeric, Categorical };

// "num" / "cat", the spelling used in schema text.
std::string_view to_string(AttributeKind kind);

// Ground-truth vocabulary of the six-type anomaly typology plus Normal.
enum class AnomalyLabel : std::uint8_t { Normal, TypeI, TypeII, TypeIII, TypeIV, TypeV, TypeVI };

inline constexpr std::size_t kLabelCount = 7;
inline constexpr std::array<AnomalyLabel, kLabelCount> kAllLabels{
    AnomalyLabel::Normal, AnomalyLabel::TypeI,  AnomalyLabel::TypeII, AnomalyLabel::TypeIII,
    AnomalyLabel::TypeIV, AnomalyLabel::TypeV, AnomalyLabel::TypeVI};

constexpr std::size_t label_index(AnomalyLabel label) { return static_cast<std::size_t>(label); }

// On-disk tokens: NORMAL, I, II, III, IV, V, VI.
std::string_view label_token(AnomalyLabel label);
std::optional<AnomalyLabel> parse_label_token(std::string_view token);

using LabelHistogram = std::array<std::size_t, kLabelCount>;
LabelHistogram label_histogram(std::span<const AnomalyLabel> labels);

struct ColumnSpec {
    std::string name;
    AttributeKind kind = AttributeKind::Numeric;

    bool operator==(const ColumnSpec&) const = default;
};

using Schema = std::vector<ColumnSpec>;

// Parses `name:num|cat[,name:num|cat...]`. Throws SchemaError on bad syntax or
// repeated names.
Schema parse_schema(std::string_view text);
std::string format_schema(const Schema& schema);

// One attribute stored column-wise. Numeric cells hold finite doubles, with
// NaN standing for Missing. Categorical cells hold dictionary codes, with
// kMissingCode standing for Missing; dictionary entries are in order of first
// appearance.
class Column {
public:
    static constexpr std::int32_t kMissingCode = -1;

    // Throws InputError if any value is infinite.
    static Column numeric(std::string name, std::vector<double> values);
    // nullopt cells are Missing.
    static Column categorical(std::string name, std::span<const std::optional<std::string>> cells);

    const std::string& name() const { return name_; }
    AttributeKind kind() const { return kind_; }
    bool is_numeric() const { return kind_ == AttributeKind::Numeric; }
    std::size_t size() const { return is_numeric() ? values_.size() : codes_.size(); }

    bool is_missing(std::size_t row) const;
    // NaN when missing. Numeric columns only.
    double number(std::size_t row) const { return values_[row]; }
    // Categorical columns only; precondition !is_missing(row).
    std::string_view token(std::size_t row) const;
    std::int32_t code(std::size_t row) const { return codes_[row]; }

    std::span<const double> values() const { return values_; }
    std::span<const std::int32_t> codes() const { return codes_; }
    const std::vector<std::string>& dictionary() const { return dictionary_; }

    friend bool operator==(const Column& a, const Column& b);

private:
    Column(std::string name, AttributeKind kind) : name_(std::move(name)), kind_(kind) {}

    std::string name_;
    AttributeKind kind_;
    std::vector<double> values_;
    std::vector<std::int32_t> codes_;
    std::vector<std::string> dictionary_;
};

// Immutable column-oriented table. All columns have n_cases cells and names
// are unique.
class Dataset {
public:
    Dataset() = default;
    // Throws SchemaError on duplicate names, InputError on ragged columns.
    explicit Dataset(std::vector<Column> columns);

    std::size_t n_cases() const { return n_cases_; }
    std::size_t n_columns() const { return columns_.size(); }
    bool empty() const { return n_cases_ == 0 || columns_.empty(); }

    std::span<const Column> columns() const { return columns_; }
    const Column& column(std::size_t index) const { return columns_[index]; }
    const Column& column(std::string_view name) const { return columns_[column_index(name)]; }
    // Throws LookupError for unknown names.
    std::size_t column_index(std::string_view name) const;
    std::optional<std::size_t> find_column(std::string_view name) const;

    Schema schema() const;
    std::size_t numeric_column_count() const;

    friend bool operator==(const Dataset& a, const Dataset& b);

private:
    std::vector<Column> columns_;
    std::size_t n_cases_ = 0;
};

struct LabeledDataset {
    Dataset data;
    std::vector<AnomalyLabel> labels;

    LabeledDataset() = default;
    // Throws InputError if labels.size() != data.n_cases().
    LabeledDataset(Dataset data, std::vector<AnomalyLabel> labels);

    friend bool operator==(const LabeledDataset&, const LabeledDataset&) = default;
};

struct ColumnStats {
    std::optional<double> min;  // numeric columns with at least one value
    std::optional<double> max;
    std::size_t distinct = 0;   // distinct non-missing values
    std::size_t missing = 0;
};

ColumnStats column_stats(const Dataset& data, std::string_view column);

}  // namespace secoda
