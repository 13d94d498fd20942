#pragma once

#include "secoda/dataset.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace secoda {

// Name of the trailing ground-truth column in benchmark files.
inline constexpr std::string_view kLabelColumn = "anomaly_type";

struct LoadOptions {
    // Kind overrides by column name. Every named column must exist in the
    // header; columns not named here are inferred. nullopt infers everything.
    std::optional<Schema> schema;
};

// Reads comma-separated text with a header row. Empty fields are Missing.
// Inference: a column is Numeric iff every non-empty cell parses as a finite
// real, otherwise Categorical.
//
// Throws InputError (ragged row, bad numeric literal under an explicit num
// column) and SchemaError (duplicate header names, schema names not in the
// header). Row numbers in messages count data rows from 1.
Dataset load_table(std::istream& in, const LoadOptions& options = {});

// Like load_table, but the final column must be `anomaly_type`; it becomes the
// label vector and is not part of the returned Dataset.
LabeledDataset load_labeled(std::istream& in, const LoadOptions& options = {});

// Splits off a trailing `anomaly_type` column when the file has one.
struct LoadedTable {
    Dataset data;
    std::optional<std::vector<AnomalyLabel>> labels;
};
LoadedTable load_table_with_optional_labels(std::istream& in, const LoadOptions& options = {});

void write_table(std::ostream& out, const Dataset& data);
void write_labeled(std::ostream& out, const LabeledDataset& data);

// Shortest text that parses back to exactly the same double.
std::string format_number(double value);
// Locale-independent real literal (integer, decimal, scientific; optional
// sign). The whole string must be consumed. May return inf/nan for literals
// spelling them; callers decide whether that is acceptable.
std::optional<double> parse_real(std::string_view text);

// Splits one record into fields. Double-quoted fields may contain commas and
// doubled quotes. Returns false on an unterminated quote.
bool split_record(std::string_view line, std::vector<std::string>& fields);
// Quotes a field when it contains a separator, quote or line break.
std::string quote_field(std::string_view field);

}  // namespace secoda
