#include "secoda/csv.hpp"

#include "secoda/error.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <unordered_set>

#include <fmt/format.h>

namespace secoda {

namespace {

struct RawTable {
    std::vector<std::string> header;
    // Row-major cells; nullopt is an empty (Missing) field.
    std::vector<std::vector<std::optional<std::string>>> rows;
};

RawTable read_raw(std::istream& in) {
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
    }
    if (in.bad()) throw IoError("read failure");
    if (lines.empty()) throw InputError("empty input: missing header row");

    RawTable raw;
    std::vector<std::string> fields;
    if (!split_record(lines.front(), fields)) throw InputError("header: unterminated quoted field");
    raw.header = fields;

    // A blank last line in a multi-column file is a stray terminator; in a
    // one-column file it is a record holding a single Missing cell.
    std::size_t end = lines.size();
    if (end > 1 && lines.back().empty() && raw.header.size() > 1) --end;

    raw.rows.reserve(end - 1);
    for (std::size_t i = 1; i < end; ++i) {
        const auto row_number = i;
        if (!split_record(lines[i], fields)) {
            throw InputError(fmt::format("row {}: unterminated quoted field", row_number));
        }
        if (fields.size() != raw.header.size()) {
            throw InputError(fmt::format("row {}: expected {} fields, got {}", row_number,
                                         raw.header.size(), fields.size()));
        }
        std::vector<std::optional<std::string>> cells;
        cells.reserve(fields.size());
        for (auto& field : fields) {
            if (field.empty()) {
                cells.emplace_back(std::nullopt);
            } else {
                cells.emplace_back(std::move(field));
            }
        }
        raw.rows.push_back(std::move(cells));
    }
    return raw;
}

AttributeKind infer_kind(const RawTable& raw, std::size_t col) {
    for (const auto& row : raw.rows) {
        const auto& cell = row[col];
        if (!cell) continue;
        const auto value = parse_real(*cell);
        if (!value || !std::isfinite(*value)) return AttributeKind::Categorical;
    }
    return AttributeKind::Numeric;
}

Schema resolve_schema(const RawTable& raw, const LoadOptions& options) {
    std::unordered_set<std::string_view> names;
    for (const auto& name : raw.header) {
        if (!names.insert(name).second) {
            throw SchemaError(fmt::format("duplicate column name '{}' in header", name));
        }
    }
    Schema schema;
    schema.reserve(raw.header.size());
    for (std::size_t c = 0; c < raw.header.size(); ++c) {
        schema.push_back({raw.header[c], infer_kind(raw, c)});
    }
    if (options.schema) {
        for (const auto& spec : *options.schema) {
            bool found = false;
            for (auto& entry : schema) {
                if (entry.name == spec.name) {
                    entry.kind = spec.kind;
                    found = true;
                }
            }
            if (!found) {
                throw SchemaError(fmt::format("schema column '{}' not found in header", spec.name));
            }
        }
    }
    return schema;
}

Dataset build_dataset(const RawTable& raw, const Schema& schema, std::size_t n_columns) {
    std::vector<Column> columns;
    columns.reserve(n_columns);
    for (std::size_t c = 0; c < n_columns; ++c) {
        const auto& spec = schema[c];
        if (spec.kind == AttributeKind::Numeric) {
            std::vector<double> values;
            values.reserve(raw.rows.size());
            for (std::size_t r = 0; r < raw.rows.size(); ++r) {
                const auto& cell = raw.rows[r][c];
                if (!cell) {
                    values.push_back(std::nan(""));
                    continue;
                }
                const auto value = parse_real(*cell);
                if (!value) {
                    throw InputError(fmt::format("row {}: column '{}': '{}' is not a number", r + 1,
                                                 spec.name, *cell));
                }
                if (!std::isfinite(*value)) {
                    throw InputError(fmt::format("row {}: column '{}': non-finite numeric literal '{}'",
                                                 r + 1, spec.name, *cell));
                }
                values.push_back(*value);
            }
            columns.push_back(Column::numeric(spec.name, std::move(values)));
        } else {
            std::vector<std::optional<std::string>> cells;
            cells.reserve(raw.rows.size());
            for (const auto& row : raw.rows) cells.push_back(row[c]);
            columns.push_back(Column::categorical(spec.name, cells));
        }
    }
    return Dataset(std::move(columns));
}

std::vector<AnomalyLabel> parse_labels(const RawTable& raw, std::size_t col) {
    std::vector<AnomalyLabel> labels;
    labels.reserve(raw.rows.size());
    for (std::size_t r = 0; r < raw.rows.size(); ++r) {
        const auto& cell = raw.rows[r][col];
        const auto label = cell ? parse_label_token(*cell) : std::nullopt;
        if (!label) {
            throw InputError(fmt::format("row {}: invalid {} value '{}'", r + 1, kLabelColumn,
                                         cell.value_or("")));
        }
        labels.push_back(*label);
    }
    return labels;
}

void write_header_and_rows(std::ostream& out, const Dataset& data,
                           const std::vector<AnomalyLabel>* labels) {
    std::string line;
    for (std::size_t c = 0; c < data.n_columns(); ++c) {
        if (c > 0) line += ',';
        line += quote_field(data.column(c).name());
    }
    if (labels) {
        if (data.n_columns() > 0) line += ',';
        line += kLabelColumn;
    }
    line += '\n';
    out << line;
    for (std::size_t r = 0; r < data.n_cases(); ++r) {
        line.clear();
        for (std::size_t c = 0; c < data.n_columns(); ++c) {
            if (c > 0) line += ',';
            const auto& column = data.column(c);
            if (column.is_missing(r)) continue;
            if (column.is_numeric()) {
                line += format_number(column.number(r));
            } else {
                line += quote_field(column.token(r));
            }
        }
        if (labels) {
            if (data.n_columns() > 0) line += ',';
            line += label_token((*labels)[r]);
        }
        line += '\n';
        out << line;
    }
    if (!out) throw IoError("write failure");
}

}  // namespace

bool split_record(std::string_view line, std::vector<std::string>& fields) {
    fields.clear();
    std::size_t i = 0;
    while (true) {
        std::string field;
        if (i < line.size() && line[i] == '"') {
            ++i;
            bool closed = false;
            while (i < line.size()) {
                if (line[i] == '"') {
                    if (i + 1 < line.size() && line[i + 1] == '"') {
                        field += '"';
                        i += 2;
                        continue;
                    }
                    ++i;
                    closed = true;
                    break;
                }
                field += line[i++];
            }
            if (!closed) return false;
            // Anything between the closing quote and the separator is kept verbatim.
            while (i < line.size() && line[i] != ',') field += line[i++];
        } else {
            const auto comma = std::min(line.find(',', i), line.size());
            field.assign(line.substr(i, comma - i));
            i = comma;
        }
        fields.push_back(std::move(field));
        if (i >= line.size()) break;
        ++i;  // skip ','
    }
    return true;
}

std::string quote_field(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (const char ch : field) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

std::string format_number(double value) {
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

std::optional<double> parse_real(std::string_view text) {
    if (text.empty()) return std::nullopt;
    if (text.front() == '+') {
        text.remove_prefix(1);
        if (text.empty() || text.front() == '-' || text.front() == '+') return std::nullopt;
    }
    double value = 0.0;
    const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
    if (result.ec == std::errc::result_out_of_range) {
        // Overflowing literals such as 1e999 are non-finite.
        return std::numeric_limits<double>::infinity();
    }
    if (result.ec != std::errc() || result.ptr != text.data() + text.size()) return std::nullopt;
    return value;
}

Dataset load_table(std::istream& in, const LoadOptions& options) {
    const auto raw = read_raw(in);
    const auto schema = resolve_schema(raw, options);
    return build_dataset(raw, schema, schema.size());
}

LoadedTable load_table_with_optional_labels(std::istream& in, const LoadOptions& options) {
    auto raw = read_raw(in);
    LoadedTable loaded;
    const bool has_labels = !raw.header.empty() && raw.header.back() == kLabelColumn;
    if (has_labels) {
        const auto label_col = raw.header.size() - 1;
        loaded.labels = parse_labels(raw, label_col);
        raw.header.pop_back();
        for (auto& row : raw.rows) row.pop_back();
    }
    const auto schema = resolve_schema(raw, options);
    loaded.data = build_dataset(raw, schema, schema.size());
    return loaded;
}

LabeledDataset load_labeled(std::istream& in, const LoadOptions& options) {
    auto loaded = load_table_with_optional_labels(in, options);
    if (!loaded.labels) {
        throw InputError(fmt::format("labeled input must end with an '{}' column", kLabelColumn));
    }
    return LabeledDataset(std::move(loaded.data), std::move(*loaded.labels));
}

void write_table(std::ostream& out, const Dataset& data) { write_header_and_rows(out, data, nullptr); }

void write_labeled(std::ostream& out, const LabeledDataset& data) {
    write_header_and_rows(out, data.data, &data.labels);
}

}  // namespace secoda
