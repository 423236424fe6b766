#include "strata/io/csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>

#include "strata/errors.hpp"

namespace strata {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::optional<double> parseNumber(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

/// RFC 4180 records: quoted fields may hold commas, doubled quotes and newlines.
std::vector<std::vector<std::string>> parseRecords(std::string_view text, const std::string& source) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false, fieldStarted = false;
    int line = 1;
    auto endRecord = [&] {
        record.push_back(std::move(field));
        field.clear();
        const bool blank = record.size() == 1 && trim(record[0]).empty();
        if (!blank) records.push_back(std::move(record));
        record.clear();
        fieldStarted = false;
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
            continue;
        }
        if (c == '"' && trim(field).empty()) {
            field.clear();
            quoted = true;
            fieldStarted = true;
        } else if (c == ',') {
            record.push_back(std::move(field));
            field.clear();
            fieldStarted = true;
        } else if (c == '\n') {
            endRecord();
            ++line;
        } else {
            field += c;
            fieldStarted = true;
        }
    }
    if (quoted) throw IngestError(source + ":" + std::to_string(line) + ": unterminated quoted field");
    if (fieldStarted || !field.empty() || !record.empty()) endRecord();
    return records;
}

}  // namespace

DataRef parseCsv(std::string_view text, const std::vector<std::string>& numericColumns, Diagnostics* diagnostics,
                 const std::string& source) {
    if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
    auto records = parseRecords(text, source);
    if (records.empty()) throw IngestError(source + ": missing header row");
    std::vector<std::string> header;
    for (const auto& h : records[0]) header.emplace_back(trim(h));
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c].empty()) throw IngestError(source + ": empty column name at position " + std::to_string(c + 1));
        if (std::find(header.begin(), header.begin() + static_cast<long>(c), header[c]) !=
            header.begin() + static_cast<long>(c)) {
            throw IngestError(source + ": duplicate column '" + header[c] + "'");
        }
    }
    for (const auto& name : numericColumns) {
        if (std::find(header.begin(), header.end(), name) == header.end()) {
            throw IngestError(source + ": missing required column '" + name + "'");
        }
    }
    const std::size_t rows = records.size() - 1;
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() > header.size()) {
            throw IngestError(source + ": data row " + std::to_string(r) + " has " +
                              std::to_string(records[r].size()) + " fields, header has " +
                              std::to_string(header.size()));
        }
    }

    Diagnostics local;
    Diagnostics& diag = diagnostics ? *diagnostics : local;
    auto table = makeTable(rows);
    for (std::size_t c = 0; c < header.size(); ++c) {
        auto cell = [&](std::size_t r) -> std::string_view {
            return c < records[r + 1].size() ? trim(records[r + 1][c]) : std::string_view{};
        };
        const bool forced = std::find(numericColumns.begin(), numericColumns.end(), header[c]) != numericColumns.end();
        bool numeric = true;
        if (!forced) {
            for (std::size_t r = 0; r < rows && numeric; ++r) {
                if (!cell(r).empty() && !parseNumber(cell(r))) numeric = false;
            }
        }
        if (numeric) {
            std::vector<double> values(rows, 0.0);
            for (std::size_t r = 0; r < rows; ++r) {
                if (cell(r).empty()) {
                    diag["blankCells"] += 1;
                } else if (auto v = parseNumber(cell(r))) {
                    values[r] = *v;
                } else {
                    diag["nonNumericCells"] += 1;
                }
            }
            table->addNumeric(header[c], std::move(values));
        } else {
            std::vector<std::string> values(rows);
            for (std::size_t r = 0; r < rows; ++r) values[r] = std::string(cell(r));
            table->addString(header[c], std::move(values));
        }
    }
    return table;
}

std::string readTextFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError("cannot read file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

DataRef ingestCsv(const std::string& path, const std::vector<std::string>& numericColumns, Diagnostics* diagnostics) {
    return parseCsv(readTextFile(path), numericColumns, diagnostics, path);
}

}  // namespace strata
