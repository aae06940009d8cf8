#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "codasplr/coda.hpp"

namespace codasplr {

/// In-memory tabular payload: a header plus rows of preformatted cells.
/// Numbers go through fmt_double/fmt_int so the textual form is the
/// canonical one; writing and re-reading a Table reproduces it exactly.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    bool operator==(const Table&) const = default;
};

/// Shortest decimal form that parses back to the identical double.
std::string fmt_double(double value);
std::string fmt_int(long long value);

/// RFC-style CSV text: comma separated, '\n' line ends, cells quoted only
/// when they contain a comma, quote, or newline. UTF-8 pass-through, '.'
/// decimal marks, no thousands separators.
std::string to_csv(const Table& table);

/// Inverse of to_csv. Throws ParseError with 1-based line/column context on
/// malformed quoting or ragged rows.
Table parse_csv(const std::string& text);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

void write_csv_file(const std::string& path, const Table& table);
Table read_csv_file(const std::string& path);

/// Reads a composition from CSV: header row of part names, one observation
/// per row. With id_column = true the first column holds row identifiers and
/// is skipped. Cells must parse fully as numbers (ParseError with line and
/// column) and the result must pass validate_composition, so zeros and
/// negative values are rejected up front rather than imputed.
CompositionMatrix ingest_csv(const std::string& path, bool id_column = false);

}  // namespace codasplr
