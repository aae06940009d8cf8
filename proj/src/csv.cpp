#include "codasplr/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

namespace codasplr {

std::string fmt_double(double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

std::string fmt_int(long long value) { return std::to_string(value); }

namespace {

bool needs_quoting(const std::string& cell) {
    return cell.find_first_of(",\"\n\r") != std::string::npos;
}

void append_cell(std::string& out, const std::string& cell) {
    if (!needs_quoting(cell)) {
        out += cell;
        return;
    }
    out += '"';
    for (char ch : cell) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
}

}  // namespace

std::string to_csv(const Table& table) {
    std::string out;
    auto append_row = [&out](const std::vector<std::string>& row) {
        for (size_t c = 0; c < row.size(); ++c) {
            if (c > 0) out += ',';
            append_cell(out, row[c]);
        }
        out += '\n';
    };
    append_row(table.header);
    for (const auto& row : table.rows) append_row(row);
    return out;
}

Table parse_csv(const std::string& text) {
    Table table;
    bool have_header = false;
    std::vector<std::string> row;
    std::string cell;
    bool in_quotes = false;
    bool row_started = false;  // any cell boundary or character seen on this line
    size_t line = 1, col = 1;

    auto fail = [&](const std::string& what) -> void {
        throw Error(ErrorKind::ParseError,
                    what + " at line " + std::to_string(line) + ", column " + std::to_string(col));
    };
    auto end_cell = [&]() {
        row.push_back(std::move(cell));
        cell.clear();
    };
    auto end_row = [&]() {
        if (!row_started) return;  // blank line
        end_cell();
        if (!have_header) {
            table.header = std::move(row);
            have_header = true;
        } else {
            if (row.size() != table.header.size())
                fail("row with " + std::to_string(row.size()) + " cells, expected " +
                     std::to_string(table.header.size()));
            table.rows.push_back(std::move(row));
        }
        row.clear();
        row_started = false;
    };

    for (size_t pos = 0; pos < text.size(); ++pos) {
        const char ch = text[pos];
        if (in_quotes) {
            if (ch == '"') {
                if (pos + 1 < text.size() && text[pos + 1] == '"') {
                    cell += '"';
                    ++pos;
                    col += 2;
                } else {
                    in_quotes = false;
                    ++col;
                }
            } else {
                cell += ch;
                if (ch == '\n') {
                    ++line;
                    col = 1;
                } else {
                    ++col;
                }
            }
            continue;
        }
        switch (ch) {
            case '"':
                if (!cell.empty()) fail("quote inside unquoted cell");
                in_quotes = true;
                row_started = true;
                ++col;
                break;
            case ',':
                end_cell();
                row_started = true;
                ++col;
                break;
            case '\r':
                ++col;
                break;
            case '\n':
                end_row();
                ++line;
                col = 1;
                break;
            default:
                cell += ch;
                row_started = true;
                ++col;
                break;
        }
    }
    if (in_quotes) fail("unterminated quoted cell");
    end_row();
    if (!have_header) throw Error(ErrorKind::ParseError, "empty CSV input");
    return table;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::IoError, "cannot open '" + path + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorKind::IoError, "write to '" + path + "' failed");
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, "cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw Error(ErrorKind::IoError, "read from '" + path + "' failed");
    return std::move(buf).str();
}

void write_csv_file(const std::string& path, const Table& table) {
    write_text_file(path, to_csv(table));
}

Table read_csv_file(const std::string& path) { return parse_csv(read_text_file(path)); }

CompositionMatrix ingest_csv(const std::string& path, bool id_column) {
    const Table table = read_csv_file(path);
    const size_t skip = id_column ? 1 : 0;
    if (table.header.size() <= skip)
        throw Error(ErrorKind::ParseError, "'" + path + "' has no part columns");
    const size_t D = table.header.size() - skip;
    if (table.rows.empty())
        throw Error(ErrorKind::ParseError, "'" + path + "' has a header but no data rows");

    std::vector<std::string> names(table.header.begin() + static_cast<std::ptrdiff_t>(skip),
                                   table.header.end());
    Eigen::MatrixXd values(static_cast<Eigen::Index>(table.rows.size()),
                           static_cast<Eigen::Index>(D));
    for (size_t r = 0; r < table.rows.size(); ++r)
        for (size_t c = 0; c < D; ++c) {
            const std::string& cell = table.rows[r][c + skip];
            double parsed = 0.0;
            const char* begin = cell.data();
            const char* end = begin + cell.size();
            const auto res = std::from_chars(begin, end, parsed);
            if (res.ec != std::errc() || res.ptr != end)
                throw Error(ErrorKind::ParseError,
                            "cell '" + cell + "' at data line " + std::to_string(r + 2) +
                                ", column " + std::to_string(c + skip + 1) + " of '" + path +
                                "' is not a number");
            values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = parsed;
        }

    return validate_composition(std::move(values), std::move(names));
}

}  // namespace codasplr
