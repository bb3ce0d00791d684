#include "ate/dsv.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "ate/error.hpp"

namespace ate {

namespace {

// Parses one logical record starting at stream position; quoted fields may
// span physical lines. Returns false at EOF with nothing read.
bool read_record(std::istream& in, char delim, std::vector<std::string>& fields,
                 std::size_t& line_counter, std::size_t& record_line) {
    fields.clear();
    int c = in.peek();
    if (c == EOF) return false;
    record_line = line_counter;

    std::string field;
    bool in_quotes = false;
    bool saw_any = false;
    while (true) {
        c = in.get();
        if (c == EOF) {
            if (in_quotes) throw Error("dsv: unterminated quoted field at line " +
                                       std::to_string(record_line));
            fields.push_back(std::move(field));
            return true;
        }
        saw_any = true;
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') { in.get(); field.push_back('"'); }
                else in_quotes = false;
            } else {
                if (c == '\n') ++line_counter;
                field.push_back(static_cast<char>(c));
            }
            continue;
        }
        if (c == '"' && field.empty()) { in_quotes = true; continue; }
        if (c == delim) { fields.push_back(std::move(field)); field.clear(); continue; }
        if (c == '\r') {
            if (in.peek() == '\n') in.get();
            ++line_counter;
            fields.push_back(std::move(field));
            return true;
        }
        if (c == '\n') {
            ++line_counter;
            fields.push_back(std::move(field));
            return true;
        }
        field.push_back(static_cast<char>(c));
    }
    (void)saw_any;
}

} // namespace

int DsvTable::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return static_cast<int>(i);
    return -1;
}

DsvTable read_dsv(std::istream& in, const std::string& source_name) {
    std::size_t line_counter = 1;

    // Skip the leading '#' comment block (provenance headers).
    while (in.peek() == '#') {
        std::string dummy;
        std::getline(in, dummy);
        ++line_counter;
    }

    std::string header;
    if (!std::getline(in, header))
        throw Error("dsv: " + source_name + ": empty input, header row is mandatory");
    if (!header.empty() && header.back() == '\r') header.pop_back();
    std::size_t header_line = line_counter;
    ++line_counter;

    DsvTable table;
    table.delimiter = header.find('\t') != std::string::npos ? '\t' : ',';

    {
        std::istringstream hs(header);
        std::size_t lc = header_line, rl = 0;
        std::vector<std::string> cols;
        if (!read_record(hs, table.delimiter, cols, lc, rl) || cols.empty())
            throw Error("dsv: " + source_name + ": malformed header row");
        table.columns = std::move(cols);
    }

    std::vector<std::string> fields;
    std::size_t record_line = 0;
    while (read_record(in, table.delimiter, fields, line_counter, record_line)) {
        if (fields.size() == 1 && fields[0].empty()) continue; // blank line
        DsvRow row;
        row.line = record_line;
        row.fields = std::move(fields);
        table.rows.push_back(std::move(row));
        fields = {};
    }
    return table;
}

DsvTable read_dsv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("dsv: cannot open file: " + path);
    return read_dsv(in, path);
}

namespace {

void write_field(std::ostream& out, const std::string& field, char delim) {
    bool needs_quote = field.find(delim) != std::string::npos ||
                       field.find('"') != std::string::npos ||
                       field.find('\n') != std::string::npos ||
                       field.find('\r') != std::string::npos;
    if (!needs_quote) { out << field; return; }
    out << '"';
    for (char c : field) {
        if (c == '"') out << "\"\"";
        else out << c;
    }
    out << '"';
}

} // namespace

void write_dsv(std::ostream& out, const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows, char delimiter) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) out << delimiter;
        write_field(out, columns[i], delimiter);
    }
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << delimiter;
            write_field(out, row[i], delimiter);
        }
        out << '\n';
    }
}

} // namespace ate
