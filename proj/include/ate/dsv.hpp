#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace ate {

// Delimiter-separated table with a mandatory header row. The delimiter is
// auto-detected from the header: tab if the header contains one, else comma.
// Fields may be RFC 4180 quoted (needed for BLS CSV exports whose text fields
// contain commas). Leading lines starting with '#' are treated as a comment
// block (provenance headers on re-parsed artifacts) and skipped.
struct DsvRow {
    std::size_t line = 0; // 1-based line number of the row start in the source
    std::vector<std::string> fields;
};

struct DsvTable {
    char delimiter = '\t';
    std::vector<std::string> columns;
    std::vector<DsvRow> rows;

    // Index of a header column; -1 when absent.
    int column_index(const std::string& name) const;
};

DsvTable read_dsv(std::istream& in, const std::string& source_name = "<stream>");
DsvTable read_dsv_file(const std::string& path);

// Writes with the given delimiter, quoting fields that contain the delimiter,
// quotes, or newlines.
void write_dsv(std::ostream& out, const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows, char delimiter = '\t');

} // namespace ate
