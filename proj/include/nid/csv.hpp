#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace nid::csv {

using Row = std::vector<std::string>;

struct Table {
    Row header;
    std::vector<Row> rows;
    std::vector<std::size_t> line_numbers; // 1-based source line of each row
};

// RFC 4180 quoting, "\n" line endings.
std::string escape(const std::string& field);
void write_row(std::ostream& os, const Row& row);

Table read(const std::filesystem::path& path);
Row parse_line(const std::string& line);

// Column position by name or DataError naming the file.
std::size_t column(const Table& t, const std::string& name, const std::filesystem::path& path);

} // namespace nid::csv
