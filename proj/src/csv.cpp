#include "nid/csv.hpp"

#include <fstream>
#include <ostream>

#include "nid/common.hpp"

namespace nid::csv {

std::string escape(const std::string& field)
{
    if (field.find_first_of(",\"\n\r") == std::string::npos)
        return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_row(std::ostream& os, const Row& row)
{
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i)
            os << ',';
        os << escape(row[i]);
    }
    os << '\n';
}

Row parse_line(const std::string& line)
{
    Row out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(std::move(cur));
    return out;
}

Table read(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open " + path.string());
    Table t;
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r")
            continue;
        if (!have_header) {
            t.header = parse_line(line);
            have_header = true;
            continue;
        }
        Row r = parse_line(line);
        if (r.size() != t.header.size())
            throw DataError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                            std::to_string(t.header.size()) + " fields, got " + std::to_string(r.size()));
        t.rows.push_back(std::move(r));
        t.line_numbers.push_back(lineno);
    }
    if (!have_header)
        throw DataError(path.string() + ": missing header");
    return t;
}

std::size_t column(const Table& t, const std::string& name, const std::filesystem::path& path)
{
    for (std::size_t i = 0; i < t.header.size(); ++i)
        if (t.header[i] == name)
            return i;
    throw DataError(path.string() + ": missing column '" + name + "'");
}

} // namespace nid::csv
