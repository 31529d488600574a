#include "bandpick/csv.hpp"

#include <charconv>
#include <fstream>
#include <system_error>

#include "bandpick/errors.hpp"

namespace bandpick {
namespace csv {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

Row split_line(const std::string& line) {
    Row out;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(field);
            field.clear();
        } else if (c == '\r') {
            // tolerate CRLF
        } else {
            field += c;
        }
    }
    out.push_back(field);
    return out;
}

std::string quote_field(const std::string& field) {
    bool needs = field.find_first_of(",\"\n") != std::string::npos;
    if (!needs) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

std::vector<Row> read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open CSV file: " + path);
    std::vector<Row> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        rows.push_back(split_line(line));
    }
    return rows;
}

void write_file(const std::string& path, const std::vector<Row>& rows) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot write CSV file: " + path);
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << quote_field(row[i]);
        }
        out << '\n';
    }
    if (!out) throw Error("write failed: " + path);
}

double to_double(const std::string& s) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw DataError("not a number in CSV: '" + s + "'");
    return v;
}

long to_long(const std::string& s) {
    long v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw DataError("not an integer in CSV: '" + s + "'");
    return v;
}

}  // namespace csv
}  // namespace bandpick
