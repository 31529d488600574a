#ifndef BANDPICK_CSV_HPP_
#define BANDPICK_CSV_HPP_

#include <charconv>
#include <string>
#include <vector>

namespace bandpick {
namespace csv {

using Row = std::vector<std::string>;

/// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

/// Splits one CSV line honoring double-quoted fields ("" escapes a quote).
Row split_line(const std::string& line);

/// Quotes a field if it contains a comma, quote, or newline.
std::string quote_field(const std::string& field);

/// Reads all rows from a file. Throws bandpick::Error on open failure.
std::vector<Row> read_file(const std::string& path);

/// Writes rows to a file, quoting fields as needed. Throws on open failure.
void write_file(const std::string& path, const std::vector<Row>& rows);

double to_double(const std::string& s);
long to_long(const std::string& s);

}  // namespace csv
}  // namespace bandpick

#endif  // BANDPICK_CSV_HPP_
