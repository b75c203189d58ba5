#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dpag::data {

// RFC-4180 reader: quoted fields, embedded commas/quotes/newlines, CRLF.
// Unquoted fields are trimmed of surrounding spaces (ADULT ships with
// ", "-separated cells).
std::vector<std::vector<std::string>> read_csv(std::istream& in);
std::vector<std::vector<std::string>> read_csv_file(const std::string& path);

void write_csv_row(std::ostream& out, const std::vector<std::string>& row);

}  // namespace dpag::data
