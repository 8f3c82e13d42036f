#pragma once

// Shared CSV dialect: comma delimiter, '\n' line endings, RFC-4180 quoting
// only for fields containing a comma, quote, CR or LF.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace gonio::csv {

/// Shortest decimal that round-trips to the same double ('.' separator,
/// lowercase exponent). Byte-stable across runs.
std::string format_double(double v);

/// Parses a full field as a finite double; returns false on any leftover
/// characters or a non-numeric field.
bool parse_double(std::string_view s, double& out);
bool parse_size(std::string_view s, std::size_t& out);

std::string quote_field(std::string_view field);

/// Reads one logical record (quoted fields may span lines). Returns false at
/// end of input. `line` is advanced by the number of physical lines read.
bool read_record(std::istream& in, std::vector<std::string>& fields, std::size_t& line);

void write_record(std::ostream& out, const std::vector<std::string>& fields);

} // namespace gonio::csv
