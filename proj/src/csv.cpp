#include "gonio/csv.hpp"

#include "gonio/errors.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

namespace gonio::csv {

std::string format_double(double v)
{
    if (v == 0.0)
        v = 0.0; // folds -0 into 0
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc())
        throw std::runtime_error("format_double: to_chars failed");
    return {buf, end};
}

bool parse_double(std::string_view s, double& out)
{
    if (s.empty())
        return false;
    if (s.front() == '+')
        s.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

bool parse_size(std::string_view s, std::size_t& out)
{
    if (s.empty())
        return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

std::string quote_field(std::string_view field)
{
    if (field.find_first_of(",\"\r\n") == std::string_view::npos)
        return std::string(field);
    std::string q = "\"";
    for (char c : field) {
        if (c == '"')
            q += '"';
        q += c;
    }
    q += '"';
    return q;
}

bool read_record(std::istream& in, std::vector<std::string>& fields, std::size_t& line)
{
    fields.clear();
    std::string raw;
    if (!std::getline(in, raw))
        return false;
    ++line;

    std::string field;
    bool quoted = false;
    std::size_t i = 0;
    while (true) {
        if (i == raw.size()) {
            if (quoted) {
                // Quoted field continues on the next physical line.
                if (!std::getline(in, raw))
                    throw MalformedRow(line, "unterminated quoted field");
                ++line;
                field += '\n';
                i = 0;
                continue;
            }
            break;
        }
        const char c = raw[i++];
        if (quoted) {
            if (c == '"') {
                if (i < raw.size() && raw[i] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"' && field.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c == '\r' && i == raw.size()) {
            // tolerate CRLF input
        } else {
            field += c;
        }
    }
    fields.push_back(std::move(field));
    return true;
}

void write_record(std::ostream& out, const std::vector<std::string>& fields)
{
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i)
            out << ',';
        out << quote_field(fields[i]);
    }
    out << '\n';
}

} // namespace gonio::csv
