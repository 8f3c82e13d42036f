#include "svg.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace gonio::svg {

std::string num(double v, int decimals)
{
    if (!std::isfinite(v))
        throw std::invalid_argument("svg: non-finite coordinate");
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
    if (ec != std::errc())
        throw std::runtime_error("svg: number formatting failed");
    std::string s(buf, end);
    // "-0.00" and friends
    if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos)
        s.erase(0, 1);
    return s;
}

std::string escape(std::string_view text)
{
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default:
            // Control characters other than tab/newline are not allowed in XML 1.0.
            if (static_cast<unsigned char>(c) < 0x20 && c != '\t' && c != '\n' && c != '\r')
                out += ' ';
            else
                out += c;
        }
    }
    return out;
}

Writer::Writer(double width, double height)
{
    out_ = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out_ += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(width) + "\" height=\"" +
            num(height) + "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n";
}

void Writer::rect(double x, double y, double w, double h, std::string_view fill, std::string_view extra)
{
    out_ += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) + "\" height=\"" + num(h) +
            "\" fill=\"" + escape(fill) + "\"";
    if (!extra.empty())
        (out_ += ' ') += extra;
    out_ += "/>\n";
}

void Writer::line(double x1, double y1, double x2, double y2, std::string_view stroke, double width,
                  std::string_view extra)
{
    out_ += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" + num(y2) +
            "\" stroke=\"" + escape(stroke) + "\" stroke-width=\"" + num(width) + "\"";
    if (!extra.empty())
        (out_ += ' ') += extra;
    out_ += "/>\n";
}

void Writer::circle(double cx, double cy, double r, std::string_view fill, std::string_view extra)
{
    out_ += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" + num(r) + "\" fill=\"" +
            escape(fill) + "\"";
    if (!extra.empty())
        (out_ += ' ') += extra;
    out_ += "/>\n";
}

void Writer::circle_titled(double cx, double cy, double r, std::string_view fill, std::string_view title,
                           std::string_view extra)
{
    out_ += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" + num(r) + "\" fill=\"" +
            escape(fill) + "\"";
    if (!extra.empty())
        (out_ += ' ') += extra;
    out_ += "><title>" + escape(title) + "</title></circle>\n";
}

void Writer::text(double x, double y, std::string_view content, double size, std::string_view anchor,
                  std::string_view extra)
{
    out_ += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-family=\"sans-serif\" font-size=\"" + num(size) +
            "\" text-anchor=\"" + std::string(anchor) + "\"";
    if (!extra.empty())
        (out_ += ' ') += extra;
    out_ += ">" + escape(content) + "</text>\n";
}

void Writer::open_group(std::string_view attrs)
{
    out_ += "<g";
    if (!attrs.empty())
        (out_ += ' ') += attrs;
    out_ += ">\n";
}

void Writer::close_group() { out_ += "</g>\n"; }

void Writer::raw(std::string_view markup) { out_ += markup; }

std::string Writer::finish()
{
    out_ += "</svg>\n";
    return std::move(out_);
}

} // namespace gonio::svg
