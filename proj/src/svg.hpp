#pragma once

// Minimal deterministic SVG 1.1 text builder used by the plot functions.

#include <string>
#include <string_view>

namespace gonio::svg {

/// Fixed-point decimal with `decimals` digits; -0 prints as 0.
std::string num(double v, int decimals = 2);

std::string escape(std::string_view text);

class Writer {
public:
    Writer(double width, double height);

    void rect(double x, double y, double w, double h, std::string_view fill, std::string_view extra = {});
    void line(double x1, double y1, double x2, double y2, std::string_view stroke, double width = 1.0,
              std::string_view extra = {});
    void circle(double cx, double cy, double r, std::string_view fill, std::string_view extra = {});
    void text(double x, double y, std::string_view content, double size, std::string_view anchor = "start",
              std::string_view extra = {});
    /// Circle with a <title> child carrying a tooltip.
    void circle_titled(double cx, double cy, double r, std::string_view fill, std::string_view title,
                       std::string_view extra = {});

    void open_group(std::string_view attrs);
    void close_group();
    void raw(std::string_view markup);

    /// Closes the root element and returns the document.
    std::string finish();

private:
    std::string out_;
};

} // namespace gonio::svg
