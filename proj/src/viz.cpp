#include "gonio/viz.hpp"

#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

namespace gonio {

namespace {

using svg::num;

// Dark blue to yellow.
constexpr std::array<Rgb, 5> kViridis = {{{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
constexpr std::array<Rgb, 3> kCoolwarm = {{{59, 76, 192}, {221, 221, 221}, {180, 4, 38}}};

// Palette for classes without an explicit colour.
constexpr std::array<const char*, 10> kPalette = {"#ff7f0e", "#9467bd", "#1f77b4", "#2ca02c", "#d62728",
                                                  "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"};

constexpr const char* kSongPointColor = "#e41a1c";

template <std::size_t N>
Rgb interpolate(const std::array<Rgb, N>& stops, double t)
{
    t = std::clamp(t, 0.0, 1.0);
    const double pos = t * static_cast<double>(N - 1);
    const auto i = std::min(static_cast<std::size_t>(pos), N - 2);
    const double f = pos - static_cast<double>(i);
    auto mix = [f](int a, int b) { return static_cast<int>(std::lround(a + (b - a) * f)); };
    return {mix(stops[i].r, stops[i + 1].r), mix(stops[i].g, stops[i + 1].g), mix(stops[i].b, stops[i + 1].b)};
}

struct Range {
    double lo = 0.0;
    double hi = 1.0;
};

Range value_range(std::span<const double> v)
{
    if (v.empty())
        return {0.0, 0.0};
    auto [mn, mx] = std::minmax_element(v.begin(), v.end());
    return {*mn, *mx};
}

// Position of v within r as a fraction; a flat range maps everything to 0.
double fraction(double v, const Range& r) { return r.hi > r.lo ? (v - r.lo) / (r.hi - r.lo) : 0.0; }

double nice_step(double span, int target_ticks)
{
    const double raw = span / target_ticks;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double norm = raw / mag;
    double nice = 10.0;
    if (norm <= 1.0)
        nice = 1.0;
    else if (norm <= 2.0)
        nice = 2.0;
    else if (norm <= 5.0)
        nice = 5.0;
    return nice * mag;
}

Range padded(Range r, Range fallback)
{
    if (!(r.hi >= r.lo))
        return fallback;
    const double span = r.hi - r.lo;
    const double pad = span > 0.0 ? 0.08 * span : std::max(0.05, 0.1 * std::abs(r.lo));
    return {r.lo - pad, r.hi + pad};
}

std::string tick_label(double v, double step)
{
    const int decimals = std::clamp(static_cast<int>(std::ceil(-std::log10(step))), 0, 6);
    return num(v, decimals);
}

/// Vertical colour legend built from a linear gradient.
void color_legend(svg::Writer& w, const std::string& id, const std::string& map, double x, double y, double width,
                  double height, const Range& range, double font)
{
    std::string defs = "<defs><linearGradient id=\"" + id + "\" x1=\"0\" y1=\"1\" x2=\"0\" y2=\"0\">";
    constexpr int kStops = 9;
    for (int i = 0; i < kStops; ++i) {
        const double t = static_cast<double>(i) / (kStops - 1);
        defs += "<stop offset=\"" + num(t, 3) + "\" stop-color=\"" + colormap(map, t).hex() + "\"/>";
    }
    defs += "</linearGradient></defs>\n";
    w.raw(defs);
    w.rect(x, y, width, height, "url(#" + id + ")", "stroke=\"#333333\" stroke-width=\"0.5\" class=\"legend\"");
    w.text(x + width + 4, y + font, num(range.hi, 3), font);
    w.text(x + width + 4, y + height, num(range.lo, 3), font);
}

struct Layout {
    double left, top, width, height;
};

} // namespace

void PlotStyle::validate() const
{
    if (!(width > 0.0) || !(height > 0.0))
        throw std::invalid_argument("plot size must be positive");
    if (!(label_font_size > 0.0))
        throw std::invalid_argument("label font size must be positive");
    if (color_map != "viridis" && color_map != "coolwarm")
        throw std::invalid_argument("unknown colour map '" + color_map + "'");
}

std::string Rgb::hex() const
{
    constexpr char digits[] = "0123456789abcdef";
    std::string s = "#";
    for (int v : {r, g, b}) {
        v = std::clamp(v, 0, 255);
        s += digits[v >> 4];
        s += digits[v & 15];
    }
    return s;
}

Rgb colormap(const std::string& name, double t)
{
    if (name == "viridis")
        return interpolate(kViridis, t);
    if (name == "coolwarm")
        return interpolate(kCoolwarm, t);
    throw std::invalid_argument("unknown colour map '" + name + "'");
}

std::string correlation_color(double correlation)
{
    if (correlation >= 0.5)
        return "#2ca02c";
    if (correlation >= 0.0)
        return "#e6c619";
    return "#d62728";
}

std::array<double, 2> goniometer_point(double left, double right)
{
    constexpr double k = std::numbers::sqrt2 / 2.0;
    return {k * (right - left), k * (left + right)};
}

std::map<std::string, std::string> resolve_class_colors(const PlotStyle& style, const LabelMap& labels)
{
    std::map<std::string, std::string> colors = style.class_colors;
    std::set<std::string> classes;
    for (const auto& [id, cls] : labels)
        classes.insert(cls);
    std::size_t next = 0;
    for (const auto& cls : classes)
        if (!colors.contains(cls))
            colors[cls] = kPalette[next++ % kPalette.size()];
    return colors;
}

std::string plot_goniometer(const StereoFrame& frame, const FrameFeatures& features, const PlotStyle& style)
{
    style.validate();
    const double font = style.label_font_size;
    const double bar_w = 24.0;
    const double bar_gap = 48.0;
    const double margin = 20.0 + font;
    const double side = std::min(style.height - 2 * margin, style.width - 2 * margin - bar_gap - bar_w - 40.0);
    if (side <= 0.0)
        throw std::invalid_argument("plot too small for a goniometer");
    const double cx = margin + side / 2.0;
    const double cy = margin + side / 2.0;
    // A full-scale corner of the L/R square lands on the panel edge.
    const double scale = side / 2.0 / std::numbers::sqrt2;
    auto to_screen = [&](double l, double r) {
        const auto p = goniometer_point(std::clamp(l, -1.0, 1.0), std::clamp(r, -1.0, 1.0));
        return std::array<double, 2>{cx + scale * p[0], cy - scale * p[1]};
    };

    svg::Writer w(style.width, style.height);
    w.rect(0, 0, style.width, style.height, "#ffffff");
    w.text(margin, margin - 6, "phase scope " + num(features.phase_scope, 4) + "   correlation " +
                                   num(features.channel_correlation, 3) +
                                   (features.degenerate_correlation ? " (degenerate)" : ""),
           font);

    // 20 x 20 sub-squares of the L/R square, drawn in the rotated frame.
    w.open_group("class=\"grid\" stroke-linecap=\"round\"");
    for (int i = 0; i <= 20; ++i) {
        const double v = -1.0 + 0.1 * i;
        const bool edge = i == 0 || i == 20;
        const char* colour = edge ? "#555555" : "#dddddd";
        const double width = edge ? 1.0 : 0.5;
        auto a = to_screen(v, -1.0), b = to_screen(v, 1.0);
        w.line(a[0], a[1], b[0], b[1], colour, width);
        a = to_screen(-1.0, v);
        b = to_screen(1.0, v);
        w.line(a[0], a[1], b[0], b[1], colour, width);
    }
    w.close_group();

    // Axes: L and R diagonals, mono (M) vertical, side (S) horizontal.
    w.open_group("class=\"axes\"");
    auto l_end = to_screen(1.0, 0.0), r_end = to_screen(0.0, 1.0);
    auto l_neg = to_screen(-1.0, 0.0), r_neg = to_screen(0.0, -1.0);
    w.line(l_neg[0], l_neg[1], l_end[0], l_end[1], "#999999", 0.75);
    w.line(r_neg[0], r_neg[1], r_end[0], r_end[1], "#999999", 0.75);
    w.line(cx, cy - side / 2.0, cx, cy + side / 2.0, "#bbbbbb", 0.5, "stroke-dasharray=\"3,3\"");
    w.line(cx - side / 2.0, cy, cx + side / 2.0, cy, "#bbbbbb", 0.5, "stroke-dasharray=\"3,3\"");
    w.text(l_end[0] - 4, l_end[1] - 4, "L", font + 2, "end");
    w.text(r_end[0] + 4, r_end[1] - 4, "R", font + 2, "start");
    w.text(cx + 4, cy - side / 2.0 + font, "M", font, "start",
           "fill=\"#777777\"");
    w.close_group();

    // Point cloud; opacity runs 0.1 -> 1.0 from first to last sample.
    w.open_group("class=\"points\" fill=\"#7b3294\"");
    const std::size_t n = frame.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double opacity = n > 1 ? 0.1 + 0.9 * static_cast<double>(i) / static_cast<double>(n - 1) : 1.0;
        const auto p = to_screen(frame.left[i], frame.right[i]);
        w.circle(p[0], p[1], 1.2, "#7b3294", "fill-opacity=\"" + num(opacity, 4) + "\"");
    }
    w.close_group();

    // Correlation bar spanning [-1, 1], filled from 0 to the value.
    const double bx = margin + side + bar_gap;
    const double top = margin;
    const double bottom = margin + side;
    auto bar_y = [&](double c) { return bottom - (std::clamp(c, -1.0, 1.0) + 1.0) / 2.0 * (bottom - top); };
    const double c = features.channel_correlation;
    w.open_group("class=\"correlation-bar\"");
    w.rect(bx, top, bar_w, bottom - top, "#f4f4f4", "stroke=\"#555555\" stroke-width=\"1.00\"");
    const double y0 = bar_y(0.0), yc = bar_y(c);
    w.rect(bx, std::min(y0, yc), bar_w, std::abs(y0 - yc), correlation_color(c), "class=\"bar-fill\"");
    w.line(bx - 4, yc, bx + bar_w + 4, yc, "#000000", 2.0, "class=\"bar-value\"");
    for (double tick : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
        const double y = bar_y(tick);
        w.line(bx + bar_w, y, bx + bar_w + 4, y, "#555555", 1.0);
        w.text(bx + bar_w + 6, y + font / 3.0, num(tick, 1), font);
    }
    w.close_group();
    return w.finish();
}

std::string plot_scatter(std::span<const SongFeatures> songs, const LabelMap& labels, const PlotStyle& style)
{
    style.validate();
    const double font = style.label_font_size;
    const auto colors = resolve_class_colors(style, labels);
    const bool any_unlabeled = std::any_of(songs.begin(), songs.end(),
                                           [&](const SongFeatures& s) { return !labels.contains(s.source_id); });

    const Layout plot{60.0, 30.0, style.width - 60.0 - 150.0, style.height - 30.0 - 55.0};
    if (plot.width <= 0.0 || plot.height <= 0.0)
        throw std::invalid_argument("plot too small for a scatter plot");

    std::vector<double> xs, ys;
    for (const auto& s : songs) {
        xs.push_back(s.mean_phase_scope);
        ys.push_back(s.mean_channel_correlation);
    }
    const Range xr = songs.empty() ? Range{0.0, 441.0 / 400.0} : padded(value_range(xs), {0.0, 1.0});
    const Range yr = songs.empty() ? Range{-1.0, 1.0} : padded(value_range(ys), {-1.0, 1.0});
    auto sx = [&](double v) { return plot.left + (v - xr.lo) / (xr.hi - xr.lo) * plot.width; };
    auto sy = [&](double v) { return plot.top + plot.height - (v - yr.lo) / (yr.hi - yr.lo) * plot.height; };

    svg::Writer w(style.width, style.height);
    w.rect(0, 0, style.width, style.height, "#ffffff");

    w.open_group("class=\"axes\"");
    const double xstep = nice_step(xr.hi - xr.lo, 5);
    for (double t = std::ceil(xr.lo / xstep) * xstep; t <= xr.hi + 1e-12; t += xstep) {
        w.line(sx(t), plot.top, sx(t), plot.top + plot.height, "#eeeeee", 1.0);
        w.line(sx(t), plot.top + plot.height, sx(t), plot.top + plot.height + 4, "#333333", 1.0);
        w.text(sx(t), plot.top + plot.height + 6 + font, tick_label(t, xstep), font, "middle");
    }
    const double ystep = nice_step(yr.hi - yr.lo, 5);
    for (double t = std::ceil(yr.lo / ystep) * ystep; t <= yr.hi + 1e-12; t += ystep) {
        w.line(plot.left, sy(t), plot.left + plot.width, sy(t), "#eeeeee", 1.0);
        w.line(plot.left - 4, sy(t), plot.left, sy(t), "#333333", 1.0);
        w.text(plot.left - 6, sy(t) + font / 3.0, tick_label(t, ystep), font, "end");
    }
    w.rect(plot.left, plot.top, plot.width, plot.height, "none", "stroke=\"#333333\" stroke-width=\"1.00\"");
    w.text(plot.left + plot.width / 2.0, style.height - 12, "mean phase scope", font + 1, "middle");
    const double ylab_x = 16.0, ylab_y = plot.top + plot.height / 2.0;
    w.text(ylab_x, ylab_y, "mean channel correlation", font + 1, "middle",
           "transform=\"rotate(-90 " + num(ylab_x) + " " + num(ylab_y) + ")\"");
    w.close_group();

    w.open_group("class=\"songs\"");
    for (const auto& s : songs) {
        auto it = labels.find(s.source_id);
        const std::string& colour = it == labels.end() ? style.default_color : colors.at(it->second);
        w.circle_titled(sx(s.mean_phase_scope), sy(s.mean_channel_correlation), 4.0, colour, s.source_id,
                        "class=\"song\" stroke=\"#222222\" stroke-width=\"0.50\"");
    }
    w.close_group();

    // Legend: one entry per class in sorted order, then unlabeled.
    w.open_group("class=\"legend\"");
    double ly = plot.top + 10;
    const double lx = plot.left + plot.width + 20;
    std::set<std::string> classes;
    for (const auto& [id, cls] : labels)
        classes.insert(cls);
    for (const auto& cls : classes) {
        w.rect(lx, ly - 8, 10, 10, colors.at(cls));
        w.text(lx + 16, ly + 1, cls, font);
        ly += font + 8;
    }
    if (any_unlabeled) {
        w.rect(lx, ly - 8, 10, 10, style.default_color);
        w.text(lx + 16, ly + 1, "unlabeled", font);
    }
    w.close_group();
    return w.finish();
}

std::string plot_umatrix(const SomModel& model, const UMatrix& umatrix, std::span<const SongFeatures> songs,
                         const LabelMap& labels, const PlotStyle& style)
{
    style.validate();
    if (umatrix.rows != model.config.grid_rows || umatrix.cols != model.config.grid_cols)
        throw std::invalid_argument("U-matrix shape does not match the model grid");
    if (!songs.empty() && model.dim != 2)
        throw std::invalid_argument("song overlay needs a two-feature model");

    const double font = style.label_font_size;
    const double legend_w = 90.0;
    const double margin = 20.0;
    const double cell = std::min((style.width - 2 * margin - legend_w) / static_cast<double>(umatrix.cols),
                                 (style.height - 2 * margin - font) / static_cast<double>(umatrix.rows));
    if (cell <= 0.0)
        throw std::invalid_argument("plot too small for the U-matrix");
    const double ox = margin, oy = margin + font;
    const Range range = value_range(umatrix.values);
    const auto colors = resolve_class_colors(style, labels);

    svg::Writer w(style.width, style.height);
    w.rect(0, 0, style.width, style.height, "#ffffff");
    w.text(ox, oy - 6, "U-matrix", font + 1);

    w.open_group("class=\"heatmap\" shape-rendering=\"crispEdges\"");
    for (std::size_t r = 0; r < umatrix.rows; ++r)
        for (std::size_t c = 0; c < umatrix.cols; ++c)
            w.rect(ox + c * cell, oy + r * cell, cell, cell,
                   colormap(style.color_map, fraction(umatrix.at(r, c), range)).hex(), "class=\"cell\"");
    w.close_group();

    color_legend(w, "umatrix-scale", style.color_map, ox + umatrix.cols * cell + 16, oy, 14,
                 umatrix.rows * cell, range, font);

    if (!songs.empty()) {
        Dataset points(model.dim);
        for (const auto& s : songs) {
            const double raw[] = {s.mean_phase_scope, s.mean_channel_correlation};
            points.push_back(model.scaling.to_normalized(raw));
        }
        const auto hits = bmu_batch(model, points);

        // Songs sharing a BMU are spread on a small ring in input order.
        std::map<std::size_t, std::vector<std::size_t>> by_cell;
        for (std::size_t i = 0; i < hits.size(); ++i)
            by_cell[hits[i].row * umatrix.cols + hits[i].col].push_back(i);

        w.open_group("class=\"songs\"");
        for (const auto& [cell_id, members] : by_cell) {
            const double ccx = ox + (static_cast<double>(cell_id % umatrix.cols) + 0.5) * cell;
            const double ccy = oy + (static_cast<double>(cell_id / umatrix.cols) + 0.5) * cell;
            for (std::size_t k = 0; k < members.size(); ++k) {
                double px = ccx, py = ccy;
                if (members.size() > 1) {
                    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) /
                                         static_cast<double>(members.size());
                    px += 0.3 * cell * std::sin(angle);
                    py -= 0.3 * cell * std::cos(angle);
                }
                const auto& song = songs[members[k]];
                auto it = labels.find(song.source_id);
                const std::string label_colour = it == labels.end() ? "#000000" : colors.at(it->second);
                w.circle_titled(px, py, std::max(1.5, cell * 0.12), kSongPointColor, song.source_id,
                                "class=\"song\"");
                w.text(px + cell * 0.15, py - cell * 0.15, song.source_id, font * 0.8, "start",
                       "class=\"song-label\" fill=\"" + svg::escape(label_colour) + "\"");
            }
        }
        w.close_group();
    }
    return w.finish();
}

std::string plot_component_planes(const SomModel& model, const PlotStyle& style)
{
    style.validate();
    if (model.dim < 1)
        throw std::invalid_argument("model has no components");
    const double font = style.label_font_size;
    const double margin = 20.0;
    const double legend_w = 70.0;
    const double panel_w = (style.width - margin) / static_cast<double>(model.dim);
    const std::size_t rows = model.config.grid_rows, cols = model.config.grid_cols;
    const double cell = std::min((panel_w - margin - legend_w) / static_cast<double>(cols),
                                 (style.height - 2 * margin - 2 * font) / static_cast<double>(rows));
    if (cell <= 0.0)
        throw std::invalid_argument("plot too small for the component planes");

    svg::Writer w(style.width, style.height);
    w.rect(0, 0, style.width, style.height, "#ffffff");
    for (std::size_t d = 0; d < model.dim; ++d) {
        const Grid plane = component_plane(model, d);
        const Range range = value_range(plane.values);
        const double ox = margin + static_cast<double>(d) * panel_w;
        const double oy = margin + 2 * font;
        w.open_group("class=\"panel\"");
        w.text(ox, oy - 8, model.scaling.names[d], font + 2, "start", "class=\"panel-title\"");
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c)
                w.rect(ox + c * cell, oy + r * cell, cell, cell,
                       colormap(style.color_map, fraction(plane.at(r, c), range)).hex(),
                       "class=\"cell\" shape-rendering=\"crispEdges\"");
        color_legend(w, "plane-scale-" + std::to_string(d), style.color_map, ox + cols * cell + 10, oy, 12,
                     rows * cell, range, font);
        w.close_group();
    }
    return w.finish();
}

} // namespace gonio
