#include "gonio/viz.hpp"

#include "support/oracles.hpp"
#include "support/xml.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace gonio;

namespace {

double attr(const xml::Attributes& a, const std::string& key) { return std::stod(a.at(key)); }

std::vector<xml::Attributes> points(const std::string& doc) { return xml::elements(doc, "circle"); }

xml::Attributes bar_fill(const std::string& doc)
{
    const auto bars = xml::with_class(xml::elements(doc, "rect"), "bar-fill");
    REQUIRE(bars.size() == 1);
    return bars.front();
}

std::string gonio_plot(const std::vector<double>& l, const std::vector<double>& r)
{
    const StereoFrame f{l, r, 0};
    return plot_goniometer(f, frame_features(f));
}

SomModel flat_model(std::size_t rows, std::size_t cols, double value)
{
    SomModel m;
    m.config.grid_rows = rows;
    m.config.grid_cols = cols;
    m.dim = 2;
    m.weights.assign(rows * cols * 2, value);
    m.scaling = FeatureScaling::identity(2);
    m.scaling.names = {"mean_phase_scope", "mean_channel_correlation"};
    return m;
}

} // namespace

TEST_CASE("goniometer point mapping")
{
    const double k = std::sqrt(2.0) / 2.0;
    const auto mono = goniometer_point(0.5, 0.5);
    CHECK(mono[0] == 0.0);
    CHECK(mono[1] == doctest::Approx(2 * k * 0.5));
    const auto side = goniometer_point(0.5, -0.5);
    CHECK(side[1] == 0.0);
    const auto left = goniometer_point(1.0, 0.0);
    CHECK(left[0] < 0.0);  // up-left
    CHECK(left[1] > 0.0);
    const auto right = goniometer_point(0.0, 1.0);
    CHECK(right[0] > 0.0);  // up-right
    CHECK(right[1] > 0.0);
}

TEST_CASE("correlation bar colours")
{
    CHECK(correlation_color(1.0) == "#2ca02c");
    CHECK(correlation_color(0.5) == "#2ca02c");
    CHECK(correlation_color(0.49) == "#e6c619");
    CHECK(correlation_color(0.0) == "#e6c619");
    CHECK(correlation_color(-0.01) == "#d62728");
}

TEST_CASE("goniometer: silent frame collapses to the origin with an empty bar")
{
    const std::vector<double> z(256, 0.0);
    const auto doc = gonio_plot(z, z);
    REQUIRE(xml::well_formed(doc));
    const auto pts = points(doc);
    REQUIRE(pts.size() == 256);
    for (const auto& p : pts) {
        CHECK(p.at("cx") == pts.front().at("cx"));
        CHECK(p.at("cy") == pts.front().at("cy"));
    }
    CHECK(attr(bar_fill(doc), "height") == 0.0);
}

TEST_CASE("goniometer: mono ramp is a vertical line, bar at +1")
{
    const auto ramp = oracle::ramp(512);
    const auto doc = gonio_plot(ramp, ramp);
    const auto pts = points(doc);
    REQUIRE(pts.size() == 512);
    std::set<std::string> xs;
    double ymin = 1e9, ymax = -1e9;
    for (const auto& p : pts) {
        xs.insert(p.at("cx"));
        ymin = std::min(ymin, attr(p, "cy"));
        ymax = std::max(ymax, attr(p, "cy"));
    }
    CHECK(xs.size() == 1);
    CHECK(ymax - ymin > 100.0);
    // Higher samples (later in the ramp) are drawn higher up.
    CHECK(attr(pts.back(), "cy") < attr(pts.front(), "cy"));

    const auto bar = bar_fill(doc);
    CHECK(bar.at("fill") == "#2ca02c");
    const auto frame_rect = xml::with_class(xml::elements(doc, "g"), "correlation-bar");
    REQUIRE(frame_rect.size() == 1);
    const auto value = xml::with_class(xml::elements(doc, "line"), "bar-value");
    REQUIRE(value.size() == 1);
    // +1 sits at the top of the bar: the fill starts where the value line is.
    CHECK(attr(value.front(), "y1") == doctest::Approx(attr(bar, "y")));
}

TEST_CASE("goniometer: anti-phase ramp is a horizontal line, bar at -1")
{
    const auto ramp = oracle::ramp(512);
    auto neg = ramp;
    for (auto& x : neg)
        x = -x;
    const auto doc = gonio_plot(ramp, neg);
    const auto pts = points(doc);
    std::set<std::string> ys;
    for (const auto& p : pts)
        ys.insert(p.at("cy"));
    CHECK(ys.size() == 1);

    const auto bar = bar_fill(doc);
    CHECK(bar.at("fill") == "#d62728");
    const auto value = xml::with_class(xml::elements(doc, "line"), "bar-value");
    CHECK(attr(value.front(), "y1") == doctest::Approx(attr(bar, "y") + attr(bar, "height")));
}

TEST_CASE("goniometer: opacity ramps linearly from 0.1 to 1")
{
    const auto noise = oracle::uniform_noise(101, 3);
    const auto pts = points(gonio_plot(noise, noise));
    REQUIRE(pts.size() == 101);
    CHECK(attr(pts.front(), "fill-opacity") == doctest::Approx(0.1));
    CHECK(attr(pts[50], "fill-opacity") == doctest::Approx(0.55));
    CHECK(attr(pts.back(), "fill-opacity") == doctest::Approx(1.0));
}

TEST_CASE("goniometer: full-scale points stay inside the canvas")
{
    const std::vector<double> l = {1, -1, 1, -1, 3}, r = {1, 1, -1, -1, -3};
    const PlotStyle style;
    for (const auto& p : points(gonio_plot(l, r))) {
        CHECK(attr(p, "cx") >= 0.0);
        CHECK(attr(p, "cx") <= style.width);
        CHECK(attr(p, "cy") >= 0.0);
        CHECK(attr(p, "cy") <= style.height);
    }
}

TEST_CASE("scatter: empty input gives axes only")
{
    const auto doc = plot_scatter({}, {});
    REQUIRE(xml::well_formed(doc));
    CHECK(xml::with_class(xml::elements(doc, "circle"), "song").empty());
    CHECK(xml::with_class(xml::elements(doc, "g"), "axes").size() == 1);
}

TEST_CASE("scatter: two songs land at ordered positions in class colours")
{
    const std::vector<SongFeatures> songs = {{"a", 0.1, 0.9, 0, 0, 10, 0}, {"b", 0.5, -0.2, 0, 0, 10, 0}};
    const LabelMap labels = {{"a", "hiphop"}, {"b", "classical"}};
    PlotStyle style;
    style.class_colors = {{"hiphop", "#111111"}, {"classical", "#222222"}};
    const auto doc = plot_scatter(songs, labels, style);
    REQUIRE(xml::well_formed(doc));
    const auto m = xml::with_class(xml::elements(doc, "circle"), "song");
    REQUIRE(m.size() == 2);
    CHECK(attr(m[0], "cx") < attr(m[1], "cx"));
    CHECK(attr(m[0], "cy") < attr(m[1], "cy"));  // higher correlation is higher up
    CHECK(m[0].at("fill") == "#111111");
    CHECK(m[1].at("fill") == "#222222");

    std::vector<std::string> texts;
    xml::elements(doc, "text", &texts);
    CHECK(std::count(texts.begin(), texts.end(), "hiphop") == 1);
    CHECK(std::count(texts.begin(), texts.end(), "classical") == 1);
}

TEST_CASE("scatter: unlabeled songs use the default colour")
{
    const std::vector<SongFeatures> songs = {{"x", 0.3, 0.3, 0, 0, 1, 0}};
    const auto doc = plot_scatter(songs, {});
    const auto m = xml::with_class(xml::elements(doc, "circle"), "song");
    REQUIRE(m.size() == 1);
    CHECK(m[0].at("fill") == PlotStyle{}.default_color);
}

TEST_CASE("umatrix: uniform matrix is a single colour")
{
    const auto model = flat_model(5, 5, 0.0);
    const auto doc = plot_umatrix(model, u_matrix(model), {}, {});
    REQUIRE(xml::well_formed(doc));
    const auto cells = xml::with_class(xml::elements(doc, "rect"), "cell");
    REQUIRE(cells.size() == 25);
    std::set<std::string> fills;
    for (const auto& c : cells)
        fills.insert(c.at("fill"));
    CHECK(fills.size() == 1);
}

TEST_CASE("umatrix: a song equal to a corner weight is drawn in that corner")
{
    auto model = flat_model(4, 6, 5.0);
    model.weight(3, 5)[0] = 0.2;
    model.weight(3, 5)[1] = 0.8;
    const std::vector<SongFeatures> songs = {{"corner & co", 0.2, 0.8, 0, 0, 1, 0}};
    const auto doc = plot_umatrix(model, u_matrix(model), songs, {});
    REQUIRE(xml::well_formed(doc));

    const auto cells = xml::with_class(xml::elements(doc, "rect"), "cell");
    const auto& corner = cells[3 * 6 + 5];
    const auto dots = xml::with_class(xml::elements(doc, "circle"), "song");
    REQUIRE(dots.size() == 1);
    const double x = attr(dots[0], "cx"), y = attr(dots[0], "cy");
    CHECK(x > attr(corner, "x"));
    CHECK(x < attr(corner, "x") + attr(corner, "width"));
    CHECK(y > attr(corner, "y"));
    CHECK(y < attr(corner, "y") + attr(corner, "height"));

    std::vector<std::string> texts;
    xml::elements(doc, "text", &texts);
    CHECK(std::count(texts.begin(), texts.end(), "corner & co") == 1);
}

TEST_CASE("umatrix: coincident songs are spread deterministically")
{
    const auto model = flat_model(3, 3, 0.0);
    const std::vector<SongFeatures> songs = {{"a", 0, 0, 0, 0, 1, 0}, {"b", 0, 0, 0, 0, 1, 0}, {"c", 0, 0, 0, 0, 1, 0}};
    const auto doc = plot_umatrix(model, u_matrix(model), songs, {});
    const auto dots = xml::with_class(xml::elements(doc, "circle"), "song");
    REQUIRE(dots.size() == 3);
    std::set<std::pair<std::string, std::string>> positions;
    for (const auto& d : dots)
        positions.insert({d.at("cx"), d.at("cy")});
    CHECK(positions.size() == 3);
    CHECK(doc == plot_umatrix(model, u_matrix(model), songs, {}));
}

TEST_CASE("component planes: one titled panel per dimension, flat model is one colour")
{
    const auto model = flat_model(4, 4, 1.0);
    const auto doc = plot_component_planes(model);
    REQUIRE(xml::well_formed(doc));
    const auto titles = xml::with_class(xml::elements(doc, "text"), "panel-title");
    CHECK(titles.size() == 2);
    const auto cells = xml::with_class(xml::elements(doc, "rect"), "cell");
    REQUIRE(cells.size() == 32);
    std::set<std::string> fills;
    for (const auto& c : cells)
        fills.insert(c.at("fill"));
    CHECK(fills.size() == 1);
    CHECK(xml::elements(doc, "linearGradient").size() == 2);
}

TEST_CASE("style validation and colour maps")
{
    PlotStyle s;
    s.color_map = "jet";
    CHECK_THROWS_AS(plot_scatter({}, {}, s), std::invalid_argument);
    s = {};
    s.width = 0;
    CHECK_THROWS_AS(plot_scatter({}, {}, s), std::invalid_argument);

    CHECK(colormap("viridis", 0.0).hex() == "#440154");
    CHECK(colormap("viridis", 1.0).hex() == "#fde725");
    CHECK(colormap("viridis", -3.0) == colormap("viridis", 0.0));
    CHECK(colormap("coolwarm", 0.5).hex() == "#dddddd");
}

TEST_CASE("property: every plot is well-formed and deterministic")
{
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        const auto l = oracle::uniform_noise(300, rng(), 1.5), r = oracle::uniform_noise(300, rng(), 0.2);
        const StereoFrame f{l, r, 0};
        const auto a = plot_goniometer(f, frame_features(f));
        CHECK(xml::well_formed(a));
        CHECK(a == plot_goniometer(f, frame_features(f)));

        std::vector<SongFeatures> songs;
        LabelMap labels;
        for (int i = 0; i < 10; ++i) {
            const std::string id = "<s" + std::to_string(i) + "\"&'>";
            songs.push_back({id, l[i] * l[i], r[i] * 4, 0, 0, 1, 0});
            if (i % 2)
                labels[id] = i % 4 == 1 ? "a<b" : "c&d";
        }
        CHECK(xml::well_formed(plot_scatter(songs, labels)));

        SomConfig cfg;
        cfg.grid_rows = 3 + trial % 4;
        cfg.grid_cols = 4;
        cfg.iterations = 3;
        Dataset data(2);
        for (const auto& s : songs) {
            const double p[] = {s.mean_phase_scope, s.mean_channel_correlation};
            data.push_back(p);
        }
        const auto z = normalize(data, {"x<", "y&"});
        const auto model = train(z.data, cfg, z.scaling);
        const auto um = plot_umatrix(model, u_matrix(model), songs, labels);
        std::string err;
        CHECK_MESSAGE(xml::well_formed(um, &err), err);
        CHECK(xml::well_formed(plot_component_planes(model)));
    }
}
