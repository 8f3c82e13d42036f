#pragma once

#include "gonio/feature_store.hpp"
#include "gonio/features.hpp"
#include "gonio/framing.hpp"
#include "gonio/som.hpp"

#include <array>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace gonio {

struct PlotStyle {
    double width = 640.0;
    double height = 480.0;
    /// "viridis" (dark blue to yellow, default) or "coolwarm".
    std::string color_map = "viridis";
    double label_font_size = 10.0;
    /// Explicit colours per class; classes without one get palette colours
    /// in sorted class order.
    std::map<std::string, std::string> class_colors;
    std::string default_color = "#7f7f7f";

    /// Throws std::invalid_argument for non-positive sizes or an unknown map.
    void validate() const;
};

struct Rgb {
    int r = 0, g = 0, b = 0;
    std::string hex() const;
    friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Colour for t in [0, 1] (clamped) under the named map.
Rgb colormap(const std::string& name, double t);

/// Bar colour of the correlation meter: green >= 0.5, yellow in [0, 0.5), red below 0.
std::string correlation_color(double correlation);

/// Goniometer display coordinates of one sample pair: mono content lies on
/// the vertical axis, anti-phase content on the horizontal one, a left-only
/// signal points up-left.
std::array<double, 2> goniometer_point(double left, double right);

/// Class colour resolution used by the scatter and U-matrix plots.
std::map<std::string, std::string> resolve_class_colors(const PlotStyle& style, const LabelMap& labels);

std::string plot_goniometer(const StereoFrame& frame, const FrameFeatures& features, const PlotStyle& style = {});

/// Mean channel correlation over mean phase scope, one marker per song.
std::string plot_scatter(std::span<const SongFeatures> songs, const LabelMap& labels, const PlotStyle& style = {});

/// U-matrix heatmap with every song drawn at its BMU. The model must be
/// two-dimensional (mean phase scope, mean correlation) when songs are given.
std::string plot_umatrix(const SomModel& model, const UMatrix& umatrix, std::span<const SongFeatures> songs,
                         const LabelMap& labels, const PlotStyle& style = {});

/// One heatmap per weight dimension in original feature units, side by side.
std::string plot_component_planes(const SomModel& model, const PlotStyle& style = {});

} // namespace gonio
