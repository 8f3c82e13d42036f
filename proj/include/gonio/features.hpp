#pragma once

#include "gonio/framing.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace gonio {

/// Bins per axis of the phase plane: round(x * 10) over [-1, 1] gives -10..10.
inline constexpr int kBinsPerAxis = 21;
/// Divisor of the occupied-cell count. Kept at 20 x 20 even though the
/// rounding grid has 21 x 21 cells, so phase_scope can reach 441 / 400.
inline constexpr double kPhaseScopeDivisor = 400.0;

struct BinPair {
    int bin_l = 0;
    int bin_r = 0;
    friend bool operator==(const BinPair&, const BinPair&) = default;
};

struct Correlation {
    double value = 0.0;
    bool degenerate = false;
};

struct FrameFeatures {
    double phase_scope = 0.0;
    double channel_correlation = 0.0;
    bool degenerate_correlation = false;
    std::size_t frame_index = 0;

    friend bool operator==(const FrameFeatures&, const FrameFeatures&) = default;
};

/// Clamp to [-1, 1], scale by 10, round half to even.
int bin_index(double x) noexcept;

/// Fraction of occupied phase-plane cells: distinct (bin_l, bin_r) pairs / 400.
double phase_scope(std::span<const double> left, std::span<const double> right);
inline double phase_scope(const StereoFrame& f) { return phase_scope(f.left, f.right); }

/// Pearson correlation of left against right. Zero variance in either
/// channel yields {0, degenerate = true}.
Correlation channel_correlation(std::span<const double> left, std::span<const double> right);
inline Correlation channel_correlation(const StereoFrame& f) { return channel_correlation(f.left, f.right); }

FrameFeatures frame_features(const StereoFrame& f);

/// Per-frame features, OpenMP-parallel across frames. Output order follows
/// input order and matches extract_features_serial exactly.
std::vector<FrameFeatures> extract_features(std::span<const StereoFrame> frames);

/// Single-threaded reference for extract_features.
std::vector<FrameFeatures> extract_features_serial(std::span<const StereoFrame> frames);

} // namespace gonio
