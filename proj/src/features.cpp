#include "gonio/features.hpp"

#include <algorithm>
#include <bitset>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gonio {

int bin_index(double x) noexcept
{
    const double v = std::clamp(x, -1.0, 1.0) * 10.0;
    double r = std::round(v);
    // std::round breaks ties away from zero; ties go to the even neighbour.
    if (std::abs(v - std::trunc(v)) == 0.5)
        r = 2.0 * std::round(v / 2.0);
    return static_cast<int>(r);
}

double phase_scope(std::span<const double> left, std::span<const double> right)
{
    if (left.size() != right.size())
        throw std::invalid_argument("phase_scope: channel lengths differ");
    if (left.empty())
        throw std::invalid_argument("phase_scope: empty frame");

    constexpr int offset = kBinsPerAxis / 2;
    std::bitset<kBinsPerAxis * kBinsPerAxis> occupied;
    for (std::size_t i = 0; i < left.size(); ++i) {
        const int bl = bin_index(left[i]) + offset;
        const int br = bin_index(right[i]) + offset;
        occupied.set(static_cast<std::size_t>(bl * kBinsPerAxis + br));
    }
    return static_cast<double>(occupied.count()) / kPhaseScopeDivisor;
}

Correlation channel_correlation(std::span<const double> left, std::span<const double> right)
{
    if (left.size() != right.size())
        throw std::invalid_argument("channel_correlation: channel lengths differ");
    if (left.size() < 2)
        throw std::invalid_argument("channel_correlation: need at least two samples");

    // Single-pass co-moment update (Welford).
    double mean_l = 0.0, mean_r = 0.0;
    double m2_l = 0.0, m2_r = 0.0, co = 0.0;
    for (std::size_t i = 0; i < left.size(); ++i) {
        const double n = static_cast<double>(i + 1);
        const double dl = left[i] - mean_l;
        const double dr = right[i] - mean_r;
        mean_l += dl / n;
        mean_r += dr / n;
        m2_l += dl * (left[i] - mean_l);
        m2_r += dr * (right[i] - mean_r);
        co += dl * (right[i] - mean_r);
    }

    if (m2_l <= 0.0 || m2_r <= 0.0)
        return {0.0, true};

    double denom = std::sqrt(m2_l * m2_r);
    if (!(denom > 0.0) || !std::isfinite(denom))
        denom = std::sqrt(m2_l) * std::sqrt(m2_r);
    return {std::clamp(co / denom, -1.0, 1.0), false};
}

FrameFeatures frame_features(const StereoFrame& f)
{
    const Correlation c = channel_correlation(f);
    return {phase_scope(f), c.value, c.degenerate, f.index};
}

std::vector<FrameFeatures> extract_features(std::span<const StereoFrame> frames)
{
    // Exceptions must not escape the parallel region.
    for (const auto& f : frames)
        if (f.left.size() != f.right.size() || f.left.size() < 2)
            throw std::invalid_argument("extract_features: frame " + std::to_string(f.index) +
                                        " needs two equal channels of at least two samples");

    std::vector<FrameFeatures> out(frames.size());
    const auto n = static_cast<std::ptrdiff_t>(frames.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] = frame_features(frames[static_cast<std::size_t>(i)]);
    return out;
}

std::vector<FrameFeatures> extract_features_serial(std::span<const StereoFrame> frames)
{
    std::vector<FrameFeatures> out;
    out.reserve(frames.size());
    for (const auto& f : frames)
        out.push_back(frame_features(f));
    return out;
}

} // namespace gonio
