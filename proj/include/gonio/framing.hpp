#pragma once

#include "gonio/audio_ingest.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace gonio {

struct FrameSpec {
    std::size_t frame_len = 2048;
    std::size_t max_frames = 500;

    /// Throws std::invalid_argument unless frame_len >= 2 and max_frames >= 1.
    void validate() const;
};

/// One analysis window. The spans view the AudioBuffer the frame was cut
/// from and are only valid while that buffer is alive.
struct StereoFrame {
    std::span<const double> left;
    std::span<const double> right;
    std::size_t index = 0;

    std::size_t size() const noexcept { return left.size(); }
};

/// Placement of the analysis window inside a buffer.
struct FrameWindow {
    std::size_t count = 0;
    std::size_t offset = 0;
};

/// n = min(max_frames, len / frame_len); offset = (len - n * frame_len) / 2.
/// Throws TooShort when the buffer holds less than one frame.
FrameWindow plan_frames(std::size_t buffer_len, const FrameSpec& spec);

/// Cuts the centered run of non-overlapping frames described by plan_frames.
std::vector<StereoFrame> extract_frames(const AudioBuffer& buf, const FrameSpec& spec);

} // namespace gonio
