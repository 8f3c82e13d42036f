#include "gonio/framing.hpp"

#include "gonio/errors.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace gonio {

void FrameSpec::validate() const
{
    if (frame_len < 2)
        throw std::invalid_argument("frame_len must be at least 2");
    if (max_frames < 1)
        throw std::invalid_argument("max_frames must be at least 1");
}

FrameWindow plan_frames(std::size_t buffer_len, const FrameSpec& spec)
{
    spec.validate();
    if (buffer_len < spec.frame_len)
        throw TooShort("buffer of " + std::to_string(buffer_len) + " samples is shorter than one " +
                       std::to_string(spec.frame_len) + "-sample frame");
    FrameWindow w;
    w.count = std::min(spec.max_frames, buffer_len / spec.frame_len);
    w.offset = (buffer_len - w.count * spec.frame_len) / 2;
    return w;
}

std::vector<StereoFrame> extract_frames(const AudioBuffer& buf, const FrameSpec& spec)
{
    if (buf.left.size() != buf.right.size())
        throw std::invalid_argument("channel lengths differ");
    const FrameWindow w = plan_frames(buf.size(), spec);
    const std::span<const double> left(buf.left);
    const std::span<const double> right(buf.right);

    std::vector<StereoFrame> frames;
    frames.reserve(w.count);
    for (std::size_t i = 0; i < w.count; ++i) {
        const std::size_t start = w.offset + i * spec.frame_len;
        frames.push_back({left.subspan(start, spec.frame_len), right.subspan(start, spec.frame_len), i});
    }
    return frames;
}

} // namespace gonio
