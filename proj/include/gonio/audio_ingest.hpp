#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace gonio {

/// Two equally long channels of samples at a common rate. Integer PCM is
/// scaled into [-1, 1]; float PCM is kept as decoded.
struct AudioBuffer {
    std::vector<double> left;
    std::vector<double> right;
    std::uint32_t sample_rate = 0;
    std::string source_id;

    std::size_t size() const noexcept { return left.size(); }
    double duration_seconds() const noexcept
    {
        return sample_rate == 0 ? 0.0 : static_cast<double>(left.size()) / sample_rate;
    }
};

enum class SampleFormat { Pcm16, Pcm24, Pcm32, Float32, Float64 };

/// Decodes a little-endian RIFF/WAVE file with exactly two channels.
/// Throws NotStereo, UnsupportedEncoding or CorruptFile.
AudioBuffer decode_wav(const std::filesystem::path& path);

/// Same as decode_wav, for an in-memory image of the file.
AudioBuffer decode_wav_bytes(std::span<const std::uint8_t> bytes, std::string source_id);

/// Encodes interleaved channels as a canonical 44-byte-header WAV. Integer
/// formats clip to full scale. Used by tests and the synthetic corpus tools.
std::vector<std::uint8_t> encode_wav(std::span<const std::vector<double>> channels,
                                     std::uint32_t sample_rate, SampleFormat format);

void write_wav(const std::filesystem::path& path, const AudioBuffer& buf, SampleFormat format);

/// Band-limited rate conversion with a Kaiser-windowed sinc polyphase filter.
/// Output length is round(n * target / source). Matching rates return an
/// exact copy.
AudioBuffer resample(const AudioBuffer& buf, std::uint32_t target_rate);

/// Single-channel variant; `resample` runs this on both channels.
std::vector<double> resample_channel(std::span<const double> input, std::uint32_t source_rate,
                                     std::uint32_t target_rate);

} // namespace gonio
