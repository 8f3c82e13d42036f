#include "gonio/audio_ingest.hpp"

#include "gonio/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>

namespace gonio {

namespace {

constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatFloat = 0x0003;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t read_u16(std::span<const std::uint8_t> b, std::size_t at)
{
    return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

std::uint32_t read_u32(std::span<const std::uint8_t> b, std::size_t at)
{
    return static_cast<std::uint32_t>(b[at]) | (static_cast<std::uint32_t>(b[at + 1]) << 8) |
           (static_cast<std::uint32_t>(b[at + 2]) << 16) | (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

bool fourcc_is(std::span<const std::uint8_t> b, std::size_t at, const char* id)
{
    return std::memcmp(b.data() + at, id, 4) == 0;
}

struct FormatChunk {
    std::uint16_t tag = 0;
    std::uint16_t channels = 0;
    std::uint32_t sample_rate = 0;
    std::uint16_t block_align = 0;
    std::uint16_t bits = 0;
};

FormatChunk parse_fmt(std::span<const std::uint8_t> chunk)
{
    if (chunk.size() < 16)
        throw CorruptFile("fmt chunk shorter than 16 bytes");
    FormatChunk f;
    f.tag = read_u16(chunk, 0);
    f.channels = read_u16(chunk, 2);
    f.sample_rate = read_u32(chunk, 4);
    f.block_align = read_u16(chunk, 12);
    f.bits = read_u16(chunk, 14);
    if (f.tag == kFormatExtensible) {
        // cbSize(2) validBits(2) channelMask(4) subFormat GUID(16); the
        // first two GUID bytes carry the plain format tag.
        if (chunk.size() < 40)
            throw CorruptFile("WAVE_FORMAT_EXTENSIBLE fmt chunk truncated");
        f.tag = read_u16(chunk, 24);
    }
    return f;
}

SampleFormat classify(const FormatChunk& f)
{
    if (f.tag == kFormatPcm) {
        switch (f.bits) {
        case 16: return SampleFormat::Pcm16;
        case 24: return SampleFormat::Pcm24;
        case 32: return SampleFormat::Pcm32;
        default: break;
        }
    } else if (f.tag == kFormatFloat) {
        if (f.bits == 32)
            return SampleFormat::Float32;
        if (f.bits == 64)
            return SampleFormat::Float64;
    }
    throw UnsupportedEncoding("format tag " + std::to_string(f.tag) + " with " + std::to_string(f.bits) +
                              " bits per sample");
}

std::size_t bytes_per_sample(SampleFormat fmt)
{
    switch (fmt) {
    case SampleFormat::Pcm16: return 2;
    case SampleFormat::Pcm24: return 3;
    case SampleFormat::Pcm32: return 4;
    case SampleFormat::Float32: return 4;
    case SampleFormat::Float64: return 8;
    }
    return 0;
}

double decode_sample(const std::uint8_t* p, SampleFormat fmt)
{
    switch (fmt) {
    case SampleFormat::Pcm16: {
        auto v = static_cast<std::int16_t>(p[0] | (p[1] << 8));
        return v / 32768.0;
    }
    case SampleFormat::Pcm24: {
        std::int32_t v = p[0] | (p[1] << 8) | (p[2] << 16);
        if (v & 0x800000)
            v -= 0x1000000;
        return v / 8388608.0;
    }
    case SampleFormat::Pcm32: {
        auto v = static_cast<std::int32_t>(read_u32({p, 4}, 0));
        return v / 2147483648.0;
    }
    case SampleFormat::Float32: {
        return static_cast<double>(std::bit_cast<float>(read_u32({p, 4}, 0)));
    }
    case SampleFormat::Float64: {
        std::uint64_t bits = 0;
        for (int i = 7; i >= 0; --i)
            bits = (bits << 8) | p[i];
        return std::bit_cast<double>(bits);
    }
    }
    return 0.0;
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v)
{
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v)
{
    for (int i = 0; i < 4; ++i)
        out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

void put_sample(std::vector<std::uint8_t>& out, double x, SampleFormat fmt)
{
    auto to_int = [x](double full_scale) {
        double scaled = std::nearbyint(x * full_scale);
        return static_cast<std::int64_t>(std::clamp(scaled, -full_scale, full_scale - 1.0));
    };
    switch (fmt) {
    case SampleFormat::Pcm16: put_u16(out, static_cast<std::uint16_t>(to_int(32768.0))); break;
    case SampleFormat::Pcm24: {
        auto v = static_cast<std::uint32_t>(to_int(8388608.0));
        for (int i = 0; i < 3; ++i)
            out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
        break;
    }
    case SampleFormat::Pcm32: put_u32(out, static_cast<std::uint32_t>(to_int(2147483648.0))); break;
    case SampleFormat::Float32: put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(x))); break;
    case SampleFormat::Float64: {
        auto bits = std::bit_cast<std::uint64_t>(x);
        for (int i = 0; i < 8; ++i)
            out.push_back(static_cast<std::uint8_t>((bits >> (8 * i)) & 0xFF));
        break;
    }
    }
}

} // namespace

AudioBuffer decode_wav_bytes(std::span<const std::uint8_t> bytes, std::string source_id)
{
    if (bytes.size() < 12 || !fourcc_is(bytes, 0, "RIFF") || !fourcc_is(bytes, 8, "WAVE"))
        throw CorruptFile("missing RIFF/WAVE header");

    std::optional<FormatChunk> fmt;
    std::span<const std::uint8_t> data;
    bool have_data = false;

    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const std::uint32_t size = read_u32(bytes, pos + 4);
        const std::size_t body = pos + 8;
        std::size_t avail = bytes.size() - body;
        if (fourcc_is(bytes, pos, "fmt ")) {
            if (size > avail)
                throw CorruptFile("fmt chunk runs past end of file");
            fmt = parse_fmt(bytes.subspan(body, size));
        } else if (fourcc_is(bytes, pos, "data")) {
            // Streaming writers leave the size at 0 or 0xFFFFFFFF; a size
            // past the end is clamped to what is actually present.
            std::size_t n = (size == 0 || size > avail) ? avail : size;
            data = bytes.subspan(body, n);
            have_data = true;
            break;
        }
        // Chunks are word aligned.
        std::size_t next = body + static_cast<std::size_t>(size) + (size & 1u);
        if (next <= pos)
            throw CorruptFile("chunk size overflow");
        pos = next;
    }

    if (!fmt)
        throw CorruptFile("no fmt chunk");
    if (!have_data)
        throw CorruptFile("no data chunk");
    if (fmt->channels != 2)
        throw NotStereo(fmt->channels);
    if (fmt->sample_rate == 0)
        throw CorruptFile("sample rate is zero");

    const SampleFormat sf = classify(*fmt);
    const std::size_t width = bytes_per_sample(sf);
    const std::size_t frame_bytes = 2 * width;
    if (fmt->block_align != frame_bytes)
        throw CorruptFile("block align " + std::to_string(fmt->block_align) + " does not match sample format");

    const std::size_t frames = data.size() / frame_bytes;
    if (frames == 0)
        throw CorruptFile("data chunk holds no complete sample frame");

    AudioBuffer buf;
    buf.sample_rate = fmt->sample_rate;
    buf.source_id = std::move(source_id);
    buf.left.resize(frames);
    buf.right.resize(frames);
    const std::uint8_t* p = data.data();
    for (std::size_t i = 0; i < frames; ++i, p += frame_bytes) {
        buf.left[i] = decode_sample(p, sf);
        buf.right[i] = decode_sample(p + width, sf);
        if (!std::isfinite(buf.left[i]) || !std::isfinite(buf.right[i]))
            throw CorruptFile("non-finite sample at frame " + std::to_string(i));
    }
    return buf;
}

AudioBuffer decode_wav(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw CorruptFile("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_wav_bytes(bytes, path.stem().string());
}

std::vector<std::uint8_t> encode_wav(std::span<const std::vector<double>> channels, std::uint32_t sample_rate,
                                     SampleFormat format)
{
    if (channels.empty())
        throw std::invalid_argument("encode_wav: no channels");
    const std::size_t frames = channels.front().size();
    for (const auto& c : channels)
        if (c.size() != frames)
            throw std::invalid_argument("encode_wav: channel lengths differ");

    const bool is_float = format == SampleFormat::Float32 || format == SampleFormat::Float64;
    const auto width = static_cast<std::uint16_t>(bytes_per_sample(format));
    const auto n_ch = static_cast<std::uint16_t>(channels.size());
    const auto block = static_cast<std::uint16_t>(width * n_ch);
    const auto data_size = static_cast<std::uint32_t>(frames * block);

    std::vector<std::uint8_t> out;
    out.reserve(44 + data_size);
    out.insert(out.end(), {'R', 'I', 'F', 'F'});
    put_u32(out, 36 + data_size);
    out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
    put_u32(out, 16);
    put_u16(out, is_float ? kFormatFloat : kFormatPcm);
    put_u16(out, n_ch);
    put_u32(out, sample_rate);
    put_u32(out, sample_rate * block);
    put_u16(out, block);
    put_u16(out, static_cast<std::uint16_t>(width * 8));
    out.insert(out.end(), {'d', 'a', 't', 'a'});
    put_u32(out, data_size);
    for (std::size_t i = 0; i < frames; ++i)
        for (const auto& c : channels)
            put_sample(out, c[i], format);
    return out;
}

void write_wav(const std::filesystem::path& path, const AudioBuffer& buf, SampleFormat format)
{
    const std::vector<double> channels[] = {buf.left, buf.right};
    auto bytes = encode_wav(channels, buf.sample_rate, format);
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

} // namespace gonio
