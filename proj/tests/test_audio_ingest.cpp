#include "gonio/audio_ingest.hpp"
#include "gonio/errors.hpp"

#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <fstream>

using namespace gonio;

namespace {

std::vector<std::uint8_t> wav_of(std::vector<std::vector<double>> channels, SampleFormat fmt,
                                 std::uint32_t rate = 22050)
{
    return encode_wav(channels, rate, fmt);
}

// Raw 16-bit stereo file built byte by byte, independent of encode_wav.
std::vector<std::uint8_t> pcm16_file(std::initializer_list<std::int16_t> interleaved)
{
    std::vector<std::uint8_t> b;
    auto u32 = [&](std::uint32_t v) {
        for (int i = 0; i < 4; ++i)
            b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    };
    auto u16 = [&](std::uint16_t v) {
        b.push_back(static_cast<std::uint8_t>(v));
        b.push_back(static_cast<std::uint8_t>(v >> 8));
    };
    const auto data = static_cast<std::uint32_t>(interleaved.size() * 2);
    b.insert(b.end(), {'R', 'I', 'F', 'F'});
    u32(36 + data);
    b.insert(b.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
    u32(16);
    u16(1);
    u16(2);
    u32(44100);
    u32(44100 * 4);
    u16(4);
    u16(16);
    b.insert(b.end(), {'d', 'a', 't', 'a'});
    u32(data);
    for (auto s : interleaved)
        u16(static_cast<std::uint16_t>(s));
    return b;
}

double rms(std::span<const double> v)
{
    double s = 0.0;
    for (double x : v)
        s += x * x;
    return std::sqrt(s / static_cast<double>(v.size()));
}

} // namespace

TEST_CASE("16-bit full-scale frame scales by 32768")
{
    const auto buf = decode_wav_bytes(pcm16_file({32767, -32768}), "a");
    REQUIRE(buf.size() == 1);
    CHECK(buf.left[0] == 32767.0 / 32768.0);
    CHECK(buf.right[0] == -1.0);
    CHECK(buf.sample_rate == 44100);
}

TEST_CASE("mono file is rejected as NotStereo")
{
    const auto bytes = wav_of({{0.1, 0.2, 0.3}}, SampleFormat::Pcm16);
    CHECK_THROWS_AS(decode_wav_bytes(bytes, "m"), NotStereo);
    try {
        decode_wav_bytes(bytes, "m");
    } catch (const NotStereo& e) {
        CHECK(e.channels() == 1);
    }
    const auto surround = wav_of({{0.1}, {0.1}, {0.1}}, SampleFormat::Pcm16);
    CHECK_THROWS_AS(decode_wav_bytes(surround, "s"), NotStereo);
}

TEST_CASE("float samples pass through unchanged")
{
    const auto f32 = decode_wav_bytes(wav_of({{0.5}, {-0.25}}, SampleFormat::Float32), "f");
    CHECK(f32.left[0] == 0.5);
    CHECK(f32.right[0] == -0.25);

    // Over-full-scale float is kept at decode.
    const auto f64 = decode_wav_bytes(wav_of({{1.5, 0.1}, {-2.0, 0.2}}, SampleFormat::Float64), "f");
    CHECK(f64.left[0] == 1.5);
    CHECK(f64.right[0] == -2.0);
    CHECK(f64.left[1] == 0.1);
}

TEST_CASE("24- and 32-bit integer PCM decode within one LSB")
{
    const std::vector<double> l = {0.0, 0.5, -0.5, 0.999, -1.0};
    const std::vector<double> r = {0.25, -0.75, 0.125, -0.999, 0.3};
    for (auto [fmt, lsb] : {std::pair{SampleFormat::Pcm24, 1.0 / 8388608.0},
                            std::pair{SampleFormat::Pcm32, 1.0 / 2147483648.0},
                            std::pair{SampleFormat::Pcm16, 1.0 / 32768.0}}) {
        const auto buf = decode_wav_bytes(wav_of({l, r}, fmt), "x");
        REQUIRE(buf.size() == l.size());
        for (std::size_t i = 0; i < l.size(); ++i) {
            CHECK(std::abs(buf.left[i] - l[i]) <= lsb);
            CHECK(std::abs(buf.right[i] - r[i]) <= lsb);
        }
    }
}

TEST_CASE("integer decode stays within [-1, 1]")
{
    for (auto fmt : {SampleFormat::Pcm16, SampleFormat::Pcm24, SampleFormat::Pcm32}) {
        const auto buf = decode_wav_bytes(wav_of({{5.0, -5.0, 1.0}, {-1.0, 1.0, 0.0}}, fmt), "x");
        for (std::size_t i = 0; i < buf.size(); ++i) {
            CHECK(buf.left[i] >= -1.0);
            CHECK(buf.left[i] <= 1.0);
            CHECK(buf.right[i] >= -1.0);
            CHECK(buf.right[i] <= 1.0);
        }
    }
}

TEST_CASE("channel order is preserved; swapping channels in the file swaps the buffer")
{
    const std::vector<double> a = {0.1, 0.2, 0.3}, b = {-0.4, -0.5, -0.6};
    const auto ab = decode_wav_bytes(wav_of({a, b}, SampleFormat::Float32), "ab");
    const auto ba = decode_wav_bytes(wav_of({b, a}, SampleFormat::Float32), "ba");
    CHECK(ab.left == ba.right);
    CHECK(ab.right == ba.left);
}

TEST_CASE("unsupported encodings and corrupt files")
{
    SUBCASE("8-bit PCM")
    {
        auto bytes = pcm16_file({1, 2});
        bytes[34] = 8;  // bits per sample
        bytes[32] = 2;  // block align
        CHECK_THROWS_AS(decode_wav_bytes(bytes, "x"), UnsupportedEncoding);
    }
    SUBCASE("A-law")
    {
        auto bytes = pcm16_file({1, 2});
        bytes[20] = 6;
        CHECK_THROWS_AS(decode_wav_bytes(bytes, "x"), UnsupportedEncoding);
    }
    SUBCASE("not RIFF")
    {
        auto bytes = pcm16_file({1, 2});
        bytes[0] = 'X';
        CHECK_THROWS_AS(decode_wav_bytes(bytes, "x"), CorruptFile);
    }
    SUBCASE("truncated header")
    {
        auto bytes = pcm16_file({1, 2});
        bytes.resize(30);
        CHECK_THROWS_AS(decode_wav_bytes(bytes, "x"), CorruptFile);
    }
    SUBCASE("no samples")
    {
        auto bytes = pcm16_file({});
        CHECK_THROWS_AS(decode_wav_bytes(bytes, "x"), CorruptFile);
    }
    SUBCASE("non-finite float sample")
    {
        auto bytes = wav_of({{0.0}, {0.0}}, SampleFormat::Float32);
        const float nan = std::nanf("");
        std::memcpy(bytes.data() + 44, &nan, 4);
        CHECK_THROWS_AS(decode_wav_bytes(bytes, "x"), CorruptFile);
    }
}

TEST_CASE("extra chunks before data are skipped; odd chunk sizes are padded")
{
    auto base = pcm16_file({100, -100, 200, -200});
    std::vector<std::uint8_t> bytes(base.begin(), base.begin() + 36);
    // "LIST" chunk with an odd 3-byte body plus one pad byte.
    bytes.insert(bytes.end(), {'L', 'I', 'S', 'T', 3, 0, 0, 0, 'a', 'b', 'c', 0});
    bytes.insert(bytes.end(), base.begin() + 36, base.end());
    const auto buf = decode_wav_bytes(bytes, "x");
    REQUIRE(buf.size() == 2);
    CHECK(buf.left[1] == 200.0 / 32768.0);
}

TEST_CASE("WAVE_FORMAT_EXTENSIBLE float is accepted")
{
    auto plain = wav_of({{0.5, 0.25}, {-0.5, -0.25}}, SampleFormat::Float32);
    std::vector<std::uint8_t> bytes(plain.begin(), plain.begin() + 12);
    const std::uint8_t fmt[] = {'f', 'm', 't', ' ', 40, 0, 0, 0,
                                0xFE, 0xFF, 2, 0, 0x22, 0x56, 0, 0,  // tag, channels, rate 22050
                                0x10, 0xB1, 2, 0, 8, 0, 32, 0,       // byte rate, align, bits
                                22, 0, 32, 0, 3, 0, 0, 0,            // cbSize, valid bits, mask
                                3, 0, 0, 0, 0, 0, 0x10, 0, 0x80, 0, 0, 0xAA, 0, 0x38, 0x9B, 0x71};
    bytes.insert(bytes.end(), std::begin(fmt), std::end(fmt));
    bytes.insert(bytes.end(), plain.begin() + 36, plain.end());
    const auto buf = decode_wav_bytes(bytes, "x");
    CHECK(buf.sample_rate == 22050);
    CHECK(buf.left == std::vector<double>{0.5, 0.25});
}

TEST_CASE("decode_wav reads a file and names the source by its stem")
{
    oracle::TempDir dir("ingest");
    const auto buf = oracle::stereo({0.1, 0.2}, {0.3, 0.4}, 44100, "ignored");
    write_wav(dir / "My Song.wav", buf, SampleFormat::Float64);
    const auto back = decode_wav(dir / "My Song.wav");
    CHECK(back.source_id == "My Song");
    CHECK(back.left == buf.left);
    CHECK(back.right == buf.right);
    CHECK(back.sample_rate == 44100);
    CHECK_THROWS_AS(decode_wav(dir / "missing.wav"), CorruptFile);
}

TEST_CASE("resample at matching rate is an exact copy and idempotent")
{
    const auto buf = oracle::stereo(oracle::uniform_noise(1000, 1), oracle::uniform_noise(1000, 2));
    const auto same = resample(buf, 22050);
    CHECK(same.left == buf.left);
    CHECK(same.right == buf.right);
    CHECK(same.sample_rate == 22050);

    const auto down = resample(oracle::stereo(buf.left, buf.right, 44100), 22050);
    const auto again = resample(down, 22050);
    CHECK(again.left == down.left);
    CHECK(again.right == down.right);
}

TEST_CASE("resample output length is round(n * target / source)")
{
    const auto one_second = oracle::stereo(std::vector<double>(44100, 0.0), std::vector<double>(44100, 0.0), 44100);
    CHECK(resample(one_second, 22050).size() == 22050);
    CHECK(resample_channel(std::vector<double>(1001), 44100, 22050).size() == 501);  // 500.5 rounds up
    CHECK(resample_channel(std::vector<double>(1000), 48000, 22050).size() == 459);  // 459.375
    CHECK(resample_channel(std::vector<double>(100), 22050, 44100).size() == 200);
    CHECK_THROWS_AS(resample(one_second, 0), std::invalid_argument);
}

TEST_CASE("1 kHz sine survives 44.1 kHz -> 22.05 kHz within 0.5 dB")
{
    const std::size_t n_in = 44100;
    const auto in = oracle::sine(n_in, 1000.0, 44100.0);
    const auto out = resample_channel(in, 44100, 22050);
    const auto direct = oracle::sine(out.size(), 1000.0, 22050.0);
    REQUIRE(out.size() == 22050);

    const std::size_t lo = out.size() / 20, hi = out.size() - out.size() / 20;
    const std::span<const double> got(out.data() + lo, hi - lo), want(direct.data() + lo, hi - lo);
    const double db = 20.0 * std::log10(rms(got) / rms(want));
    CHECK(std::abs(db) < 0.5);
    double max_err = 0.0;
    for (std::size_t i = 0; i < got.size(); ++i)
        max_err = std::max(max_err, std::abs(got[i] - want[i]));
    CHECK(max_err < 0.06);
}

TEST_CASE("content above the new Nyquist rate is attenuated")
{
    // 15 kHz at 44.1 kHz aliases to 7.05 kHz without filtering.
    const auto in = oracle::sine(44100, 15000.0, 44100.0);
    const auto out = resample_channel(in, 44100, 22050);
    const std::span<const double> mid(out.data() + 1000, out.size() - 2000);
    CHECK(20.0 * std::log10(rms(mid) / (1.0 / std::sqrt(2.0))) < -60.0);
}

TEST_CASE("upsampling and non-integer ratios preserve a low tone")
{
    for (std::uint32_t src : {11025u, 48000u, 32000u}) {
        const auto in = oracle::sine(src, 440.0, src);
        const auto out = resample_channel(in, src, 22050);
        const auto direct = oracle::sine(out.size(), 440.0, 22050.0);
        double max_err = 0.0;
        for (std::size_t i = out.size() / 20; i < out.size() - out.size() / 20; ++i)
            max_err = std::max(max_err, std::abs(out[i] - direct[i]));
        CHECK_MESSAGE(max_err < 0.02, "source rate " << src);
    }
}
