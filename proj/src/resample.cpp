#include "gonio/audio_ingest.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace gonio {

namespace {

// Kaiser beta for roughly 80 dB stopband attenuation.
constexpr double kKaiserBeta = 8.0;
// Passband edge as a fraction of the lower of the two Nyquist rates.
constexpr double kRolloff = 0.9;
// Phase tables larger than this are replaced by on-the-fly evaluation.
constexpr std::uint64_t kMaxTablePhases = 4096;

double sinc(double x)
{
    if (x == 0.0)
        return 1.0;
    const double px = std::numbers::pi * x;
    return std::sin(px) / px;
}

class PolyphaseKernel {
public:
    PolyphaseKernel(std::uint32_t source_rate, std::uint32_t target_rate)
    {
        const std::uint32_t g = std::gcd(source_rate, target_rate);
        up_ = target_rate / g;
        down_ = source_rate / g;
        const double scale = std::min(1.0, static_cast<double>(target_rate) / source_rate);
        cutoff_ = 0.5 * scale * kRolloff;
        // At least 64 taps per phase, widened when decimating so the
        // transition band stays narrow relative to the output rate.
        half_width_ = std::max<std::int64_t>(32, static_cast<std::int64_t>(std::ceil(24.0 / scale)));
        inv_i0_beta_ = 1.0 / std::cyl_bessel_i(0.0, kKaiserBeta);
        if (up_ <= kMaxTablePhases) {
            table_.resize(static_cast<std::size_t>(up_ * taps()));
            for (std::uint64_t p = 0; p < up_; ++p)
                fill(p, std::span<double>(table_).subspan(p * taps(), taps()));
        }
    }

    std::uint64_t up() const { return up_; }
    std::uint64_t down() const { return down_; }
    std::size_t taps() const { return static_cast<std::size_t>(2 * half_width_); }
    std::int64_t half_width() const { return half_width_; }

    // Coefficients for input samples k0-hw+1 .. k0+hw at fractional phase p/up.
    std::span<const double> phase(std::uint64_t p, std::vector<double>& scratch) const
    {
        if (!table_.empty())
            return std::span<const double>(table_).subspan(p * taps(), taps());
        scratch.resize(taps());
        fill(p, scratch);
        return scratch;
    }

private:
    void fill(std::uint64_t p, std::span<double> out) const
    {
        const double frac = static_cast<double>(p) / static_cast<double>(up_);
        double sum = 0.0;
        for (std::size_t t = 0; t < out.size(); ++t) {
            const double d = static_cast<double>(static_cast<std::int64_t>(t) - half_width_ + 1) - frac;
            const double w = d / static_cast<double>(half_width_);
            const double window = w * w >= 1.0 ? 0.0
                                               : std::cyl_bessel_i(0.0, kKaiserBeta * std::sqrt(1.0 - w * w)) *
                                                     inv_i0_beta_;
            out[t] = 2.0 * cutoff_ * sinc(2.0 * cutoff_ * d) * window;
            sum += out[t];
        }
        // Unity DC gain for every phase.
        for (double& c : out)
            c /= sum;
    }

    std::uint64_t up_ = 1;
    std::uint64_t down_ = 1;
    double cutoff_ = 0.5;
    std::int64_t half_width_ = 32;
    double inv_i0_beta_ = 1.0;
    std::vector<double> table_;
};

} // namespace

std::vector<double> resample_channel(std::span<const double> input, std::uint32_t source_rate,
                                     std::uint32_t target_rate)
{
    if (source_rate == 0 || target_rate == 0)
        throw std::invalid_argument("resample: sample rates must be positive");
    if (source_rate == target_rate)
        return {input.begin(), input.end()};

    const std::uint64_t n_in = input.size();
    const std::uint64_t n_out = (2 * n_in * target_rate + source_rate) / (2 * static_cast<std::uint64_t>(source_rate));
    std::vector<double> out(n_out);
    if (n_out == 0)
        return out;

    const PolyphaseKernel kernel(source_rate, target_rate);
    const auto n_in_signed = static_cast<std::int64_t>(n_in);
    const std::int64_t hw = kernel.half_width();
    const auto n_out_signed = static_cast<std::int64_t>(n_out);

#pragma omp parallel
    {
        std::vector<double> scratch;
#pragma omp for schedule(static)
        for (std::int64_t n = 0; n < n_out_signed; ++n) {
            const std::uint64_t pos = static_cast<std::uint64_t>(n) * kernel.down();
            const auto k0 = static_cast<std::int64_t>(pos / kernel.up());
            const std::uint64_t p = pos % kernel.up();
            const auto coeffs = kernel.phase(p, scratch);
            const std::int64_t first = k0 - hw + 1;
            double acc = 0.0;
            if (first >= 0 && first + static_cast<std::int64_t>(coeffs.size()) <= n_in_signed) {
                const double* x = input.data() + first;
                for (std::size_t t = 0; t < coeffs.size(); ++t)
                    acc += coeffs[t] * x[t];
            } else {
                for (std::size_t t = 0; t < coeffs.size(); ++t) {
                    const std::int64_t k = first + static_cast<std::int64_t>(t);
                    if (k >= 0 && k < n_in_signed)
                        acc += coeffs[t] * input[static_cast<std::size_t>(k)];
                }
            }
            out[static_cast<std::size_t>(n)] = acc;
        }
    }
    return out;
}

AudioBuffer resample(const AudioBuffer& buf, std::uint32_t target_rate)
{
    if (target_rate == 0)
        throw std::invalid_argument("resample: target rate must be positive");
    if (buf.sample_rate == target_rate)
        return buf;
    AudioBuffer out;
    out.sample_rate = target_rate;
    out.source_id = buf.source_id;
    out.left = resample_channel(buf.left, buf.sample_rate, target_rate);
    out.right = resample_channel(buf.right, buf.sample_rate, target_rate);
    return out;
}

} // namespace gonio
