#include "vacrng/spectral.hpp"

#include "vacrng/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace vacrng {

std::complex<double> Spectrum::bin(std::size_t k) const {
    if (k == 0) {
        return dc;
    }
    if (k == block_length / 2) {
        return nyquist;
    }
    if (k > block_length / 2) {
        throw ConfigError("Spectrum::bin: index beyond Nyquist");
    }
    return amplitudes[k - 1];
}

BlockTransform::BlockTransform(std::size_t block_length, double sample_rate_hz)
    : dft_(block_length), sample_rate_hz_(sample_rate_hz),
      delta_f_(sample_rate_hz / static_cast<double>(block_length)), real_(block_length),
      half_(block_length / 2 + 1) {
    if (block_length < 4 || block_length % 2 != 0) {
        throw ConfigError("block length must be even and >= 4, got " + std::to_string(block_length));
    }
    if (!(sample_rate_hz > 0.0)) {
        throw ConfigError("sample rate must be positive");
    }
}

Spectrum BlockTransform::forward(std::span<const std::int8_t> block) {
    if (block.size() != real_.size()) {
        throw ConfigError("BlockTransform: block length " + std::to_string(block.size()) + " != " +
                          std::to_string(real_.size()));
    }
    for (std::size_t j = 0; j < block.size(); ++j) {
        real_[j] = block[j];
    }
    return forward(std::span<const double>(real_));
}

Spectrum BlockTransform::forward(std::span<const double> block) {
    dft_.forward(block, half_);
    const std::size_t n     = dft_.size();
    const double      scale = 1.0 / std::sqrt(static_cast<double>(n));
    Spectrum          s;
    s.block_length = n;
    s.delta_f      = delta_f_;
    s.dc           = half_[0].real() * scale;
    s.nyquist      = half_[n / 2].real() * scale;
    s.amplitudes.resize(n / 2 - 1);
    for (std::size_t k = 1; k < n / 2; ++k) {
        s.amplitudes[k - 1] = half_[k] * scale;
    }
    return s;
}

std::vector<double> BlockTransform::inverse(const Spectrum& spectrum) {
    const std::size_t n = dft_.size();
    if (spectrum.block_length != n || spectrum.amplitudes.size() != n / 2 - 1) {
        throw ConfigError("BlockTransform::inverse: spectrum length mismatch");
    }
    half_[0]     = spectrum.dc;
    half_[n / 2] = spectrum.nyquist;
    for (std::size_t k = 1; k < n / 2; ++k) {
        half_[k] = spectrum.amplitudes[k - 1];
    }
    std::vector<double> out(n);
    dft_.inverse(half_, out);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (auto& x : out) {
        x *= scale;
    }
    return out;
}

Spectrum dft_block(std::span<const std::int8_t> samples, double sample_rate_hz) {
    BlockTransform t(samples.size(), sample_rate_hz);
    return t.forward(samples);
}

Spectrum dft_block(const SampleBlock& block) {
    return dft_block(block.samples, block.sample_rate_hz);
}

void PsdAccumulator::add(const Spectrum& spectrum) {
    const std::size_t n = spectrum.block_length;
    if (count_ == 0 && sum_.empty()) {
        block_length_ = n;
        delta_f_      = spectrum.delta_f;
        sum_.assign(n / 2 + 1, 0.0);
    } else if (n != block_length_ || spectrum.delta_f != delta_f_) {
        throw DataError("accumulate_psd: spectra differ in block length or delta_f");
    }
    sum_[0] += spectrum.dc * spectrum.dc;
    for (std::size_t k = 1; k < n / 2; ++k) {
        sum_[k] += std::norm(spectrum.amplitudes[k - 1]);
    }
    sum_[n / 2] += spectrum.nyquist * spectrum.nyquist;
    ++count_;
}

void PsdAccumulator::merge(const PsdAccumulator& other) {
    if (other.count_ == 0) {
        return;
    }
    if (count_ == 0) {
        *this = other;
        return;
    }
    if (other.block_length_ != block_length_ || other.delta_f_ != delta_f_) {
        throw DataError("PsdAccumulator::merge: mismatched framing");
    }
    for (std::size_t k = 0; k < sum_.size(); ++k) {
        sum_[k] += other.sum_[k];
    }
    count_ += other.count_;
}

PsdEstimate PsdAccumulator::estimate() const {
    if (count_ == 0) {
        throw DataError("PSD estimate requested with no blocks accumulated");
    }
    PsdEstimate e;
    e.blocks_averaged = count_;
    e.delta_f         = delta_f_;
    e.power.resize(sum_.size());
    const double inv = 1.0 / static_cast<double>(count_);
    for (std::size_t k = 0; k < sum_.size(); ++k) {
        e.power[k] = sum_[k] * inv;
    }
    return e;
}

PsdEstimate accumulate_psd(std::span<const Spectrum> spectra) {
    PsdAccumulator acc;
    for (const auto& s : spectra) {
        acc.add(s);
    }
    return acc.estimate();
}

double to_decibel(double power, double reference) {
    if (!(power > 0.0) || !(reference > 0.0)) {
        throw ConfigError("to_decibel: power and reference must be positive");
    }
    return 10.0 * std::log10(power / reference);
}

double leak_kernel(double duration_s, double offset_hz) {
    if (!(duration_s > 0.0)) {
        throw ConfigError("leak_kernel: duration must be positive");
    }
    const double x = std::numbers::pi * duration_s * offset_hz;
    if (x == 0.0) {
        return duration_s;
    }
    return duration_s * std::sin(x) / x;
}

Framer::Framer(std::span<const std::int8_t> samples, std::size_t frame_length)
    : samples_(samples), length_(frame_length), count_(frame_length == 0 ? 0 : samples.size() / frame_length) {
    if (frame_length == 0) {
        throw ConfigError("Framer: frame length must be positive");
    }
}

std::span<const std::int8_t> Framer::frame(std::size_t i) const {
    if (i >= count_) {
        throw ConfigError("Framer: frame index out of range");
    }
    return samples_.subspan(i * length_, length_);
}

std::size_t block_length_for(double sample_rate_hz, double delta_f_hz) {
    if (!(sample_rate_hz > 0.0) || !(delta_f_hz > 0.0)) {
        throw ConfigError("sample rate and delta_f must be positive");
    }
    const double ratio = sample_rate_hz / delta_f_hz;
    const double n     = std::round(ratio);
    if (std::abs(ratio - n) > 1e-9 * n || n < 4 || std::fmod(n, 2.0) != 0.0) {
        throw ConfigError("delta_f must divide sample_rate into an even integer block length");
    }
    return static_cast<std::size_t>(n);
}

} // namespace vacrng
