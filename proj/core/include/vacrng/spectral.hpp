#pragma once

#include "vacrng/fft.hpp"
#include "vacrng/signal_sim.hpp"

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace vacrng {

/**
 * Non-redundant half of a unitary DFT of a real block of even length N:
 *   a_k = N^(-1/2) * sum_j x_j exp(-2 pi i j k / N).
 * `amplitudes[k-1]` holds a_k for 1 <= k <= N/2 - 1; DC and Nyquist are real and kept apart.
 * Bin k sits at k * delta_f with delta_f = sample_rate / N.
 */
struct Spectrum {
    double                            dc      = 0.0;
    double                            nyquist = 0.0;
    std::vector<std::complex<double>> amplitudes;
    double                            delta_f      = 0.0;
    std::size_t                       block_length = 0;

    double sample_rate() const noexcept { return delta_f * static_cast<double>(block_length); }
    double bin_frequency(std::size_t k) const noexcept { return static_cast<double>(k) * delta_f; }
    /// a_k for 0 <= k <= N/2.
    std::complex<double> bin(std::size_t k) const;
};

/// Reusable transform for one block length. Not shareable across threads; make one per worker.
class BlockTransform {
public:
    BlockTransform(std::size_t block_length, double sample_rate_hz);

    std::size_t block_length() const noexcept { return dft_.size(); }
    double      delta_f() const noexcept { return delta_f_; }

    Spectrum forward(std::span<const std::int8_t> block);
    Spectrum forward(std::span<const double> block);
    /// Rebuilds the real block from its half spectrum (Hermitian extension implied).
    std::vector<double> inverse(const Spectrum& spectrum);

private:
    RealDft                           dft_;
    double                            sample_rate_hz_;
    double                            delta_f_;
    std::vector<double>               real_;
    std::vector<std::complex<double>> half_;
};

/// Unitary DFT of a whole block. Any even length >= 4 is accepted (200 000 included).
Spectrum dft_block(const SampleBlock& block);
Spectrum dft_block(std::span<const std::int8_t> samples, double sample_rate_hz);

/// Mean |a_k|^2 per bin, k = 0 .. N/2 (DC and Nyquist included at both ends).
struct PsdEstimate {
    std::vector<double> power;
    std::size_t         blocks_averaged = 0;
    double              delta_f         = 0.0;

    double bin_frequency(std::size_t k) const noexcept { return static_cast<double>(k) * delta_f; }
    std::size_t bin_count() const noexcept { return power.size(); }
};

/// Running sums of |a_k|^2. Merging is a commutative monoid; a fixed merge order gives
/// bit-reproducible results.
class PsdAccumulator {
public:
    void add(const Spectrum& spectrum);
    void merge(const PsdAccumulator& other);
    std::size_t count() const noexcept { return count_; }
    PsdEstimate estimate() const;

private:
    std::vector<double> sum_;
    std::size_t         count_        = 0;
    std::size_t         block_length_ = 0;
    double              delta_f_      = 0.0;
};

PsdEstimate accumulate_psd(std::span<const Spectrum> spectra);

/// 10 log10(power / reference). Both must be positive.
double to_decibel(double power, double reference);

/// Rectangular-window leak kernel T * sinc(pi T f) with sinc(0) = 1.
double leak_kernel(double duration_s, double offset_hz);

/// Splits a sample stream into non-overlapping frames of `frame_length`; the tail is dropped.
class Framer {
public:
    Framer(std::span<const std::int8_t> samples, std::size_t frame_length);
    std::size_t                  frame_count() const noexcept { return count_; }
    std::span<const std::int8_t> frame(std::size_t i) const;

private:
    std::span<const std::int8_t> samples_;
    std::size_t                  length_;
    std::size_t                  count_;
};

/// Block length for a resolution: sample_rate / delta_f, which must be an even integer.
std::size_t block_length_for(double sample_rate_hz, double delta_f_hz);

} // namespace vacrng
