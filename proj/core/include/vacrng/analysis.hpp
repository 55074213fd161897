#pragma once

#include "vacrng/band_mask.hpp"
#include "vacrng/binning.hpp"
#include "vacrng/spectral.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace vacrng {

/// Pearson coefficient <dx dy> / sqrt(<dx^2><dy^2>).
double correlation(std::span<const double> x, std::span<const double> y);

/// Per-bin correlation estimates for bins 1 .. max_bin, raw and boxcar-smoothed.
///  re_im       : c(Re a_k, Im a_k)
///  consecutive : c(a_k(t), a_k(t+1)), Re and Im pairs pooled
///  neighbor    : c(a_k, a_{k+1}),    Re and Im pairs pooled
struct CorrelationReport {
    double              delta_f_hz       = 0.0;
    double              smooth_window_hz = 0.0;
    std::size_t         blocks           = 0;
    std::vector<double> freq_hz;
    std::vector<double> re_im;
    std::vector<double> consecutive;
    std::vector<double> neighbor;
    std::vector<double> re_im_smoothed;
    std::vector<double> consecutive_smoothed;
    std::vector<double> neighbor_smoothed;
};

struct CorrelationScanSettings {
    double      smooth_window_hz = 10e6;
    double      f_max_hz         = 0.0; ///< 0: up to the bin below Nyquist
    std::size_t min_blocks       = 1000;
    unsigned    workers          = 1;
};

/// Frames `samples` at delta_f and scans the three correlation families.
CorrelationReport correlation_scan(std::span<const std::int8_t> samples, double sample_rate_hz, double delta_f_hz,
                                   const CorrelationScanSettings& settings = {});

/// Same scan over spectra already in stream order.
CorrelationReport correlation_scan(std::span<const Spectrum> spectra, const CorrelationScanSettings& settings = {});

/// Centered moving average over `half_width` bins each side, truncated at the ends.
std::vector<double> boxcar(std::span<const double> values, std::size_t half_width);

/// Mean of values whose frequency lies in [lo, hi).
double band_average(std::span<const double> values, std::span<const double> freq_hz, double lo_hz, double hi_hz);

struct LinearFit {
    double slope     = 0.0;
    double offset    = 0.0;
    double r_squared = 0.0;
};

struct PowerPoint {
    double power_mw = 0.0;
    double level    = 0.0; ///< PSD level in code^2
};

/// Unweighted least squares. Needs >= 3 points and at least two distinct powers.
LinearFit fit_linearity(std::span<const PowerPoint> points);

/// Mean PSD over bins with frequency in [lo, hi).
double band_power(const PsdEstimate& psd, double lo_hz, double hi_hz);

struct SpurReport {
    std::size_t bin       = 0; ///< peak bin
    double      freq_hz   = 0.0;
    double      excess_db = 0.0; ///< peak excess over the rolling median
    double      lo_hz     = 0.0; ///< first flagged bin of the cluster
    double      hi_hz     = 0.0; ///< last flagged bin of the cluster

    double width_hz(double delta_f_hz) const noexcept { return hi_hz - lo_hz + delta_f_hz; }
};

struct SpurSettings {
    std::size_t median_window = 201;
    std::size_t min_blocks    = 100;
};

/// Flags bins 1 .. N/2-1 whose power exceeds the rolling median of their neighborhood by
/// threshold_db. Adjacent flagged bins form one spur. Sorted by descending excess.
std::vector<SpurReport> detect_spurs(const PsdEstimate& psd, double threshold_db, const SpurSettings& settings = {});

/// GSM uplink 876-915 MHz with 5 MHz guard bands.
BandMask default_gsm_mask();

/// 10 log10(P(f0) / P(2 f0)), each taken as the largest bin within one bin of the nominal frequency.
double second_harmonic_ratio(const PsdEstimate& psd, double f0_hz);

/// max(count) / mean(count) over the 2^bits cells. Needs >= 16 * 2^bits words.
double bin_occupancy_scan(std::span<const Word> words, int bits);

} // namespace vacrng
