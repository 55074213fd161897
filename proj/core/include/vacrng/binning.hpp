#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace vacrng {

using Word = std::uint32_t;

/// Quantile binning: 2^n cells of equal empirical probability, fitted from m samples.
class EqualAreaBinning {
public:
    /// Boundaries at empirical quantiles k/2^n. Needs m >= 2^(n+2) finite samples.
    static EqualAreaBinning fit(std::span<const double> samples, int bits);
    /// Rebuilds a previously fitted binning (e.g. from JSON); validates ordering.
    EqualAreaBinning(std::vector<double> boundaries, int bits, std::size_t ensemble_size);

    /// Cell index of x. A value equal to a boundary lands in the upper cell.
    Word apply(double x) const;

    int                       bits() const noexcept { return bits_; }
    std::size_t               ensemble_size() const noexcept { return ensemble_size_; }
    std::span<const double>   boundaries() const noexcept { return boundaries_; }

private:
    std::vector<double> boundaries_;
    int                 bits_          = 0;
    std::size_t         ensemble_size_ = 0;
};

/// Equidistant cells of width b whose labels repeat with period B = 2^n * b.
class CyclicBinning {
public:
    CyclicBinning(double width, int bits, double offset = 0.0);
    /// Width chosen so that the period equals `period` exactly (b = period / 2^n).
    static CyclicBinning with_period(double period, int bits, double offset = 0.0);

    /// floor((x - offset) / b) mod 2^n with a non-negative modulo.
    Word apply(double x) const;

    double width() const noexcept { return width_; }
    double period() const noexcept { return period_; }
    double offset() const noexcept { return offset_; }
    int    bits() const noexcept { return bits_; }

private:
    double width_;
    double period_;
    double offset_;
    int    bits_;
};

/// Excess max/mean ratio of a zero-mean normal wrapped onto period B, kept in log form because
/// the excess drops far below double epsilon (1e-34 at B = sigma/2).
struct WrappedFlatness {
    double log_excess = 0.0; ///< natural log of (max/mean - 1); -inf when the excess underflows entirely

    double excess() const noexcept;
    double ratio() const noexcept { return 1.0 + excess(); }
};

/// max_x p_wrapped(x) / (1/B) for N(0, sigma^2) wrapped to period B, from the theta series
/// 1 + 2 sum_j exp(-2 pi^2 sigma^2 j^2 / B^2).
WrappedFlatness wrapped_flatness(double sigma, double period);

} // namespace vacrng
