#include "vacrng/binning.hpp"

#include "vacrng/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace vacrng {

namespace {

void check_bits(int bits, int max_bits) {
    if (bits < 1 || bits > max_bits) {
        throw ConfigError("word size must be in [1, " + std::to_string(max_bits) + "] bits, got " +
                          std::to_string(bits));
    }
}

} // namespace

EqualAreaBinning EqualAreaBinning::fit(std::span<const double> samples, int bits) {
    check_bits(bits, 24);
    const std::size_t cells = std::size_t{1} << bits;
    const std::size_t m     = samples.size();
    if (m < 4 * cells) {
        throw DataError("fit_equal_area: need at least 2^(n+2) = " + std::to_string(4 * cells) + " samples, got " +
                        std::to_string(m));
    }
    std::vector<double> sorted(samples.begin(), samples.end());
    for (double x : sorted) {
        if (!std::isfinite(x)) {
            throw DataError("fit_equal_area: non-finite sample");
        }
    }
    std::sort(sorted.begin(), sorted.end());
    // Boundary k sits at sorted[ceil(k m / 2^n)]: the cell below it then holds ceil(k m / 2^n) - ceil((k-1) m / 2^n)
    // samples, i.e. m/2^n rounded up or down, provided the fitting values are distinct.
    std::vector<double> boundaries(cells - 1);
    for (std::size_t k = 1; k < cells; ++k) {
        const std::size_t idx = (k * m + cells - 1) / cells;
        boundaries[k - 1]     = sorted[idx];
    }
    for (std::size_t k = 1; k < boundaries.size(); ++k) {
        if (!(boundaries[k] > boundaries[k - 1])) {
            throw DataError("fit_equal_area: repeated sample values make quantile boundaries degenerate");
        }
    }
    return EqualAreaBinning(std::move(boundaries), bits, m);
}

EqualAreaBinning::EqualAreaBinning(std::vector<double> boundaries, int bits, std::size_t ensemble_size)
    : boundaries_(std::move(boundaries)), bits_(bits), ensemble_size_(ensemble_size) {
    check_bits(bits, 24);
    if (boundaries_.size() != (std::size_t{1} << bits) - 1) {
        throw ConfigError("equal-area binning needs 2^n - 1 boundaries");
    }
    for (std::size_t k = 0; k < boundaries_.size(); ++k) {
        if (!std::isfinite(boundaries_[k]) || (k > 0 && !(boundaries_[k] > boundaries_[k - 1]))) {
            throw ConfigError("equal-area boundaries must be finite and strictly increasing");
        }
    }
}

Word EqualAreaBinning::apply(double x) const {
    if (!std::isfinite(x)) {
        throw DataError("apply_equal_area: non-finite input");
    }
    // Counts boundaries <= x: a value equal to a boundary belongs to the cell above it.
    auto it = std::upper_bound(boundaries_.begin(), boundaries_.end(), x);
    return static_cast<Word>(it - boundaries_.begin());
}

CyclicBinning::CyclicBinning(double width, int bits, double offset)
    : width_(width), period_(std::ldexp(width, bits)), offset_(offset), bits_(bits) {
    check_bits(bits, 31);
    if (!(width > 0.0) || !std::isfinite(width)) {
        throw ConfigError("cyclic bin width must be positive and finite");
    }
    if (!std::isfinite(offset)) {
        throw ConfigError("cyclic grid offset must be finite");
    }
}

CyclicBinning CyclicBinning::with_period(double period, int bits, double offset) {
    check_bits(bits, 31);
    // ldexp is exact, so period() == 2^n * width() holds bit for bit.
    return CyclicBinning(std::ldexp(period, -bits), bits, offset);
}

Word CyclicBinning::apply(double x) const {
    if (!std::isfinite(x)) {
        throw DataError("apply_cyclic: non-finite input");
    }
    const double cell = std::floor((x - offset_) / width_);
    // Reduce modulo the label period in floating point first so huge cell indices stay representable.
    const double cells = std::ldexp(1.0, bits_);
    double       r     = std::fmod(cell, cells);
    if (r < 0.0) {
        r += cells;
    }
    return static_cast<Word>(r);
}

double WrappedFlatness::excess() const noexcept {
    return std::exp(log_excess);
}

WrappedFlatness wrapped_flatness(double sigma, double period) {
    if (!(sigma > 0.0) || !(period > 0.0)) {
        throw ConfigError("wrapped_flatness: sigma and period must be positive");
    }
    // log term_j = ln 2 - 2 pi^2 (sigma/B)^2 j^2; log-sum-exp from the leading term until the tail
    // falls 1e-40 below it.
    const double a       = 2.0 * std::numbers::pi * std::numbers::pi * (sigma / period) * (sigma / period);
    const double lead    = std::numbers::ln2 - a;
    double       sum_rel = 1.0;
    const double cutoff  = std::log(1e-40);
    for (int j = 2; j < 100000; ++j) {
        const double rel = -a * (static_cast<double>(j) * j - 1.0);
        if (rel < cutoff) {
            break;
        }
        sum_rel += std::exp(rel);
    }
    return WrappedFlatness{lead + std::log(sum_rel)};
}

} // namespace vacrng
