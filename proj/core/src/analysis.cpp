#include "vacrng/analysis.hpp"

#include "vacrng/error.hpp"
#include "vacrng/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

namespace vacrng {

namespace {

struct PearsonSums {
    double n = 0, sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;

    void add(double x, double y) noexcept {
        n += 1;
        sx += x;
        sy += y;
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
    }
    void merge(const PearsonSums& o) noexcept {
        n += o.n;
        sx += o.sx;
        sy += o.sy;
        sxx += o.sxx;
        syy += o.syy;
        sxy += o.sxy;
    }
    double coefficient() const noexcept {
        const double vx = n * sxx - sx * sx;
        const double vy = n * syy - sy * sy;
        if (!(vx > 0.0) || !(vy > 0.0)) {
            return 0.0;
        }
        return std::clamp((n * sxy - sx * sy) / std::sqrt(vx * vy), -1.0, 1.0);
    }
};

struct ScanSums {
    std::vector<PearsonSums> re_im, consecutive, neighbor;

    explicit ScanSums(std::size_t bins) : re_im(bins), consecutive(bins), neighbor(bins) {}

    void add_frame(const Spectrum& s) {
        for (std::size_t i = 0; i < re_im.size(); ++i) {
            const auto a = s.amplitudes[i];
            const auto b = s.amplitudes[i + 1];
            re_im[i].add(a.real(), a.imag());
            neighbor[i].add(a.real(), b.real());
            neighbor[i].add(a.imag(), b.imag());
        }
    }
    void add_pair(const Spectrum& prev, const Spectrum& next) {
        for (std::size_t i = 0; i < consecutive.size(); ++i) {
            const auto a = prev.amplitudes[i];
            const auto b = next.amplitudes[i];
            consecutive[i].add(a.real(), b.real());
            consecutive[i].add(a.imag(), b.imag());
        }
    }
    void merge(const ScanSums& o) {
        for (std::size_t i = 0; i < re_im.size(); ++i) {
            re_im[i].merge(o.re_im[i]);
            consecutive[i].merge(o.consecutive[i]);
            neighbor[i].merge(o.neighbor[i]);
        }
    }
};

// Bins 1 .. max_bin; the neighbor family needs bin max_bin + 1 <= N/2 - 1.
std::size_t scan_bins(std::size_t block_length, double delta_f, double f_max_hz) {
    if (block_length < 8) {
        throw DataError("correlation scan needs frames of at least 8 samples");
    }
    std::size_t top = block_length / 2 - 2;
    if (f_max_hz > 0.0) {
        top = std::min(top, static_cast<std::size_t>(std::floor(f_max_hz / delta_f + 1e-9)));
    }
    if (top == 0) {
        throw ConfigError("correlation scan: f_max below the first bin");
    }
    return top;
}

CorrelationReport finish(const ScanSums& sums, std::size_t blocks, double delta_f,
                         const CorrelationScanSettings& settings) {
    CorrelationReport r;
    r.delta_f_hz       = delta_f;
    r.smooth_window_hz = settings.smooth_window_hz;
    r.blocks           = blocks;
    const auto bins    = sums.re_im.size();
    for (std::size_t i = 0; i < bins; ++i) {
        r.freq_hz.push_back(static_cast<double>(i + 1) * delta_f);
        r.re_im.push_back(sums.re_im[i].coefficient());
        r.consecutive.push_back(sums.consecutive[i].coefficient());
        r.neighbor.push_back(sums.neighbor[i].coefficient());
    }
    const auto half = static_cast<std::size_t>(std::max(0.0, std::floor(settings.smooth_window_hz / (2.0 * delta_f))));
    r.re_im_smoothed       = boxcar(r.re_im, half);
    r.consecutive_smoothed = boxcar(r.consecutive, half);
    r.neighbor_smoothed    = boxcar(r.neighbor, half);
    return r;
}

// Frames per partial sum; fixed so the reduction does not depend on the worker count.
constexpr std::size_t kScanChunk = 32;

} // namespace

double correlation(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw DataError("correlation: length mismatch");
    }
    if (x.size() < 2) {
        throw DataError("correlation: need at least two points");
    }
    const double n  = static_cast<double>(x.size());
    double       mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (!(sxx > 0.0) || !(syy > 0.0)) {
        throw DataError("correlation: zero variance");
    }
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

CorrelationReport correlation_scan(std::span<const std::int8_t> samples, double sample_rate_hz, double delta_f_hz,
                                   const CorrelationScanSettings& settings) {
    const std::size_t n = block_length_for(sample_rate_hz, delta_f_hz);
    Framer            framer(samples, n);
    const std::size_t frames = framer.frame_count();
    if (frames < std::max<std::size_t>(settings.min_blocks, 2)) {
        throw DataError("correlation scan: " + std::to_string(frames) + " blocks, need " +
                        std::to_string(std::max<std::size_t>(settings.min_blocks, 2)));
    }
    const double      delta_f = sample_rate_hz / static_cast<double>(n);
    const std::size_t bins    = scan_bins(n, delta_f, settings.f_max_hz);
    const std::size_t chunks  = (frames + kScanChunk - 1) / kScanChunk;

    std::vector<ScanSums>                      partial(chunks, ScanSums(bins));
    std::vector<std::optional<BlockTransform>> transforms(std::max(1u, settings.workers));
    parallel_for(chunks, settings.workers, [&](std::size_t c, unsigned w) {
        if (!transforms[w]) {
            transforms[w].emplace(n, sample_rate_hz);
        }
        auto&             t     = *transforms[w];
        const std::size_t begin = c * kScanChunk;
        const std::size_t end   = std::min(frames, begin + kScanChunk);
        Spectrum          prev  = t.forward(framer.frame(begin));
        partial[c].add_frame(prev);
        for (std::size_t i = begin + 1; i <= end && i < frames; ++i) {
            Spectrum cur = t.forward(framer.frame(i));
            partial[c].add_pair(prev, cur);
            if (i < end) {
                partial[c].add_frame(cur);
            }
            prev = std::move(cur);
        }
    });
    ScanSums total(bins);
    for (const auto& p : partial) {
        total.merge(p);
    }
    return finish(total, frames, delta_f, settings);
}

CorrelationReport correlation_scan(std::span<const Spectrum> spectra, const CorrelationScanSettings& settings) {
    if (spectra.size() < std::max<std::size_t>(settings.min_blocks, 2)) {
        throw DataError("correlation scan: too few blocks");
    }
    const auto& first = spectra.front();
    const auto  bins  = scan_bins(first.block_length, first.delta_f, settings.f_max_hz);
    ScanSums    sums(bins);
    for (std::size_t i = 0; i < spectra.size(); ++i) {
        if (spectra[i].block_length != first.block_length) {
            throw DataError("correlation scan: spectra of different lengths");
        }
        sums.add_frame(spectra[i]);
        if (i > 0) {
            sums.add_pair(spectra[i - 1], spectra[i]);
        }
    }
    return finish(sums, spectra.size(), first.delta_f, settings);
}

std::vector<double> boxcar(std::span<const double> values, std::size_t half_width) {
    std::vector<double> out(values.size());
    std::vector<double> prefix(values.size() + 1, 0.0);
    for (std::size_t i = 0; i < values.size(); ++i) {
        prefix[i + 1] = prefix[i] + values[i];
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        const std::size_t lo = i >= half_width ? i - half_width : 0;
        const std::size_t hi = std::min(values.size(), i + half_width + 1);
        out[i]               = (prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo);
    }
    return out;
}

double band_average(std::span<const double> values, std::span<const double> freq_hz, double lo_hz, double hi_hz) {
    if (values.size() != freq_hz.size()) {
        throw DataError("band_average: length mismatch");
    }
    double      sum   = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (freq_hz[i] >= lo_hz && freq_hz[i] < hi_hz) {
            sum += values[i];
            ++count;
        }
    }
    if (count == 0) {
        throw DataError("band_average: no bins in band");
    }
    return sum / static_cast<double>(count);
}

LinearFit fit_linearity(std::span<const PowerPoint> points) {
    if (points.size() < 3) {
        throw DataError("linearity fit needs at least 3 points");
    }
    const double n  = static_cast<double>(points.size());
    double       mx = 0.0, my = 0.0;
    for (const auto& p : points) {
        mx += p.power_mw;
        my += p.level;
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& p : points) {
        sxx += (p.power_mw - mx) * (p.power_mw - mx);
        sxy += (p.power_mw - mx) * (p.level - my);
        syy += (p.level - my) * (p.level - my);
    }
    if (!(sxx > 0.0)) {
        throw DataError("linearity fit needs distinct powers");
    }
    LinearFit fit;
    fit.slope  = sxy / sxx;
    fit.offset = my - fit.slope * mx;
    double ss_res = 0.0;
    for (const auto& p : points) {
        const double r = p.level - (fit.offset + fit.slope * p.power_mw);
        ss_res += r * r;
    }
    fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    return fit;
}

double band_power(const PsdEstimate& psd, double lo_hz, double hi_hz) {
    double      sum   = 0.0;
    std::size_t count = 0;
    for (std::size_t k = 0; k < psd.power.size(); ++k) {
        const double f = psd.bin_frequency(k);
        if (f >= lo_hz && f < hi_hz) {
            sum += psd.power[k];
            ++count;
        }
    }
    if (count == 0) {
        throw DataError("band_power: no bins in band");
    }
    return sum / static_cast<double>(count);
}

std::vector<SpurReport> detect_spurs(const PsdEstimate& psd, double threshold_db, const SpurSettings& settings) {
    if (psd.blocks_averaged < settings.min_blocks) {
        throw DataError("spur detection needs a PSD averaged over at least " + std::to_string(settings.min_blocks) +
                        " blocks");
    }
    if (settings.median_window == 0 || settings.median_window % 2 == 0) {
        throw ConfigError("spur median window must be odd");
    }
    if (psd.power.size() < 3 || psd.power.size() - 2 < settings.median_window) {
        throw DataError("spur detection: fewer bins than the median window");
    }
    // Bins 1 .. N/2-1 only; DC and Nyquist are excluded.
    std::span<const double> p(psd.power.data() + 1, psd.power.size() - 2);
    const std::size_t       w    = settings.median_window;
    const std::size_t       half = w / 2;
    const double            gain = std::pow(10.0, threshold_db / 10.0);

    std::vector<double> excess(p.size(), 0.0);
    std::vector<double> window(w);
    for (std::size_t i = 0; i < p.size(); ++i) {
        const std::size_t lo = std::min(i >= half ? i - half : 0, p.size() - w);
        std::copy_n(p.begin() + static_cast<std::ptrdiff_t>(lo), w, window.begin());
        std::nth_element(window.begin(), window.begin() + static_cast<std::ptrdiff_t>(half), window.end());
        const double median = window[half];
        if (median > 0.0) {
            excess[i] = p[i] / median;
        } else if (p[i] > 0.0) {
            excess[i] = std::numeric_limits<double>::infinity();
        }
    }

    std::vector<SpurReport> spurs;
    for (std::size_t i = 0; i < p.size();) {
        if (!(excess[i] > gain)) {
            ++i;
            continue;
        }
        std::size_t j    = i;
        std::size_t peak = i;
        while (j < p.size() && excess[j] > gain) {
            if (excess[j] > excess[peak]) {
                peak = j;
            }
            ++j;
        }
        SpurReport s;
        s.bin       = peak + 1;
        s.freq_hz   = psd.bin_frequency(peak + 1);
        s.excess_db = 10.0 * std::log10(excess[peak]);
        s.lo_hz     = psd.bin_frequency(i + 1);
        s.hi_hz     = psd.bin_frequency(j);
        spurs.push_back(s);
        i = j;
    }
    std::stable_sort(spurs.begin(), spurs.end(),
                     [](const SpurReport& a, const SpurReport& b) { return a.excess_db > b.excess_db; });
    return spurs;
}

BandMask default_gsm_mask() {
    return BandMask({{871e6, 920e6}});
}

double second_harmonic_ratio(const PsdEstimate& psd, double f0_hz) {
    if (psd.power.size() < 3 || !(psd.delta_f > 0.0)) {
        throw DataError("second_harmonic_ratio: empty PSD");
    }
    const double nyquist = psd.bin_frequency(psd.power.size() - 1);
    if (!(f0_hz > 0.0) || !(2.0 * f0_hz < nyquist)) {
        throw ConfigError("second_harmonic_ratio: need 0 < f0 and 2 f0 below Nyquist");
    }
    auto peak = [&](double f) {
        const auto k  = static_cast<std::size_t>(std::llround(f / psd.delta_f));
        const auto lo = k > 1 ? k - 1 : 1;
        const auto hi = std::min(k + 1, psd.power.size() - 2);
        double     m  = 0.0;
        for (std::size_t i = lo; i <= hi; ++i) {
            m = std::max(m, psd.power[i]);
        }
        return m;
    };
    const double p1 = peak(f0_hz);
    const double p2 = peak(2.0 * f0_hz);
    if (!(p1 > 0.0)) {
        throw DataError("second_harmonic_ratio: no power at f0");
    }
    if (!(p2 > 0.0)) {
        return std::numeric_limits<double>::infinity();
    }
    return 10.0 * std::log10(p1 / p2);
}

double bin_occupancy_scan(std::span<const Word> words, int bits) {
    if (bits < 1 || bits > 24) {
        throw ConfigError("bin_occupancy_scan: bits must lie in [1, 24]");
    }
    const std::size_t cells = std::size_t{1} << bits;
    if (words.size() < 16 * cells) {
        throw DataError("bin_occupancy_scan: need at least 16 * 2^n words");
    }
    std::vector<std::uint64_t> counts(cells, 0);
    for (Word w : words) {
        if (w >= cells) {
            throw DataError("bin_occupancy_scan: word out of range");
        }
        ++counts[w];
    }
    const double mean = static_cast<double>(words.size()) / static_cast<double>(cells);
    return static_cast<double>(*std::max_element(counts.begin(), counts.end())) / mean;
}

} // namespace vacrng
