#include "vacrng/entropy.hpp"

#include "vacrng/error.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace vacrng {

namespace {

constexpr double kInvLn2 = 1.0 / std::numbers::ln2;

void check_distribution(std::span<const double> p, const char* what) {
    if (p.empty()) {
        throw DataError(std::string(what) + ": empty distribution");
    }
    double sum = 0.0;
    for (double x : p) {
        if (!(x >= 0.0) || !std::isfinite(x)) {
            throw DataError(std::string(what) + ": probabilities must be finite and non-negative");
        }
        sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw DataError(std::string(what) + ": probabilities sum to " + std::to_string(sum) + ", not 1");
    }
}

double shannon_of(std::span<const double> p) {
    double h = 0.0;
    for (double x : p) {
        if (x > 0.0) {
            h -= x * std::log2(x);
        }
    }
    return h;
}

double max_of(std::span<const double> p) {
    return *std::max_element(p.begin(), p.end());
}

// P(lo <= Z < hi) for a standard normal Z, using whichever tail form avoids cancellation.
double standard_normal_interval(double lo, double hi) {
    constexpr double r = 1.0 / std::numbers::sqrt2;
    if (lo >= 0.0) {
        return 0.5 * (std::erfc(lo * r) - std::erfc(hi * r));
    }
    if (hi <= 0.0) {
        return 0.5 * (std::erfc(-hi * r) - std::erfc(-lo * r));
    }
    return 1.0 - 0.5 * std::erfc(hi * r) - 0.5 * std::erfc(-lo * r);
}

void check_bits(int bits) {
    if (bits < 1 || bits > 31) {
        throw ConfigError("word size must be in [1, 31] bits");
    }
}

// Cell-probability deviations of cyclic words: P_c = 2^-n (1 + delta_c) for N(shift, sigma^2).
// Two routes: the Fourier (theta) series, quick when sigma is not much smaller than the period,
// and direct Gaussian interval sums over the wraps otherwise.
class CyclicModel {
public:
    CyclicModel(double sigma, const CyclicBinning& binning)
        : sigma_(sigma), width_(binning.width()), period_(binning.period()), offset_(binning.offset()),
          cells_(std::size_t{1} << binning.bits()), bits_(binning.bits()) {
        const double ratio = sigma_ / period_;
        fourier_           = ratio >= 0.15;
        if (fourier_) {
            const double a     = 2.0 * std::numbers::pi * std::numbers::pi * ratio * ratio;
            const double scale = static_cast<double>(cells_);
            for (int j = 1;; ++j) {
                const double rho = std::exp(-a * static_cast<double>(j) * j);
                if (rho < 1e-25 || j > 100000) {
                    break;
                }
                // Harmonics that are multiples of 2^n integrate to zero over a cell.
                const double s = std::sin(std::numbers::pi * j / scale);
                coeff_.push_back(scale * rho * 2.0 / (std::numbers::pi * j) * s);
            }
        }
    }

    bool shift_invariant() const noexcept {
        // The shift enters the entropies only through terms of order exp(-pi^2 sigma^2 / b^2).
        const double x = std::numbers::pi * sigma_ / width_;
        return x * x > 46.0;
    }

    /// delta for the cell centred on the mode: the largest cell probability over all shifts.
    double peak_delta() const {
        if (fourier_) {
            double d = 0.0;
            for (double c : coeff_) {
                d += c;
            }
            return d;
        }
        return direct_cell(-0.5 * width_, 0.0) * static_cast<double>(cells_) - 1.0;
    }

    /// Sum over j of (delta_j amplitude)^2 / 2 = mean_c delta_c^2 when no aliasing matters.
    double mean_square_delta() const {
        double s = 0.0;
        for (double c : coeff_) {
            s += 0.5 * c * c;
        }
        return s;
    }

    bool fourier() const noexcept { return fourier_; }

    std::vector<double> deltas(double shift) const {
        std::vector<double> d(cells_, 0.0);
        if (fourier_) {
            const double phase0 = (offset_ - shift) / period_;
            for (std::size_t c = 0; c < cells_; ++c) {
                const double pos = (static_cast<double>(c) + 0.5) / static_cast<double>(cells_) + phase0;
                double       acc = 0.0;
                for (std::size_t j = 0; j < coeff_.size(); ++j) {
                    const double cyc = std::fmod(static_cast<double>(j + 1) * pos, 1.0);
                    acc += coeff_[j] * std::cos(2.0 * std::numbers::pi * cyc);
                }
                d[c] = acc;
            }
            return d;
        }
        for (std::size_t c = 0; c < cells_; ++c) {
            const double lo = offset_ + static_cast<double>(c) * width_;
            d[c]            = direct_cell(lo, shift) * static_cast<double>(cells_) - 1.0;
        }
        return d;
    }

    /// Shannon entropy in bits from deltas, n - mean((1+d) log2(1+d)) + n mean(d).
    double shannon_from(std::span<const double> d) const {
        long double mean_d = 0.0L;
        long double mean_h = 0.0L;
        for (double x : d) {
            mean_d += x;
            if (x > -1.0) {
                mean_h += (1.0L + x) * std::log1p(static_cast<long double>(x));
            }
        }
        const long double inv = 1.0L / static_cast<long double>(d.size());
        mean_d *= inv;
        mean_h *= inv;
        return static_cast<double>(bits_ * (1.0L + mean_d) - mean_h * static_cast<long double>(kInvLn2));
    }

private:
    // Probability of the cell family [lo + w B, lo + b + w B) under N(shift, sigma^2).
    double direct_cell(double lo, double shift) const {
        const double reach = 40.0 * sigma_;
        const double w_lo  = std::floor((shift - reach - lo - width_) / period_);
        const double w_hi  = std::ceil((shift + reach - lo) / period_);
        double       p     = 0.0;
        for (double w = w_lo; w <= w_hi; w += 1.0) {
            const double a = lo + w * period_;
            p += standard_normal_interval((a - shift) / sigma_, (a + width_ - shift) / sigma_);
        }
        return p;
    }

    double              sigma_;
    double              width_;
    double              period_;
    double              offset_;
    std::size_t         cells_;
    int                 bits_;
    bool                fourier_ = false;
    std::vector<double> coeff_;
};

} // namespace

DiscreteDistribution::DiscreteDistribution(std::vector<double> probabilities) : p_(std::move(probabilities)) {
    check_distribution(p_, "DiscreteDistribution");
}

double shannon(const DiscreteDistribution& dist) {
    return shannon_of(dist.probabilities());
}

double min_entropy(const DiscreteDistribution& dist) {
    return -std::log2(max_of(dist.probabilities()));
}

ConditionalEntropies conditional_entropies(std::span<const std::vector<double>> rows, std::span<const double> weights) {
    if (rows.size() != weights.size()) {
        throw DataError("conditional_entropies: one weight per conditional row required");
    }
    check_distribution(weights, "conditional_entropies weights");
    ConditionalEntropies out;
    double               worst = 0.0;
    for (std::size_t y = 0; y < rows.size(); ++y) {
        check_distribution(rows[y], "conditional_entropies row");
        out.shannon += weights[y] * shannon_of(rows[y]);
        worst = std::max(worst, max_of(rows[y]));
    }
    out.min = -std::log2(worst);
    return out;
}

double GaussianChannelParams::sigma_q() const {
    validate();
    return std::sqrt((sigma_t - sigma_k) * (sigma_t + sigma_k));
}

void GaussianChannelParams::validate() const {
    if (!(sigma_k > 0.0) || !(sigma_t > sigma_k) || !std::isfinite(sigma_t)) {
        throw DataError("non-positive quantum variance: need sigma_T > sigma_K > 0 (sigma_T=" + std::to_string(sigma_t) +
                        ", sigma_K=" + std::to_string(sigma_k) + ")");
    }
}

double equal_area_cond_shannon(const GaussianChannelParams& params, int bits) {
    check_bits(bits);
    if (bits < 6) {
        throw ConfigError("equal_area_cond_shannon: closed form needs the small-bin regime, 2^n >= 2^6");
    }
    return bits - std::log2(params.sigma_t / params.sigma_q());
}

double equal_area_cond_shannon_given_k(const GaussianChannelParams& params, int bits, double k) {
    check_bits(bits);
    const double st = params.sigma_t;
    const double sk = params.sigma_k;
    // log2 of the product expanded, so extreme k cannot overflow exp().
    const double log_term = std::log2(st / params.sigma_q()) - 0.5 * (sk * sk - k * k) / (st * st) * kInvLn2;
    return bits - log_term;
}

EqualAreaLosses equal_area_extra_losses(double drift_rel, int bits, double ensemble_size) {
    if (!(drift_rel >= 0.0)) {
        throw ConfigError("drift_rel must be non-negative");
    }
    if (bits < 1 || !(ensemble_size >= bits)) {
        throw ConfigError("equal_area_extra_losses: need m >= n >= 1");
    }
    const double n = bits;
    const double m = ensemble_size;
    EqualAreaLosses l;
    l.drift = drift_rel * drift_rel * kInvLn2;
    l.refit = 0.5 * (n / m) * std::log2(2.0 * std::numbers::pi / std::numbers::e * (m / n));
    return l;
}

double equal_area_cond_min_entropy(const GaussianChannelParams& params, int bits, double k_bound) {
    check_bits(bits);
    if (bits > 20) {
        throw ConfigError("equal_area_cond_min_entropy: at most 20 bits");
    }
    if (!(k_bound >= 0.0)) {
        throw ConfigError("k_bound must be non-negative");
    }
    const double      sq    = params.sigma_q();
    const double      st    = params.sigma_t;
    const std::size_t cells = std::size_t{1} << bits;

    boost::math::normal_distribution<double> unit;
    std::vector<double> edges(cells + 1);
    edges.front() = -std::numeric_limits<double>::infinity();
    edges.back()  = std::numeric_limits<double>::infinity();
    for (std::size_t c = 1; c < cells; ++c) {
        edges[c] = st * boost::math::quantile(unit, static_cast<double>(c) / static_cast<double>(cells));
    }
    // A cell's probability under N(k, sigma_Q^2) peaks when k sits at its midpoint, so the worst
    // admissible k for each cell is that midpoint clamped to [-k_bound, k_bound].
    double worst = 0.0;
    for (std::size_t c = 0; c < cells; ++c) {
        double k;
        if (std::isinf(edges[c])) {
            k = -k_bound;
        } else if (std::isinf(edges[c + 1])) {
            k = k_bound;
        } else {
            k = std::clamp(0.5 * (edges[c] + edges[c + 1]), -k_bound, k_bound);
        }
        const double lo = std::isinf(edges[c]) ? -std::numeric_limits<double>::infinity() : (edges[c] - k) / sq;
        const double hi = std::isinf(edges[c + 1]) ? std::numeric_limits<double>::infinity() : (edges[c + 1] - k) / sq;
        worst = std::max(worst, standard_normal_interval(lo, hi));
    }
    return -std::log2(worst);
}

std::vector<double> cyclic_word_distribution(double sigma, const CyclicBinning& binning, double shift) {
    if (!(sigma > 0.0)) {
        throw ConfigError("cyclic_word_distribution: sigma must be positive");
    }
    CyclicModel model(sigma, binning);
    auto        d     = model.deltas(shift);
    const double scale = std::ldexp(1.0, -binning.bits());
    for (auto& x : d) {
        x = scale * (1.0 + x);
    }
    return d;
}

ConditionalEntropies cyclic_cond_entropies(double sigma_q, const CyclicBinning& binning) {
    if (!(sigma_q > 0.0)) {
        throw ConfigError("cyclic_cond_entropies: sigma_Q must be positive");
    }
    CyclicModel          model(sigma_q, binning);
    ConditionalEntropies out;
    const double         peak = model.peak_delta();
    const int            n    = binning.bits();
    out.min                   = n - std::log1p(peak) * kInvLn2;

    if (model.fourier() && model.shift_invariant() && peak < 1e-6) {
        // Second-order expansion; the neglected cubic terms are below 1e-18 bits.
        out.shannon = n - 0.5 * model.mean_square_delta() * kInvLn2;
    } else if (model.shift_invariant()) {
        out.shannon = model.shannon_from(model.deltas(0.0));
    } else {
        constexpr int grid = 256;
        long double   acc  = 0.0L;
        for (int i = 0; i < grid; ++i) {
            const double k = (i + 0.5) / grid * binning.width();
            acc += model.shannon_from(model.deltas(k));
        }
        out.shannon = static_cast<double>(acc / grid);
    }
    out.shannon = std::min(out.shannon, static_cast<double>(n));
    out.min     = std::clamp(out.min, 0.0, out.shannon);
    return out;
}

double shannon_lower_bound_via_mutual_info(double h1_total, double h1_dark) {
    if (!(h1_total >= 0.0) || !(h1_dark >= 0.0)) {
        throw ConfigError("entropies must be non-negative");
    }
    return std::max(0.0, h1_total - h1_dark);
}

double extractable_bits(double hmin_cond_total, double epsilon) {
    if (!(epsilon > 0.0) || !(epsilon <= 1.0)) {
        throw ConfigError("epsilon must lie in (0, 1]");
    }
    return std::max(0.0, hmin_cond_total - 2.0 * std::log2(1.0 / epsilon));
}

std::string_view to_string(BinningScheme scheme) noexcept {
    return scheme == BinningScheme::cyclic ? "cyclic" : "equal_area";
}

BinningScheme binning_scheme_from_string(std::string_view s) {
    if (s == "cyclic") {
        return BinningScheme::cyclic;
    }
    if (s == "equal_area") {
        return BinningScheme::equal_area;
    }
    throw ConfigError("unknown binning scheme '" + std::string(s) + "'");
}

void EntropyReport::check_invariants() const {
    for (const auto& r : records) {
        if (!(r.hmin_cond >= 0.0) || r.hmin_cond > r.h1_cond + 1e-12 || r.h1_cond > word_bits + 1e-12) {
            throw DataError("entropy report violates 0 <= Hmin_cond <= H1_cond <= n at " + std::to_string(r.freq_hz) +
                            " Hz");
        }
    }
}

CyclicBinning cyclic_binning_for(const GaussianChannelParams& params, const CyclicSettings& settings) {
    if (!(settings.period_over_sigma > 0.0)) {
        throw ConfigError("period_over_sigma must be positive");
    }
    return CyclicBinning::with_period(settings.period_over_sigma * params.sigma_q(), settings.bits, settings.offset);
}

EntropyReport entropy_report(std::span<const CalibratedBin> bins, const CyclicSettings& settings) {
    EntropyReport report;
    report.scheme    = BinningScheme::cyclic;
    report.word_bits = settings.bits;
    report.records.reserve(bins.size());
    for (const auto& b : bins) {
        const auto binning = cyclic_binning_for(b.params, settings);
        const auto cond    = cyclic_cond_entropies(b.params.sigma_q(), binning);
        const auto total   = cyclic_cond_entropies(b.params.sigma_t, binning);
        EntropyRecord r;
        r.bin              = b.bin;
        r.freq_hz          = b.freq_hz;
        r.h1               = total.shannon;
        r.hmin             = total.min;
        r.h1_cond          = cond.shannon;
        r.hmin_cond        = cond.min;
        r.extractable_bits = 2.0 * cond.min;
        report.records.push_back(r);
    }
    report.check_invariants();
    return report;
}

EntropyReport entropy_report(std::span<const CalibratedBin> bins, const EqualAreaSettings& settings) {
    EntropyReport report;
    report.scheme    = BinningScheme::equal_area;
    report.word_bits = settings.bits;
    report.records.reserve(bins.size());
    const auto losses = equal_area_extra_losses(settings.drift_rel, settings.bits, settings.ensemble_size);
    for (const auto& b : bins) {
        EntropyRecord r;
        r.bin       = b.bin;
        r.freq_hz   = b.freq_hz;
        r.h1        = settings.bits;
        r.hmin      = settings.bits;
        r.h1_cond   = std::max(0.0, equal_area_cond_shannon(b.params, settings.bits) - losses.drift - losses.refit);
        r.hmin_cond = std::min(r.h1_cond, equal_area_cond_min_entropy(b.params, settings.bits,
                                                                      settings.k_bound_sigmas * b.params.sigma_k));
        r.extractable_bits = 2.0 * r.hmin_cond;
        report.records.push_back(r);
    }
    report.check_invariants();
    return report;
}

} // namespace vacrng
