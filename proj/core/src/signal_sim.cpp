#include "vacrng/signal_sim.hpp"

#include "vacrng/error.hpp"
#include "vacrng/fft.hpp"
#include "vacrng/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

namespace vacrng {

PiecewisePsd::PiecewisePsd(std::vector<Point> points) : points_(std::move(points)) {
    std::sort(points_.begin(), points_.end(), [](const Point& a, const Point& b) { return a.freq_hz < b.freq_hz; });
}

PiecewisePsd PiecewisePsd::flat_variance(double variance, double sample_rate_hz) {
    if (!(sample_rate_hz > 0.0) || variance < 0.0) {
        throw ConfigError("flat_variance: need variance >= 0 and sample_rate > 0");
    }
    return PiecewisePsd({{0.0, variance / (0.5 * sample_rate_hz)}});
}

double PiecewisePsd::operator()(double freq_hz) const noexcept {
    if (points_.empty()) {
        return 0.0;
    }
    if (freq_hz <= points_.front().freq_hz) {
        return points_.front().density;
    }
    if (freq_hz >= points_.back().freq_hz) {
        return points_.back().density;
    }
    auto hi = std::upper_bound(points_.begin(), points_.end(), freq_hz,
                               [](double f, const Point& p) { return f < p.freq_hz; });
    auto lo = hi - 1;
    const double t = (freq_hz - lo->freq_hz) / (hi->freq_hz - lo->freq_hz);
    return lo->density + t * (hi->density - lo->density);
}

double LowPass::operator()(double freq_hz) const noexcept {
    if (corner_hz <= 0.0) {
        return 1.0;
    }
    const double r = std::abs(freq_hz) / corner_hz;
    return 1.0 / std::sqrt(1.0 + std::pow(r, 2.0 * order));
}

void NoiseModel::validate() const {
    if (!(quantum_var_per_mw >= 0.0)) {
        throw ConfigError("quantum_var_per_mw must be >= 0");
    }
    for (const auto& p : electronic_psd.points()) {
        if (!(p.density >= 0.0)) {
            throw ConfigError("electronic_psd must be non-negative");
        }
    }
    if (detector_response.corner_hz > 0.0 && detector_response.order < 1) {
        throw ConfigError("detector_response.order must be >= 1");
    }
    if (adc_artifact_period < 0 || adc_artifact_amplitude < 0.0) {
        throw ConfigError("adc artifact period/amplitude must be non-negative");
    }
    if (!(drift_rel >= 0.0 && drift_rel < 1.0)) {
        throw ConfigError("drift_rel must lie in [0, 1)");
    }
    for (const auto& s : spurs) {
        if (!(s.freq_hz >= 0.0) || !(s.amplitude >= 0.0)) {
            throw ConfigError("spur frequency and amplitude must be non-negative");
        }
        if (s.window && s.window->stop < s.window->start) {
            throw ConfigError("spur burst window stop < start");
        }
    }
}

NoiseModel default_noise_model(double sample_rate_hz) {
    NoiseModel m;
    m.quantum_var_per_mw = 50.0;
    const double floor   = 25.0 / (0.5 * sample_rate_hz);
    m.electronic_psd     = PiecewisePsd({{0.0, floor}, {2.0e9, floor}, {3.0e9, 4.0 * floor}, {4.0e9, floor}});
    m.detector_response  = LowPass{2.0e9, 2};
    return m;
}

std::string_view to_string(TraceKind kind) noexcept {
    return kind == TraceKind::dark ? "dark" : "total";
}

TraceKind trace_kind_from_string(std::string_view s) {
    if (s == "dark") {
        return TraceKind::dark;
    }
    if (s == "total") {
        return TraceKind::total;
    }
    throw ConfigError("unknown trace kind '" + std::string(s) + "'");
}

bool quantize_sample(double value, std::int8_t& out) noexcept {
    const double r = std::round(value); // half away from zero
    if (r > 127.0) {
        out = 127;
        return true;
    }
    if (r < -127.0) {
        out = -127;
        return true;
    }
    out = static_cast<std::int8_t>(r);
    return false;
}

namespace {

// Fills `spectrum` (N/2+1 bins, unitary normalization) with independent complex Gaussians of
// per-bin power E|a_k|^2 = power(f_k). DC and Nyquist are real.
template<typename PowerFn>
void gaussian_spectrum(std::span<std::complex<double>> spectrum, std::size_t n, double sample_rate_hz,
                       GaussianSource& gauss, PowerFn&& power) {
    const double df = sample_rate_hz / static_cast<double>(n);
    const std::size_t last = n / 2;
    for (std::size_t k = 0; k <= last; ++k) {
        const double p = power(static_cast<double>(k) * df);
        if (k == 0 || k == last) {
            spectrum[k] = {std::sqrt(p) * gauss(), 0.0};
        } else {
            const double s = std::sqrt(0.5 * p);
            const double re = s * gauss();
            const double im = s * gauss();
            spectrum[k] = {re, im};
        }
    }
}

double tone(double freq_hz, double sample_rate_hz, double phase, std::uint64_t index) {
    // Reduce cycles modulo 1 before scaling by 2 pi to keep phase accuracy at large indices.
    const double cycles = std::fmod(freq_hz / sample_rate_hz * static_cast<double>(index), 1.0);
    return std::cos(2.0 * std::numbers::pi * cycles + phase);
}

} // namespace

SampleBlock simulate_block(const NoiseModel& model, const SimulationRequest& request) {
    model.validate();
    const std::size_t n = request.length;
    if (n == 0 || !std::has_single_bit(n) || n < 4) {
        throw ConfigError("simulate_block: length must be a power of two >= 4");
    }
    if (!(request.sample_rate_hz > 0.0)) {
        throw ConfigError("simulate_block: sample_rate must be positive");
    }
    if (!(request.power_mw >= 0.0)) {
        throw ConfigError("simulate_block: optical power must be non-negative");
    }

    Xoshiro256pp   quantum_rng(derive_seed(request.seed, 0));
    Xoshiro256pp   electronic_rng(derive_seed(request.seed, 1));
    GaussianSource quantum_gauss(quantum_rng);
    GaussianSource electronic_gauss(electronic_rng);

    RealDft                           dft(n);
    std::vector<std::complex<double>> spectrum(dft.half_size());
    const double                      unitary = 1.0 / std::sqrt(static_cast<double>(n));

    std::vector<double> analog(n, 0.0);
    std::vector<double> scratch(n);

    const double quantum_var = model.quantum_var_per_mw * request.power_mw;
    if (quantum_var > 0.0) {
        gaussian_spectrum(spectrum, n, request.sample_rate_hz, quantum_gauss, [&](double f) {
            const double g = model.detector_response(f);
            return quantum_var * g * g;
        });
        dft.inverse(spectrum, scratch);
        const double drift_phase = 2.0 * std::numbers::pi * quantum_rng.uniform();
        for (std::size_t j = 0; j < n; ++j) {
            double gain = 1.0;
            if (model.drift_rel > 0.0) {
                const double t = static_cast<double>(j) / static_cast<double>(n);
                gain += model.drift_rel * std::sin(2.0 * std::numbers::pi * t + drift_phase);
            }
            analog[j] = gain * unitary * scratch[j];
        }
    }

    if (!model.electronic_psd.empty()) {
        const double half_rate = 0.5 * request.sample_rate_hz;
        gaussian_spectrum(spectrum, n, request.sample_rate_hz, electronic_gauss,
                          [&](double f) { return model.electronic_psd(f) * half_rate; });
        dft.inverse(spectrum, scratch);
        for (std::size_t j = 0; j < n; ++j) {
            analog[j] += unitary * scratch[j];
        }
    }

    const std::uint64_t first = request.first_sample;
    for (const auto& spur : model.spurs) {
        if (spur.amplitude == 0.0) {
            continue;
        }
        std::uint64_t lo = first;
        std::uint64_t hi = first + n;
        if (spur.window) {
            lo = std::max(lo, spur.window->start);
            hi = std::min(hi, spur.window->stop);
        }
        for (std::uint64_t idx = lo; idx < hi; ++idx) {
            analog[idx - first] += spur.amplitude * tone(spur.freq_hz, request.sample_rate_hz, spur.phase_rad, idx);
        }
    }

    if (model.adc_artifact_period > 0 && model.adc_artifact_amplitude > 0.0) {
        const int period = model.adc_artifact_period;
        for (int k = 1; 2 * k <= period; ++k) {
            const double f = request.sample_rate_hz * k / period;
            for (std::size_t j = 0; j < n; ++j) {
                analog[j] += model.adc_artifact_amplitude * tone(f, request.sample_rate_hz, 0.0, first + j);
            }
        }
    }

    SampleBlock block;
    block.samples.resize(n);
    block.sample_rate_hz   = request.sample_rate_hz;
    block.optical_power_mw = request.power_mw;
    block.seed             = request.seed;
    block.kind             = request.power_mw == 0.0 ? TraceKind::dark : TraceKind::total;
    block.first_sample     = first;
    for (std::size_t j = 0; j < n; ++j) {
        double x = analog[j];
        if (model.quadratic_coeff != 0.0) {
            x += model.quadratic_coeff * x * x;
        }
        if (quantize_sample(x, block.samples[j])) {
            ++block.clip_count;
        }
    }
    return block;
}

SampleBlock inject_gsm_burst(const SampleBlock& block, double freq_hz, double amplitude, BurstWindow window) {
    if (!(block.sample_rate_hz > 0.0)) {
        throw ConfigError("inject_gsm_burst: block has no sample rate");
    }
    if (!(freq_hz >= 0.0) || !(freq_hz < 0.5 * block.sample_rate_hz)) {
        throw ConfigError("inject_gsm_burst: frequency outside [0, Nyquist)");
    }
    if (window.stop < window.start) {
        throw ConfigError("inject_gsm_burst: window stop < start");
    }
    SampleBlock out = block;
    if (amplitude == 0.0) {
        return out;
    }
    const std::uint64_t lo = std::max(window.start, block.first_sample);
    const std::uint64_t hi = std::min(window.stop, block.first_sample + block.size());
    for (std::uint64_t idx = lo; idx < hi; ++idx) {
        auto&        s = out.samples[idx - block.first_sample];
        const double x = s + amplitude * tone(freq_hz, block.sample_rate_hz, 0.0, idx);
        if (quantize_sample(x, s)) {
            ++out.clip_count;
        }
    }
    return out;
}

} // namespace vacrng
