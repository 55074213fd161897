#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace vacrng {

/// One-sided spectral density in code^2/Hz, linearly interpolated between breakpoints and
/// held constant outside them. Variance = integral over [0, sample_rate/2].
class PiecewisePsd {
public:
    struct Point {
        double freq_hz;
        double density;
    };

    PiecewisePsd() = default;
    explicit PiecewisePsd(std::vector<Point> points);

    /// Flat density giving `variance` code^2 over the Nyquist band.
    static PiecewisePsd flat_variance(double variance, double sample_rate_hz);

    double operator()(double freq_hz) const noexcept;
    std::span<const Point> points() const noexcept { return points_; }
    bool empty() const noexcept { return points_.empty(); }

private:
    std::vector<Point> points_;
};

/// Detector/oscilloscope low-pass: gain(f) = 1/sqrt(1 + (f/corner)^(2*order)).
/// corner_hz <= 0 disables the roll-off (gain == 1).
struct LowPass {
    double corner_hz = 0.0;
    int    order     = 1;

    double operator()(double freq_hz) const noexcept;
};

struct BurstWindow {
    std::uint64_t start = 0; ///< absolute sample index, inclusive
    std::uint64_t stop  = 0; ///< absolute sample index, exclusive
};

struct Spur {
    double                     freq_hz      = 0.0;
    double                     amplitude    = 0.0; ///< peak, in ADC codes
    double                     phase_rad    = 0.0;
    std::optional<BurstWindow> window;              ///< nullopt = continuous
};

struct NoiseModel {
    double            quantum_var_per_mw = 50.0; ///< code^2 per mW
    PiecewisePsd      electronic_psd;
    LowPass           detector_response;
    std::vector<Spur> spurs;
    int               adc_artifact_period    = 0;   ///< 0 disables interleaver tones
    double            adc_artifact_amplitude = 0.0; ///< codes, per tone
    double            drift_rel              = 0.0; ///< slow relative intensity drift of the quantum part
    double            quadratic_coeff        = 0.0; ///< detector nonlinearity: y = x + c*x^2 (1/code)

    /// Throws ConfigError when an invariant does not hold.
    void validate() const;
};

/// Default desk-scale model: 50 code^2/mW, flat 25 code^2 electronic floor with a bump near 3 GHz,
/// second-order roll-off at 2 GHz. The electronic shape is a visual approximation of a measured
/// dark spectrum, not a fitted one.
NoiseModel default_noise_model(double sample_rate_hz);

enum class TraceKind { total, dark };

std::string_view to_string(TraceKind kind) noexcept;
TraceKind        trace_kind_from_string(std::string_view s);

struct SampleBlock {
    std::vector<std::int8_t> samples;
    double                   sample_rate_hz   = 0.0;
    double                   optical_power_mw = 0.0;
    std::uint64_t            seed             = 0;
    TraceKind                kind             = TraceKind::total;
    std::uint64_t            clip_count       = 0;
    std::uint64_t            first_sample     = 0; ///< absolute index of samples[0] within its trace

    std::size_t size() const noexcept { return samples.size(); }
};

struct SimulationRequest {
    double        power_mw       = 0.0;
    std::size_t   length         = 1u << 18; ///< power of two
    double        sample_rate_hz = 20e9;
    std::uint64_t seed           = 1;
    std::uint64_t first_sample   = 0; ///< continues spur phases and burst windows across blocks
};

/// Synthesizes one block: shaped quantum noise + colored electronic noise + spurs + interleaver
/// tones, optional quadratic distortion, then round-half-away-from-zero saturating 8-bit quantization.
/// Pure function of its inputs.
SampleBlock simulate_block(const NoiseModel& model, const SimulationRequest& request);

/// Adds amplitude*cos(2*pi*freq*t) to samples whose absolute index lies in `window`, re-quantizing.
/// Samples outside the window are untouched.
SampleBlock inject_gsm_burst(const SampleBlock& block, double freq_hz, double amplitude, BurstWindow window);

/// Round half away from zero, saturate at +-127. Returns true when the value was clipped.
bool quantize_sample(double value, std::int8_t& out) noexcept;

} // namespace vacrng
