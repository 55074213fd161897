#include <vacrng/error.hpp>
#include <vacrng/signal_sim.hpp>
#include <vacrng/spectral.hpp>
#include <vacrng/trace_io.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace vacrng;

namespace {

NoiseModel flat_model(double electronic_variance, double fs = 20e9) {
    NoiseModel m;
    m.quantum_var_per_mw = 50.0;
    m.electronic_psd     = PiecewisePsd::flat_variance(electronic_variance, fs);
    return m;
}

SimulationRequest request(double power, std::uint64_t seed, std::size_t length = 1u << 20) {
    SimulationRequest r;
    r.power_mw = power;
    r.length   = length;
    r.seed     = seed;
    return r;
}

// Sampling standard deviation of the variance estimate for a Gaussian: var * sqrt(2 / n).
double variance_tolerance(double var, std::size_t n) {
    return 4.0 * var * std::sqrt(2.0 / static_cast<double>(n));
}

} // namespace

TEST(SignalSim, QuantizeRoundsHalfAwayAndSaturates) {
    std::int8_t q;
    EXPECT_FALSE(quantize_sample(0.5, q));
    EXPECT_EQ(q, 1);
    EXPECT_FALSE(quantize_sample(-0.5, q));
    EXPECT_EQ(q, -1);
    EXPECT_FALSE(quantize_sample(2.49, q));
    EXPECT_EQ(q, 2);
    EXPECT_TRUE(quantize_sample(127.5, q));
    EXPECT_EQ(q, 127);
    EXPECT_TRUE(quantize_sample(-400.0, q));
    EXPECT_EQ(q, -127);
    EXPECT_FALSE(quantize_sample(-127.4, q));
    EXPECT_EQ(q, -127);
}

TEST(SignalSim, SameSeedIsBitIdentical) {
    const auto m = default_noise_model(20e9);
    const auto a = simulate_block(m, request(2.0, 9, 1u << 16));
    const auto b = simulate_block(m, request(2.0, 9, 1u << 16));
    const auto c = simulate_block(m, request(2.0, 10, 1u << 16));
    EXPECT_EQ(a.samples, b.samples);
    EXPECT_NE(a.samples, c.samples);
}

TEST(SignalSim, DarkVarianceMatchesElectronicPlusQuantization) {
    const auto b = simulate_block(flat_model(25.0), request(0.0, 3));
    // Rounding to integer codes adds 1/12 for a smooth input density.
    const double expected = 25.0 + 1.0 / 12.0;
    EXPECT_NEAR(sample_variance(b.samples), expected, variance_tolerance(expected, b.size()));
    EXPECT_EQ(b.clip_count, 0u);
}

TEST(SignalSim, QuantumVarianceScalesWithPower) {
    for (double p : {1.0, 3.0, 6.0}) {
        const auto   b        = simulate_block(flat_model(25.0), request(p, 17 + static_cast<int>(p)));
        const double expected = 50.0 * p + 25.0 + 1.0 / 12.0;
        EXPECT_NEAR(sample_variance(b.samples), expected, variance_tolerance(expected, b.size())) << p;
    }
}

TEST(SignalSim, LowPassShapesQuantumSpectrum) {
    auto m              = flat_model(1.0);
    m.detector_response = LowPass{2e9, 4};
    const auto b        = simulate_block(m, request(4.0, 5));
    BlockTransform t(4096, 20e9);
    PsdAccumulator acc;
    for (std::size_t i = 0; i + 4096 <= b.size(); i += 4096) {
        acc.add(t.forward(std::span(b.samples).subspan(i, 4096)));
    }
    const auto psd = acc.estimate();
    // E|a_k|^2 = 200 g(f)^2 + 1 + 1/12 (white floors).
    for (double f : {0.5e9, 2e9, 3e9}) {
        const auto   k    = static_cast<std::size_t>(f / psd.delta_f);
        const double g    = m.detector_response(f);
        const double want = 200.0 * g * g + 1.0 + 1.0 / 12.0;
        double       got  = 0;
        for (std::size_t j = k - 5; j <= k + 5; ++j) {
            got += psd.power[j] / 11.0;
        }
        EXPECT_NEAR(got, want, 0.08 * want) << f;
    }
}

TEST(SignalSim, SpurAppearsAtItsBin) {
    auto m = flat_model(4.0);
    m.spurs.push_back({1.25e9, 5.0, 0.0, std::nullopt});
    const auto b = simulate_block(m, request(0.0, 2, 1u << 14));
    const auto s = dft_block(b);
    const auto k = static_cast<std::size_t>(1.25e9 / s.delta_f);
    // A cosine of amplitude A on an exact bin gives |a_k| = A sqrt(N) / 2.
    EXPECT_NEAR(std::abs(s.bin(k)), 5.0 * std::sqrt(16384.0) / 2.0, 10.0);
}

TEST(SignalSim, BurstWindowUsesAbsoluteIndices) {
    auto       m    = flat_model(4.0);
    const auto base = simulate_block(m, request(1.0, 4, 1u << 12));
    m.spurs.push_back({1e9, 20.0, 0.3, BurstWindow{1000, 3000}});
    auto req         = request(1.0, 4, 1u << 12);
    const auto burst = simulate_block(m, req);
    for (std::size_t i = 0; i < base.size(); ++i) {
        if (i < 1000 || i >= 3000) {
            ASSERT_EQ(base.samples[i], burst.samples[i]) << i;
        }
    }
    // Same block later in the trace: the window lies wholly before it.
    req.first_sample   = 1u << 12;
    const auto later_a = simulate_block(flat_model(4.0), req);
    const auto later_b = simulate_block(m, req);
    EXPECT_EQ(later_a.samples, later_b.samples);
}

TEST(SignalSim, InjectBurstTouchesOnlyWindow) {
    const auto b = simulate_block(flat_model(4.0), request(1.0, 8, 1u << 12));
    const auto j = inject_gsm_burst(b, 900e6, 10.0, {100, 200});
    int        changed = 0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (i < 100 || i >= 200) {
            ASSERT_EQ(b.samples[i], j.samples[i]);
        } else {
            changed += b.samples[i] != j.samples[i];
        }
    }
    EXPECT_GT(changed, 50);
    EXPECT_THROW(inject_gsm_burst(b, 10e9, 1.0, {0, 10}), ConfigError);
}

TEST(SignalSim, ClipCountReportsSaturation) {
    const auto b = simulate_block(flat_model(2500.0), request(0.0, 1, 1u << 14));
    std::uint64_t clipped = 0;
    for (auto s : b.samples) {
        clipped += (s == 127 || s == -127);
    }
    EXPECT_GT(b.clip_count, 0u);
    EXPECT_LE(b.clip_count, clipped);
}

TEST(SignalSim, InterleaverTonesAtFractionsOfRate) {
    auto m                   = flat_model(1.0);
    m.adc_artifact_period    = 4;
    m.adc_artifact_amplitude = 3.0;
    const auto b             = simulate_block(m, request(0.0, 2, 1u << 12));
    const auto s             = dft_block(b);
    const auto k             = s.block_length / 4; // fs / 4
    EXPECT_GT(std::abs(s.bin(k)), 10.0 * std::sqrt(1.1));
}

TEST(SignalSim, RejectsBadRequests) {
    const auto m = default_noise_model(20e9);
    auto       r = request(1.0, 1, 1000);
    EXPECT_THROW(simulate_block(m, r), ConfigError);
    r = request(-1.0, 1, 1024);
    EXPECT_THROW(simulate_block(m, r), ConfigError);
    auto bad               = m;
    bad.quantum_var_per_mw = -1.0;
    EXPECT_THROW(simulate_block(bad, request(1.0, 1, 1024)), ConfigError);
}

TEST(SignalSim, TraceKindRoundTrip) {
    EXPECT_EQ(trace_kind_from_string(to_string(TraceKind::dark)), TraceKind::dark);
    EXPECT_EQ(trace_kind_from_string("total"), TraceKind::total);
    EXPECT_THROW(trace_kind_from_string("bright"), ConfigError);
}
