#include "oracles.hpp"

#include <vacrng/error.hpp>
#include <vacrng/rng.hpp>
#include <vacrng/spectral.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace vacrng;

namespace {

std::vector<double> gaussian(std::size_t n, std::uint64_t seed, double sd = 1.0) {
    Xoshiro256pp        r(seed);
    GaussianSource      g(r);
    std::vector<double> x(n);
    g.fill(x, sd);
    return x;
}

double energy(const Spectrum& s) {
    double e = s.dc * s.dc + s.nyquist * s.nyquist;
    for (auto a : s.amplitudes) {
        e += 2.0 * std::norm(a);
    }
    return e;
}

} // namespace

class DftAgainstNaive : public ::testing::TestWithParam<std::size_t> {};

TEST_P(DftAgainstNaive, MatchesDirectSum) {
    const auto n = GetParam();
    const auto x = gaussian(n, n);
    BlockTransform t(n, 1e9);
    const auto     s   = t.forward(std::span<const double>(x));
    const auto     ref = oracle::naive_half_dft(x);
    for (std::size_t k = 0; k <= n / 2; ++k) {
        const auto got = s.bin(k);
        ASSERT_NEAR(got.real(), static_cast<double>(ref[k].real()), 1e-11) << k;
        ASSERT_NEAR(got.imag(), static_cast<double>(ref[k].imag()), 1e-11) << k;
    }
}

INSTANTIATE_TEST_SUITE_P(Lengths, DftAgainstNaive, ::testing::Values(4, 6, 64, 360, 1000, 1024));

TEST(Spectral, ParsevalOnCompositeLength) {
    const auto x = gaussian(200000, 3, 5.0);
    BlockTransform t(200000, 20e9);
    const auto     s  = t.forward(std::span<const double>(x));
    double         e0 = 0;
    for (double v : x) {
        e0 += v * v;
    }
    EXPECT_NEAR(energy(s) / e0, 1.0, 1e-10);
    EXPECT_DOUBLE_EQ(s.delta_f, 1e5);
}

TEST(Spectral, ToneLandsInOneBin) {
    const std::size_t   n  = 200000;
    const std::size_t   k0 = 9000; // 900 MHz at 0.1 MHz resolution
    std::vector<double> x(n);
    for (std::size_t j = 0; j < n; ++j) {
        x[j] = 3.0 * std::cos(2.0 * std::numbers::pi * static_cast<double>((j * k0) % n) / n + 0.4);
    }
    BlockTransform t(n, 20e9);
    const auto     s    = t.forward(std::span<const double>(x));
    const double   peak = 3.0 * std::sqrt(static_cast<double>(n)) / 2.0;
    EXPECT_NEAR(std::abs(s.bin(k0)) / peak, 1.0, 1e-9);
    EXPECT_NEAR(std::arg(s.bin(k0)), 0.4, 1e-9);
    for (std::size_t k = 0; k <= n / 2; ++k) {
        if (k != k0) {
            ASSERT_LT(std::abs(s.bin(k)), 1e-9 * peak) << k;
        }
    }
}

TEST(Spectral, InverseRestoresBlock) {
    const auto     x = gaussian(1000, 5);
    BlockTransform t(1000, 1e9);
    const auto     back = t.inverse(t.forward(std::span<const double>(x)));
    for (std::size_t i = 0; i < x.size(); ++i) {
        ASSERT_NEAR(back[i], x[i], 1e-12);
    }
}

TEST(Spectral, Int8BlockMatchesDouble) {
    std::vector<std::int8_t> q(512);
    std::vector<double>      d(512);
    for (std::size_t i = 0; i < q.size(); ++i) {
        q[i] = static_cast<std::int8_t>((i * 37) % 255 - 127);
        d[i] = q[i];
    }
    BlockTransform t(512, 1e9);
    const auto     a = t.forward(std::span<const std::int8_t>(q));
    const auto     b = t.forward(std::span<const double>(d));
    EXPECT_EQ(a.amplitudes, b.amplitudes);
}

TEST(Spectral, PsdMergeIsOrderIndependentInCount) {
    BlockTransform t(256, 1e9);
    PsdAccumulator all, left, right;
    for (int i = 0; i < 10; ++i) {
        const auto x = gaussian(256, 100 + i);
        const auto s = t.forward(std::span<const double>(x));
        all.add(s);
        (i < 4 ? left : right).add(s);
    }
    left.merge(right);
    const auto a = all.estimate();
    const auto b = left.estimate();
    ASSERT_EQ(a.blocks_averaged, 10u);
    ASSERT_EQ(b.blocks_averaged, 10u);
    for (std::size_t k = 0; k < a.power.size(); ++k) {
        EXPECT_NEAR(a.power[k], b.power[k], 1e-12 * a.power[k]);
    }
}

TEST(Spectral, WhitePsdLevelEqualsVariance) {
    BlockTransform t(1024, 1e9);
    PsdAccumulator acc;
    for (int i = 0; i < 400; ++i) {
        acc.add(t.forward(std::span<const double>(gaussian(1024, 900 + i, 3.0))));
    }
    const auto psd  = acc.estimate();
    double     mean = 0;
    for (std::size_t k = 1; k < psd.power.size() - 1; ++k) {
        mean += psd.power[k];
    }
    mean /= static_cast<double>(psd.power.size() - 2);
    EXPECT_NEAR(mean, 9.0, 0.05);
}

TEST(Spectral, BlockLengthForResolution) {
    EXPECT_EQ(block_length_for(20e9, 1e5), 200000u);
    EXPECT_EQ(block_length_for(20e9, 0.2e5), 1000000u);
    EXPECT_THROW(block_length_for(20e9, 3e5), ConfigError); // 66666.67
    EXPECT_THROW(block_length_for(20e9, 20e9 / 5), ConfigError);
}

TEST(Spectral, DecibelAndLeakKernel) {
    EXPECT_DOUBLE_EQ(to_decibel(100.0, 1.0), 20.0);
    EXPECT_THROW(to_decibel(0.0, 1.0), ConfigError);
    const double T = 1e-5;
    EXPECT_DOUBLE_EQ(leak_kernel(T, 0.0), T);
    EXPECT_NEAR(leak_kernel(T, 1.0 / T), 0.0, 1e-20);
    EXPECT_NEAR(leak_kernel(T, 0.5 / T), T * 2.0 / std::numbers::pi, 1e-18);
}

TEST(Spectral, FramerDropsTail) {
    std::vector<std::int8_t> x(1050);
    Framer                   f(x, 100);
    EXPECT_EQ(f.frame_count(), 10u);
    EXPECT_EQ(f.frame(9).size(), 100u);
    EXPECT_EQ(f.frame(9).data(), x.data() + 900);
}

TEST(Spectral, RejectsOddOrTinyBlocks) {
    EXPECT_THROW(BlockTransform(7, 1e9), ConfigError);
    EXPECT_THROW(BlockTransform(2, 1e9), ConfigError);
}
