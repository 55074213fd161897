#include "oracles.hpp"

#include <vacrng/entropy.hpp>
#include <vacrng/error.hpp>
#include <vacrng/rng.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace vacrng;

namespace {

std::vector<double> random_distribution(Xoshiro256pp& r, std::size_t n, bool sparse) {
    std::vector<double> p(n);
    double              s = 0;
    for (auto& x : p) {
        x = (sparse && r.uniform() < 0.3) ? 0.0 : -std::log(1.0 - r.uniform());
        s += x;
    }
    if (s == 0) {
        p[0] = s = 1.0;
    }
    for (auto& x : p) {
        x /= s;
    }
    return p;
}

} // namespace

TEST(Entropy, BasicDistributions) {
    EXPECT_DOUBLE_EQ(shannon(DiscreteDistribution({0.25, 0.25, 0.25, 0.25})), 2.0);
    EXPECT_DOUBLE_EQ(min_entropy(DiscreteDistribution({0.5, 0.25, 0.25})), 1.0);
    EXPECT_DOUBLE_EQ(shannon(DiscreteDistribution({1.0, 0.0})), 0.0);
    EXPECT_THROW(DiscreteDistribution({0.5, 0.6}), DataError);
    EXPECT_THROW(DiscreteDistribution({1.5, -0.5}), DataError);
}

TEST(Entropy, ConditionalMatchesExtendedPrecision) {
    Xoshiro256pp r(2024);
    for (int trial = 0; trial < 60; ++trial) {
        const auto nx = static_cast<std::size_t>(2 + r() % 255);
        const auto ny = static_cast<std::size_t>(1 + r() % 256);
        std::vector<std::vector<double>> rows;
        for (std::size_t y = 0; y < ny; ++y) {
            rows.push_back(random_distribution(r, nx, trial % 2 == 0));
        }
        auto       w   = random_distribution(r, ny, false);
        const auto got = conditional_entropies(rows, w);
        const auto ref = oracle::conditional_entropy_mp(rows, w);
        EXPECT_NEAR(got.shannon, ref.shannon, 1e-10) << trial;
        EXPECT_NEAR(got.min, ref.min, 1e-10) << trial;
        EXPECT_LE(got.min, got.shannon + 1e-12);
    }
}

TEST(Entropy, ConditionalRejectsShapeMismatch) {
    std::vector<std::vector<double>> rows{{0.5, 0.5}};
    std::vector<double>              w{0.5, 0.5};
    EXPECT_THROW(conditional_entropies(rows, w), DataError);
}

TEST(Entropy, EqualAreaClosedFormAtTenDecibel) {
    const GaussianChannelParams p{std::sqrt(10.0), 1.0};
    EXPECT_NEAR(8 - equal_area_cond_shannon(p, 8), 0.5 * std::log2(10.0 / 9.0), 1e-15);
    EXPECT_NEAR(8 - equal_area_cond_shannon(p, 8), 0.0760, 0.0005);
    EXPECT_THROW(equal_area_cond_shannon(p, 5), ConfigError);
}

TEST(Entropy, EqualAreaClosedFormAgreesWithDiscreteComputation) {
    // Fine bins: the discrete entropy approaches the closed form as 2^-2n.
    const GaussianChannelParams p{std::sqrt(10.0), 1.0};
    const double                numeric = oracle::equal_area_cond_shannon_numeric(p.sigma_t, p.sigma_k, 12);
    EXPECT_NEAR(equal_area_cond_shannon(p, 12), numeric, 2e-3);
}

TEST(Entropy, GivenKReducesToClosedFormAtTypicalK) {
    const GaussianChannelParams p{2.0, 1.0};
    EXPECT_NEAR(equal_area_cond_shannon_given_k(p, 10, 1.0), equal_area_cond_shannon(p, 10), 1e-14);
    EXPECT_LT(equal_area_cond_shannon_given_k(p, 10, 5.0), equal_area_cond_shannon_given_k(p, 10, 0.0));
}

TEST(Entropy, ExtraLosses) {
    const auto l = equal_area_extra_losses(0.02, 8, 5e5);
    EXPECT_NEAR(l.drift, 5.77e-4, 0.005e-4);
    EXPECT_NEAR(l.refit, 8.0 / (2 * 5e5) * std::log2(2 * std::numbers::pi / std::exp(1.0) * 5e5 / 8), 1e-15);
    EXPECT_THROW(equal_area_extra_losses(-0.1, 8, 5e5), ConfigError);
}

TEST(Entropy, EqualAreaMinEntropyIsWorstOverBoundedShift) {
    const GaussianChannelParams p{std::sqrt(10.0), 1.0};
    const int                   n     = 6;
    const double                bound = 3.0;
    const double                got   = equal_area_cond_min_entropy(p, n, bound);
    // Dense brute force over k and all cells.
    const std::size_t   cells = 1u << n;
    std::vector<double> edges(cells + 1);
    edges.front() = -INFINITY;
    edges.back()  = INFINITY;
    for (std::size_t c = 1; c < cells; ++c) {
        edges[c] = p.sigma_t * oracle::normal_quantile(static_cast<double>(c) / cells);
    }
    const double sq    = p.sigma_q();
    double       worst = 0;
    for (int i = -4000; i <= 4000; ++i) {
        const double k = bound * i / 4000.0;
        for (std::size_t c = 0; c < cells; ++c) {
            const double lo = 0.5 * std::erfc(-(edges[c] - k) / sq / std::numbers::sqrt2);
            const double hi = 0.5 * std::erfc(-(edges[c + 1] - k) / sq / std::numbers::sqrt2);
            worst           = std::max(worst, hi - lo);
        }
    }
    EXPECT_NEAR(got, -std::log2(worst), 1e-6);
    EXPECT_LE(got, -std::log2(worst) + 1e-12);
    EXPECT_LT(equal_area_cond_min_entropy(p, n, 10.0), got);
}

TEST(Entropy, CyclicWordDistributionMatchesDirectSum) {
    const auto b = CyclicBinning(0.3, 4, 0.05);
    for (double sigma : {0.2, 0.9, 3.0}) {
        for (double shift : {0.0, 0.11, -2.3}) {
            const auto got = cyclic_word_distribution(sigma, b, shift);
            const auto ref = oracle::cyclic_cells_direct(sigma, 0.3, 4, 0.05, shift);
            for (std::size_t c = 0; c < ref.size(); ++c) {
                ASSERT_NEAR(got[c], ref[c], 1e-13) << sigma << " " << shift << " " << c;
            }
        }
    }
}

TEST(Entropy, CyclicConditionalMatchesShiftScan) {
    Xoshiro256pp r(77);
    for (int t = 0; t < 4; ++t) {
        const int    n     = 2 + static_cast<int>(r() % 5);
        const double width = 0.5 + r.uniform();
        const double sigma = width * (0.1 + 1.5 * r.uniform());
        const auto   got   = cyclic_cond_entropies(sigma, CyclicBinning(width, n));
        const auto   ref   = oracle::cyclic_shift_scan(sigma, width, n, 0.0, 1000);
        EXPECT_NEAR(got.shannon, ref.mean_shannon, 1e-10) << t;
        EXPECT_NEAR(got.min, ref.min_entropy, 1e-10) << t;
    }
}

TEST(Entropy, CyclicAtHalfSigmaPeriodIsNearlyFull) {
    const auto e = cyclic_cond_entropies(1.0, CyclicBinning::with_period(0.5, 16));
    EXPECT_NEAR(e.shannon, 16.0, 1e-12);
    EXPECT_NEAR(e.min, 16.0, 1e-12);
    EXPECT_LE(e.min, e.shannon);
}

TEST(Entropy, ExtractableBits) {
    EXPECT_DOUBLE_EQ(extractable_bits(1000.0, std::ldexp(1.0, -100)), 800.0);
    EXPECT_DOUBLE_EQ(extractable_bits(100.0, std::ldexp(1.0, -100)), 0.0);
    EXPECT_THROW(extractable_bits(10.0, 0.0), ConfigError);
    EXPECT_THROW(extractable_bits(10.0, 2.0), ConfigError);
    EXPECT_DOUBLE_EQ(shannon_lower_bound_via_mutual_info(5.0, 7.0), 0.0);
    EXPECT_DOUBLE_EQ(shannon_lower_bound_via_mutual_info(7.0, 5.0), 2.0);
}

TEST(Entropy, ParamsValidation) {
    EXPECT_THROW((GaussianChannelParams{1.0, 1.0}.validate()), DataError);
    EXPECT_THROW((GaussianChannelParams{1.0, 2.0}.sigma_q()), DataError);
    EXPECT_NEAR((GaussianChannelParams{5.0, 3.0}.sigma_q()), 4.0, 1e-15);
}

TEST(Entropy, ReportsSatisfyInvariants) {
    std::vector<CalibratedBin> bins;
    for (std::size_t k = 1; k <= 5; ++k) {
        bins.push_back({k, k * 1e5, {std::sqrt(10.0) * k, 1.0 * k}});
    }
    const auto cyc = entropy_report(bins, CyclicSettings{});
    ASSERT_EQ(cyc.records.size(), 5u);
    for (const auto& r : cyc.records) {
        EXPECT_LE(r.hmin_cond, r.h1_cond);
        EXPECT_LE(r.h1_cond, 16.0);
        EXPECT_DOUBLE_EQ(r.extractable_bits, 2 * r.hmin_cond);
    }
    const auto ea = entropy_report(bins, EqualAreaSettings{});
    for (const auto& r : ea.records) {
        EXPECT_LE(r.hmin_cond, r.h1_cond);
        EXPECT_NEAR(r.h1_cond, 8 - 0.5 * std::log2(10.0 / 9.0) - equal_area_extra_losses(0, 8, 5e5).refit, 1e-12);
    }
    EXPECT_EQ(binning_scheme_from_string("equal_area"), BinningScheme::equal_area);
    EXPECT_THROW(binning_scheme_from_string("linear"), ConfigError);
}
