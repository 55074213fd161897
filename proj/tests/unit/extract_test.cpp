#include "oracles.hpp"

#include <vacrng/analysis.hpp>
#include <vacrng/error.hpp>
#include <vacrng/extract.hpp>
#include <vacrng/pipeline.hpp>
#include <vacrng/rng.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace vacrng;

namespace {

BitVector random_bits(Xoshiro256pp& r, std::size_t n) {
    BitVector v;
    for (std::size_t i = 0; i < n; ++i) {
        v.push_back(r() >> 63);
    }
    return v;
}

EntropyReport flat_report(std::size_t bins, double hmin, int bits = 16) {
    EntropyReport rep;
    rep.word_bits = bits;
    for (std::size_t k = 1; k <= bins; ++k) {
        rep.records.push_back({k, k * 1e5, bits * 1.0, bits * 1.0, hmin, hmin, 2 * hmin});
    }
    return rep;
}

std::string hex(const std::vector<std::uint8_t>& b) {
    static const char* d = "0123456789abcdef";
    std::string        s;
    for (auto x : b) {
        s += d[x >> 4];
        s += d[x & 15];
    }
    return s;
}

} // namespace

TEST(Plan, PaperRateArithmetic) {
    PlanRequest req;
    req.band_mask    = default_gsm_mask();
    const auto plan  = plan_extraction(flat_report(10000, 16.0), req);
    EXPECT_EQ(plan.retained_bins.size(), 9510u);
    EXPECT_EQ(plan.values_per_block, 19020u);
    EXPECT_EQ(plan.hash_in_bits, 19020u * 16);
    EXPECT_EQ(plan.hash_out_bits, 19020u * 14 - 200);
    EXPECT_NEAR(plan.net_rate_bps, 26.608e9, 1.0);
    EXPECT_NEAR(plan.gross_rate_bps, 30.432e9, 1.0);
    EXPECT_DOUBLE_EQ(plan.block_duration_s(), 1e-5);
}

TEST(Plan, MaskRemoves490Bins) {
    PlanRequest req;
    const auto  open = plan_extraction(flat_report(10000, 16.0), req);
    req.band_mask    = default_gsm_mask();
    const auto mask  = plan_extraction(flat_report(10000, 16.0), req);
    EXPECT_EQ(open.values_per_block - mask.values_per_block, 490u * 2);
    for (auto k : mask.retained_bins) {
        EXPECT_FALSE(req.band_mask.contains(k * 1e5));
    }
}

TEST(Plan, LowEntropyLimitsOutput) {
    PlanRequest req;
    req.f_max_hz    = 1e6; // 10 bins
    const auto plan = plan_extraction(flat_report(10, 5.0), req);
    EXPECT_EQ(plan.hash_out_bits, 0u); // 100 bits of entropy < 200-bit penalty
    const auto more = plan_extraction(flat_report(10, 13.0), req);
    EXPECT_EQ(more.hash_out_bits, 60u);
}

TEST(Plan, SafetyCheckCatchesTampering) {
    PlanRequest req;
    auto        plan = plan_extraction(flat_report(10000, 16.0), req);
    EXPECT_NO_THROW(check_plan_safety(plan));
    plan.hash_out_bits = static_cast<std::size_t>(plan.hmin_cond_total);
    EXPECT_THROW(check_plan_safety(plan), EntropySafetyError);
}

TEST(Plan, MissingBinIsDataError) {
    PlanRequest req;
    req.f_max_hz = 2e6;
    EXPECT_THROW(plan_extraction(flat_report(10, 16.0), req), DataError);
    req.log2_epsilon = 1.0;
    EXPECT_THROW(plan_extraction(flat_report(20, 16.0), req), ConfigError);
}

TEST(Toeplitz, MatchesExplicitMatrix) {
    Xoshiro256pp r(12);
    for (int t = 0; t < 25; ++t) {
        const std::size_t in   = 1 + r() % 700;
        const std::size_t out  = 1 + r() % in;
        const auto        seed = random_bits(r, SeededToeplitz::seed_bits(in, out));
        const auto        x    = random_bits(r, in);
        const SeededToeplitz T(seed, in, out);
        EXPECT_EQ(toeplitz_hash(T, x), oracle::toeplitz_brute(seed, x, out)) << in << "x" << out;
    }
}

TEST(Toeplitz, IsLinear) {
    Xoshiro256pp r(13);
    const auto   T = SeededToeplitz::from_key(99, 3000, 2500);
    const auto   a = random_bits(r, 3000);
    const auto   b = random_bits(r, 3000);
    EXPECT_EQ(toeplitz_hash(T, a ^ b), toeplitz_hash(T, a) ^ toeplitz_hash(T, b));
}

TEST(Toeplitz, KeyedSeedIsDeterministic) {
    const auto a = SeededToeplitz::from_key(5, 100, 80);
    const auto b = SeededToeplitz::from_key(5, 100, 80);
    const auto c = SeededToeplitz::from_key(6, 100, 80);
    EXPECT_EQ(a.seed(), b.seed());
    EXPECT_NE(a.seed(), c.seed());
    EXPECT_EQ(a.seed().size(), 179u);
}

TEST(Toeplitz, RejectsWrongSizes) {
    EXPECT_THROW(SeededToeplitz(BitVector(10), 8, 4), ConfigError);
    const auto T = SeededToeplitz::from_key(1, 16, 8);
    EXPECT_THROW(toeplitz_hash(T, BitVector(15)), DataError);
}

TEST(Sha512, KnownAnswer) {
    const auto h   = make_sha512();
    const std::string abc = "abc";
    const auto d = h->digest({reinterpret_cast<const std::uint8_t*>(abc.data()), abc.size()});
    EXPECT_EQ(hex(d), "ddaf35a193617abacc417349ae20413112e6fa4e89a97ea20a9eeee64b55d39a"
                      "2192992a274fc1a836ba3c23a3feebbd454d4423643ce80e2a9ac94fa54ca49f");
    EXPECT_EQ(h->digest_bits(), 512u);
}

TEST(Sha512, ExtractAndExpand) {
    Xoshiro256pp r(3);
    const auto   h = make_sha512();
    const auto   x = random_bits(r, 1000);
    const auto   e = crypto_hash_extract(*h, x, 300);
    EXPECT_EQ(e.size(), 300u);
    EXPECT_THROW(crypto_hash_extract(*h, x, 513), ConfigError);
    const auto long_out = crypto_hash_expand(*h, x, 1500);
    EXPECT_EQ(long_out.size(), 1500u);
    EXPECT_EQ(crypto_hash_expand(*h, x, 700), long_out.prefix(700));
    auto y = x;
    y.set(0, !y.get(0));
    EXPECT_NE(crypto_hash_expand(*h, y, 700), long_out.prefix(700));
    // The bit length is part of the message: a trailing zero bit changes the digest.
    auto z = x;
    z.push_back(false);
    EXPECT_NE(crypto_hash_extract(*h, z, 300), e);
}
