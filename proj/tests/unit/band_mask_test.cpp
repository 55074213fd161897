#include <vacrng/analysis.hpp>
#include <vacrng/band_mask.hpp>
#include <vacrng/error.hpp>

#include <gtest/gtest.h>

using namespace vacrng;

TEST(BandMask, MergesOverlapsAndTouching) {
    BandMask m({{5.0, 7.0}, {1.0, 2.0}, {2.0, 3.0}, {6.0, 9.0}});
    ASSERT_EQ(m.intervals().size(), 2u);
    EXPECT_EQ(m.intervals()[0], (FrequencyInterval{1.0, 3.0}));
    EXPECT_EQ(m.intervals()[1], (FrequencyInterval{5.0, 9.0}));
}

TEST(BandMask, NormalizationIsIdempotent) {
    BandMask a({{5.0, 7.0}, {1.0, 2.0}, {6.0, 9.0}});
    BandMask b({a.intervals().begin(), a.intervals().end()});
    EXPECT_EQ(a, b);
}

TEST(BandMask, HalfOpenMembership) {
    const BandMask m({{10.0, 20.0}});
    EXPECT_TRUE(m.contains(10.0));
    EXPECT_TRUE(m.contains(19.999));
    EXPECT_FALSE(m.contains(20.0));
    EXPECT_FALSE(m.contains(9.999));
}

TEST(BandMask, ValidateAgainstNyquist) {
    const BandMask ok({{1.0, 5.0}});
    EXPECT_NO_THROW(ok.validate(5.0));
    EXPECT_THROW(ok.validate(4.0), ConfigError);
    EXPECT_THROW(BandMask({{3.0, 1.0}}), ConfigError);
    EXPECT_THROW(BandMask({{-1.0, 1.0}}).validate(10.0), ConfigError);
}

TEST(BandMask, DefaultGsmMask) {
    const auto m = default_gsm_mask();
    ASSERT_EQ(m.intervals().size(), 1u);
    EXPECT_DOUBLE_EQ(m.intervals()[0].hi_hz - m.intervals()[0].lo_hz, 49e6);
    EXPECT_TRUE(m.contains(900e6));
    EXPECT_FALSE(m.contains(870.9e6));
    EXPECT_TRUE(m.contains(871e6));
}
