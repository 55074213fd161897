#include "vacrng/randomness.hpp"

#include "vacrng/error.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <array>
#include <cmath>

namespace vacrng {

TestResult monobit_test(const BitVector& bits) {
    if (bits.size() < 100) {
        throw DataError("monobit test needs at least 100 bits");
    }
    const double n    = static_cast<double>(bits.size());
    const double ones = static_cast<double>(bits.popcount());
    const double s    = 2.0 * ones - n;
    return {s, std::erfc(std::abs(s) / std::sqrt(2.0 * n))};
}

TestResult byte_chi_square_test(const BitVector& bits) {
    const auto bytes = bits.to_bytes_msb_first();
    const auto whole = bits.size() / 8;
    if (whole < 256 * 5) {
        throw DataError("byte chi-square test needs at least 1280 bytes");
    }
    std::array<std::size_t, 256> counts{};
    for (std::size_t i = 0; i < whole; ++i) {
        ++counts[bytes[i]];
    }
    const double expected = static_cast<double>(whole) / 256.0;
    double       chi2     = 0.0;
    for (auto c : counts) {
        const double d = static_cast<double>(c) - expected;
        chi2 += d * d / expected;
    }
    return {chi2, boost::math::gamma_q(255.0 / 2.0, chi2 / 2.0)};
}

} // namespace vacrng
