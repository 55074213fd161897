#pragma once

#include "vacrng/bitvector.hpp"

namespace vacrng {

struct TestResult {
    double statistic = 0.0;
    double p_value   = 0.0;
};

/// Frequency (monobit) test: S = #ones - #zeros, p = erfc(|S| / sqrt(2 n)).
TestResult monobit_test(const BitVector& bits);

/// Pearson chi-square over the 256 byte values (MSB-first bytes, 255 degrees of freedom).
TestResult byte_chi_square_test(const BitVector& bits);

} // namespace vacrng
