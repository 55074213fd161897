#pragma once

// Reference implementations used only by tests. Each one is deliberately naive: direct sums,
// explicit matrices, extended precision. They share no code with the library.

#include <vacrng/bitvector.hpp>

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace oracle {

/// Unitary DFT by direct summation in long double, bins 0 .. N/2.
std::vector<std::complex<long double>> naive_half_dft(std::span<const double> x);

/// H1(X|Y) and Hinf(X|Y) = -log2 max p(x|y) computed with 30 decimal digits.
struct CondEntropy {
    double shannon;
    double min;
};
CondEntropy conditional_entropy_mp(const std::vector<std::vector<double>>& rows, const std::vector<double>& weights);

/// Probability that N(mean, sigma^2) lands in any cell [offset + (c + m 2^n) b, offset + (c + 1 + m 2^n) b).
/// Direct Gaussian interval sum over every wrap within 50 sigma.
std::vector<double> cyclic_cells_direct(double sigma, double width, int bits, double offset, double mean);

struct ShiftScan {
    double mean_shannon;  ///< average over the shift grid
    double min_entropy;   ///< worst shift on the grid
};
/// Explicit brute force over `grid` equally spaced shifts k in [0, width), k_i = i * width / grid.
ShiftScan cyclic_shift_scan(double sigma, double width, int bits, double offset, int grid);

/// Row-by-column GF(2) product with the explicit matrix T(i, j) = seed[i - j + in - 1].
vacrng::BitVector toeplitz_brute(const vacrng::BitVector& seed, const vacrng::BitVector& input, std::size_t out_bits);

/// Bit-by-bit carry-less product of two 64-bit words.
void clmul_naive(std::uint64_t a, std::uint64_t b, std::uint64_t& lo, std::uint64_t& hi);

/// Standard normal quantile by bisection on erfc.
double normal_quantile(double p);

/// Equal-area H1(T|K) for n-bit words with boundaries at N(0, sigma_T) quantiles, averaged over
/// k ~ N(0, sigma_K^2) with Gauss-Hermite quadrature; exact discrete cell probabilities.
double equal_area_cond_shannon_numeric(double sigma_t, double sigma_k, int bits, int hermite_nodes = 64);

/// Leading term 2 exp(-2 pi^2 sigma^2 / B^2) of the wrapped-normal flatness excess.
double wrapped_leading_term(double sigma, double period);

/// max over x of the wrapped density times B, minus 1, by direct image sum at x = 0.
double wrapped_excess_direct(double sigma, double period);

} // namespace oracle
