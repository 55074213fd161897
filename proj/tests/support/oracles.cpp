#include "oracles.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace oracle {

namespace {

double normal_interval(double lo, double hi) {
    // Tail forms avoid cancellation far from the mean.
    const double r = 1.0 / std::numbers::sqrt2;
    if (lo >= 0) {
        return 0.5 * (std::erfc(lo * r) - std::erfc(hi * r));
    }
    if (hi <= 0) {
        return 0.5 * (std::erfc(-hi * r) - std::erfc(-lo * r));
    }
    return 1.0 - 0.5 * std::erfc(hi * r) - 0.5 * std::erfc(-lo * r);
}

// Golub-Welsch would need an eigen solver; the Newton iteration on Hermite polynomials is enough here.
void gauss_hermite(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const double pim4 = std::pow(std::numbers::pi, -0.25);
    double       z    = 0.0;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        if (i == 0) {
            z = std::sqrt(2.0 * n + 1) - 1.85575 * std::pow(2.0 * n + 1, -0.16667);
        } else if (i == 1) {
            z -= 1.14 * std::pow(n, 0.426) / z;
        } else if (i == 2) {
            z = 1.86 * z - 0.86 * x[0];
        } else if (i == 3) {
            z = 1.91 * z - 0.91 * x[1];
        } else {
            z = 2.0 * z - x[i - 2];
        }
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = pim4, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2              = p1;
                p1              = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
            }
            pp              = std::sqrt(2.0 * n) * p2;
            const double z1 = z;
            z               = z1 - p1 / pp;
            if (std::abs(z - z1) <= 1e-15) {
                break;
            }
        }
        x[i]         = z;
        x[n - 1 - i] = -z;
        w[i]         = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
}

} // namespace

std::vector<std::complex<long double>> naive_half_dft(std::span<const double> x) {
    const std::size_t n = x.size();
    std::vector<std::complex<long double>> out(n / 2 + 1);
    const long double scale = 1.0L / std::sqrt(static_cast<long double>(n));
    const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
    for (std::size_t k = 0; k <= n / 2; ++k) {
        long double re = 0, im = 0;
        for (std::size_t j = 0; j < n; ++j) {
            const auto phase = two_pi * static_cast<long double>((j * k) % n) / static_cast<long double>(n);
            re += x[j] * std::cos(phase);
            im -= x[j] * std::sin(phase);
        }
        out[k] = {re * scale, im * scale};
    }
    return out;
}

CondEntropy conditional_entropy_mp(const std::vector<std::vector<double>>& rows, const std::vector<double>& weights) {
    using F = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<30>>;
    F shannon = 0;
    F worst   = 0;
    const F ln2 = log(F(2));
    for (std::size_t y = 0; y < rows.size(); ++y) {
        F h = 0;
        for (double p : rows[y]) {
            if (p > 0) {
                const F q = p;
                h -= q * log(q);
                worst = std::max(worst, q);
            }
        }
        shannon += F(weights[y]) * h / ln2;
    }
    return {static_cast<double>(shannon), static_cast<double>(-log(worst) / ln2)};
}

std::vector<double> cyclic_cells_direct(double sigma, double width, int bits, double offset, double mean) {
    const long long cells  = 1LL << bits;
    std::vector<double> p(static_cast<std::size_t>(cells), 0.0);
    const auto first = static_cast<long long>(std::floor((mean - 50 * sigma - offset) / width));
    const auto last  = static_cast<long long>(std::ceil((mean + 50 * sigma - offset) / width));
    for (long long i = first; i <= last; ++i) {
        const double lo   = offset + static_cast<double>(i) * width;
        const auto   cell = ((i % cells) + cells) % cells;
        p[static_cast<std::size_t>(cell)] += normal_interval((lo - mean) / sigma, (lo + width - mean) / sigma);
    }
    return p;
}

ShiftScan cyclic_shift_scan(double sigma, double width, int bits, double offset, int grid) {
    double sum   = 0.0;
    double worst = 0.0;
    for (int i = 0; i < grid; ++i) {
        const double k = width * i / grid;
        const auto   p = cyclic_cells_direct(sigma, width, bits, offset, k);
        long double  h = 0.0L;
        for (double q : p) {
            if (q > 0) {
                h -= q * std::log2(static_cast<long double>(q));
            }
        }
        sum += static_cast<double>(h);
        worst = std::max(worst, *std::max_element(p.begin(), p.end()));
    }
    return {sum / grid, -std::log2(worst)};
}

vacrng::BitVector toeplitz_brute(const vacrng::BitVector& seed, const vacrng::BitVector& input, std::size_t out_bits) {
    const std::size_t in = input.size();
    vacrng::BitVector out(out_bits);
    for (std::size_t i = 0; i < out_bits; ++i) {
        bool acc = false;
        for (std::size_t j = 0; j < in; ++j) {
            acc ^= seed.get(i + in - 1 - j) && input.get(j);
        }
        out.set(i, acc);
    }
    return out;
}

void clmul_naive(std::uint64_t a, std::uint64_t b, std::uint64_t& lo, std::uint64_t& hi) {
    lo = hi = 0;
    for (int i = 0; i < 64; ++i) {
        if ((b >> i) & 1u) {
            lo ^= a << i;
            if (i > 0) {
                hi ^= a >> (64 - i);
            }
        }
    }
}

double normal_quantile(double p) {
    double lo = -40.0, hi = 40.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double cdf = 0.5 * std::erfc(-mid / std::numbers::sqrt2);
        (cdf < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double equal_area_cond_shannon_numeric(double sigma_t, double sigma_k, int bits, int hermite_nodes) {
    const double      sigma_q = std::sqrt(sigma_t * sigma_t - sigma_k * sigma_k);
    const std::size_t cells   = std::size_t{1} << bits;
    std::vector<double> edges(cells + 1);
    edges.front() = -INFINITY;
    edges.back()  = INFINITY;
    for (std::size_t c = 1; c < cells; ++c) {
        edges[c] = sigma_t * normal_quantile(static_cast<double>(c) / static_cast<double>(cells));
    }
    std::vector<double> x, w;
    gauss_hermite(hermite_nodes, x, w);
    double total = 0.0;
    for (int i = 0; i < hermite_nodes; ++i) {
        const double k = std::numbers::sqrt2 * sigma_k * x[i];
        long double  h = 0.0L;
        for (std::size_t c = 0; c < cells; ++c) {
            const double p = normal_interval((edges[c] - k) / sigma_q, (edges[c + 1] - k) / sigma_q);
            if (p > 0) {
                h -= p * std::log2(static_cast<long double>(p));
            }
        }
        total += w[i] / std::sqrt(std::numbers::pi) * static_cast<double>(h);
    }
    return total;
}

double wrapped_leading_term(double sigma, double period) {
    return 2.0 * std::exp(-2.0 * std::numbers::pi * std::numbers::pi * sigma * sigma / (period * period));
}

double wrapped_excess_direct(double sigma, double period) {
    long double sum = 0.0L;
    for (int m = -2000; m <= 2000; ++m) {
        const long double z = static_cast<long double>(m) * period / sigma;
        sum += std::exp(-0.5L * z * z);
    }
    const long double density = sum / (sigma * std::sqrt(2.0L * std::numbers::pi_v<long double>));
    return static_cast<double>(density * period - 1.0L);
}

} // namespace oracle
