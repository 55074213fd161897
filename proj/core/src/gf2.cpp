#include "vacrng/gf2.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define VACRNG_X86 1
#endif

namespace vacrng::gf2 {

void clmul64_portable(std::uint64_t a, std::uint64_t b, std::uint64_t& lo, std::uint64_t& hi) noexcept {
    lo = 0;
    hi = 0;
    for (int i = 0; i < 64; ++i) {
        if ((b >> i) & 1u) {
            lo ^= a << i;
            if (i != 0) {
                hi ^= a >> (64 - i);
            }
        }
    }
}

bool hardware_clmul_available() noexcept {
#ifdef VACRNG_X86
    static const bool has = __builtin_cpu_supports("pclmul") && __builtin_cpu_supports("sse4.1");
    return has;
#else
    return false;
#endif
}

namespace {

#ifdef VACRNG_X86
__attribute__((target("pclmul,sse4.1"))) void multiply_pclmul(const std::uint64_t* a, std::size_t na,
                                                              const std::uint64_t* b, std::size_t nb,
                                                              std::uint64_t* out) {
    for (std::size_t i = 0; i < na; ++i) {
        if (a[i] == 0) {
            continue;
        }
        const __m128i x = _mm_set_epi64x(0, static_cast<long long>(a[i]));
        std::uint64_t carry = 0;
        for (std::size_t j = 0; j < nb; ++j) {
            const __m128i y  = _mm_set_epi64x(0, static_cast<long long>(b[j]));
            const __m128i p  = _mm_clmulepi64_si128(x, y, 0x00);
            const auto    lo = static_cast<std::uint64_t>(_mm_cvtsi128_si64(p));
            const auto    hi = static_cast<std::uint64_t>(_mm_extract_epi64(p, 1));
            out[i + j] ^= lo ^ carry;
            carry = hi;
        }
        out[i + nb] ^= carry;
    }
}
#endif

void multiply_portable(const std::uint64_t* a, std::size_t na, const std::uint64_t* b, std::size_t nb,
                       std::uint64_t* out) {
    for (std::size_t i = 0; i < na; ++i) {
        if (a[i] == 0) {
            continue;
        }
        std::uint64_t carry = 0;
        for (std::size_t j = 0; j < nb; ++j) {
            std::uint64_t lo, hi;
            clmul64_portable(a[i], b[j], lo, hi);
            out[i + j] ^= lo ^ carry;
            carry = hi;
        }
        out[i + nb] ^= carry;
    }
}

} // namespace

std::vector<std::uint64_t> multiply(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
    std::vector<std::uint64_t> out(a.size() + b.size(), 0);
    if (a.empty() || b.empty()) {
        return out;
    }
#ifdef VACRNG_X86
    if (hardware_clmul_available()) {
        multiply_pclmul(a.data(), a.size(), b.data(), b.size(), out.data());
        return out;
    }
#endif
    multiply_portable(a.data(), a.size(), b.data(), b.size(), out.data());
    return out;
}

} // namespace vacrng::gf2
