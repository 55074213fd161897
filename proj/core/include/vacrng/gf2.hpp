#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace vacrng::gf2 {

/// Carry-less (GF(2)[x]) product of two polynomials stored as little-endian 64-bit words.
/// Result has a.size() + b.size() words. Uses PCLMULQDQ when the CPU has it.
std::vector<std::uint64_t> multiply(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);

/// Portable 64x64 -> 128 carry-less multiply; {low, high}.
void clmul64_portable(std::uint64_t a, std::uint64_t b, std::uint64_t& lo, std::uint64_t& hi) noexcept;

bool hardware_clmul_available() noexcept;

} // namespace vacrng::gf2
