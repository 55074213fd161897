#pragma once

#include "vacrng/band_mask.hpp"
#include "vacrng/bitvector.hpp"
#include "vacrng/entropy.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace vacrng {

/// How many bits leave each extraction block and why that is safe.
struct ExtractionPlan {
    int                      word_bits          = 16;
    double                   retained_per_value = 14.0; ///< cap on credited min-entropy per value
    std::size_t              values_per_block   = 0;    ///< Re + Im over retained bins
    std::size_t              hash_in_bits       = 0;
    std::size_t              hash_out_bits      = 0;
    double                   log2_epsilon       = -100.0;
    BandMask                 band_mask;
    double                   delta_f_hz         = 0.0;
    double                   f_max_hz           = 0.0;
    double                   hmin_cond_total    = 0.0; ///< sum of per-value conditional min-entropy, uncapped
    double                   credited_entropy   = 0.0; ///< sum of capped per-value entropy
    double                   gross_rate_bps     = 0.0;
    double                   net_rate_bps       = 0.0;
    std::vector<std::size_t> retained_bins;            ///< ascending bin indices

    double epsilon() const noexcept;
    double block_duration_s() const noexcept { return 1.0 / delta_f_hz; }
};

struct PlanRequest {
    double   log2_epsilon = -100.0;
    BandMask band_mask;
    double   delta_f_hz   = 1e5;
    double   f_max_hz     = 1e9;
    double   hash_ratio   = 14.0 / 16.0; ///< retained bits per value = hash_ratio * word_bits
};

/// Retains every report bin with 0 < f <= f_max outside the mask, credits each value with
/// min(Hmin_cond, hash_ratio * n), and sizes the hash output to floor(credit - 2 log2(1/epsilon)).
ExtractionPlan plan_extraction(const EntropyReport& report, const PlanRequest& request);

/// Throws EntropySafetyError when the plan's output exceeds the extractable bound of its own report.
void check_plan_safety(const ExtractionPlan& plan);

/// Seed of a binary Toeplitz matrix with `out` rows and `in` columns: in + out - 1 bits, one per
/// diagonal. Entry (i, j) equals seed bit i - j + in - 1.
class SeededToeplitz {
public:
    SeededToeplitz(BitVector seed, std::size_t in_bits, std::size_t out_bits);

    /// Expands a 64-bit key with xoshiro256++; deterministic for a given key.
    static SeededToeplitz from_key(std::uint64_t key, std::size_t in_bits, std::size_t out_bits);
    static std::size_t    seed_bits(std::size_t in_bits, std::size_t out_bits) noexcept;

    std::size_t      in_bits() const noexcept { return in_; }
    std::size_t      out_bits() const noexcept { return out_; }
    const BitVector& seed() const noexcept { return seed_; }

private:
    BitVector   seed_;
    std::size_t in_;
    std::size_t out_;
};

/// GF(2) Toeplitz matrix-vector product, computed as the middle slice of a carry-less polynomial product.
BitVector toeplitz_hash(const SeededToeplitz& seed, const BitVector& input);

/// 512-bit cryptographic hash primitive.
class HashPrimitive {
public:
    virtual ~HashPrimitive() = default;
    virtual std::size_t               digest_bits() const noexcept             = 0;
    virtual std::vector<std::uint8_t> digest(std::span<const std::uint8_t> data) const = 0;
    virtual std::string               name() const                             = 0;
};

/// SHA-512 through OpenSSL.
std::unique_ptr<HashPrimitive> make_sha512();

/// Truncated digest of the input (bytes MSB first, followed by the bit length as 64-bit big endian).
BitVector crypto_hash_extract(const HashPrimitive& hash, const BitVector& input, std::size_t out_bits);

/// Longer outputs: digest(counter_be64 || input encoding) for counter = 0, 1, ... concatenated and truncated.
BitVector crypto_hash_expand(const HashPrimitive& hash, const BitVector& input, std::size_t out_bits);

} // namespace vacrng
