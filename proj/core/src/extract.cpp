#include "vacrng/extract.hpp"

#include "vacrng/error.hpp"
#include "vacrng/gf2.hpp"
#include "vacrng/rng.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <string>

namespace vacrng {

double ExtractionPlan::epsilon() const noexcept {
    return std::exp2(log2_epsilon);
}

ExtractionPlan plan_extraction(const EntropyReport& report, const PlanRequest& request) {
    if (!(request.delta_f_hz > 0.0) || !(request.f_max_hz > 0.0)) {
        throw ConfigError("plan_extraction: delta_f and f_max must be positive");
    }
    if (!(request.log2_epsilon <= 0.0)) {
        throw ConfigError("plan_extraction: epsilon must lie in (0, 1]");
    }
    if (!(request.hash_ratio > 0.0 && request.hash_ratio <= 1.0)) {
        throw ConfigError("plan_extraction: hash_ratio must lie in (0, 1]");
    }
    report.check_invariants();

    ExtractionPlan plan;
    plan.word_bits          = report.word_bits;
    plan.retained_per_value = request.hash_ratio * report.word_bits;
    plan.log2_epsilon       = request.log2_epsilon;
    plan.band_mask          = request.band_mask;
    plan.delta_f_hz         = request.delta_f_hz;
    plan.f_max_hz           = request.f_max_hz;

    const auto top_bin = static_cast<std::size_t>(std::floor(request.f_max_hz / request.delta_f_hz + 1e-9));
    std::vector<const EntropyRecord*> by_bin(top_bin + 1, nullptr);
    for (const auto& r : report.records) {
        if (r.bin >= 1 && r.bin <= top_bin) {
            by_bin[r.bin] = &r;
        }
    }
    long double credited = 0.0L;
    long double hmin     = 0.0L;
    for (std::size_t k = 1; k <= top_bin; ++k) {
        const double f = static_cast<double>(k) * request.delta_f_hz;
        if (request.band_mask.contains(f)) {
            continue;
        }
        if (by_bin[k] == nullptr) {
            throw DataError("plan_extraction: entropy report has no record for bin " + std::to_string(k) + " (" +
                            std::to_string(f) + " Hz)");
        }
        plan.retained_bins.push_back(k);
        const double h = by_bin[k]->hmin_cond;
        hmin += 2.0L * h;
        credited += 2.0L * std::min(h, plan.retained_per_value);
    }
    if (plan.retained_bins.empty()) {
        throw DataError("plan_extraction: no frequency bins retained");
    }
    plan.values_per_block = 2 * plan.retained_bins.size();
    plan.hash_in_bits     = plan.values_per_block * static_cast<std::size_t>(plan.word_bits);
    plan.hmin_cond_total  = static_cast<double>(hmin);
    plan.credited_entropy = static_cast<double>(credited);
    const double out      = std::max(0.0L, credited + 2.0L * request.log2_epsilon);
    plan.hash_out_bits    = static_cast<std::size_t>(std::floor(out));
    plan.gross_rate_bps   = static_cast<double>(plan.hash_in_bits) * request.delta_f_hz;
    plan.net_rate_bps     = static_cast<double>(plan.hash_out_bits) * request.delta_f_hz;
    check_plan_safety(plan);
    return plan;
}

void check_plan_safety(const ExtractionPlan& plan) {
    const double bound = std::max(0.0, plan.hmin_cond_total + 2.0 * plan.log2_epsilon);
    if (static_cast<double>(plan.hash_out_bits) > bound) {
        throw EntropySafetyError("extraction plan emits " + std::to_string(plan.hash_out_bits) +
                                 " bits per block but only " + std::to_string(bound) + " are extractable");
    }
    if (plan.hash_out_bits > plan.hash_in_bits) {
        throw EntropySafetyError("extraction plan emits more bits than it consumes");
    }
}

SeededToeplitz::SeededToeplitz(BitVector seed, std::size_t in_bits, std::size_t out_bits)
    : seed_(std::move(seed)), in_(in_bits), out_(out_bits) {
    if (in_bits == 0 || out_bits == 0) {
        throw ConfigError("Toeplitz hash needs non-zero input and output sizes");
    }
    if (seed_.size() != seed_bits(in_bits, out_bits)) {
        throw ConfigError("Toeplitz seed must have in + out - 1 = " + std::to_string(seed_bits(in_bits, out_bits)) +
                          " bits, got " + std::to_string(seed_.size()));
    }
}

std::size_t SeededToeplitz::seed_bits(std::size_t in_bits, std::size_t out_bits) noexcept {
    return in_bits + out_bits - 1;
}

SeededToeplitz SeededToeplitz::from_key(std::uint64_t key, std::size_t in_bits, std::size_t out_bits) {
    if (in_bits == 0 || out_bits == 0) {
        throw ConfigError("Toeplitz hash needs non-zero input and output sizes");
    }
    BitVector    seed(seed_bits(in_bits, out_bits));
    Xoshiro256pp rng(key);
    for (auto& w : seed.words()) {
        w = rng();
    }
    seed.resize(seed.size()); // clears bits past the end
    return SeededToeplitz(std::move(seed), in_bits, out_bits);
}

BitVector toeplitz_hash(const SeededToeplitz& seed, const BitVector& input) {
    if (input.size() != seed.in_bits()) {
        throw DataError("toeplitz_hash: input has " + std::to_string(input.size()) + " bits, expected " +
                        std::to_string(seed.in_bits()));
    }
    // y_i = sum_j s[i - j + in - 1] x_j  =  coefficient (i + in - 1) of s(z) * x(z) over GF(2).
    const auto product = gf2::multiply(input.words(), seed.seed().words());
    BitVector  out(seed.out_bits());
    const std::size_t first = seed.in_bits() - 1;
    const std::size_t word0 = first >> 6;
    const unsigned    shift = first & 63;
    auto              dst   = out.words();
    for (std::size_t w = 0; w < dst.size(); ++w) {
        std::uint64_t v = product[word0 + w] >> shift;
        if (shift != 0 && word0 + w + 1 < product.size()) {
            v |= product[word0 + w + 1] << (64 - shift);
        }
        dst[w] = v;
    }
    out.resize(out.size());
    return out;
}

namespace {

class Sha512 final : public HashPrimitive {
public:
    std::size_t digest_bits() const noexcept override { return 512; }
    std::string name() const override { return "sha512"; }

    std::vector<std::uint8_t> digest(std::span<const std::uint8_t> data) const override {
        std::vector<std::uint8_t> out(64);
        unsigned int              len = 0;
        if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha512(), nullptr) != 1 || len != 64) {
            throw DataError("SHA-512 digest failed");
        }
        return out;
    }
};

std::vector<std::uint8_t> encode_input(const BitVector& input) {
    auto bytes = input.to_bytes_msb_first();
    const std::uint64_t n = input.size();
    for (int i = 7; i >= 0; --i) {
        bytes.push_back(static_cast<std::uint8_t>(n >> (8 * i)));
    }
    return bytes;
}

} // namespace

std::unique_ptr<HashPrimitive> make_sha512() {
    return std::make_unique<Sha512>();
}

BitVector crypto_hash_extract(const HashPrimitive& hash, const BitVector& input, std::size_t out_bits) {
    if (out_bits > hash.digest_bits()) {
        throw ConfigError("crypto_hash_extract: " + hash.name() + " yields at most " +
                          std::to_string(hash.digest_bits()) + " bits");
    }
    if (out_bits == 0) {
        return BitVector();
    }
    const auto digest = hash.digest(encode_input(input));
    return BitVector::from_bytes_msb_first(digest, out_bits);
}

BitVector crypto_hash_expand(const HashPrimitive& hash, const BitVector& input, std::size_t out_bits) {
    const auto body = encode_input(input);
    std::vector<std::uint8_t> msg(8 + body.size());
    std::copy(body.begin(), body.end(), msg.begin() + 8);
    BitVector out;
    for (std::uint64_t counter = 0; out.size() < out_bits; ++counter) {
        for (int i = 0; i < 8; ++i) {
            msg[i] = static_cast<std::uint8_t>(counter >> (8 * (7 - i)));
        }
        const auto digest = hash.digest(msg);
        const std::size_t take = std::min(hash.digest_bits(), out_bits - out.size());
        out.append(BitVector::from_bytes_msb_first(digest, take));
    }
    return out;
}

} // namespace vacrng
