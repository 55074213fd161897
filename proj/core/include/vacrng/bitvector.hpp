#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace vacrng {

/// Growable bit string. Bit i lives in words()[i / 64] at position i % 64 (LSB first), which is the
/// natural layout for GF(2) polynomial arithmetic. Byte serialization is MSB first: bit 0 of the
/// vector becomes the most significant bit of byte 0.
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t bits);

    static BitVector from_bytes_msb_first(std::span<const std::uint8_t> bytes, std::size_t bits);

    std::size_t size() const noexcept { return size_; }
    bool        empty() const noexcept { return size_ == 0; }

    bool get(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i, bool v) noexcept {
        const std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (v) {
            words_[i >> 6] |= mask;
        } else {
            words_[i >> 6] &= ~mask;
        }
    }

    void push_back(bool v);
    /// Appends the low `count` bits of `value`, most significant first.
    void append_msb_first(std::uint64_t value, int count);
    void append(const BitVector& other);
    void resize(std::size_t bits);
    void clear() noexcept;

    std::size_t popcount() const noexcept;
    BitVector&  operator^=(const BitVector& other);
    friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }
    friend bool      operator==(const BitVector& a, const BitVector& b) noexcept {
        return a.size_ == b.size_ && a.words_ == b.words_;
    }

    std::span<const std::uint64_t> words() const noexcept { return words_; }
    std::span<std::uint64_t>       words() noexcept { return words_; }

    std::vector<std::uint8_t> to_bytes_msb_first() const;
    /// First `bits` bits as a new vector.
    BitVector prefix(std::size_t bits) const;

private:
    void clear_tail() noexcept;

    std::vector<std::uint64_t> words_;
    std::size_t                size_ = 0;
};

} // namespace vacrng
