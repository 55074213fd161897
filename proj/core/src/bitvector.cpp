#include "vacrng/bitvector.hpp"

#include "vacrng/error.hpp"

#include <bit>

namespace vacrng {

BitVector::BitVector(std::size_t bits) : words_((bits + 63) / 64, 0), size_(bits) {}

BitVector BitVector::from_bytes_msb_first(std::span<const std::uint8_t> bytes, std::size_t bits) {
    if (bits > bytes.size() * 8) {
        throw DataError("BitVector: not enough bytes for the requested bit count");
    }
    BitVector v(bits);
    for (std::size_t i = 0; i < bits; ++i) {
        v.set(i, (bytes[i >> 3] >> (7 - (i & 7))) & 1u);
    }
    return v;
}

void BitVector::push_back(bool v) {
    if ((size_ & 63) == 0) {
        words_.push_back(0);
    }
    ++size_;
    set(size_ - 1, v);
}

void BitVector::append_msb_first(std::uint64_t value, int count) {
    for (int b = count - 1; b >= 0; --b) {
        push_back((value >> b) & 1u);
    }
}

void BitVector::append(const BitVector& other) {
    if ((size_ & 63) == 0) {
        words_.insert(words_.end(), other.words_.begin(), other.words_.end());
        size_ += other.size_;
        return;
    }
    const std::size_t old   = size_;
    const unsigned    shift = old & 63;
    resize(old + other.size_);
    const std::size_t base = old >> 6;
    for (std::size_t w = 0; w < other.words_.size(); ++w) {
        const std::uint64_t x = other.words_[w];
        words_[base + w] |= x << shift;
        if (base + w + 1 < words_.size()) {
            words_[base + w + 1] |= x >> (64 - shift);
        }
    }
    clear_tail();
}

void BitVector::resize(std::size_t bits) {
    words_.resize((bits + 63) / 64, 0);
    size_ = bits;
    clear_tail();
}

void BitVector::clear() noexcept {
    words_.clear();
    size_ = 0;
}

std::size_t BitVector::popcount() const noexcept {
    std::size_t n = 0;
    for (auto w : words_) {
        n += static_cast<std::size_t>(std::popcount(w));
    }
    return n;
}

BitVector& BitVector::operator^=(const BitVector& other) {
    if (other.size_ != size_) {
        throw DataError("BitVector xor: length mismatch");
    }
    for (std::size_t i = 0; i < words_.size(); ++i) {
        words_[i] ^= other.words_[i];
    }
    return *this;
}

std::vector<std::uint8_t> BitVector::to_bytes_msb_first() const {
    std::vector<std::uint8_t> out((size_ + 7) / 8, 0);
    for (std::size_t i = 0; i < size_; ++i) {
        if (get(i)) {
            out[i >> 3] |= static_cast<std::uint8_t>(0x80u >> (i & 7));
        }
    }
    return out;
}

BitVector BitVector::prefix(std::size_t bits) const {
    if (bits > size_) {
        throw DataError("BitVector::prefix beyond end");
    }
    BitVector v;
    v.words_.assign(words_.begin(), words_.begin() + static_cast<std::ptrdiff_t>((bits + 63) / 64));
    v.size_ = bits;
    v.clear_tail();
    return v;
}

void BitVector::clear_tail() noexcept {
    const unsigned r = size_ & 63;
    if (r != 0 && !words_.empty()) {
        words_.back() &= (std::uint64_t{1} << r) - 1;
    }
}

} // namespace vacrng
