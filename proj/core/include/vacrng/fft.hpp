#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>

namespace vacrng {

/**
 * Real-input DFT of fixed length N (any N >= 2, composite lengths included), unnormalized:
 *   out[k] = sum_j in[j] * exp(-2 pi i j k / N),  k = 0 .. N/2.
 * inverse() is the matching half-complex -> real transform, also unnormalized (scales by N).
 *
 * Plans are created once per length and shared; execute calls are thread-safe. Each RealDft owns
 * aligned scratch buffers, so use one instance per worker thread.
 */
class RealDft {
public:
    explicit RealDft(std::size_t n);
    ~RealDft();
    RealDft(RealDft&&) noexcept;
    RealDft& operator=(RealDft&&) noexcept;
    RealDft(const RealDft&)            = delete;
    RealDft& operator=(const RealDft&) = delete;

    std::size_t size() const noexcept { return n_; }
    std::size_t half_size() const noexcept { return n_ / 2 + 1; }

    void forward(std::span<const double> in, std::span<std::complex<double>> out);
    void inverse(std::span<const std::complex<double>> in, std::span<double> out);

private:
    struct Impl;
    std::size_t           n_ = 0;
    std::unique_ptr<Impl> impl_;
};

} // namespace vacrng
