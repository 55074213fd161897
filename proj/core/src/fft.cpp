#include "vacrng/fft.hpp"

#include "vacrng/error.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <map>
#include <mutex>
#include <string>

namespace vacrng {

namespace {

// FFTW's planner is not reentrant; plans are cached for the process lifetime and only
// fftw_execute_dft_* (thread-safe) is called outside the lock.
struct PlanPair {
    fftw_plan forward = nullptr;
    fftw_plan inverse = nullptr;
};

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

PlanPair plans_for(std::size_t n) {
    static std::map<std::size_t, PlanPair> cache;
    std::lock_guard lock(planner_mutex());
    auto it = cache.find(n);
    if (it != cache.end()) {
        return it->second;
    }
    auto* real = fftw_alloc_real(n);
    auto* cplx = fftw_alloc_complex(n / 2 + 1);
    const int len = static_cast<int>(n);
    // FFTW_ESTIMATE keeps plan selection independent of timing, so results are reproducible.
    PlanPair p;
    p.forward = fftw_plan_dft_r2c_1d(len, real, cplx, FFTW_ESTIMATE);
    p.inverse = fftw_plan_dft_c2r_1d(len, cplx, real, FFTW_ESTIMATE);
    fftw_free(real);
    fftw_free(cplx);
    if (p.forward == nullptr || p.inverse == nullptr) {
        throw ConfigError("fftw could not plan a transform of length " + std::to_string(n));
    }
    cache.emplace(n, p);
    return p;
}

} // namespace

struct RealDft::Impl {
    PlanPair      plans;
    double*       real = nullptr;
    fftw_complex* cplx = nullptr;

    ~Impl() {
        fftw_free(real);
        fftw_free(cplx);
    }
};

RealDft::RealDft(std::size_t n) : n_(n), impl_(std::make_unique<Impl>()) {
    if (n < 2) {
        throw ConfigError("DFT length must be at least 2");
    }
    impl_->plans = plans_for(n);
    impl_->real  = fftw_alloc_real(n);
    impl_->cplx  = fftw_alloc_complex(n / 2 + 1);
}

RealDft::~RealDft()                             = default;
RealDft::RealDft(RealDft&&) noexcept            = default;
RealDft& RealDft::operator=(RealDft&&) noexcept = default;

void RealDft::forward(std::span<const double> in, std::span<std::complex<double>> out) {
    if (in.size() != n_ || out.size() != half_size()) {
        throw ConfigError("RealDft::forward: buffer size mismatch");
    }
    std::copy(in.begin(), in.end(), impl_->real);
    fftw_execute_dft_r2c(impl_->plans.forward, impl_->real, impl_->cplx);
    static_assert(sizeof(fftw_complex) == sizeof(std::complex<double>));
    std::memcpy(static_cast<void*>(out.data()), impl_->cplx, sizeof(fftw_complex) * half_size());
}

void RealDft::inverse(std::span<const std::complex<double>> in, std::span<double> out) {
    if (in.size() != half_size() || out.size() != n_) {
        throw ConfigError("RealDft::inverse: buffer size mismatch");
    }
    // c2r destroys its input, hence the scratch copy.
    std::memcpy(impl_->cplx, in.data(), sizeof(fftw_complex) * half_size());
    fftw_execute_dft_c2r(impl_->plans.inverse, impl_->cplx, impl_->real);
    std::copy(impl_->real, impl_->real + n_, out.begin());
}

} // namespace vacrng
