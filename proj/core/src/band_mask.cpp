#include "vacrng/band_mask.hpp"

#include "vacrng/error.hpp"

#include <algorithm>
#include <cmath>

namespace vacrng {

BandMask::BandMask(std::vector<FrequencyInterval> intervals) : intervals_(std::move(intervals)) {
    for (const auto& iv : intervals_) {
        if (!std::isfinite(iv.lo_hz) || !std::isfinite(iv.hi_hz) || iv.hi_hz < iv.lo_hz) {
            throw ConfigError("band mask interval must satisfy lo <= hi");
        }
    }
    normalize();
}

bool BandMask::contains(double freq_hz) const noexcept {
    auto it = std::upper_bound(intervals_.begin(), intervals_.end(), freq_hz,
                               [](double f, const FrequencyInterval& iv) { return f < iv.lo_hz; });
    if (it == intervals_.begin()) {
        return false;
    }
    --it;
    return freq_hz >= it->lo_hz && freq_hz < it->hi_hz;
}

void BandMask::add(FrequencyInterval interval) {
    if (!std::isfinite(interval.lo_hz) || !std::isfinite(interval.hi_hz) || interval.hi_hz < interval.lo_hz) {
        throw ConfigError("band mask interval must satisfy lo <= hi");
    }
    intervals_.push_back(interval);
    normalize();
}

void BandMask::validate(double nyquist_hz) const {
    for (const auto& iv : intervals_) {
        if (iv.lo_hz < 0.0 || iv.hi_hz > nyquist_hz) {
            throw ConfigError("band mask interval outside [0, Nyquist]");
        }
    }
}

void BandMask::normalize() {
    std::erase_if(intervals_, [](const FrequencyInterval& iv) { return iv.hi_hz == iv.lo_hz; });
    std::sort(intervals_.begin(), intervals_.end(),
              [](const FrequencyInterval& a, const FrequencyInterval& b) { return a.lo_hz < b.lo_hz; });
    std::vector<FrequencyInterval> merged;
    for (const auto& iv : intervals_) {
        if (!merged.empty() && iv.lo_hz <= merged.back().hi_hz) {
            merged.back().hi_hz = std::max(merged.back().hi_hz, iv.hi_hz);
        } else {
            merged.push_back(iv);
        }
    }
    intervals_ = std::move(merged);
}

} // namespace vacrng
