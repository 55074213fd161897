#pragma once

#include <span>
#include <vector>

namespace vacrng {

struct FrequencyInterval {
    double lo_hz = 0.0;
    double hi_hz = 0.0;

    friend bool operator==(const FrequencyInterval&, const FrequencyInterval&) = default;
};

/// Frequency ranges excluded from extraction. Membership is half-open: lo <= f < hi.
/// Intervals are kept sorted and merged (overlapping or touching ranges become one).
class BandMask {
public:
    BandMask() = default;
    explicit BandMask(std::vector<FrequencyInterval> intervals);

    bool contains(double freq_hz) const noexcept;
    void add(FrequencyInterval interval);
    /// Throws ConfigError if any interval reaches outside [0, nyquist].
    void validate(double nyquist_hz) const;

    std::span<const FrequencyInterval> intervals() const noexcept { return intervals_; }
    bool empty() const noexcept { return intervals_.empty(); }

    friend bool operator==(const BandMask&, const BandMask&) = default;

private:
    void normalize();

    std::vector<FrequencyInterval> intervals_;
};

} // namespace vacrng
