#pragma once

#include "vacrng/band_mask.hpp"
#include "vacrng/binning.hpp"
#include "vacrng/bitvector.hpp"
#include "vacrng/entropy.hpp"
#include "vacrng/extract.hpp"
#include "vacrng/spectral.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace vacrng {

/// Per-bin noise levels measured from a dark run and a total run at the same framing.
/// sigma values are per component (Re or Im): sigma^2 = PSD / 2.
struct Calibration {
    double                     sample_rate_hz = 0.0;
    double                     delta_f_hz     = 0.0;
    std::size_t                block_length   = 0;
    double                     f_max_hz       = 0.0;
    std::size_t                dark_blocks    = 0;
    std::size_t                total_blocks   = 0;
    std::vector<CalibratedBin> bins; ///< bins 1 .. floor(f_max / delta_f), ascending

    /// Bins that take part in extraction: below f_max and outside the mask.
    std::vector<CalibratedBin> retained(const BandMask& mask) const;
};

/// PSD of a trace at the given framing, averaged over all full frames.
PsdEstimate trace_psd(std::span<const std::int8_t> samples, double sample_rate_hz, double delta_f_hz,
                      unsigned workers = 1);

/// Builds per-bin Gaussian channel parameters. Throws DataError when sigma_T <= sigma_K in any bin
/// that is below f_max and not masked.
Calibration calibrate(const PsdEstimate& dark, const PsdEstimate& total, double sample_rate_hz, double f_max_hz,
                      const BandMask& mask);

/// Noise levels a model predicts without simulating: per-bin E|a_k|^2 from the quantum and
/// electronic parts, ignoring spurs, quantization and drift. Counts are left at zero.
Calibration expected_calibration(const NoiseModel& model, double power_mw, double sample_rate_hz, double delta_f_hz,
                                 double f_max_hz);

struct BinningConfig {
    BinningScheme     scheme = BinningScheme::cyclic;
    CyclicSettings    cyclic;
    EqualAreaSettings equal_area;

    int bits() const noexcept { return scheme == BinningScheme::cyclic ? cyclic.bits : equal_area.bits; }
};

/// Entropy report for the retained bins of a calibration.
EntropyReport build_entropy_report(const Calibration& calibration, const BandMask& mask, const BinningConfig& binning);

enum class ExtractorKind { toeplitz, sha512 };

std::string_view to_string(ExtractorKind kind) noexcept;
ExtractorKind    extractor_kind_from_string(std::string_view s);

struct PipelineOptions {
    unsigned                      workers       = 1;
    ExtractorKind                 extractor     = ExtractorKind::toeplitz;
    std::uint64_t                 toeplitz_key  = 0; ///< used when no explicit seed is given
    std::optional<SeededToeplitz> toeplitz_seed;
    bool                          collect_words = false;
};

struct PipelineResult {
    BitVector         bits;
    std::size_t       blocks = 0;
    EntropyReport     report;
    ExtractionPlan    plan;
    std::vector<Word> words; ///< binned words in stream order, only with collect_words
};

/// Maps one DFT frame to its words: retained bins in ascending frequency, Re before Im.
class FrameBinner {
public:
    FrameBinner(const Calibration& calibration, const ExtractionPlan& plan, const BinningConfig& binning);

    void      bin(const Spectrum& spectrum, std::vector<Word>& words) const;
    BitVector pack(std::span<const Word> words) const;
    int       bits() const noexcept { return bits_; }

private:
    std::vector<std::size_t>      bins_;
    std::vector<CyclicBinning>    cyclic_;
    std::vector<EqualAreaBinning> equal_area_;
    int                           bits_;
};

/// DFT -> band mask -> per-bin binning -> universal hash, frame by frame over `samples`.
/// Output length is exactly frames * plan.hash_out_bits and is identical for any worker count.
PipelineResult run_pipeline(std::span<const std::int8_t> samples, const Calibration& calibration,
                            const ExtractionPlan& plan, const EntropyReport& report, const BinningConfig& binning,
                            const PipelineOptions& options);

} // namespace vacrng
