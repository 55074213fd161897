#include "vacrng/pipeline.hpp"

#include "vacrng/error.hpp"
#include "vacrng/parallel.hpp"

#include <boost/math/distributions/normal.hpp>

#include <cmath>
#include <optional>
#include <string>

namespace vacrng {

namespace {

// Frames per partial PSD sum. Fixed so the reduction tree, and hence every rounding, does not
// depend on the worker count.
constexpr std::size_t kPsdChunk = 64;

bool same_resolution(double a, double b) {
    return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
}

} // namespace

std::vector<CalibratedBin> Calibration::retained(const BandMask& mask) const {
    std::vector<CalibratedBin> out;
    out.reserve(bins.size());
    for (const auto& b : bins) {
        if (!mask.contains(b.freq_hz)) {
            out.push_back(b);
        }
    }
    return out;
}

PsdEstimate trace_psd(std::span<const std::int8_t> samples, double sample_rate_hz, double delta_f_hz,
                      unsigned workers) {
    const std::size_t n = block_length_for(sample_rate_hz, delta_f_hz);
    Framer            framer(samples, n);
    if (framer.frame_count() == 0) {
        throw DataError("trace too short for one frame of " + std::to_string(n) + " samples");
    }
    const std::size_t chunks = (framer.frame_count() + kPsdChunk - 1) / kPsdChunk;
    std::vector<PsdAccumulator>                partial(chunks);
    std::vector<std::optional<BlockTransform>> transforms(std::max(1u, workers));
    parallel_for(chunks, workers, [&](std::size_t c, unsigned w) {
        if (!transforms[w]) {
            transforms[w].emplace(n, sample_rate_hz);
        }
        const std::size_t end = std::min(framer.frame_count(), (c + 1) * kPsdChunk);
        for (std::size_t i = c * kPsdChunk; i < end; ++i) {
            partial[c].add(transforms[w]->forward(framer.frame(i)));
        }
    });
    PsdAccumulator total;
    for (const auto& p : partial) {
        total.merge(p);
    }
    return total.estimate();
}

Calibration calibrate(const PsdEstimate& dark, const PsdEstimate& total, double sample_rate_hz, double f_max_hz,
                      const BandMask& mask) {
    if (dark.power.size() != total.power.size() || !same_resolution(dark.delta_f, total.delta_f)) {
        throw DataError("calibrate: dark and total spectra use different framing");
    }
    if (!(f_max_hz > 0.0) || f_max_hz > 0.5 * sample_rate_hz) {
        throw ConfigError("calibrate: f_max must lie in (0, sample_rate/2]");
    }
    Calibration cal;
    cal.sample_rate_hz = sample_rate_hz;
    cal.delta_f_hz     = total.delta_f;
    cal.block_length   = 2 * (total.power.size() - 1);
    cal.f_max_hz       = f_max_hz;
    cal.dark_blocks    = dark.blocks_averaged;
    cal.total_blocks   = total.blocks_averaged;
    if (!same_resolution(cal.delta_f_hz * static_cast<double>(cal.block_length), sample_rate_hz)) {
        throw DataError("calibrate: delta_f * block_length != sample_rate");
    }
    const auto top = std::min<std::size_t>(cal.block_length / 2 - 1,
                                           static_cast<std::size_t>(std::floor(f_max_hz / cal.delta_f_hz + 1e-9)));
    cal.bins.reserve(top);
    for (std::size_t k = 1; k <= top; ++k) {
        CalibratedBin b;
        b.bin            = k;
        b.freq_hz        = static_cast<double>(k) * cal.delta_f_hz;
        b.params.sigma_t = std::sqrt(0.5 * total.power[k]);
        b.params.sigma_k = std::sqrt(0.5 * dark.power[k]);
        if (!mask.contains(b.freq_hz)) {
            try {
                b.params.validate();
            } catch (const DataError&) {
                throw DataError("non-positive quantum variance at " + std::to_string(b.freq_hz) +
                                " Hz: sigma_T^2=" + std::to_string(b.params.sigma_t * b.params.sigma_t) +
                                ", sigma_K^2=" + std::to_string(b.params.sigma_k * b.params.sigma_k));
            }
        }
        cal.bins.push_back(b);
    }
    return cal;
}

Calibration expected_calibration(const NoiseModel& model, double power_mw, double sample_rate_hz, double delta_f_hz,
                                 double f_max_hz) {
    model.validate();
    Calibration cal;
    cal.sample_rate_hz = sample_rate_hz;
    cal.block_length   = block_length_for(sample_rate_hz, delta_f_hz);
    cal.delta_f_hz     = sample_rate_hz / static_cast<double>(cal.block_length);
    cal.f_max_hz       = f_max_hz;
    if (!(f_max_hz > 0.0) || f_max_hz > 0.5 * sample_rate_hz) {
        throw ConfigError("expected_calibration: f_max must lie in (0, sample_rate/2]");
    }
    const auto top = std::min<std::size_t>(cal.block_length / 2 - 1,
                                           static_cast<std::size_t>(std::floor(f_max_hz / cal.delta_f_hz + 1e-9)));
    for (std::size_t k = 1; k <= top; ++k) {
        const double f    = static_cast<double>(k) * cal.delta_f_hz;
        const double g    = model.detector_response(f);
        const double dark = model.electronic_psd.empty() ? 0.0 : model.electronic_psd(f) * 0.5 * sample_rate_hz;
        const double q    = model.quantum_var_per_mw * power_mw * g * g;
        cal.bins.push_back({k, f, {std::sqrt(0.5 * (q + dark)), std::sqrt(0.5 * dark)}});
    }
    return cal;
}

EntropyReport build_entropy_report(const Calibration& calibration, const BandMask& mask, const BinningConfig& binning) {
    const auto bins = calibration.retained(mask);
    if (binning.scheme == BinningScheme::cyclic) {
        return entropy_report(bins, binning.cyclic);
    }
    return entropy_report(bins, binning.equal_area);
}

std::string_view to_string(ExtractorKind kind) noexcept {
    return kind == ExtractorKind::toeplitz ? "toeplitz" : "sha512";
}

ExtractorKind extractor_kind_from_string(std::string_view s) {
    if (s == "toeplitz") {
        return ExtractorKind::toeplitz;
    }
    if (s == "sha512") {
        return ExtractorKind::sha512;
    }
    throw ConfigError("unknown extractor '" + std::string(s) + "'");
}

FrameBinner::FrameBinner(const Calibration& calibration, const ExtractionPlan& plan, const BinningConfig& binning)
    : bins_(plan.retained_bins), bits_(binning.bits()) {
    if (plan.word_bits != bits_) {
        throw ConfigError("plan word size differs from the binning configuration");
    }
    boost::math::normal_distribution<double> unit;
    for (std::size_t k : bins_) {
        if (k == 0 || k > calibration.bins.size() || calibration.bins[k - 1].bin != k) {
            throw DataError("calibration has no parameters for plan bin " + std::to_string(k));
        }
        const auto& params = calibration.bins[k - 1].params;
        if (binning.scheme == BinningScheme::cyclic) {
            cyclic_.push_back(cyclic_binning_for(params, binning.cyclic));
        } else {
            const std::size_t   cells = std::size_t{1} << bits_;
            std::vector<double> edges(cells - 1);
            for (std::size_t c = 1; c < cells; ++c) {
                edges[c - 1] = params.sigma_t *
                               boost::math::quantile(unit, static_cast<double>(c) / static_cast<double>(cells));
            }
            equal_area_.emplace_back(std::move(edges), bits_, 2 * calibration.total_blocks);
        }
    }
}

void FrameBinner::bin(const Spectrum& spectrum, std::vector<Word>& words) const {
    words.resize(2 * bins_.size());
    for (std::size_t i = 0; i < bins_.size(); ++i) {
        const auto a = spectrum.amplitudes[bins_[i] - 1];
        if (!cyclic_.empty()) {
            words[2 * i]     = cyclic_[i].apply(a.real());
            words[2 * i + 1] = cyclic_[i].apply(a.imag());
        } else {
            words[2 * i]     = equal_area_[i].apply(a.real());
            words[2 * i + 1] = equal_area_[i].apply(a.imag());
        }
    }
}

BitVector FrameBinner::pack(std::span<const Word> words) const {
    BitVector v;
    for (Word w : words) {
        v.append_msb_first(w, bits_);
    }
    return v;
}

PipelineResult run_pipeline(std::span<const std::int8_t> samples, const Calibration& calibration,
                            const ExtractionPlan& plan, const EntropyReport& report, const BinningConfig& binning,
                            const PipelineOptions& options) {
    if (!same_resolution(calibration.delta_f_hz, plan.delta_f_hz)) {
        throw DataError("calibration delta_f does not match the extraction plan");
    }
    if (report.word_bits != plan.word_bits || report.scheme != binning.scheme) {
        throw ConfigError("entropy report, plan and binning disagree on the word format");
    }
    if (plan.hash_in_bits != plan.values_per_block * static_cast<std::size_t>(plan.word_bits) ||
        plan.values_per_block != 2 * plan.retained_bins.size()) {
        throw ConfigError("extraction plan is internally inconsistent");
    }
    check_plan_safety(plan);

    // Re-derive the bound from the report itself rather than trusting the plan's bookkeeping.
    double hmin_total = 0.0;
    {
        std::size_t r = 0;
        for (std::size_t k : plan.retained_bins) {
            while (r < report.records.size() && report.records[r].bin < k) {
                ++r;
            }
            if (r == report.records.size() || report.records[r].bin != k) {
                throw DataError("entropy report lacks plan bin " + std::to_string(k));
            }
            hmin_total += 2.0 * report.records[r].hmin_cond;
        }
    }
    const double bound = extractable_bits(hmin_total, plan.epsilon());
    if (static_cast<double>(plan.hash_out_bits) > bound) {
        throw EntropySafetyError("plan output " + std::to_string(plan.hash_out_bits) + " bits exceeds extractable " +
                                 std::to_string(bound));
    }
    if (plan.hash_out_bits == 0) {
        throw EntropySafetyError("extraction plan leaves no extractable bits per block");
    }

    const FrameBinner binner(calibration, plan, binning);
    std::optional<SeededToeplitz>  toeplitz;
    std::unique_ptr<HashPrimitive> crypto;
    if (options.extractor == ExtractorKind::toeplitz) {
        if (options.toeplitz_seed) {
            if (options.toeplitz_seed->in_bits() != plan.hash_in_bits ||
                options.toeplitz_seed->out_bits() != plan.hash_out_bits) {
                throw ConfigError("Toeplitz seed dimensions do not match the plan");
            }
            toeplitz = options.toeplitz_seed;
        } else {
            toeplitz = SeededToeplitz::from_key(options.toeplitz_key, plan.hash_in_bits, plan.hash_out_bits);
        }
    } else {
        crypto = make_sha512();
    }

    Framer            framer(samples, calibration.block_length);
    const std::size_t frames  = framer.frame_count();
    const unsigned    workers = std::max(1u, options.workers);

    std::vector<BitVector>                     out(frames);
    std::vector<std::vector<Word>>             frame_words(options.collect_words ? frames : 0);
    std::vector<std::optional<BlockTransform>> transforms(workers);
    std::vector<std::vector<Word>>             scratch(workers);
    parallel_for(frames, workers, [&](std::size_t i, unsigned w) {
        if (!transforms[w]) {
            transforms[w].emplace(calibration.block_length, calibration.sample_rate_hz);
        }
        const auto spectrum = transforms[w]->forward(framer.frame(i));
        auto&      words    = scratch[w];
        binner.bin(spectrum, words);
        const auto input = binner.pack(words);
        out[i] = toeplitz ? toeplitz_hash(*toeplitz, input) : crypto_hash_expand(*crypto, input, plan.hash_out_bits);
        if (options.collect_words) {
            frame_words[i] = words;
        }
    });

    PipelineResult result;
    result.blocks = frames;
    result.report = report;
    result.plan   = plan;
    for (std::size_t i = 0; i < frames; ++i) {
        if (out[i].size() != plan.hash_out_bits) {
            throw EntropySafetyError("extractor produced an unexpected number of bits");
        }
        result.bits.append(out[i]);
        if (options.collect_words) {
            result.words.insert(result.words.end(), frame_words[i].begin(), frame_words[i].end());
        }
    }
    return result;
}

} // namespace vacrng
