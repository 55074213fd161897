#pragma once

#include <vacrng/band_mask.hpp>
#include <vacrng/pipeline.hpp>
#include <vacrng/signal_sim.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace vacrng::cli {

inline constexpr int kSchemaVersion = 1;

struct PathConfig {
    std::filesystem::path              output_dir = "vacrng-out";
    std::filesystem::path              total_trace; ///< empty: <output_dir>/total.raw
    std::filesystem::path              dark_trace;  ///< empty: <output_dir>/dark.raw
    std::filesystem::path              calibration; ///< empty: <output_dir>/calibration.json
    std::vector<std::filesystem::path> sweep_traces;

    std::filesystem::path total() const;
    std::filesystem::path dark() const;
    std::filesystem::path calibration_file() const;
    std::filesystem::path sweep(std::size_t i) const;
};

struct SimulationConfig {
    std::uint64_t       samples      = std::uint64_t{1} << 25;
    std::size_t         block_length = std::size_t{1} << 18;
    double              power_mw     = 4.5;
    std::uint64_t       seed         = 1;
    NoiseModel          model;
    std::vector<double> sweep_powers_mw;
};

struct ExtractionConfig {
    double                log2_epsilon = -100.0;
    double                hash_ratio   = 14.0 / 16.0;
    ExtractorKind         extractor    = ExtractorKind::toeplitz;
    std::uint64_t         key          = 1;
    std::filesystem::path seed_file;
};

struct ReportConfig {
    double                spur_threshold_db      = 10.0;
    double                correlation_delta_f_hz = 1e6;
    double                smooth_window_hz       = 10e6;
    std::size_t           min_correlation_blocks = 1000;
    double                linearity_lo_hz        = 100e6;
    double                linearity_hi_hz        = 1e9;
    std::optional<double> harmonic_f0_hz;
};

/// Precedence, lowest first: built-in defaults, config file, environment (paths only), command-line flags.
struct RunConfig {
    int              schema_version = kSchemaVersion;
    PathConfig       paths;
    double           sample_rate_hz = 20e9;
    double           delta_f_hz     = 1e5;
    double           f_max_hz       = 1e9;
    BinningConfig    binning;
    ExtractionConfig extraction;
    BandMask         band_mask;
    SimulationConfig simulation;
    ReportConfig     report;
    unsigned         workers = 1;

    RunConfig();

    std::size_t block_length() const;
    /// Throws ConfigError on any inconsistency (non-integer block length, f_max above Nyquist, ...).
    void validate() const;
};

/// Reads a JSON config; absent fields keep their defaults.
RunConfig load_config(const std::filesystem::path& path);
void      apply_config_json(RunConfig& config, const std::string& json_text);

/// VACRNG_OUTPUT_DIR, VACRNG_TOTAL_TRACE, VACRNG_DARK_TRACE, VACRNG_CALIBRATION.
void apply_env_overrides(RunConfig& config);

/// "lo:hi" in Hz.
FrequencyInterval parse_interval(const std::string& text);

} // namespace vacrng::cli
