#pragma once

#include "vacrng/signal_sim.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace vacrng {

/// Sidecar metadata for a raw trace. Stored next to `<name>.raw` as `<name>.raw.json`.
struct TraceMetadata {
    double        sample_rate_hz   = 0.0;
    double        optical_power_mw = 0.0;
    TraceKind     kind             = TraceKind::total;
    std::uint64_t seed             = 0;
    std::uint64_t clip_count       = 0;
    std::uint64_t sample_count     = 0;
    double        variance         = 0.0; ///< sample variance of the codes, informational
};

/// A contiguous run of 8-bit samples: one or more SampleBlocks concatenated.
struct Trace {
    TraceMetadata            meta;
    std::vector<std::int8_t> samples;
};

std::filesystem::path sidecar_path(const std::filesystem::path& raw_path);

/// Concatenates blocks (in order) into a trace; all blocks must share rate, power and kind.
Trace concatenate(std::span<const SampleBlock> blocks);

/// Writes little-endian signed 8-bit samples plus the JSON sidecar. Throws DataError on I/O failure.
void write_trace(const std::filesystem::path& raw_path, const Trace& trace);

/// Reads a raw trace and validates it against its sidecar (sample count, kind/power consistency).
Trace read_trace(const std::filesystem::path& raw_path);

double sample_variance(std::span<const std::int8_t> samples) noexcept;

} // namespace vacrng
