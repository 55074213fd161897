#pragma once

#include <vacrng/analysis.hpp>
#include <vacrng/entropy.hpp>
#include <vacrng/extract.hpp>
#include <vacrng/pipeline.hpp>

#include <json.hpp>

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace vacrng::cli {

using Json = nlohmann::ordered_json;

Json to_json(const EntropyReport& report);
Json to_json(const ExtractionPlan& plan);
Json to_json(const BandMask& mask);
Json to_json(const LinearFit& fit);
Json to_json(const SpurReport& spur, double delta_f_hz);

/// Per-bin sigma values; the dark PSD rides along so the file is self-describing.
Json        calibration_to_json(const Calibration& calibration, const PsdEstimate& dark_psd);
Calibration calibration_from_json(const Json& j);
Calibration read_calibration(const std::filesystem::path& path);

/// Adds schema_version and a kind tag, then writes pretty-printed JSON.
void write_json(const std::filesystem::path& path, std::string_view kind, Json body);

struct CsvColumn {
    std::string             name;
    std::span<const double> values;
};
void write_csv(const std::filesystem::path& path, std::span<const CsvColumn> columns);

void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path);

} // namespace vacrng::cli
