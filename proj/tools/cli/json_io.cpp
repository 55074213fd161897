#include "cli/json_io.hpp"

#include "cli/config.hpp"

#include <vacrng/error.hpp>

#include <fstream>
#include <iomanip>
#include <iterator>

namespace vacrng::cli {

namespace fs = std::filesystem;

Json to_json(const EntropyReport& report) {
    Json records = Json::array();
    for (const auto& r : report.records) {
        records.push_back({{"bin", r.bin},
                           {"freq_hz", r.freq_hz},
                           {"h1", r.h1},
                           {"hmin", r.hmin},
                           {"h1_cond", r.h1_cond},
                           {"hmin_cond", r.hmin_cond},
                           {"extractable_bits", r.extractable_bits}});
    }
    return {{"scheme", std::string(to_string(report.scheme))}, {"word_bits", report.word_bits}, {"records", records}};
}

Json to_json(const BandMask& mask) {
    Json a = Json::array();
    for (const auto& iv : mask.intervals()) {
        a.push_back({iv.lo_hz, iv.hi_hz});
    }
    return a;
}

Json to_json(const ExtractionPlan& plan) {
    return {{"word_bits", plan.word_bits},
            {"retained_per_value", plan.retained_per_value},
            {"values_per_block", plan.values_per_block},
            {"hash_in_bits", plan.hash_in_bits},
            {"hash_out_bits", plan.hash_out_bits},
            {"log2_epsilon", plan.log2_epsilon},
            {"band_mask", to_json(plan.band_mask)},
            {"delta_f_hz", plan.delta_f_hz},
            {"f_max_hz", plan.f_max_hz},
            {"hmin_cond_total", plan.hmin_cond_total},
            {"credited_entropy", plan.credited_entropy},
            {"gross_rate_bps", plan.gross_rate_bps},
            {"net_rate_bps", plan.net_rate_bps},
            {"retained_bins", plan.retained_bins.size()}};
}

Json to_json(const LinearFit& fit) {
    return {{"slope", fit.slope}, {"offset", fit.offset}, {"r_squared", fit.r_squared}};
}

Json to_json(const SpurReport& s, double delta_f_hz) {
    return {{"freq_hz", s.freq_hz},
            {"bin", s.bin},
            {"excess_db", s.excess_db},
            {"lo_hz", s.lo_hz},
            {"hi_hz", s.hi_hz},
            {"width_hz", s.width_hz(delta_f_hz)}};
}

Json calibration_to_json(const Calibration& c, const PsdEstimate& dark_psd) {
    Json bins = Json::array();
    for (const auto& b : c.bins) {
        const double q2 = b.params.sigma_t * b.params.sigma_t - b.params.sigma_k * b.params.sigma_k;
        bins.push_back({{"bin", b.bin},
                        {"freq_hz", b.freq_hz},
                        {"sigma_t", b.params.sigma_t},
                        {"sigma_k", b.params.sigma_k},
                        {"sigma_q", q2 > 0.0 ? Json(std::sqrt(q2)) : Json(nullptr)}});
    }
    return {{"sample_rate_hz", c.sample_rate_hz},
            {"delta_f_hz", c.delta_f_hz},
            {"block_length", c.block_length},
            {"f_max_hz", c.f_max_hz},
            {"dark_blocks", c.dark_blocks},
            {"total_blocks", c.total_blocks},
            {"bins", bins},
            {"dark_psd", dark_psd.power}};
}

Calibration calibration_from_json(const Json& j) {
    try {
        if (j.value("schema_version", 0) != kSchemaVersion) {
            throw DataError("calibration file has an unsupported schema_version");
        }
        Calibration c;
        c.sample_rate_hz = j.at("sample_rate_hz").get<double>();
        c.delta_f_hz     = j.at("delta_f_hz").get<double>();
        c.block_length   = j.at("block_length").get<std::size_t>();
        c.f_max_hz       = j.at("f_max_hz").get<double>();
        c.dark_blocks    = j.at("dark_blocks").get<std::size_t>();
        c.total_blocks   = j.at("total_blocks").get<std::size_t>();
        for (const auto& b : j.at("bins")) {
            CalibratedBin cb;
            cb.bin            = b.at("bin").get<std::size_t>();
            cb.freq_hz        = b.at("freq_hz").get<double>();
            cb.params.sigma_t = b.at("sigma_t").get<double>();
            cb.params.sigma_k = b.at("sigma_k").get<double>();
            if (cb.bin != c.bins.size() + 1) {
                throw DataError("calibration bins must be contiguous from 1");
            }
            c.bins.push_back(cb);
        }
        if (std::abs(c.delta_f_hz * static_cast<double>(c.block_length) - c.sample_rate_hz) >
            1e-9 * c.sample_rate_hz) {
            throw DataError("calibration: delta_f * block_length != sample_rate");
        }
        return c;
    } catch (const Json::exception& e) {
        throw DataError(std::string("malformed calibration: ") + e.what());
    }
}

Calibration read_calibration(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("missing calibration '" + path.string() + "'");
    }
    try {
        return calibration_from_json(Json::parse(in));
    } catch (const Json::exception& e) {
        throw DataError("malformed calibration '" + path.string() + "': " + e.what());
    }
}

void write_json(const fs::path& path, std::string_view kind, Json body) {
    Json out;
    out["schema_version"] = kSchemaVersion;
    out["kind"]           = std::string(kind);
    for (auto& [k, v] : body.items()) {
        out[k] = std::move(v);
    }
    std::ofstream f(path, std::ios::trunc);
    if (!f) {
        throw DataError("cannot write '" + path.string() + "'");
    }
    f << out.dump(2) << '\n';
}

void write_csv(const fs::path& path, std::span<const CsvColumn> columns) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) {
        throw DataError("cannot write '" + path.string() + "'");
    }
    std::size_t rows = 0;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        f << (c ? "," : "") << columns[c].name;
        rows = c == 0 ? columns[c].values.size() : std::min(rows, columns[c].values.size());
    }
    f << '\n' << std::setprecision(12);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            f << (c ? "," : "") << columns[c].values[r];
        }
        f << '\n';
    }
}

void write_bytes(const fs::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw DataError("cannot write '" + path.string() + "'");
    }
    f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

std::vector<std::uint8_t> read_bytes(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw DataError("cannot read '" + path.string() + "'");
    }
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

} // namespace vacrng::cli
