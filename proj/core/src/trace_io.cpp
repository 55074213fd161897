#include "vacrng/trace_io.hpp"

#include "vacrng/error.hpp"

#include <json.hpp>

#include <fstream>
#include <iterator>
#include <string>

namespace vacrng {

namespace {
constexpr int kSidecarSchema = 1;
} // namespace

std::filesystem::path sidecar_path(const std::filesystem::path& raw_path) {
    auto p = raw_path;
    p += ".json";
    return p;
}

double sample_variance(std::span<const std::int8_t> samples) noexcept {
    if (samples.size() < 2) {
        return 0.0;
    }
    double sum = 0.0;
    double sq  = 0.0;
    for (auto s : samples) {
        sum += s;
        sq += static_cast<double>(s) * s;
    }
    const double n    = static_cast<double>(samples.size());
    const double mean = sum / n;
    return (sq - n * mean * mean) / (n - 1.0);
}

Trace concatenate(std::span<const SampleBlock> blocks) {
    if (blocks.empty()) {
        throw DataError("concatenate: no blocks");
    }
    Trace t;
    const auto& first      = blocks.front();
    t.meta.sample_rate_hz   = first.sample_rate_hz;
    t.meta.optical_power_mw = first.optical_power_mw;
    t.meta.kind             = first.kind;
    t.meta.seed             = first.seed;
    for (const auto& b : blocks) {
        if (b.sample_rate_hz != first.sample_rate_hz || b.optical_power_mw != first.optical_power_mw ||
            b.kind != first.kind) {
            throw DataError("concatenate: blocks disagree on rate, power or kind");
        }
        t.samples.insert(t.samples.end(), b.samples.begin(), b.samples.end());
        t.meta.clip_count += b.clip_count;
    }
    t.meta.sample_count = t.samples.size();
    t.meta.variance     = sample_variance(t.samples);
    return t;
}

void write_trace(const std::filesystem::path& raw_path, const Trace& trace) {
    if (trace.meta.kind == TraceKind::dark && trace.meta.optical_power_mw != 0.0) {
        throw DataError("dark trace must have zero optical power");
    }
    {
        std::ofstream out(raw_path, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw DataError("cannot open '" + raw_path.string() + "' for writing");
        }
        out.write(reinterpret_cast<const char*>(trace.samples.data()), static_cast<std::streamsize>(trace.samples.size()));
        if (!out) {
            throw DataError("write failed for '" + raw_path.string() + "'");
        }
    }
    nlohmann::ordered_json j;
    j["schema_version"]   = kSidecarSchema;
    j["sample_rate_hz"]   = trace.meta.sample_rate_hz;
    j["optical_power_mw"] = trace.meta.optical_power_mw;
    j["kind"]             = std::string(to_string(trace.meta.kind));
    j["seed"]             = trace.meta.seed;
    j["clip_count"]       = trace.meta.clip_count;
    j["sample_count"]     = static_cast<std::uint64_t>(trace.samples.size());
    j["variance"]         = trace.meta.variance;
    std::ofstream side(sidecar_path(raw_path), std::ios::trunc);
    if (!side) {
        throw DataError("cannot open sidecar for '" + raw_path.string() + "'");
    }
    side << j.dump(2) << '\n';
}

Trace read_trace(const std::filesystem::path& raw_path) {
    std::ifstream side(sidecar_path(raw_path));
    if (!side) {
        throw DataError("missing sidecar for trace '" + raw_path.string() + "'");
    }
    Trace t;
    try {
        const auto j          = nlohmann::json::parse(side);
        t.meta.sample_rate_hz   = j.at("sample_rate_hz").get<double>();
        t.meta.optical_power_mw = j.at("optical_power_mw").get<double>();
        t.meta.kind             = trace_kind_from_string(j.at("kind").get<std::string>());
        t.meta.seed             = j.value("seed", std::uint64_t{0});
        t.meta.clip_count       = j.value("clip_count", std::uint64_t{0});
        t.meta.sample_count     = j.at("sample_count").get<std::uint64_t>();
        t.meta.variance         = j.value("variance", 0.0);
    } catch (const nlohmann::json::exception& e) {
        throw DataError("malformed sidecar for '" + raw_path.string() + "': " + e.what());
    }
    if (!(t.meta.sample_rate_hz > 0.0)) {
        throw DataError("sidecar sample_rate_hz must be positive");
    }
    if (t.meta.kind == TraceKind::dark && t.meta.optical_power_mw != 0.0) {
        throw DataError("sidecar marks a dark trace with non-zero optical power");
    }
    std::ifstream in(raw_path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open trace '" + raw_path.string() + "'");
    }
    std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (bytes.size() != t.meta.sample_count) {
        throw DataError("trace '" + raw_path.string() + "' has " + std::to_string(bytes.size()) +
                        " samples, sidecar says " + std::to_string(t.meta.sample_count));
    }
    t.samples.resize(bytes.size());
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        t.samples[i] = static_cast<std::int8_t>(bytes[i]);
    }
    return t;
}

} // namespace vacrng
