#include "cli/config.hpp"

#include <vacrng/analysis.hpp>
#include <vacrng/error.hpp>

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace vacrng::cli {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path PathConfig::total() const {
    return total_trace.empty() ? output_dir / "total.raw" : total_trace;
}

fs::path PathConfig::dark() const {
    return dark_trace.empty() ? output_dir / "dark.raw" : dark_trace;
}

fs::path PathConfig::calibration_file() const {
    return calibration.empty() ? output_dir / "calibration.json" : calibration;
}

fs::path PathConfig::sweep(std::size_t i) const {
    return i < sweep_traces.size() ? sweep_traces[i] : output_dir / ("sweep_" + std::to_string(i) + ".raw");
}

RunConfig::RunConfig() : band_mask(default_gsm_mask()) {
    simulation.model = default_noise_model(sample_rate_hz);
}

std::size_t RunConfig::block_length() const {
    return block_length_for(sample_rate_hz, delta_f_hz);
}

void RunConfig::validate() const {
    if (schema_version != kSchemaVersion) {
        throw ConfigError("unsupported config schema_version " + std::to_string(schema_version));
    }
    if (!(sample_rate_hz > 0.0) || !(delta_f_hz > 0.0)) {
        throw ConfigError("sample_rate_hz and delta_f_hz must be positive");
    }
    const auto n = block_length();
    if (std::abs(static_cast<double>(n) * delta_f_hz - sample_rate_hz) > 1e-9 * sample_rate_hz) {
        throw ConfigError("delta_f * block_length != sample_rate");
    }
    if (!(f_max_hz > 0.0) || f_max_hz > 0.5 * sample_rate_hz) {
        throw ConfigError("f_max_hz must lie in (0, sample_rate/2]");
    }
    band_mask.validate(0.5 * sample_rate_hz);
    if (binning.bits() < 1 || binning.bits() > 24) {
        throw ConfigError("binning bits must lie in [1, 24]");
    }
    if (!(extraction.log2_epsilon < 0.0)) {
        throw ConfigError("extraction.log2_epsilon must be negative");
    }
    if (!(extraction.hash_ratio > 0.0) || extraction.hash_ratio > 1.0) {
        throw ConfigError("extraction.hash_ratio must lie in (0, 1]");
    }
    if (workers == 0) {
        throw ConfigError("workers must be >= 1");
    }
    simulation.model.validate();
}

namespace {

template<typename T>
void read(const json& j, const char* key, T& out) {
    if (auto it = j.find(key); it != j.end() && !it->is_null()) {
        out = it->get<T>();
    }
}

void read_path(const json& j, const char* key, fs::path& out) {
    if (auto it = j.find(key); it != j.end() && !it->is_null()) {
        out = it->get<std::string>();
    }
}

void read_model(const json& j, NoiseModel& m, double sample_rate_hz) {
    read(j, "quantum_var_per_mw", m.quantum_var_per_mw);
    if (auto it = j.find("electronic_variance"); it != j.end()) {
        m.electronic_psd = PiecewisePsd::flat_variance(it->get<double>(), sample_rate_hz);
    }
    if (auto it = j.find("electronic_psd"); it != j.end()) {
        std::vector<PiecewisePsd::Point> pts;
        for (const auto& p : *it) {
            pts.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
        }
        m.electronic_psd = pts.empty() ? PiecewisePsd{} : PiecewisePsd(std::move(pts));
    }
    if (auto it = j.find("low_pass"); it != j.end()) {
        read(*it, "corner_hz", m.detector_response.corner_hz);
        read(*it, "order", m.detector_response.order);
    }
    if (auto it = j.find("spurs"); it != j.end()) {
        m.spurs.clear();
        for (const auto& s : *it) {
            Spur spur;
            spur.freq_hz   = s.at("freq_hz").get<double>();
            spur.amplitude = s.at("amplitude").get<double>();
            read(s, "phase_rad", spur.phase_rad);
            if (s.contains("start") || s.contains("stop")) {
                spur.window = BurstWindow{s.value("start", std::uint64_t{0}), s.at("stop").get<std::uint64_t>()};
            }
            m.spurs.push_back(spur);
        }
    }
    read(j, "adc_artifact_period", m.adc_artifact_period);
    read(j, "adc_artifact_amplitude", m.adc_artifact_amplitude);
    read(j, "drift_rel", m.drift_rel);
    read(j, "quadratic_coeff", m.quadratic_coeff);
}

} // namespace

void apply_config_json(RunConfig& c, const std::string& json_text) {
    try {
        const json j = json::parse(json_text);
        if (!j.is_object()) {
            throw ConfigError("config must be a JSON object");
        }
        read(j, "schema_version", c.schema_version);
        const double old_rate = c.sample_rate_hz;
        read(j, "sample_rate_hz", c.sample_rate_hz);
        if (c.sample_rate_hz != old_rate && c.sample_rate_hz > 0.0) {
            c.simulation.model = default_noise_model(c.sample_rate_hz);
        }
        read(j, "delta_f_hz", c.delta_f_hz);
        read(j, "f_max_hz", c.f_max_hz);
        read(j, "workers", c.workers);

        if (auto p = j.find("paths"); p != j.end()) {
            read_path(*p, "output_dir", c.paths.output_dir);
            read_path(*p, "total_trace", c.paths.total_trace);
            read_path(*p, "dark_trace", c.paths.dark_trace);
            read_path(*p, "calibration", c.paths.calibration);
            if (auto s = p->find("sweep_traces"); s != p->end()) {
                c.paths.sweep_traces.clear();
                for (const auto& v : *s) {
                    c.paths.sweep_traces.emplace_back(v.get<std::string>());
                }
            }
        }
        if (auto b = j.find("binning"); b != j.end()) {
            if (auto s = b->find("scheme"); s != b->end()) {
                c.binning.scheme = binning_scheme_from_string(s->get<std::string>());
            }
            if (auto bits = b->find("bits"); bits != b->end()) {
                c.binning.cyclic.bits     = bits->get<int>();
                c.binning.equal_area.bits = bits->get<int>();
            }
            read(*b, "period_over_sigma_q", c.binning.cyclic.period_over_sigma);
            read(*b, "offset", c.binning.cyclic.offset);
            read(*b, "drift_rel", c.binning.equal_area.drift_rel);
            read(*b, "ensemble_size", c.binning.equal_area.ensemble_size);
            read(*b, "k_bound_sigmas", c.binning.equal_area.k_bound_sigmas);
        }
        if (auto e = j.find("extraction"); e != j.end()) {
            read(*e, "log2_epsilon", c.extraction.log2_epsilon);
            read(*e, "hash_ratio", c.extraction.hash_ratio);
            if (auto x = e->find("extractor"); x != e->end()) {
                c.extraction.extractor = extractor_kind_from_string(x->get<std::string>());
            }
            read(*e, "key", c.extraction.key);
            read_path(*e, "seed_file", c.extraction.seed_file);
        }
        if (auto m = j.find("band_masks"); m != j.end()) {
            std::vector<FrequencyInterval> iv;
            for (const auto& r : *m) {
                iv.push_back({r.at(0).get<double>(), r.at(1).get<double>()});
            }
            c.band_mask = BandMask(std::move(iv));
        }
        if (auto s = j.find("simulation"); s != j.end()) {
            read(*s, "samples", c.simulation.samples);
            read(*s, "block_length", c.simulation.block_length);
            read(*s, "power_mw", c.simulation.power_mw);
            read(*s, "seed", c.simulation.seed);
            read(*s, "sweep_powers_mw", c.simulation.sweep_powers_mw);
            if (auto m = s->find("model"); m != s->end()) {
                read_model(*m, c.simulation.model, c.sample_rate_hz);
            }
        }
        if (auto r = j.find("report"); r != j.end()) {
            read(*r, "spur_threshold_db", c.report.spur_threshold_db);
            read(*r, "correlation_delta_f_hz", c.report.correlation_delta_f_hz);
            read(*r, "smooth_window_hz", c.report.smooth_window_hz);
            read(*r, "min_correlation_blocks", c.report.min_correlation_blocks);
            read(*r, "linearity_lo_hz", c.report.linearity_lo_hz);
            read(*r, "linearity_hi_hz", c.report.linearity_hi_hz);
            if (auto h = r->find("harmonic_f0_hz"); h != r->end() && !h->is_null()) {
                c.report.harmonic_f0_hz = h->get<double>();
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

RunConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config '" + path.string() + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    RunConfig c;
    apply_config_json(c, ss.str());
    return c;
}

void apply_env_overrides(RunConfig& c) {
    auto env = [](const char* name, fs::path& target) {
        if (const char* v = std::getenv(name); v != nullptr && *v != '\0') {
            target = v;
        }
    };
    env("VACRNG_OUTPUT_DIR", c.paths.output_dir);
    env("VACRNG_TOTAL_TRACE", c.paths.total_trace);
    env("VACRNG_DARK_TRACE", c.paths.dark_trace);
    env("VACRNG_CALIBRATION", c.paths.calibration);
}

FrequencyInterval parse_interval(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw ConfigError("band mask '" + text + "' must look like lo:hi");
    }
    try {
        std::size_t used = 0;
        const double lo  = std::stod(text.substr(0, colon), &used);
        const auto   rhs = text.substr(colon + 1);
        const double hi  = std::stod(rhs, &used);
        if (used != rhs.size()) {
            throw std::invalid_argument("trailing characters");
        }
        return {lo, hi};
    } catch (const std::logic_error&) {
        throw ConfigError("band mask '" + text + "' must look like lo:hi");
    }
}

} // namespace vacrng::cli
