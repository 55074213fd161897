#include "cli/commands.hpp"

#include "cli/json_io.hpp"

#include <vacrng/analysis.hpp>
#include <vacrng/error.hpp>
#include <vacrng/parallel.hpp>
#include <vacrng/rng.hpp>
#include <vacrng/trace_io.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>

namespace vacrng::cli {

namespace fs = std::filesystem;

namespace {

void ensure_output_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw DataError("cannot create output directory '" + dir.string() + "'");
    }
}

Trace simulate_run(const RunConfig& c, double power_mw, TraceKind kind, std::uint64_t salt) {
    const auto&       sim    = c.simulation;
    const std::size_t blocks = static_cast<std::size_t>((sim.samples + sim.block_length - 1) / sim.block_length);
    const auto        base   = derive_seed(sim.seed, salt);
    std::vector<SampleBlock> parts(blocks);
    parallel_for(blocks, c.workers, [&](std::size_t i, unsigned) {
        SimulationRequest req;
        req.power_mw       = power_mw;
        req.length         = sim.block_length;
        req.sample_rate_hz = c.sample_rate_hz;
        req.seed           = derive_seed(base, i);
        req.first_sample   = static_cast<std::uint64_t>(i) * sim.block_length;
        auto block         = simulate_block(sim.model, req);
        block.kind         = kind;
        block.seed         = sim.seed;
        const auto keep    = std::min<std::uint64_t>(sim.block_length, sim.samples - req.first_sample);
        if (keep < block.samples.size()) {
            block.samples.resize(static_cast<std::size_t>(keep));
            block.clip_count = 0;
            for (auto s : block.samples) {
                block.clip_count += (s == 127 || s == -127) ? 1 : 0;
            }
        }
        parts[i] = std::move(block);
    });
    return concatenate(parts);
}

Json run_summary(const fs::path& path, const Trace& t) {
    return {{"path", path.string()},
            {"kind", std::string(to_string(t.meta.kind))},
            {"optical_power_mw", t.meta.optical_power_mw},
            {"samples", t.meta.sample_count},
            {"variance", t.meta.variance},
            {"clip_count", t.meta.clip_count}};
}

Trace load_trace_at(const fs::path& path, double sample_rate_hz) {
    auto t = read_trace(path);
    if (std::abs(t.meta.sample_rate_hz - sample_rate_hz) > 1e-9 * sample_rate_hz) {
        throw DataError("trace '" + path.string() + "' sample rate " + std::to_string(t.meta.sample_rate_hz) +
                        " differs from configured " + std::to_string(sample_rate_hz));
    }
    return t;
}

std::vector<double> psd_frequencies(const PsdEstimate& psd) {
    std::vector<double> f(psd.power.size());
    for (std::size_t k = 0; k < f.size(); ++k) {
        f[k] = psd.bin_frequency(k);
    }
    return f;
}

void write_psd_csv(const fs::path& path, const PsdEstimate& psd) {
    const auto            f = psd_frequencies(psd);
    const CsvColumn cols[] = {{"freq_hz", f}, {"power", psd.power}};
    write_csv(path, cols);
}

PlanRequest plan_request(const RunConfig& c, double delta_f_hz) {
    PlanRequest r;
    r.log2_epsilon = c.extraction.log2_epsilon;
    r.band_mask    = c.band_mask;
    r.delta_f_hz   = delta_f_hz;
    r.f_max_hz     = c.f_max_hz;
    r.hash_ratio   = c.extraction.hash_ratio;
    return r;
}

struct Prepared {
    Calibration    calibration;
    EntropyReport  report;
    ExtractionPlan plan;
};

Prepared prepare(const RunConfig& c, const Calibration& cal) {
    if (std::abs(cal.delta_f_hz - c.delta_f_hz) > 1e-9 * c.delta_f_hz) {
        throw ConfigError("configured delta_f differs from the calibration's");
    }
    if (std::abs(cal.sample_rate_hz - c.sample_rate_hz) > 1e-9 * c.sample_rate_hz) {
        throw DataError("calibration sample rate differs from the configuration");
    }
    if (c.f_max_hz > cal.f_max_hz * (1 + 1e-12)) {
        throw ConfigError("f_max exceeds the calibrated range");
    }
    Prepared p{cal, build_entropy_report(cal, c.band_mask, c.binning), {}};
    p.report.check_invariants();
    p.plan = plan_extraction(p.report, plan_request(c, cal.delta_f_hz));
    check_plan_safety(p.plan);
    if (p.plan.hash_out_bits == 0) {
        throw EntropySafetyError("no output bits are extractable at log2(epsilon) = " +
                                 std::to_string(c.extraction.log2_epsilon));
    }
    return p;
}

PipelineOptions pipeline_options(const RunConfig& c, const ExtractionPlan& plan) {
    PipelineOptions o;
    o.workers      = c.workers;
    o.extractor    = c.extraction.extractor;
    o.toeplitz_key = c.extraction.key;
    if (c.extraction.extractor == ExtractorKind::toeplitz && !c.extraction.seed_file.empty()) {
        const auto bytes = read_bytes(c.extraction.seed_file);
        const auto need  = SeededToeplitz::seed_bits(plan.hash_in_bits, plan.hash_out_bits);
        if (bytes.size() * 8 < need) {
            throw ConfigError("seed file holds " + std::to_string(bytes.size() * 8) + " bits, need " +
                              std::to_string(need));
        }
        o.toeplitz_seed.emplace(BitVector::from_bytes_msb_first(bytes, need), plan.hash_in_bits, plan.hash_out_bits);
    }
    return o;
}

std::string gbps(double bps) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(3) << bps / 1e9;
    return s.str();
}

} // namespace

void cmd_simulate(const RunConfig& c, std::ostream& out) {
    c.validate();
    if (c.simulation.samples == 0) {
        throw ConfigError("simulation.samples must be positive");
    }
    if (!std::has_single_bit(c.simulation.block_length) || c.simulation.block_length < 4) {
        throw ConfigError("simulation.block_length must be a power of two >= 4");
    }
    if (!(c.simulation.power_mw >= 0.0)) {
        throw ConfigError("simulation.power_mw must be non-negative");
    }
    for (double p : c.simulation.sweep_powers_mw) {
        if (!(p >= 0.0)) {
            throw ConfigError("sweep powers must be non-negative");
        }
    }
    ensure_output_dir(c.paths.output_dir);

    Json runs = Json::array();
    auto emit = [&](const fs::path& path, double power, TraceKind kind, std::uint64_t salt) {
        const auto t = simulate_run(c, power, kind, salt);
        write_trace(path, t);
        runs.push_back(run_summary(path, t));
    };
    emit(c.paths.total(), c.simulation.power_mw, TraceKind::total, 0);
    emit(c.paths.dark(), 0.0, TraceKind::dark, 1);
    for (std::size_t i = 0; i < c.simulation.sweep_powers_mw.size(); ++i) {
        emit(c.paths.sweep(i), c.simulation.sweep_powers_mw[i], TraceKind::total, 2 + i);
    }
    Json summary = {{"sample_rate_hz", c.sample_rate_hz}, {"seed", c.simulation.seed}, {"runs", runs}};
    write_json(c.paths.output_dir / "simulate.json", "simulate", summary);
    Json printed          = {{"schema_version", kSchemaVersion}, {"kind", "simulate"}};
    printed["runs"]       = std::move(summary["runs"]);
    out << printed.dump(2) << '\n';
}

void cmd_calibrate(const RunConfig& c, std::ostream& out) {
    c.validate();
    const auto dark  = read_trace(c.paths.dark());
    const auto total = read_trace(c.paths.total());
    if (dark.meta.sample_rate_hz != total.meta.sample_rate_hz) {
        throw DataError("dark and total traces have different sample rates");
    }
    if (std::abs(total.meta.sample_rate_hz - c.sample_rate_hz) > 1e-9 * c.sample_rate_hz) {
        throw DataError("trace sample rate differs from configured sample_rate_hz");
    }
    const auto dark_psd  = trace_psd(dark.samples, c.sample_rate_hz, c.delta_f_hz, c.workers);
    const auto total_psd = trace_psd(total.samples, c.sample_rate_hz, c.delta_f_hz, c.workers);
    const auto cal       = calibrate(dark_psd, total_psd, c.sample_rate_hz, c.f_max_hz, c.band_mask);

    ensure_output_dir(c.paths.calibration_file().parent_path().empty() ? fs::path(".")
                                                                       : c.paths.calibration_file().parent_path());
    write_json(c.paths.calibration_file(), "calibration", calibration_to_json(cal, dark_psd));
    ensure_output_dir(c.paths.output_dir);
    write_psd_csv(c.paths.output_dir / "dark_psd.csv", dark_psd);
    write_psd_csv(c.paths.output_dir / "total_psd.csv", total_psd);

    std::vector<double> ratios;
    for (const auto& b : cal.retained(c.band_mask)) {
        ratios.push_back((b.params.sigma_t * b.params.sigma_t) / (b.params.sigma_k * b.params.sigma_k));
    }
    double median = 0.0;
    if (!ratios.empty()) {
        std::nth_element(ratios.begin(), ratios.begin() + static_cast<std::ptrdiff_t>(ratios.size() / 2), ratios.end());
        median = ratios[ratios.size() / 2];
    }
    const Json summary = {{"schema_version", kSchemaVersion},
                          {"kind", "calibrate"},
                          {"calibration", c.paths.calibration_file().string()},
                          {"bins", cal.bins.size()},
                          {"retained_bins", ratios.size()},
                          {"dark_blocks", cal.dark_blocks},
                          {"total_blocks", cal.total_blocks},
                          {"median_total_to_dark_ratio", median}};
    out << summary.dump(2) << '\n';
}

void cmd_extract(const RunConfig& c, std::ostream& out) {
    c.validate();
    const auto p     = prepare(c, read_calibration(c.paths.calibration_file()));
    const auto trace = load_trace_at(c.paths.total(), p.calibration.sample_rate_hz);
    const auto opts  = pipeline_options(c, p.plan);
    const auto res   = run_pipeline(trace.samples, p.calibration, p.plan, p.report, c.binning, opts);

    ensure_output_dir(c.paths.output_dir);
    write_bytes(c.paths.output_dir / "bits.bin", res.bits.to_bytes_msb_first());
    write_json(c.paths.output_dir / "entropy_report.json", "entropy_report", to_json(p.report));
    Json plan        = to_json(p.plan);
    plan["extractor"] = std::string(to_string(c.extraction.extractor));
    write_json(c.paths.output_dir / "plan.json", "extraction_plan", plan);
    write_json(c.paths.output_dir / "extract.json", "extract",
               {{"blocks", res.blocks},
                {"output_bits", res.bits.size()},
                {"bits_file", (c.paths.output_dir / "bits.bin").string()},
                {"net_rate_bps", p.plan.net_rate_bps},
                {"gross_rate_bps", p.plan.gross_rate_bps}});
    out << "net_rate_gbps=" << gbps(p.plan.net_rate_bps) << " gross_rate_gbps=" << gbps(p.plan.gross_rate_bps)
        << " values_per_block=" << p.plan.values_per_block << " hash_in_bits=" << p.plan.hash_in_bits
        << " hash_out_bits=" << p.plan.hash_out_bits << " blocks=" << res.blocks << " output_bits=" << res.bits.size()
        << '\n';
}

bool cmd_report(const RunConfig& c, std::ostream& out) {
    c.validate();
    Json bundle;
    bool any_ok = false;
    auto section = [&](const char* name, auto&& body) {
        try {
            Json s      = body();
            if (!s.contains("status")) {
                s["status"] = "ok";
            }
            any_ok = any_ok || s["status"] == "ok";
            bundle[name] = std::move(s);
        } catch (const std::exception& e) {
            bundle[name] = {{"status", "error"}, {"reason", e.what()}};
        }
    };
    ensure_output_dir(c.paths.output_dir);

    std::optional<Trace> total;
    try {
        total = load_trace_at(c.paths.total(), c.sample_rate_hz);
    } catch (const std::exception& e) {
        bundle["total_trace"] = {{"status", "error"}, {"reason", e.what()}};
    }
    auto need_total = [&]() -> const Trace& {
        if (!total) {
            throw DataError("total trace unavailable");
        }
        return *total;
    };

    section("spurs", [&] {
        const auto psd   = trace_psd(need_total().samples, c.sample_rate_hz, c.delta_f_hz, c.workers);
        write_psd_csv(c.paths.output_dir / "report_psd.csv", psd);
        const auto spurs = detect_spurs(psd, c.report.spur_threshold_db);
        Json list = Json::array();
        for (const auto& s : spurs) {
            Json e         = to_json(s, psd.delta_f);
            e["masked"]    = c.band_mask.contains(s.freq_hz);
            list.push_back(std::move(e));
        }
        return Json{{"threshold_db", c.report.spur_threshold_db}, {"blocks", psd.blocks_averaged}, {"spurs", list}};
    });

    section("correlation", [&] {
        CorrelationScanSettings s;
        s.smooth_window_hz = c.report.smooth_window_hz;
        s.f_max_hz         = c.f_max_hz;
        s.min_blocks       = c.report.min_correlation_blocks;
        s.workers          = c.workers;
        const auto r = correlation_scan(need_total().samples, c.sample_rate_hz, c.report.correlation_delta_f_hz, s);
        const CsvColumn cols[] = {{"freq_hz", r.freq_hz},
                                  {"re_im", r.re_im_smoothed},
                                  {"consecutive", r.consecutive_smoothed},
                                  {"neighbor", r.neighbor_smoothed}};
        write_csv(c.paths.output_dir / "correlation.csv", cols);
        auto max_abs = [](const std::vector<double>& v) {
            double m = 0.0;
            for (double x : v) {
                m = std::max(m, std::abs(x));
            }
            return m;
        };
        return Json{{"delta_f_hz", r.delta_f_hz},
                    {"smooth_window_hz", r.smooth_window_hz},
                    {"blocks", r.blocks},
                    {"max_abs_re_im", max_abs(r.re_im_smoothed)},
                    {"max_abs_consecutive", max_abs(r.consecutive_smoothed)},
                    {"max_abs_neighbor", max_abs(r.neighbor_smoothed)},
                    {"csv", (c.paths.output_dir / "correlation.csv").string()}};
    });

    section("linearity", [&]() -> Json {
        const std::size_t n = std::max(c.paths.sweep_traces.size(), c.simulation.sweep_powers_mw.size());
        std::vector<PowerPoint> points;
        for (std::size_t i = 0; i < n; ++i) {
            const auto t = load_trace_at(c.paths.sweep(i), c.sample_rate_hz);
            const auto psd = trace_psd(t.samples, c.sample_rate_hz, c.delta_f_hz, c.workers);
            points.push_back({t.meta.optical_power_mw, band_power(psd, c.report.linearity_lo_hz, c.report.linearity_hi_hz)});
        }
        if (points.size() < 3) {
            return {{"status", "skipped: need >=3 powers"}, {"points", points.size()}};
        }
        std::vector<double> pw, lv;
        for (const auto& p : points) {
            pw.push_back(p.power_mw);
            lv.push_back(p.level);
        }
        const CsvColumn cols[] = {{"power_mw", pw}, {"level", lv}};
        write_csv(c.paths.output_dir / "linearity.csv", cols);
        Json j      = to_json(fit_linearity(points));
        j["points"] = points.size();
        return j;
    });

    section("occupancy", [&] {
        const auto     p    = prepare(c, read_calibration(c.paths.calibration_file()));
        auto           opts = pipeline_options(c, p.plan);
        opts.collect_words  = true;
        const auto res = run_pipeline(need_total().samples, p.calibration, p.plan, p.report, c.binning, opts);
        const int  bits = c.binning.bits();
        return Json{{"word_bits", bits},
                    {"words", res.words.size()},
                    {"max_to_mean", bin_occupancy_scan(res.words, bits)}};
    });

    if (c.report.harmonic_f0_hz) {
        section("second_harmonic", [&] {
            const auto psd = trace_psd(need_total().samples, c.sample_rate_hz, c.delta_f_hz, c.workers);
            return Json{{"f0_hz", *c.report.harmonic_f0_hz},
                        {"ratio_db", second_harmonic_ratio(psd, *c.report.harmonic_f0_hz)}};
        });
    }

    write_json(c.paths.output_dir / "report.json", "report", bundle);
    Json printed = {{"schema_version", kSchemaVersion}, {"kind", "report"}};
    for (auto& [k, v] : bundle.items()) {
        printed[k] = v;
    }
    out << printed.dump(2) << '\n';
    return any_ok;
}

void cmd_rate(const RunConfig& c, std::ostream& out) {
    c.validate();
    const bool have_cal = fs::exists(c.paths.calibration_file());
    const auto cal      = have_cal ? read_calibration(c.paths.calibration_file())
                                   : expected_calibration(c.simulation.model, c.simulation.power_mw, c.sample_rate_hz,
                                                          c.delta_f_hz, c.f_max_hz);
    const auto p = prepare(c, cal);
    Json j       = {{"schema_version", kSchemaVersion},
                    {"kind", "rate"},
                    {"source", have_cal ? "calibration" : "model"}};
    const Json plan = to_json(p.plan);
    for (const auto& [k, v] : plan.items()) {
        j[k] = v;
    }
    j["net_rate_gbps"]   = p.plan.net_rate_bps / 1e9;
    j["gross_rate_gbps"] = p.plan.gross_rate_bps / 1e9;
    out << j.dump(2) << '\n';
}

namespace {

struct Flags {
    std::string                config;
    std::optional<std::string> output_dir, total, dark, calibration, seed_file, scheme, extractor;
    std::optional<unsigned>    workers;
    std::optional<double>      sample_rate, delta_f, f_max, power, log2_epsilon, hash_ratio, threshold;
    std::optional<std::uint64_t> samples, seed, key;
    std::optional<int>         bits;
    std::vector<std::string>   masks;
    std::vector<std::string>   sweep;
    bool                       no_mask = false;
};

void add_common(CLI::App* app, Flags& f) {
    app->add_option("-c,--config", f.config, "JSON config file");
    app->add_option("-o,--output-dir", f.output_dir, "Output directory");
    app->add_option("--total", f.total, "Total (beam on) trace");
    app->add_option("--dark", f.dark, "Dark (beam blocked) trace");
    app->add_option("--calibration", f.calibration, "Calibration file");
    app->add_option("-j,--workers", f.workers, "Worker threads")->check(CLI::PositiveNumber);
    app->add_option("--sample-rate", f.sample_rate, "Sample rate in Hz");
    app->add_option("--delta-f", f.delta_f, "Frequency resolution in Hz");
    app->add_option("--f-max", f.f_max, "Highest extracted frequency in Hz");
    app->add_option("--scheme", f.scheme, "Binning scheme: cyclic or equal_area");
    app->add_option("--bits", f.bits, "Bits per binned value");
    app->add_option("--log2-epsilon", f.log2_epsilon, "log2 of the extractor distance bound");
    app->add_option("--hash-ratio", f.hash_ratio, "Credited bits per value over word bits");
    app->add_option("--mask", f.masks, "Band mask lo:hi in Hz (repeatable, replaces configured masks)");
    app->add_flag("--no-mask", f.no_mask, "Disable band masks");
}

RunConfig resolve(const Flags& f) {
    RunConfig c = f.config.empty() ? RunConfig{} : load_config(f.config);
    apply_env_overrides(c);
    if (f.output_dir) c.paths.output_dir = *f.output_dir;
    if (f.total) c.paths.total_trace = *f.total;
    if (f.dark) c.paths.dark_trace = *f.dark;
    if (f.calibration) c.paths.calibration = *f.calibration;
    if (!f.sweep.empty()) c.paths.sweep_traces.assign(f.sweep.begin(), f.sweep.end());
    if (f.workers) c.workers = *f.workers;
    if (f.sample_rate && *f.sample_rate != c.sample_rate_hz) {
        c.sample_rate_hz   = *f.sample_rate;
        c.simulation.model = default_noise_model(c.sample_rate_hz);
    }
    if (f.delta_f) c.delta_f_hz = *f.delta_f;
    if (f.f_max) c.f_max_hz = *f.f_max;
    if (f.scheme) c.binning.scheme = binning_scheme_from_string(*f.scheme);
    if (f.bits) {
        c.binning.cyclic.bits     = *f.bits;
        c.binning.equal_area.bits = *f.bits;
    }
    if (f.log2_epsilon) c.extraction.log2_epsilon = *f.log2_epsilon;
    if (f.hash_ratio) c.extraction.hash_ratio = *f.hash_ratio;
    if (f.extractor) c.extraction.extractor = extractor_kind_from_string(*f.extractor);
    if (f.key) c.extraction.key = *f.key;
    if (f.seed_file) c.extraction.seed_file = *f.seed_file;
    if (f.samples) c.simulation.samples = *f.samples;
    if (f.seed) c.simulation.seed = *f.seed;
    if (f.power) c.simulation.power_mw = *f.power;
    if (f.threshold) c.report.spur_threshold_db = *f.threshold;
    if (f.no_mask) {
        c.band_mask = BandMask{};
    } else if (!f.masks.empty()) {
        std::vector<FrequencyInterval> iv;
        for (const auto& m : f.masks) {
            iv.push_back(parse_interval(m));
        }
        c.band_mask = BandMask(std::move(iv));
    }
    return c;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Post-processing toolkit for a vacuum-fluctuation random number generator", "vacrng"};
    app.require_subcommand(1);
    Flags f;

    auto* sim = app.add_subcommand("simulate", "Write simulated total, dark and sweep traces");
    add_common(sim, f);
    sim->add_option("--samples", f.samples, "Samples per trace");
    sim->add_option("--seed", f.seed, "Simulation seed");
    sim->add_option("--power", f.power, "Optical power in mW");

    auto* cal = app.add_subcommand("calibrate", "Per-bin noise levels from dark and total traces");
    add_common(cal, f);

    auto* ext = app.add_subcommand("extract", "Run the extraction pipeline on the total trace");
    add_common(ext, f);
    ext->add_option("--extractor", f.extractor, "toeplitz or sha512");
    ext->add_option("--key", f.key, "Toeplitz seed key");
    ext->add_option("--seed-file", f.seed_file, "Toeplitz seed bits (MSB-first bytes)");

    auto* rep = app.add_subcommand("report", "Spur, correlation, linearity and occupancy diagnostics");
    add_common(rep, f);
    rep->add_option("--sweep", f.sweep, "Traces of a power sweep (repeatable)");
    rep->add_option("--spur-threshold-db", f.threshold, "Spur threshold over the rolling median");

    auto* rate = app.add_subcommand("rate", "Print the extraction plan arithmetic");
    add_common(rate, f);
    rate->add_option("--power", f.power, "Optical power in mW for the model-based estimate");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        const RunConfig c = resolve(f);
        if (sim->parsed()) {
            cmd_simulate(c, out);
        } else if (cal->parsed()) {
            cmd_calibrate(c, out);
        } else if (ext->parsed()) {
            cmd_extract(c, out);
        } else if (rep->parsed()) {
            if (!cmd_report(c, out)) {
                err << "error: every report section failed\n";
                return kExitData;
            }
        } else {
            cmd_rate(c, out);
        }
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const EntropySafetyError& e) {
        err << "entropy safety violation: " << e.what() << '\n';
        return kExitEntropySafe;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
}

} // namespace vacrng::cli
