#include <vacrng/analysis.hpp>
#include <vacrng/extract.hpp>
#include <vacrng/pipeline.hpp>
#include <vacrng/rng.hpp>
#include <vacrng/spectral.hpp>

#include <benchmark/benchmark.h>

using namespace vacrng;

namespace {

constexpr double kRate = 20e9;

std::vector<std::int8_t> simulate(double power, std::size_t samples, std::uint64_t seed) {
    const auto               model = default_noise_model(kRate);
    std::vector<std::int8_t> out;
    for (std::uint64_t i = 0; out.size() < samples; ++i) {
        SimulationRequest r;
        r.power_mw     = power;
        r.seed         = derive_seed(seed, i);
        r.first_sample = i << 18;
        const auto b   = simulate_block(model, r);
        out.insert(out.end(), b.samples.begin(), b.samples.end());
    }
    out.resize(samples);
    return out;
}

void BM_BlockDft(benchmark::State& state) {
    const auto     n = static_cast<std::size_t>(state.range(0));
    const auto     x = simulate(4.5, n, 1);
    BlockTransform t(n, kRate);
    for (auto _ : state) {
        benchmark::DoNotOptimize(t.forward(std::span<const std::int8_t>(x)));
    }
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_BlockDft)->Arg(1 << 16)->Arg(200000);

void BM_SimulateBlock(benchmark::State& state) {
    const auto        model = default_noise_model(kRate);
    SimulationRequest r;
    r.power_mw = 4.5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_block(model, r));
        ++r.seed;
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * r.length));
}
BENCHMARK(BM_SimulateBlock);

// One block of the default plan: 304320 bits in, 266080 out.
void BM_ToeplitzHash(benchmark::State& state) {
    const std::size_t in = 304320, out = 266080;
    const auto        seed = SeededToeplitz::from_key(3, in, out);
    BitVector         x(in);
    Xoshiro256pp      rng(4);
    for (auto& w : x.words()) {
        w = rng();
    }
    x.resize(in);
    for (auto _ : state) {
        benchmark::DoNotOptimize(toeplitz_hash(seed, x));
    }
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * in / 8));
}
BENCHMARK(BM_ToeplitzHash)->Unit(benchmark::kMillisecond);

void BM_Sha512Expand(benchmark::State& state) {
    const auto   h = make_sha512();
    BitVector    x(304320);
    for (auto _ : state) {
        benchmark::DoNotOptimize(crypto_hash_expand(*h, x, 266080));
    }
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * 304320 / 8));
}
BENCHMARK(BM_Sha512Expand)->Unit(benchmark::kMillisecond);

void BM_Pipeline(benchmark::State& state) {
    const double      df    = 1e5;
    const auto        mask  = default_gsm_mask();
    const auto        dark  = simulate(0.0, 20 * 200000, 5);
    const auto        total = simulate(4.5, 20 * 200000, 6);
    const auto        cal   = calibrate(trace_psd(dark, kRate, df), trace_psd(total, kRate, df), kRate, 1e9, mask);
    const BinningConfig binning;
    const auto        report = build_entropy_report(cal, mask, binning);
    PlanRequest       req;
    req.band_mask   = mask;
    req.delta_f_hz  = df;
    req.f_max_hz    = 1e9;
    const auto plan = plan_extraction(report, req);
    PipelineOptions o;
    o.workers = static_cast<unsigned>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_pipeline(total, cal, plan, report, binning, o));
    }
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * total.size()));
}
BENCHMARK(BM_Pipeline)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_EntropyReport(benchmark::State& state) {
    const auto cal  = expected_calibration(default_noise_model(kRate), 4.5, kRate, 1e5, 1e9);
    const auto mask = default_gsm_mask();
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_entropy_report(cal, mask, BinningConfig{}));
    }
}
BENCHMARK(BM_EntropyReport)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
