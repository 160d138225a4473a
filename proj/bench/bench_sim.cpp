// Throughput comparison of the serial reference frame loop against the
// OpenMP-parallel one, plus the kernels that dominate a sweep.

#include <benchmark/benchmark.h>

#include "polar/simulation.hpp"

namespace {

using namespace polar;

SimConfig bench_config() {
  SimConfig cfg;
  cfg.n_tx = 160;
  cfg.k = 120;
  cfg.scheme = SchemeId::proposed_punctured;
  cfg.crc_len = 24;
  cfg.list_size = 32;
  cfg.snr_grid_db = {5.0};
  cfg.max_frames = 512;
  cfg.max_errors = 1u << 30;  // no early stop while timing
  cfg.seed = 99;
  return cfg;
}

void BM_RunPointSerial(benchmark::State& state) {
  const SimConfig cfg = bench_config();
  for (auto _ : state) {
    BlerPoint p = run_point(cfg, cfg.snr_grid_db[0], ExecPolicy::serial);
    benchmark::DoNotOptimize(p.frame_errors);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.max_frames));
}
BENCHMARK(BM_RunPointSerial)->Unit(benchmark::kMillisecond);

void BM_RunPointParallel(benchmark::State& state) {
  const SimConfig cfg = bench_config();
  for (auto _ : state) {
    BlerPoint p = run_point(cfg, cfg.snr_grid_db[0], ExecPolicy::parallel);
    benchmark::DoNotOptimize(p.frame_errors);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.max_frames));
}
BENCHMARK(BM_RunPointParallel)->Unit(benchmark::kMillisecond);

void BM_SclDecode(benchmark::State& state) {
  const int list_size = static_cast<int>(state.range(0));
  const CodeSpec spec = design_code(160, 120, SchemeId::proposed_punctured);
  const SimConfig cfg = bench_config();
  const NoiseSpec noise = NoiseSpec::from_es_n0_db(5.0);
  FrameRng rng(7, 0, 0);
  BitVector word(spec.k);
  for (Bit& b : word) b = rng.next_bit();
  SymbolBlock block = modulate(rate_match(encode(spec, word), spec));
  add_noise(block, noise, rng);
  const LlrVector llrs = rate_recover(demodulate(block, noise), spec);
  for (auto _ : state) {
    auto paths = scl_decode(spec, llrs, list_size);
    benchmark::DoNotOptimize(paths.front().metric);
  }
}
BENCHMARK(BM_SclDecode)->Arg(1)->Arg(8)->Arg(32);

void BM_Encode(benchmark::State& state) {
  const CodeSpec spec = design_code(160, 120, SchemeId::proposed_punctured);
  FrameRng rng(7, 0, 1);
  BitVector word(spec.k);
  for (Bit& b : word) b = rng.next_bit();
  for (auto _ : state) {
    BitVector x = encode(spec, word);
    benchmark::DoNotOptimize(x.data());
  }
}
BENCHMARK(BM_Encode);

void BM_GaEvolve(benchmark::State& state) {
  const std::vector<double> channel(static_cast<std::size_t>(state.range(0)),
                                    design_channel_mean(2.0));
  for (auto _ : state) {
    auto means = ga_evolve(channel);
    benchmark::DoNotOptimize(means.data());
  }
}
BENCHMARK(BM_GaEvolve)->Arg(256)->Arg(4096);

}  // namespace

BENCHMARK_MAIN();
