// Serial vs OpenMP kernels on synthetic workloads larger than any scenario.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "satmig/kernels.hpp"
#include "satmig/metrics.hpp"
#include "satmig/scenario_io.hpp"

namespace {

using namespace satmig;

struct GeometryInput {
  ConstellationConfig config;
  std::vector<SatelliteState> sats;
  std::vector<GeodeticPoint> users;
};

GeometryInput make_geometry(int users) {
  GeometryInput in;
  in.config.num_satellites = 64;
  in.config.raan_spacing_deg = 360.0 / 64.0;
  in.sats = propagate(in.config, 3, 300.0);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> lat(-70.0, 70.0), lon(-180.0, 180.0), alt(0.0, 12.0);
  for (int i = 0; i < users; ++i) in.users.push_back({lat(rng), lon(rng), alt(rng)});
  return in;
}

std::vector<LinkRequest> make_links(int n) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<LinkRequest> out(n);
  for (auto& r : out) {
    r.elevation_deg = 15.0 + 75.0 * u(rng);
    r.range_km = 20184.0 + 4000.0 * u(rng);
    r.user_lat_deg = -60.0 + 120.0 * u(rng);
    r.user_alt_km = 0.0;
    r.bandwidth_ratio = 0.01 + 0.1 * u(rng);
    r.arrival_rate_pps = 1.0 + 20.0 * u(rng);
    r.packet_bits = 2e5 + 1e6 * u(rng);
    r.max_delay_s = 0.05 + 0.3 * u(rng);
  }
  return out;
}

void BM_GeometrySerial(benchmark::State& state) {
  const auto in = make_geometry(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(serial::compute_geometry(in.config, in.sats, in.users));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 64);
}

void BM_GeometryOmp(benchmark::State& state) {
  const auto in = make_geometry(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(omp::compute_geometry(in.config, in.sats, in.users));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 64);
}

void BM_LinksSerial(benchmark::State& state) {
  const auto req = make_links(static_cast<int>(state.range(0)));
  std::vector<LinkResult> res(req.size());
  const LinkBudgetParams params;
  const RainModel rain;
  for (auto _ : state) {
    serial::evaluate_links(req, res, params, rain, 300.0);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_LinksOmp(benchmark::State& state) {
  const auto req = make_links(static_cast<int>(state.range(0)));
  std::vector<LinkResult> res(req.size());
  const LinkBudgetParams params;
  const RainModel rain;
  for (auto _ : state) {
    omp::evaluate_links(req, res, params, rain, 300.0);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_BatchEpisodes(benchmark::State& state) {
  const auto scenario = load_scenario(SATMIG_SCENARIO_DIR "/default.json");
  for (auto _ : state) benchmark::DoNotOptimize(run_batch(scenario, "greedy", 4, 1));
}

}  // namespace

BENCHMARK(BM_GeometrySerial)->Arg(1024)->Arg(16384);
BENCHMARK(BM_GeometryOmp)->Arg(1024)->Arg(16384);
BENCHMARK(BM_LinksSerial)->Arg(1024)->Arg(65536);
BENCHMARK(BM_LinksOmp)->Arg(1024)->Arg(65536);
BENCHMARK(BM_BatchEpisodes)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
