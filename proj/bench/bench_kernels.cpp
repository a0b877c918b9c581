// Serial reference vs OpenMP kernels.

#include <filesystem>
#include <random>

#include <benchmark/benchmark.h>

#include "precut/ingest.hpp"
#include "precut/mmp.hpp"
#include "precut/netbuild.hpp"
#include "precut/tiler.hpp"

using namespace precut;
namespace fs = std::filesystem;

namespace {

struct Points {
  std::vector<net::Vec2> pos;
  std::vector<std::vector<int>> adj;
};

Points random_tree(int n) {
  std::mt19937_64 rng(1);
  // Density of a settled layout: about one node per unit area.
  std::uniform_real_distribution<double> u(0, std::sqrt(double(n)));
  Points p;
  p.pos.resize(n);
  p.adj.resize(n);
  for (auto& v : p.pos) v = {u(rng), u(rng)};
  for (int i = 1; i < n; ++i) {
    const int j = int(rng() % i);
    p.adj[i].push_back(j);
    p.adj[j].push_back(i);
  }
  return p;
}

void forces(benchmark::State& state, Exec exec) {
  const auto p = random_tree(int(state.range(0)));
  std::vector<net::Vec2> f(p.pos.size());
  const net::LayoutParams params;
  for (auto _ : state) {
    net::accumulate_forces(p.pos, p.adj, params, f, exec);
    benchmark::DoNotOptimize(f.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

tiler::Scene scene(int n) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.02, 0.98);
  tiler::Scene s;
  for (int i = 0; i < n; ++i) {
    s.coords.push_back({u(rng), u(rng)});
    s.classes.push_back(static_cast<ColorClass>(rng() % kColorClassCount));
  }
  for (int i = 1; i < n; ++i) s.edges.push_back({int(rng() % i), i});
  return s;
}

void pyramid(benchmark::State& state, Exec exec) {
  const auto s = scene(int(state.range(0)));
  const auto dir = fs::temp_directory_path() / "precut_bench_pyramid";
  const tiler::RenderStyle style;
  for (auto _ : state) {
    fs::remove_all(dir);
    tiler::generate_pyramid(s, style, dir, "bench", 4, 1, exec);
  }
  fs::remove_all(dir);
  state.SetItemsProcessed(state.iterations() * tiler::pyramid_tile_count(4));
}

void fragmentation(benchmark::State& state, Exec exec) {
  const auto records = ingest::load_compounds(fs::path(PRECUT_SOURCE_DIR) / "data/acceptance/compounds.tsv").compounds;
  std::vector<mmp::CorpusEntry> corpus;
  for (const auto& r : records) corpus.push_back({r.compound_id, r.graph});
  for (auto _ : state) benchmark::DoNotOptimize(mmp::index_corpus(corpus, 10, exec));
  state.SetItemsProcessed(state.iterations() * long(corpus.size()));
}

}  // namespace

BENCHMARK_CAPTURE(forces, serial, Exec::Serial)->Arg(1000)->Arg(20000);
BENCHMARK_CAPTURE(forces, parallel, Exec::Parallel)->Arg(1000)->Arg(20000);
BENCHMARK_CAPTURE(pyramid, serial, Exec::Serial)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(pyramid, parallel, Exec::Parallel)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(fragmentation, serial, Exec::Serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(fragmentation, parallel, Exec::Parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
