// Serial reference vs OpenMP version of each kernel. Set DEZIN_THREADS to
// choose the team size for the parallel variants.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "dezin/kernels.hpp"
#include "dezin/mlf.hpp"

using namespace dezin;
using namespace dezin::kernels;

namespace {

struct ProjectionCase {
  std::shared_ptr<const ModeSet> modes;
  TensorGrid grid;
  std::vector<double> wh;
};

const ProjectionCase& projection_case() {
  static const ProjectionCase c = [] {
    const double len[] = {1.0, 1.5};
    ProjectionCase pc;
    pc.modes = make_mode_set(BoxDomain::make(len), 200);
    pc.grid.dims = 2;
    const int n = 256;
    for (int i = 0; i < 2; ++i) {
      for (int p = 0; p < n; ++p) {
        pc.grid.nodes[i].push_back(len[i] * (p + 0.5) / n);
        pc.grid.weights[i].push_back(len[i] / n);
      }
      int mx = 1;
      for (const auto& m : pc.modes->modes) mx = std::max(mx, m.multi_index[i]);
      pc.grid.max_index[i] = mx;
    }
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    pc.wh.resize(static_cast<std::size_t>(n) * n);
    for (double& v : pc.wh) v = u(rng);
    return pc;
  }();
  return c;
}

Table random_table(std::size_t r, std::size_t c, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Table t{r, c, std::vector<double>(r * c)};
  for (double& v : t.data) v = u(rng);
  return t;
}

// One Mittag-Leffler evaluation per entry, as in the forward output tables.
double mode_value(std::size_t k, std::size_t j) {
  const double lam = 9.8696 * (k + 1) * (k + 1);
  const double t = 1e-3 + j * 5e-3;
  return ml_eval(0.5, 1.0, -lam * std::sqrt(t));
}

void BM_project_serial(benchmark::State& s) {
  const auto& c = projection_case();
  for (auto _ : s) benchmark::DoNotOptimize(project_serial(c.wh, c.grid, *c.modes));
}
void BM_project_parallel(benchmark::State& s) {
  const auto& c = projection_case();
  for (auto _ : s) benchmark::DoNotOptimize(project_parallel(c.wh, c.grid, *c.modes));
  s.counters["threads"] = thread_count();
}

void BM_synthesize_serial(benchmark::State& s) {
  const auto V = random_table(101 * 101, 200, 2), T = random_table(200, 201, 3);
  for (auto _ : s) benchmark::DoNotOptimize(synthesize_serial(V, T));
}
void BM_synthesize_parallel(benchmark::State& s) {
  const auto V = random_table(101 * 101, 200, 2), T = random_table(200, 201, 3);
  for (auto _ : s) benchmark::DoNotOptimize(synthesize_parallel(V, T));
  s.counters["threads"] = thread_count();
}

void BM_mode_time_table_serial(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(mode_time_table_serial(64, 201, mode_value));
}
void BM_mode_time_table_parallel(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(mode_time_table_parallel(64, 201, mode_value));
  s.counters["threads"] = thread_count();
}

}  // namespace

BENCHMARK(BM_project_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_project_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_synthesize_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_synthesize_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_mode_time_table_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_mode_time_table_parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
