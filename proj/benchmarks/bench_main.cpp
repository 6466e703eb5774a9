// Microbenchmarks for the hot loops: the explicit step kernel, seeded noise
// path generation, and the streaming defect accumulator.
#include <vector>

#include <benchmark/benchmark.h>

#include "levypde/functionals/defect_measure.hpp"
#include "levypde/model/coefficients.hpp"
#include "levypde/model/problem_spec.hpp"
#include "levypde/noise/noise_path.hpp"
#include "levypde/solver/grid.hpp"
#include "levypde/solver/scheme.hpp"

using namespace levypde;

namespace {

model::ProblemSpec bench_spec(double jump_rate) {
  return model::make_problem_spec(
      model::make_flux("burgers", 1.0, {1.0, 0.0}),
      model::make_diffusion("porous-medium", 0.5, 2.0),
      model::make_sigma("clamp", 0.2, 1.0),
      jump_rate > 0.0 ? model::make_jump("linear", 0.1, 1.0)
                      : model::make_jump("zero", 0.0, 1.0),
      model::make_jump_profile("abs-capped"),
      model::make_mark_measure(jump_rate, -1.0, 1.0, "uniform"),
      model::make_initial_data("gaussian", 1.0, 0.5, 0.0), 1,
      model::ProblemSpecOptions{});
}

solver::Grid bench_grid(int n, int dim) {
  solver::Grid g;
  g.dim = dim;
  g.n = n;
  g.half_width = 2.0;
  return g;
}

void bm_step_kernel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int dim = static_cast<int>(state.range(1));
  const auto spec = bench_spec(0.0);
  const auto grid = bench_grid(n, dim);
  const double eps = 0.05;
  auto u = solver::sample_initial(spec, grid);
  std::vector<double> v(u.size());
  solver::StepInputs in;
  in.dt = solver::stable_dt(spec, grid, eps, 0.5);
  in.dw = 0.01;
  for (auto _ : state) {
    solver::step(spec, grid, eps, u, v, in);
    std::swap(u, v);
    benchmark::DoNotOptimize(u.data());
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(u.size()));
}

void bm_generate_path(benchmark::State& state) {
  const auto spec = bench_spec(4.0);
  const double t_final = 0.5;
  const double dt = t_final / static_cast<double>(state.range(0));
  std::uint64_t path = 0;
  for (auto _ : state) {
    auto p = noise::generate_path(spec.mark, t_final, dt, 42, path++);
    benchmark::DoNotOptimize(p.dw.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void bm_defect_accumulate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto spec = bench_spec(0.0);
  const auto grid = bench_grid(n, 1);
  const double eps = 0.05;
  auto u = solver::sample_initial(spec, grid);
  std::vector<double> v(u.size());
  solver::StepInputs in;
  in.dt = solver::stable_dt(spec, grid, eps, 0.5);
  solver::step(spec, grid, eps, u, v, in);
  solver::StepRecord rec;
  rec.k = 0;
  rec.t = 0.0;
  rec.dt = in.dt;
  rec.before = u;
  rec.after = v;
  functionals::DefectAccumulator acc(spec, grid, eps, 1.0, 0.2, 1.0);
  for (auto _ : state) {
    acc.on_step(rec);
    benchmark::DoNotOptimize(acc.total_mass());
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(u.size()));
}

}  // namespace

BENCHMARK(bm_step_kernel)->Args({512, 1})->Args({4096, 1})->Args({128, 2});
BENCHMARK(bm_generate_path)->Arg(1024)->Arg(16384);
BENCHMARK(bm_defect_accumulate)->Arg(512)->Arg(4096);

BENCHMARK_MAIN();
