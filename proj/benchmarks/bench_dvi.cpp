#include <benchmark/benchmark.h>

#include "dvi/dataio.hpp"
#include "dvi/path.hpp"
#include "dvi/screen_dvi.hpp"
#include "dvi/screen_ssnsv.hpp"
#include "dvi/solver.hpp"

namespace {

const dvi::ProblemData& toy(int which) {
  static const dvi::ProblemData problems[] = {
      dvi::build_problem(dvi::gen_toy_preset(dvi::ToyPreset::kToy1, 7), dvi::LossSpec::hinge()),
      dvi::build_problem(dvi::gen_toy_preset(dvi::ToyPreset::kToy2, 7), dvi::LossSpec::hinge()),
      dvi::build_problem(dvi::gen_toy_preset(dvi::ToyPreset::kToy3, 7), dvi::LossSpec::hinge())};
  return problems[which];
}

void BM_SolveDualCold(benchmark::State& state) {
  const dvi::ProblemData& p = toy(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(dvi::solve_dual(p, 1.0, nullptr, {}));
  }
}
BENCHMARK(BM_SolveDualCold)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_ScreenDual(benchmark::State& state) {
  const dvi::ProblemData& p = toy(0);
  const dvi::DualSolution s = dvi::solve_dual(p, 1.0, nullptr, {});
  for (auto _ : state) benchmark::DoNotOptimize(dvi::screen_dual(p, 1.0, 1.072, s));
}
BENCHMARK(BM_ScreenDual)->Unit(benchmark::kMicrosecond);

void BM_ScreenPrimal(benchmark::State& state) {
  const dvi::ProblemData& p = toy(0);
  const dvi::PrimalSolution w = dvi::primal_from_dual(p, dvi::solve_dual(p, 1.0, nullptr, {}));
  for (auto _ : state) benchmark::DoNotOptimize(dvi::screen_primal(p, 1.0, 1.072, w));
}
BENCHMARK(BM_ScreenPrimal)->Unit(benchmark::kMicrosecond);

void BM_SsnsvFamily(benchmark::State& state) {
  const dvi::ProblemData& p = toy(1);
  const dvi::PrimalSolution wa = dvi::primal_from_dual(p, dvi::solve_dual(p, 1.0, nullptr, {}));
  const dvi::PrimalSolution wb = dvi::primal_from_dual(p, dvi::solve_dual(p, 10.0, nullptr, {}));
  const dvi::SPathState s = dvi::make_spath_state(p, wa.w, wb.w);
  const bool strong = state.range(0) == 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(strong ? dvi::essnsv_screen(p, s) : dvi::ssnsv_screen(p, s));
  }
  state.SetLabel(strong ? "essnsv" : "ssnsv");
}
BENCHMARK(BM_SsnsvFamily)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

// Whole 100-point path on Toy1: plain solver vs solver with each rule.
void BM_Path(benchmark::State& state) {
  const dvi::ProblemData& p = toy(0);
  const dvi::PathGrid grid = dvi::log_grid(1e-2, 10.0, 100);
  const auto method = static_cast<dvi::Method>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(dvi::run_path(p, grid, method));
  state.SetLabel(std::string(dvi::to_string(method)));
}
BENCHMARK(BM_Path)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
