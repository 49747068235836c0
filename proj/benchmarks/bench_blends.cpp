#include <numbers>
#include <vector>

#include <benchmark/benchmark.h>

#include "blends/blend.hpp"
#include "blends/blendstring.hpp"
#include "blends/collocate.hpp"
#include "blends/oracles.hpp"

namespace {

using blends::complex;
using Blendstring = blends::Blendstring<complex>;

std::vector<complex> uniform_knots(int count, double lo, double hi) {
  std::vector<complex> out;
  for (int k = 0; k < count; ++k) out.emplace_back(lo + (hi - lo) * k / (count - 1), 0.0);
  return out;
}

void BM_BlendEvaluate(benchmark::State& state) {
  const int grade = static_cast<int>(state.range(0));
  const auto f = blends::oracles::exp<complex>();
  const complex a(0.0), b(0.5, 0.25);
  const blends::Blend<complex> blend(blends::LocalTaylor<complex>(a, f(a, grade)),
                                     blends::LocalTaylor<complex>(b, f(b, grade)));
  complex s(0.37, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(blend.evaluate(s));
}
BENCHMARK(BM_BlendEvaluate)->Arg(4)->Arg(10)->Arg(20)->Arg(40);

void BM_BlendstringBuild(benchmark::State& state) {
  const auto knots = uniform_knots(static_cast<int>(state.range(0)), -1.0, 1.0);
  const auto f = blends::oracles::exp<complex>();
  for (auto _ : state) benchmark::DoNotOptimize(Blendstring::build(knots, 10, f));
}
BENCHMARK(BM_BlendstringBuild)->Arg(5)->Arg(50)->Arg(500);

void BM_BlendstringDeval(benchmark::State& state) {
  const auto knots = uniform_knots(20, -1.0, 1.0);
  const auto b = Blendstring::build(knots, 10, blends::oracles::exp<complex>());
  const int nder = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(b.deval(22, nder));
}
BENCHMARK(BM_BlendstringDeval)->Arg(0)->Arg(2);

void BM_SolveOscillator(benchmark::State& state) {
  blends::OdeProblem<complex> p;
  p.b = blends::oracles::constant<complex>(complex(1.0));
  p.path = {complex(0.0), complex(2 * std::numbers::pi)};
  p.y0 = complex(1.0);
  p.grade = static_cast<int>(state.range(0));
  p.tol = 1e-10;
  for (auto _ : state) benchmark::DoNotOptimize(blends::solve_ivp(p));
}
BENCHMARK(BM_SolveOscillator)->Arg(6)->Arg(10)->Arg(16)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
