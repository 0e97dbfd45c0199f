#include <benchmark/benchmark.h>

#include "pingcert/growth.hpp"
#include "pingcert/pingpong.hpp"

using namespace pingcert;

namespace {

Matrix M(long a, long b, long c, long d) {
  return Matrix::from_rows({{Rational(a), Rational(b)}, {Rational(c), Rational(d)}});
}

GeneratorSet sanov() {
  Matrix a = M(1, 2, 0, 1), b = M(1, 0, 2, 1);
  return GeneratorSet({Matrix::identity(2), a, a.inverse(), b, b.inverse()});
}

void BM_BallSerial(benchmark::State& state) {
  GeneratorSet s = sanov();
  for (auto _ : state) benchmark::DoNotOptimize(ball_enumerate_serial(s, static_cast<int>(state.range(0))));
}

void BM_BallParallel(benchmark::State& state) {
  GeneratorSet s = sanov();
  for (auto _ : state) benchmark::DoNotOptimize(ball_enumerate(s, static_cast<int>(state.range(0))));
}

void BM_RelationOracle(benchmark::State& state, bool parallel) {
  Matrix a = M(1, 2, 0, 1), b = M(1, 0, 2, 1);
  for (auto _ : state)
    benchmark::DoNotOptimize(relation_oracle(a, b, static_cast<int>(state.range(0)), false, {5'000'000, parallel}));
}

}  // namespace

BENCHMARK(BM_BallSerial)->DenseRange(6, 10, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BallParallel)->DenseRange(6, 10, 2)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_RelationOracle, serial, false)->DenseRange(6, 10, 2)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_RelationOracle, parallel, true)->DenseRange(6, 10, 2)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
