#include <benchmark/benchmark.h>

#include "nondiv/enumeration.hpp"
#include "nondiv/pushout.hpp"

using namespace nondiv;

namespace {

Scenario sl4() {
  RatMatrix rot = RatMatrix::identity(4), boost = RatMatrix::identity(4);
  rot(1, 1) = Rational(3, 5), rot(1, 2) = Rational(-4, 5);
  rot(2, 1) = Rational(4, 5), rot(2, 2) = Rational(3, 5);
  boost(1, 1) = Rational(5, 4), boost(1, 3) = Rational(3, 4);
  boost(3, 1) = Rational(3, 4), boost(3, 3) = Rational(5, 4);
  return Scenario(4, {{0, 1}, {1, 4}}, {rot, boost});
}

UnimodularLattice squeezed(std::size_t n, int depth) {
  RatMatrix b = RatMatrix::identity(n);
  const Rational eps(1, 1L << depth);
  b(0, 0) = eps;
  b(n - 1, n - 1) = 1 / eps;
  // A unipotent shear keeps the basis from being reduced.
  for (std::size_t j = 1; j < n; ++j) b(0, j) = Rational(1, 3);
  return UnimodularLattice(b);
}

UnimodularLattice pushed_sl4(int k) {
  const Rational t(1, 1L << k);
  RatMatrix b = RatMatrix::identity(4);
  b(0, 0) = t * t * t;
  for (std::size_t i = 1; i < 4; ++i) b(i, i) = 1 / t;
  return UnimodularLattice(b);
}

void BM_ShortVectors(benchmark::State& state) {
  const auto lat = squeezed(static_cast<std::size_t>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(short_vectors(lat, Rational(2)));
}
BENCHMARK(BM_ShortVectors)->DenseRange(2, 5);

void BM_DeltaTrivial(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const auto lat = squeezed(n, 6);
  const Scenario sc = Scenario::diagonal(n);
  for (auto _ : state) benchmark::DoNotOptimize(delta_m(lat, sc));
}
BENCHMARK(BM_DeltaTrivial)->DenseRange(2, 5);

void BM_DeltaSl4(benchmark::State& state) {
  const auto lat = pushed_sl4(static_cast<int>(state.range(0)));
  const Scenario sc = sl4();
  for (auto _ : state) benchmark::DoNotOptimize(delta_m(lat, sc));
}
BENCHMARK(BM_DeltaSl4)->DenseRange(1, 3);

void BM_OracleN3(benchmark::State& state) {
  const auto lat = squeezed(3, 2);
  const Scenario sc = Scenario::diagonal(3);
  for (auto _ : state) benchmark::DoNotOptimize(oracle_delta_m(lat, sc, static_cast<unsigned>(state.range(0))));
}
BENCHMARK(BM_OracleN3)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void BM_DriveDiagonal(benchmark::State& state) {
  const auto lat = squeezed(2, static_cast<int>(state.range(0)));
  const Scenario sc = Scenario::diagonal(2);
  for (auto _ : state) benchmark::DoNotOptimize(drive(lat, sc, PushoutConfig{}));
}
BENCHMARK(BM_DriveDiagonal)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
