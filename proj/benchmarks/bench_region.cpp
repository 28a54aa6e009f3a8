#include <benchmark/benchmark.h>

#include <ewgeom/basis.hpp>
#include <ewgeom/decomp.hpp>
#include <ewgeom/region.hpp>
#include <ewgeom/states.hpp>
#include <ewgeom/witness.hpp>

using namespace ewgeom;

namespace {

RealVector conjecture_coeffs(Eigen::Index n) {
  RealVector c = RealVector::Constant(n, static_cast<double>(n));
  c(n - 1) = 1.0;
  return c;
}

}  // namespace

static void BM_Seesaw(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const OperatorBasis b = build_basis(n);
  const HermitianOperator target = b.combine(conjecture_coeffs(n));
  SeesawOptions opts;
  opts.restarts = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(seesaw_maximize(target, n, opts).best_outcome().value);
}
BENCHMARK(BM_Seesaw)->Args({3, 1})->Args({3, 64})->Args({4, 64})->Args({5, 64})->Unit(benchmark::kMillisecond);

static void BM_PVector(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const OperatorBasis b = build_basis(n);
  Vector a = Vector::Ones(n), c = Vector::LinSpaced(n, 1.0, 2.0);
  const ProductState s{PureState(a), PureState(c)};
  for (auto _ : state) benchmark::DoNotOptimize(p_vector(s, b));
}
BENCHMARK(BM_PVector)->Arg(3)->Arg(4)->Arg(8);

static void BM_CertifyPlane(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const OperatorBasis b = build_basis(n);
  const Hyperplane h(conjecture_coeffs(n), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(certify_plane(h, b).status());
}
BENCHMARK(BM_CertifyPlane)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_Decompose(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const OperatorBasis b = build_basis(n);
  const HermitianOperator w = find_family(n == 3 ? "W3" : "W4").materialize(n == 3 ? 0.5 : 0.3, b);
  for (auto _ : state) benchmark::DoNotOptimize(decompose(w, n).identity);
}
BENCHMARK(BM_Decompose)->Arg(3)->Arg(4);

static void BM_Classify(benchmark::State& state) {
  const OperatorBasis b = build_basis(3);
  const auto families = builtin_families(3);
  const MixtureState s = horodecki_weights(1.5);
  for (auto _ : state) benchmark::DoNotOptimize(classify(s, b, families).classification);
}
BENCHMARK(BM_Classify)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
