#include <benchmark/benchmark.h>

#include <array>
#include <vector>

#include "tensorfn/tensorfn.hpp"

using namespace tensorfn;

namespace {

SymTensor sample_tensor() { return SymTensor(2.1, 0.3, -0.2, 3.4, 0.15, 1.2); }

void BM_Decompose(benchmark::State& state) {
  const SymTensor a = sample_tensor();
  for (auto _ : state) benchmark::DoNotOptimize(decompose(a));
}
BENCHMARK(BM_Decompose);

void BM_BuildTable(benchmark::State& state) {
  const auto s = decompose(sample_tensor());
  const auto f = ScalarFn::logarithm();
  const int n = static_cast<int>(state.range(0));
  const auto method = static_cast<CoeffMethod>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(build_table(f, s, n, TableOptions{method, false}));
}
BENCHMARK(BM_BuildTable)
    ->ArgsProduct({{1, 2, 4, 6},
                   {static_cast<int>(CoeffMethod::divided_difference), static_cast<int>(CoeffMethod::residue),
                    static_cast<int>(CoeffMethod::interpolation)}});

void BM_ContractDirs(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto dv = derivative(ScalarFn::exponential(), sample_tensor(), n);
  const std::vector<SymTensor> xs(n, SymTensor(0.1, 0.2, 0.0, -0.3, 0.1, 0.4));
  for (auto _ : state) benchmark::DoNotOptimize(contract_dirs(dv, xs));
}
BENCHMARK(BM_ContractDirs)->DenseRange(1, 6);

void BM_TaylorEval(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto f = ScalarFn::exponential();
  const auto s = decompose(sample_tensor());
  const SymTensor x(0.01, 0.02, 0.0, -0.03, 0.01, 0.04);
  for (auto _ : state) benchmark::DoNotOptimize(taylor_eval(f, s, x, n));
}
BENCHMARK(BM_TaylorEval)->DenseRange(1, 5);

void BM_InverseGrad(benchmark::State& state) {
  const auto f = StrainMeasure::seth_hill(static_cast<double>(state.range(0)));
  const auto s = decompose(sample_tensor());
  for (auto _ : state) benchmark::DoNotOptimize(inverse_grad(f, s));
}
BENCHMARK(BM_InverseGrad)->Arg(-2)->Arg(0)->Arg(2);

void BM_SylvesterPower(benchmark::State& state) {
  const SymTensor a = sample_tensor();
  Matrix3 c;
  c << 1, 2, 0, 3, 1, 4, 0, 5, 2;
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sylvester_power(m, a, c));
}
BENCHMARK(BM_SylvesterPower)->Arg(2)->Arg(5);

}  // namespace
BENCHMARK_MAIN();
