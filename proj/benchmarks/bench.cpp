#include <expsamp/analysis.hpp>
#include <expsamp/kernels.hpp>
#include <expsamp/mellin_quad.hpp>
#include <expsamp/operators.hpp>
#include <expsamp/signal.hpp>

#include <benchmark/benchmark.h>

#include <array>

using namespace expsamp;

namespace {

const Interval kTableDomain{0.1, 3.0};

OperatorParams table_params(int n) {
  OperatorParams p(n, mellin_bspline(2), mellin_fejer(kPi, 0.0));
  p.domain = kTableDomain;
  return p;
}

void BM_KernelBSpline(benchmark::State& state) {
  const Kernel k = mellin_bspline(static_cast<int>(state.range(0)));
  double x = -1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(k.at_log(x));
    x = x > 1.0 ? -1.0 : x + 1e-3;
  }
}
BENCHMARK(BM_KernelBSpline)->Arg(2)->Arg(4);

void BM_KernelFejer(benchmark::State& state) {
  const Kernel k = mellin_fejer(kPi, 0.0);
  double x = -5.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(k.at_log(x));
    x = x > 5.0 ? -5.0 : x + 1e-3;
  }
}
BENCHMARK(BM_KernelFejer);

void BM_CoefficientOnDomain(benchmark::State& state) {
  const Kernel psi = mellin_fejer(kPi, 0.0);
  const Signal g = builtin_g();
  const auto spec = QuadratureSpec::for_kernel(psi);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(durrmeyer_coefficient(psi, g, n, 2, spec, kTableDomain).value);
}
BENCHMARK(BM_CoefficientOnDomain)->Arg(5)->Arg(20);

void BM_CoefficientFullLine(benchmark::State& state) {
  const Kernel psi = mellin_fejer(kPi, 0.0);
  const Signal one = constant_signal(1.0);
  const auto spec = QuadratureSpec::for_kernel(psi);
  for (auto _ : state) benchmark::DoNotOptimize(durrmeyer_coefficient(psi, one, 10, 3, spec, std::nullopt).value);
}
BENCHMARK(BM_CoefficientFullLine)->Unit(benchmark::kMillisecond);

void BM_MaxProduct(benchmark::State& state) {
  const auto p = table_params(static_cast<int>(state.range(0)));
  const Signal f = builtin_f();
  for (auto _ : state) benchmark::DoNotOptimize(max_product_durrmeyer(f, 1.5, p).value);
}
BENCHMARK(BM_MaxProduct)->Arg(5)->Arg(20)->Arg(80)->Unit(benchmark::kMicrosecond);

void BM_MaxMin(benchmark::State& state) {
  const auto p = table_params(static_cast<int>(state.range(0)));
  const Signal g = builtin_g();
  for (auto _ : state) benchmark::DoNotOptimize(max_min_durrmeyer(g, 1.5, p).value);
}
BENCHMARK(BM_MaxMin)->Arg(5)->Arg(20)->Arg(80)->Unit(benchmark::kMicrosecond);

void BM_Table(benchmark::State& state) {
  const std::array<double, 5> z{0.3, 0.8, 1.5, 2.2, 2.8};
  const std::array<int, 4> n{5, 10, 15, 20};
  const Signal f = builtin_f();
  const auto p = table_params(5);
  for (auto _ : state)
    benchmark::DoNotOptimize(pointwise_errors(OperatorKind::MaxProduct, f, z, n, p).cells.size());
}
BENCHMARK(BM_Table)->Unit(benchmark::kMillisecond);

void BM_LogModulus(benchmark::State& state) {
  const Signal g = builtin_g();
  for (auto _ : state) benchmark::DoNotOptimize(log_modulus(g, 0.1));
}
BENCHMARK(BM_LogModulus)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
