#include <benchmark/benchmark.h>

#include "deblur/blur_operator.hpp"
#include "deblur/psf.hpp"

using namespace deblur;

namespace {

Image random_image(Index n, unsigned seed) {
  std::srand(seed);
  return Image::Random(n, n);
}

void BM_ApplySeparableToeplitz(benchmark::State& state) {
  const Index n = state.range(0);
  const GaussianPsf psf = gaussian_psf_2d(default_half_width(2.0), 2.0);
  const BlurOperator op = build_operator(psf, BoundaryCondition::Zero, n, n);
  const Image X = random_image(n, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(op.apply(X));
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_ApplySeparableToeplitz)->Arg(64)->Arg(128)->Arg(256)->Arg(512);

void BM_ApplyBccbFft(benchmark::State& state) {
  const Index n = state.range(0);
  const GaussianPsf psf = gaussian_psf_2d(default_half_width(2.0), 2.0);
  const BlurOperator op = build_operator(psf, BoundaryCondition::Periodic, n, n,
                                         VariantHint::Bccb);
  const Image X = random_image(n, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(op.apply(X));
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_ApplyBccbFft)->Arg(64)->Arg(128)->Arg(256)->Arg(512);

void BM_ApplyDense(benchmark::State& state) {
  const Index n = state.range(0);
  const GaussianPsf psf = gaussian_psf_2d(default_half_width(2.0), 2.0);
  const BlurOperator op =
      build_operator(psf, BoundaryCondition::Zero, n, n, VariantHint::Dense);
  const Image X = random_image(n, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(op.apply(X));
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_ApplyDense)->Arg(16)->Arg(32)->Arg(64);

void BM_ApplyReflexiveConv(benchmark::State& state) {
  const Index n = state.range(0);
  const GaussianPsf psf = gaussian_psf_2d(default_half_width(2.0), 2.0);
  const BlurOperator op = build_operator(psf, BoundaryCondition::Reflexive, n, n);
  const Image X = random_image(n, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(op.apply(X));
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_ApplyReflexiveConv)->Arg(64)->Arg(128);

} // namespace
