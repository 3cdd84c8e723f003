#include <benchmark/benchmark.h>

#include "deblur/multilevel.hpp"
#include "deblur/noise.hpp"
#include "deblur/psf.hpp"
#include "deblur/regularization.hpp"
#include "deblur/svd_filter.hpp"

using namespace deblur;

namespace {

struct Problem {
  BlurOperator op;
  Vector b;
};

Problem make_problem(Index n, BoundaryCondition bc,
                     VariantHint hint = VariantHint::Auto) {
  const GaussianPsf psf = gaussian_psf_2d(default_half_width(2.0), 2.0);
  BlurOperator op = build_operator(psf, bc, n, n, hint);
  const Vector b_true = op.apply_vec(vec(generate_test_image(SceneKind::H, n)));
  auto [b, e] = add_gaussian_white(b_true, 0.001, 7);
  return {std::move(op), std::move(b)};
}

void BM_KronSvdFactorization(benchmark::State& state) {
  const Index n = state.range(0);
  const Problem prob = make_problem(n, BoundaryCondition::Zero);
  for (auto _ : state) {
    benchmark::DoNotOptimize(SvdFactorization::kron_of(prob.op));
  }
}
BENCHMARK(BM_KronSvdFactorization)->Arg(64)->Arg(128)->Arg(256);

void BM_TikhonovSeparableSolve(benchmark::State& state) {
  const Index n = state.range(0);
  const Problem prob = make_problem(n, BoundaryCondition::Zero);
  const SvdFactorization svd = svd_of(prob.op);
  const Image B = unvec(prob.b, n, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tikhonov_separable_solve(svd, B, 1e-6));
  }
}
BENCHMARK(BM_TikhonovSeparableSolve)->Arg(64)->Arg(128)->Arg(256);

void BM_TikhonovFftSolve(benchmark::State& state) {
  const Index n = state.range(0);
  const Problem prob = make_problem(n, BoundaryCondition::Periodic, VariantHint::Bccb);
  const Image B = unvec(prob.b, n, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tikhonov_fft_solve(prob.op, B, 1e-6));
  }
}
BENCHMARK(BM_TikhonovFftSolve)->Arg(64)->Arg(128)->Arg(256)->Arg(512);

void BM_GeneralTikhonovCg(benchmark::State& state) {
  const Index n = state.range(0);
  const Problem prob = make_problem(n, BoundaryCondition::Periodic, VariantHint::Bccb);
  const RegularizerL L = derivative_operator(n);
  SolverOptions opts;
  opts.mode = SolverOptions::Mode::Cg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(general_tikhonov_solve(prob.op, prob.b, L, 1e-4, opts));
  }
}
BENCHMARK(BM_GeneralTikhonovCg)->Arg(32)->Arg(64);

void BM_CoarseVsFineTikhonov(benchmark::State& state) {
  // level-n Tikhonov solve including the factor SVDs, the work a multilevel
  // scheme repeats per level
  const Index level = state.range(0);
  const Problem prob = make_problem(64, BoundaryCondition::Zero);
  const LevelHierarchy h = build_hierarchy(prob.op, unvec(prob.b, 64, 64), 2);
  LevelSelector sel;
  sel.kind = LevelSelector::Kind::Fixed;
  sel.value = 1e-6;
  for (auto _ : state) {
    benchmark::DoNotOptimize(multilevel_solve(h, level, CoarseMethod::Tikhonov, sel));
  }
}
BENCHMARK(BM_CoarseVsFineTikhonov)->Arg(0)->Arg(1)->Arg(2);

} // namespace
