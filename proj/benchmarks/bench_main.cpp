#include <benchmark/benchmark.h>

#include <random>

#include "zollfunk/funk.hpp"
#include "zollfunk/graphs.hpp"
#include "zollfunk/solver.hpp"

using namespace zollfunk;

namespace {

const EquatorFamily& family() {
  static EquatorFamily fam = EquatorFamily::build(2, 8, 12, 64, 14);
  return fam;
}

HarmonicField test_field(int L, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  Eigen::VectorXd c(HarmonicBasis::total_size(2, L));
  for (int i = 0; i < c.size(); ++i) c[i] = g(rng);
  return HarmonicField(2, L, std::move(c));
}

TangentGraphField test_phi() {
  static TangentGraphField phi = [] {
    const TangentFieldFitter& fit = tangent_fitter(family(), 5);
    std::mt19937 rng(3);
    std::normal_distribution<double> g;
    Eigen::VectorXd c(fit.basis().size());
    for (int i = 0; i < c.size(); ++i) c[i] = g(rng);
    TangentGraphField raw =
        TangentGraphField::from_coeffs(family(), 5, c, TangentSubspace::StarOdd, false);
    Eigen::VectorXd cs = (0.04 / raw.c1_bound()) * raw.coeffs();
    return TangentGraphField::from_coeffs(family(), 5, cs, TangentSubspace::StarOdd);
  }();
  return phi;
}

void BM_HarmonicJet(benchmark::State& state) {
  const HarmonicBasis& B = shared_basis(2, 8);
  std::vector<double> val(static_cast<size_t>(B.size()));
  std::vector<Vec> grad(static_cast<size_t>(B.size()));
  std::vector<SymMat4> hess(static_cast<size_t>(B.size()));
  const Vec p = normalized(Vec(0.3, -0.5, 0.8));
  for (auto _ : state) {
    B.eval_hess(p, val.data(), grad.data(), hess.data());
    benchmark::DoNotOptimize(val[0]);
  }
}
BENCHMARK(BM_HarmonicJet);

void BM_FunkForward(benchmark::State& state) {
  HarmonicField rho(2, 8);
  HarmonicField f = test_field(8, 1);
  EquatorFieldSet zero;
  for (int i = 0; i < family().grid.size(); ++i)
    zero.fns.emplace_back(2, family().chart_band);
  for (auto _ : state) {
    std::vector<double> out = funk_forward(rho, family(), zero, f);
    benchmark::DoNotOptimize(out[0]);
  }
}
BENCHMARK(BM_FunkForward)->Unit(benchmark::kMillisecond);

void BM_EulerLagrange(benchmark::State& state) {
  HarmonicField rho = 0.05 * test_field(8, 2);
  TangentGraphField phi = test_phi();
  for (auto _ : state) {
    EquatorFunction h = euler_lagrange(rho, family().charts[17], phi.per_rep().fns[17]);
    benchmark::DoNotOptimize(h.modes()[0]);
  }
}
BENCHMARK(BM_EulerLagrange);

void BM_GaussInverse(benchmark::State& state) {
  TangentGraphField phi = test_phi();
  const Vec q = normalized(Vec(0.2, -0.7, 0.6));
  const Vec w = normalized(reject(Vec(0.9, 0.3, 0.1), q));
  for (auto _ : state) {
    GaussInverse gi = gauss_map_inverse(phi, q, w);
    benchmark::DoNotOptimize(gi.x);
  }
}
BENCHMARK(BM_GaussInverse);

void BM_KernelEntry(benchmark::State& state) {
  HarmonicField rho(2, 8);
  TangentGraphField phi = test_phi();
  for (auto _ : state) {
    const double k = kernel_value(rho, family().charts[3], phi.per_rep().fns[3],
                                  family().charts[90], phi.per_rep().fns[90]);
    benchmark::DoNotOptimize(k);
  }
}
BENCHMARK(BM_KernelEntry);

void BM_KernelAssembly(benchmark::State& state) {
  EquatorFamily fam = EquatorFamily::build(2, 6, 8, 40, 8);
  HarmonicField rho(2, 6);
  TangentGraphField phi(fam, 3, TangentSubspace::ZeroOdd);
  for (auto _ : state) {
    KernelMatrix M = assemble_kernel_operator(rho, fam, phi);
    benchmark::DoNotOptimize(M.condition);
  }
}
BENCHMARK(BM_KernelAssembly)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
