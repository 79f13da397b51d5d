#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "zollfunk/fields.hpp"
#include "zollfunk/harmonics.hpp"

using namespace zollfunk;

namespace {

Vec random_unit(std::mt19937& rng, int dim) {
  std::normal_distribution<double> g;
  Vec p;
  for (int i = 0; i <= dim; ++i) p[i] = g(rng);
  return normalized(p);
}

}  // namespace

TEST_CASE("basis sizes and degrees") {
  CHECK(HarmonicBasis::total_size(2, 8) == 81);
  CHECK(HarmonicBasis::total_size(3, 2) == 1 + 4 + 9);
  HarmonicBasis B(3, 4);
  CHECK(B.degree_of(0) == 0);
  CHECK(B.degree_of(1) == 1);
  CHECK(B.degree_of(4) == 1);
  CHECK(B.degree_of(5) == 2);
}

// Orthonormality against the surface measure is the normalization oracle:
// Gram matrix from an independent high-order quadrature must be the identity.
TEST_CASE("orthonormal on S2 and S3") {
  for (int n : {2, 3}) {
    const int L = n == 2 ? 8 : 5;
    const HarmonicBasis B(n, L);
    const SphereQuad quad = SphereQuad::build(n, 2 * L + 2);
    std::vector<double> vals(static_cast<size_t>(B.size()));
    std::vector<double> gram(static_cast<size_t>(B.size() * B.size()), 0.0);
    for (size_t s = 0; s < quad.points.size(); ++s) {
      B.eval(quad.points[s], vals.data());
      for (int a = 0; a < B.size(); ++a)
        for (int b = a; b < B.size(); ++b)
          gram[static_cast<size_t>(a * B.size() + b)] +=
              quad.weights[s] * vals[static_cast<size_t>(a)] * vals[static_cast<size_t>(b)];
    }
    double worst = 0.0;
    for (int a = 0; a < B.size(); ++a)
      for (int b = a; b < B.size(); ++b) {
        const double want = a == b ? 1.0 : 0.0;
        worst = std::max(worst, std::fabs(gram[static_cast<size_t>(a * B.size() + b)] - want));
      }
    CHECK(worst < 1e-11);
  }
}

TEST_CASE("closed-form values") {
  // Y_00 = 1/sqrt(area), Y_10 at the pole = sqrt(3/4pi) on S2.
  HarmonicBasis B2(2, 2);
  std::vector<double> v(static_cast<size_t>(B2.size()));
  const Vec pole(0.0, 0.0, 1.0);
  B2.eval(pole, v.data());
  CHECK(v[0] == doctest::Approx(1.0 / std::sqrt(4.0 * M_PI)).epsilon(1e-14));
  CHECK(v[2] == doctest::Approx(std::sqrt(3.0 / (4.0 * M_PI))).epsilon(1e-14));  // (l,m)=(1,0)
  CHECK(v[1] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(v[3] == doctest::Approx(0.0).epsilon(1e-14));

  HarmonicBasis B3(3, 1);
  std::vector<double> v3(static_cast<size_t>(B3.size()));
  Vec p(0.3, -0.5, 0.6, std::sqrt(1.0 - 0.09 - 0.25 - 0.36));
  B3.eval(p, v3.data());
  CHECK(v3[0] == doctest::Approx(1.0 / std::sqrt(2.0 * M_PI * M_PI)).epsilon(1e-13));
  // degree-1 block spans sqrt(2)/pi * coordinates
  const double N = std::sqrt(2.0) / M_PI;
  CHECK(v3[1] == doctest::Approx(N * p[0]).epsilon(1e-12));   // lam=0
  CHECK(v3[2] == doctest::Approx(N * p[2]).epsilon(1e-12));   // lam=1,k=-1 -> y of spatial = p2
  CHECK(v3[3] == doctest::Approx(N * p[3]).epsilon(1e-12));   // lam=1,k=0  -> z of spatial = p3
  CHECK(v3[4] == doctest::Approx(N * p[1]).epsilon(1e-12));   // lam=1,k=+1 -> x of spatial = p1
}

TEST_CASE("solid gradients and hessians match finite differences") {
  std::mt19937 rng(7);
  for (int n : {2, 3}) {
    const int L = n == 2 ? 7 : 5;
    const HarmonicBasis B(n, L);
    std::vector<double> val(static_cast<size_t>(B.size())), vp(val), vm(val);
    std::vector<Vec> grad(static_cast<size_t>(B.size()));
    std::vector<SymMat4> hess(static_cast<size_t>(B.size()));
    for (int trial = 0; trial < 5; ++trial) {
      const Vec p = random_unit(rng, n);
      const Vec dir = random_unit(rng, n);
      const double h = 1e-5;
      B.eval_hess(p, val.data(), grad.data(), hess.data());
      Vec pp = p + h * dir, pm = p - h * dir;  // ambient step, no renormalization
      B.eval(pp, vp.data());
      B.eval(pm, vm.data());
      for (int a = 0; a < B.size(); ++a) {
        const double d1 = (vp[static_cast<size_t>(a)] - vm[static_cast<size_t>(a)]) / (2.0 * h);
        CHECK(dot(grad[static_cast<size_t>(a)], dir) == doctest::Approx(d1).epsilon(1e-6).scale(1.0));
        double q = 0.0;
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j) q += dir[i] * dir[j] * hess[static_cast<size_t>(a)](i, j);
        const double d2 = (vp[static_cast<size_t>(a)] - 2.0 * val[static_cast<size_t>(a)] +
                           vm[static_cast<size_t>(a)]) / (h * h);
        CHECK(q == doctest::Approx(d2).epsilon(1e-4).scale(1.0));
      }
    }
  }
}

TEST_CASE("solid extension is homogeneous of its degree") {
  HarmonicBasis B(3, 4);
  std::mt19937 rng(3);
  const Vec p = random_unit(rng, 3);
  std::vector<double> v1(static_cast<size_t>(B.size())), v2(v1);
  B.eval(p, v1.data());
  B.eval(1.3 * p, v2.data());
  for (int a = 0; a < B.size(); ++a) {
    const double scale = std::pow(1.3, B.degree_of(a));
    CHECK(v2[static_cast<size_t>(a)] == doctest::Approx(scale * v1[static_cast<size_t>(a)]).epsilon(1e-12));
  }
}
