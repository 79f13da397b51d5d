#include <doctest.h>

#include <cmath>
#include <random>

#include "zollfunk/equator.hpp"
#include "zollfunk/fields.hpp"

using namespace zollfunk;

TEST_CASE("node round trip (n=2)") {
  EquatorChart ch = EquatorChart::build(normalized(Vec(0.2, -0.5, 0.9)), 64, 2, 8);
  Eigen::VectorXd vals(64);
  for (int i = 0; i < 64; ++i) {
    const double t = ch.theta[static_cast<size_t>(i)];
    vals[i] = 0.7 + std::cos(3 * t) - 0.2 * std::sin(8 * t);
  }
  EquatorFunction f = EquatorFunction::from_nodes(ch, vals);
  CHECK((f.node_values(ch) - vals).cwiseAbs().maxCoeff() < 1e-12);
  // evaluation away from nodes
  const double t = 0.123;
  const Vec x = std::cos(t) * ch.frame[0] + std::sin(t) * ch.frame[1];
  CHECK(f.value_ambient(ch, x) ==
        doctest::Approx(0.7 + std::cos(3 * t) - 0.2 * std::sin(8 * t)).epsilon(1e-12));
}

TEST_CASE("node round trip (n=3)") {
  EquatorChart ch = EquatorChart::build(normalized(Vec(0.2, -0.5, 0.9, 0.4)), 512, 3, 6);
  // band-limited test function on the equator sphere: degree <= 2 polynomial
  auto fun = [&](const Vec& nhat) { return 1.0 + nhat[0] - 2.0 * nhat[1] * nhat[2]; };
  Eigen::VectorXd vals(ch.node_count());
  for (int i = 0; i < ch.node_count(); ++i) vals[i] = fun(ch.nhat[static_cast<size_t>(i)]);
  EquatorFunction f = EquatorFunction::from_nodes(ch, vals);
  CHECK((f.node_values(ch) - vals).cwiseAbs().maxCoeff() < 1e-12);
  const Vec nh = normalized(Vec(0.3, 0.4, -0.5));
  CHECK(f.value_frame(nh) == doctest::Approx(fun(nh)).epsilon(1e-12));
}

TEST_CASE("gradient along the equator (n=2)") {
  EquatorChart ch = EquatorChart::build(Vec(0, 0, 1), 64, 2, 8);
  Eigen::VectorXd vals(64);
  for (int i = 0; i < 64; ++i) vals[i] = std::sin(2.0 * ch.theta[static_cast<size_t>(i)]);
  EquatorFunction f = EquatorFunction::from_nodes(ch, vals);
  const double t = 0.71;
  const Vec x = std::cos(t) * ch.frame[0] + std::sin(t) * ch.frame[1];
  const Vec tangent = -std::sin(t) * ch.frame[0] + std::cos(t) * ch.frame[1];
  // d/dtheta sin(2t) = 2cos(2t)
  CHECK(dot(f.grad_ambient(ch, x), tangent) == doctest::Approx(2.0 * std::cos(2.0 * t)).epsilon(1e-11));
  CHECK(std::fabs(dot(f.grad_ambient(ch, x), x)) < 1e-11);
  CHECK(std::fabs(dot(f.grad_ambient(ch, x), ch.v)) < 1e-11);
}

TEST_CASE("laplacian eigenvalues in mode space") {
  // circle: -m^2; chart sphere of S^3: -l(l+1)
  EquatorFunction f(2, 4);
  f.modes()[0] = 0.7;  // constant mode is annihilated
  f.modes()[3] = 1.0;  // cos(2 theta) mode
  EquatorFunction lf = f.laplacian();
  CHECK(lf.modes()[0] == doctest::Approx(0.0));
  CHECK(lf.modes()[3] == doctest::Approx(-4.0));
  EquatorFunction g(3, 3);
  g.modes()[5] = 1.0;  // a degree-2 chart harmonic
  CHECK(g.laplacian().modes()[5] == doctest::Approx(-6.0));
}

TEST_CASE("degree-one extraction") {
  EquatorChart ch = EquatorChart::build(Vec(0, 0, 1), 64, 2, 8);
  // f = <nhat, u> + higher stuff
  const Vec u(0.3, -1.1, 0.0);
  Eigen::VectorXd vals(64);
  for (int i = 0; i < 64; ++i) {
    const double t = ch.theta[static_cast<size_t>(i)];
    vals[i] = u[0] * std::cos(t) + u[1] * std::sin(t) + 0.4 * std::cos(2 * t);
  }
  EquatorFunction f = EquatorFunction::from_nodes(ch, vals);
  const Vec got = f.degree_one_frame();
  CHECK(got[0] == doctest::Approx(u[0]).epsilon(1e-12));
  CHECK(got[1] == doctest::Approx(u[1]).epsilon(1e-12));
  EquatorFunction g = f.without_degree_one();
  CHECK(g.degree_one_norm() < 1e-15);
  CHECK(g.modes()[3] == doctest::Approx(f.modes()[3]));
}

TEST_CASE("weak divergence reproduces the spectral theta-derivative (n=2)") {
  EquatorChart ch = EquatorChart::build(normalized(Vec(0.1, 0.2, 0.97)), 64, 2, 8);
  // tangent field W = w(theta) t_hat with w = cos(3 theta):
  // div W = w'(theta) = -3 sin(3 theta)
  std::vector<Vec> W(64);
  for (int i = 0; i < 64; ++i) {
    const double t = ch.theta[static_cast<size_t>(i)];
    const Vec that(-std::sin(t), std::cos(t), 0.0);
    W[static_cast<size_t>(i)] = std::cos(3.0 * t) * that;
  }
  EquatorFunction div = weak_divergence(ch, W);
  Eigen::VectorXd got = div.node_values(ch);
  for (int i = 0; i < 64; ++i)
    CHECK(got[i] == doctest::Approx(-3.0 * std::sin(3.0 * ch.theta[static_cast<size_t>(i)])).epsilon(1e-10).scale(1.0));
}

TEST_CASE("weak divergence of a gradient matches mode laplacian (n=3)") {
  EquatorChart ch = EquatorChart::build(normalized(Vec(0.2, -0.5, 0.9, 0.4)), 512, 3, 6);
  EquatorFunction f(3, 6);
  f.modes()[5] = 0.8;
  f.modes()[11] = -0.3;
  std::vector<Vec> grads = f.node_grads_frame(ch);
  EquatorFunction div = weak_divergence(ch, grads);
  CHECK((div.modes() - f.laplacian().modes()).cwiseAbs().maxCoeff() < 1e-10);
}
