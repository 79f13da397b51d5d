#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "zollfunk/funk.hpp"

using namespace zollfunk;
using namespace zollfunk::testing;

namespace {

const EquatorFamily& fam2() {
  static EquatorFamily f = EquatorFamily::build(2, 8, 12, 64);
  return f;
}

EquatorFieldSet zero_set(const EquatorFamily& fam) {
  EquatorFieldSet out;
  for (size_t i = 0; i < fam.charts.size(); ++i)
    out.fns.push_back(EquatorFunction(fam.n, fam.charts[i].band));
  return out;
}

}  // namespace

TEST_CASE("round forward transform closed forms") {
  HarmonicField rho(2, 8);
  EquatorFieldSet z = zero_set(fam2());

  HarmonicField one = HarmonicField::project(2, 8, [](const Vec&) { return 1.0; });
  std::vector<double> F1 = funk_forward(rho, fam2(), z, one);
  for (double v : F1) CHECK(v == doctest::Approx(2.0 * M_PI).epsilon(1e-12));

  // odd fields are annihilated
  HarmonicField fodd = random_field(2, 7, 1.0, 5, Parity::Odd);
  std::vector<double> Fo = funk_forward(rho, fam2(), z, fodd);
  for (double v : Fo) CHECK(std::fabs(v) < 1e-10);

  // f = x3^2 integrates to pi (1 - v3^2) over the equator of v
  HarmonicField fz = HarmonicField::project(2, 8, [](const Vec& p) { return p[2] * p[2]; });
  std::vector<double> Fz = funk_forward(rho, fam2(), z, fz);
  for (int i = 0; i < fam2().grid.size(); i += 11) {
    const double v3 = fam2().grid.reps[static_cast<size_t>(i)][2];
    CHECK(Fz[static_cast<size_t>(i)] == doctest::Approx(M_PI * (1.0 - v3 * v3)).epsilon(1e-11));
  }
}

TEST_CASE("forward transform is the conformal area derivative") {
  HarmonicField rho = random_field(2, 3, 0.05, 21).extended(4);
  TangentGraphField Phi = random_tangent(fam2(), 3, 0.04, 22, TangentSubspace::StarOdd);
  HarmonicField f = random_field(2, 4, 0.8, 23);
  CHECK(funk_area_derivative_residual(rho, fam2(), Phi.per_rep(), f) < 1e-6);

  // the round case, and a plain zero-state check with f = 1
  HarmonicField rho0(2, 8);
  EquatorFieldSet z = zero_set(fam2());
  HarmonicField one = HarmonicField::project(2, 4, [](const Vec&) { return 1.0; });
  CHECK(funk_area_derivative_residual(rho0, fam2(), z, one) < 1e-8);
  CHECK(funk_area_derivative_residual(rho0, fam2(), z, random_field(2, 6, 1.0, 24, Parity::Even)) < 1e-6);
}

TEST_CASE("dual transform: adjoint route and Cor-A.2 factor") {
  HarmonicField rho(2, 8);
  EquatorFieldSet z = zero_set(fam2());
  Eigen::MatrixXd F = funk_forward_matrix(rho, fam2(), z, 8);

  // g = 1: F*(1) = pi everywhere (projective line length)
  std::vector<double> ones(static_cast<size_t>(fam2().grid.size()), 1.0);
  HarmonicField dual1 = funk_dual_adjoint(fam2(), F, ones);
  CHECK(dual1.value(Vec(0, 0, 1)) == doctest::Approx(M_PI).epsilon(1e-10));
  CHECK(dual1.value(normalized(Vec(1, 2, -1))) == doctest::Approx(M_PI).epsilon(1e-10));

  // on even fields F* = F/2
  HarmonicField g = random_field(2, 8, 1.0, 31, Parity::Even);
  std::vector<double> Fg_vals(static_cast<size_t>(fam2().grid.size()));
  {
    Eigen::VectorXd v = F * g.coeffs();
    for (int i = 0; i < v.size(); ++i) Fg_vals[static_cast<size_t>(i)] = v[i];
  }
  HarmonicField dg = funk_dual_adjoint(fam2(), F, Fg_vals);  // F* F g
  HarmonicField Fg = even_field_from_grid(fam2(), Fg_vals, 8);
  // F*(F g) should equal F(F g)/2; compare coefficient-wise on even part
  std::vector<double> FFg(static_cast<size_t>(fam2().grid.size()));
  {
    Eigen::VectorXd v = F * Fg.coeffs();
    for (int i = 0; i < v.size(); ++i) FFg[static_cast<size_t>(i)] = v[i];
  }
  HarmonicField FFg_field = even_field_from_grid(fam2(), FFg, 8);
  CHECK((dg.coeffs() - 0.5 * FFg_field.coeffs()).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("dual transform: geometric route agrees with the adjoint route") {
  HarmonicField rho = random_field(2, 3, 0.04, 41);
  TangentGraphField Phi = random_tangent(fam2(), 3, 0.03, 42, TangentSubspace::StarOdd);
  HarmonicField g = random_field(2, 6, 1.0, 43, Parity::Even);

  // one plan over a quadrature grid serves projection and duality checks
  SphereQuad quad = SphereQuad::build(2, 20);
  DualTransformPlan dense(rho, fam2(), Phi, quad.points);
  std::vector<double> fstar = dense.apply(g);

  // Adjoint-route coefficients are the L^2 pairings <F*(g), Y_a>; project the
  // geometric values onto the same band and compare there (the geometric
  // route also carries content beyond the band, which the adjoint route
  // cannot represent).
  Eigen::MatrixXd F = funk_forward_matrix(rho, fam2(), Phi.per_rep(), 8);
  std::vector<double> gv(static_cast<size_t>(fam2().grid.size()));
  for (int i = 0; i < fam2().grid.size(); ++i) gv[static_cast<size_t>(i)] = g.value(fam2().grid.reps[static_cast<size_t>(i)]);
  HarmonicField dual = funk_dual_adjoint(fam2(), F, gv);
  HarmonicField geo_field = HarmonicField(2, 8);
  {
    const HarmonicBasis& B = shared_basis(2, 8);
    std::vector<double> ybuf(static_cast<size_t>(B.size()));
    for (size_t sidx = 0; sidx < quad.points.size(); ++sidx) {
      B.eval(quad.points[sidx], ybuf.data());
      for (int a = 0; a < B.size(); ++a)
        geo_field.coeffs()[a] += quad.weights[sidx] * fstar[sidx] * ybuf[static_cast<size_t>(a)];
    }
  }
  const double scale = std::max(1.0, dual.coeffs().cwiseAbs().maxCoeff());
  CHECK((geo_field.coeffs() - dual.coeffs()).cwiseAbs().maxCoeff() < 1e-5 * scale);

  // duality <F f, g> = <f, F* g> with the geometric route
  HarmonicField f = random_field(2, 6, 1.0, 45);
  double rhs = 0.0;
  for (size_t s = 0; s < quad.points.size(); ++s)
    rhs += quad.weights[s] * f.value(quad.points[s]) * fstar[s];
  std::vector<double> Ff = funk_forward(rho, fam2(), Phi.per_rep(), f);
  double lhs = 0.0;
  for (int i = 0; i < fam2().grid.size(); ++i)
    lhs += fam2().grid.weights[static_cast<size_t>(i)] * Ff[static_cast<size_t>(i)] * g.value(fam2().grid.reps[static_cast<size_t>(i)]);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
}

TEST_CASE("kernel: round closed form, symmetry, diagonal limit") {
  HarmonicField rho(2, 8);
  EquatorFieldSet z = zero_set(fam2());
  const EquatorChart& c1 = fam2().charts[3];
  const EquatorChart& c2 = fam2().charts[77];
  const double d = projective_distance(c1.v, c2.v);
  const double k12 = kernel_value(rho, c1, z.fns[3], c2, z.fns[77]);
  CHECK(k12 == doctest::Approx(2.0 / std::sin(d)).epsilon(1e-10));
  CHECK(kernel_value(rho, c2, z.fns[77], c1, z.fns[3]) == doctest::Approx(k12).epsilon(1e-10));

  // perturbed: sin(d) K stays bounded as tau -> sigma
  TangentGraphField Phi = random_tangent(fam2(), 3, 0.04, 51, TangentSubspace::StarOdd);
  HarmonicField rr = random_field(2, 3, 0.04, 52);
  for (double t : {0.4, 0.2, 0.1, 0.05}) {
    const Vec tau = std::cos(t) * c1.v + std::sin(t) * c1.frame[0];
    EquatorChart ct = EquatorChart::build(tau, fam2().Q, 2, fam2().L);
    EquatorFunction pt = Phi.restrict_to(ct);
    const double val = std::sin(t) * kernel_value(rr, c1, Phi.per_rep().fns[3], ct, pt);
    CHECK(val > 0.5);
    CHECK(val < 8.0);
  }
}

TEST_CASE("kernel operator: two spectral oracles at the round point") {
  HarmonicField rho(2, 8);
  TangentGraphField Phi(fam2(), 3, TangentSubspace::StarOdd);
  KernelMatrix M = assemble_kernel_operator(rho, fam2(), Phi);

  // L 1 = 2 pi^2 (analytic oracle; exact by the sin-d split at round)
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(fam2().grid.size());
  Eigen::VectorXd L1 = apply_kernel_operator(M, ones);
  for (int i = 0; i < L1.size(); ++i)
    CHECK(L1[i] == doctest::Approx(2.0 * M_PI * M_PI).epsilon(1e-3));

  // action on even harmonics matches the squared Funk spectrum
  std::vector<double> lam = round_funk_spectrum(fam2(), 8);
  for (int l : {2, 4, 6}) {
    Eigen::VectorXd y(fam2().grid.size());
    const HarmonicBasis& B = shared_basis(2, 8);
    std::vector<double> ybuf(static_cast<size_t>(B.size()));
    const int a = HarmonicBasis::block_start(2, l) + l;  // (l, 0)
    for (int i = 0; i < fam2().grid.size(); ++i) {
      B.eval(fam2().grid.reps[static_cast<size_t>(i)], ybuf.data());
      y[i] = ybuf[static_cast<size_t>(a)];
    }
    Eigen::VectorXd Ly = apply_kernel_operator(M, y);
    const double want = lam[static_cast<size_t>(l)] * lam[static_cast<size_t>(l)] / 2.0;
    // relative error over the profile
    CHECK((Ly - want * y).norm() / (std::fabs(want) * y.norm()) < 1e-3);
  }

  // agreement with the composed discrete forward/dual matrices, compared as
  // operators on band-limited even probes (the common domain of validity)
  EquatorFieldSet z = zero_set(fam2());
  Eigen::MatrixXd F = funk_forward_matrix(rho, fam2(), z, 8);
  Eigen::VectorXd w(fam2().grid.size());
  for (int i = 0; i < fam2().grid.size(); ++i) w[i] = fam2().grid.weights[static_cast<size_t>(i)];
  Eigen::MatrixXd FFs = F * F.transpose() * w.asDiagonal();
  const HarmonicBasis& B8 = shared_basis(2, 8);
  Eigen::MatrixXd P(fam2().grid.size(), 45);
  {
    std::vector<double> yb(static_cast<size_t>(B8.size()));
    int col = 0;
    for (int a = 0; a < B8.size(); ++a) {
      if (B8.degree_of(a) % 2) continue;
      for (int i = 0; i < fam2().grid.size(); ++i) {
        B8.eval(fam2().grid.reps[static_cast<size_t>(i)], yb.data());
        P(i, col) = yb[static_cast<size_t>(a)];
      }
      ++col;
    }
  }
  CHECK(((M.L - FFs) * P).norm() / (M.L * P).norm() < 1e-3);

  // weighted self-adjointness
  Eigen::MatrixXd WL = w.asDiagonal() * M.L;
  CHECK((WL - WL.transpose()).cwiseAbs().maxCoeff() / WL.cwiseAbs().maxCoeff() < 1e-8);

  // positivity of off-diagonal kernel entries
  double mn = 1e300;
  for (int i = 0; i < M.K.rows(); ++i)
    for (int j = 0; j < M.K.cols(); ++j)
      if (i != j) mn = std::min(mn, M.K(i, j));
  CHECK(mn > 0.0);
}

TEST_CASE("kernel-operator solve: spectral oracle and residual check") {
  HarmonicField rho(2, 8);
  TangentGraphField Phi(fam2(), 3, TangentSubspace::ZeroOdd);
  KernelMatrix M = assemble_kernel_operator(rho, fam2(), Phi);
  std::vector<double> lam = round_funk_spectrum(fam2(), 8);
  const HarmonicBasis& B = shared_basis(2, 8);
  std::vector<double> ybuf(static_cast<size_t>(B.size()));
  const int a = HarmonicBasis::block_start(2, 4) + 4;  // (l, m) = (4, 0)
  Eigen::VectorXd y(fam2().grid.size());
  for (int i = 0; i < fam2().grid.size(); ++i) {
    B.eval(fam2().grid.reps[static_cast<size_t>(i)], ybuf.data());
    y[i] = ybuf[static_cast<size_t>(a)];
  }
  const double ev = lam[4] * lam[4] / 2.0;
  Eigen::VectorXd x = solve_kernel_operator(fam2(), M, ev * y);
  CHECK((x - y).cwiseAbs().maxCoeff() < 1e-6);
  CHECK(M.condition < 1e8);
}

TEST_CASE("right inverse: spectral oracle and defect-corrected residual") {
  HarmonicField rho(2, 8);
  TangentGraphField Phi(fam2(), 3, TangentSubspace::StarOdd);
  FunkSystem sys(rho, fam2(), Phi, 8);

  // b = even degree-2 harmonic: R(b) = b / lambda_2
  std::vector<double> lam = round_funk_spectrum(fam2(), 8);
  HarmonicField b(2, 8);
  b.coeffs()[HarmonicBasis::block_start(2, 2) + 2] = 1.0;
  std::vector<double> bv(static_cast<size_t>(fam2().grid.size()));
  for (int i = 0; i < fam2().grid.size(); ++i) bv[static_cast<size_t>(i)] = b.value(fam2().grid.reps[static_cast<size_t>(i)]);
  HarmonicField R = sys.right_inverse(bv);
  CHECK((R.coeffs() - b.coeffs() / lam[2]).cwiseAbs().maxCoeff() < 1e-6);
  std::vector<double> FR = sys.forward(R);
  for (int i = 0; i < fam2().grid.size(); i += 7)
    CHECK(FR[static_cast<size_t>(i)] == doctest::Approx(bv[static_cast<size_t>(i)]).epsilon(1e-8).scale(1.0));

  // zero in, zero out
  std::vector<double> zval(static_cast<size_t>(fam2().grid.size()), 0.0);
  CHECK(sys.right_inverse(zval).l2_norm() < 1e-14);

  // random zero-mean even data at a small state
  HarmonicField rr = random_field(2, 3, 0.04, 61);
  TangentGraphField Pp = random_tangent(fam2(), 3, 0.03, 62, TangentSubspace::StarOdd);
  FunkSystem sys2(rr, fam2(), Pp, 8);
  HarmonicField g = random_field(2, 6, 1.0, 63, Parity::Even);
  g.coeffs()[0] = 0.0;  // zero mean
  std::vector<double> gv(static_cast<size_t>(fam2().grid.size()));
  for (int i = 0; i < fam2().grid.size(); ++i) gv[static_cast<size_t>(i)] = g.value(fam2().grid.reps[static_cast<size_t>(i)]);
  HarmonicField R2 = sys2.right_inverse(gv);
  std::vector<double> FR2 = sys2.forward(R2);
  double sup = 0.0, err = 0.0;
  for (size_t i = 0; i < gv.size(); ++i) {
    sup = std::max(sup, std::fabs(gv[i]));
    err = std::max(err, std::fabs(FR2[i] - gv[i]));
  }
  CHECK(err < 1e-6 * sup);

  // non-zero-mean data is rejected
  std::vector<double> bad(static_cast<size_t>(fam2().grid.size()), 1.0);
  CHECK_THROWS_AS(sys.right_inverse(bad), UsageError);
}

TEST_CASE("round spectrum: lambda_0 = 2 pi, lambda_2 = -pi, odd zero") {
  std::vector<double> lam = round_funk_spectrum(fam2(), 8);
  CHECK(lam[0] == doctest::Approx(2.0 * M_PI).epsilon(1e-12));
  // classical cross-check: lambda_l = 2 pi P_l(0)
  CHECK(lam[2] == doctest::Approx(-M_PI).epsilon(1e-10));
  CHECK(lam[4] == doctest::Approx(2.0 * M_PI * 3.0 / 8.0).epsilon(1e-10));
  CHECK(std::fabs(lam[1]) < 1e-10);
  CHECK(std::fabs(lam[3]) < 1e-10);
  CHECK(std::fabs(lam[5]) < 1e-10);
}

TEST_CASE("transforms on S^3: forward basics and the geometric dual") {
  EquatorFamily fam3 = EquatorFamily::build(3, 4, 4, 128);
  HarmonicField rho(3, 4);
  EquatorFieldSet z;
  for (int i = 0; i < fam3.grid.size(); ++i) z.fns.emplace_back(3, fam3.chart_band);

  // F(1) = area(S^2) at every direction
  HarmonicField one = HarmonicField::project(3, 2, [](const Vec&) { return 1.0; });
  std::vector<double> F1 = funk_forward(rho, fam3, z, one);
  for (double v : F1) CHECK(v == doctest::Approx(4.0 * M_PI).epsilon(1e-11));

  // odd fields are annihilated
  HarmonicField fo = random_field(3, 3, 1.0, 210, Parity::Odd);
  std::vector<double> Fo = funk_forward(rho, fam3, z, fo);
  for (double v : Fo) CHECK(std::fabs(v) < 1e-10);

  // geometric dual at the round point: F*(1) = vol(RP^2) = 2 pi,
  // and F* = F/2 on even fields
  TangentGraphField zero(fam3, 3, TangentSubspace::StarOdd);
  std::mt19937 rng(211);
  std::vector<Vec> pts;
  for (int t = 0; t < 4; ++t) pts.push_back(random_tangent_pair(rng, 3).second);
  DualTransformPlan plan(rho, fam3, zero, pts);
  std::vector<double> d1 = plan.apply(one);
  for (double v : d1) CHECK(v == doctest::Approx(2.0 * M_PI).epsilon(1e-9));

  std::vector<double> lam = round_funk_spectrum(fam3, 2);
  HarmonicField y2(3, 2);
  y2.coeffs()[HarmonicBasis::block_start(3, 2) + 4] = 1.0;
  std::vector<double> dual2 = plan.apply(y2);
  for (size_t k = 0; k < pts.size(); ++k)
    CHECK(dual2[k] == doctest::Approx(0.5 * lam[2] * y2.value(pts[k])).epsilon(1e-7).scale(1.0));
}

TEST_CASE("gauss inverse on S^3 with a small graph field") {
  EquatorFamily fam3 = EquatorFamily::build(3, 4, 4, 128);
  EquatorFieldSet data;
  auto f = [](const Vec& x, const Vec& v) { return 0.05 * x[0] * v[3] - 0.03 * x[2] * v[1]; };
  for (size_t i = 0; i < fam3.charts.size(); ++i) {
    const EquatorChart& ch = fam3.charts[i];
    Eigen::VectorXd vals(ch.node_count());
    for (int q = 0; q < ch.node_count(); ++q) vals[q] = f(ch.nodes[static_cast<size_t>(q)], ch.v);
    data.fns.push_back(EquatorFunction::from_nodes(ch, vals));
  }
  TangentGraphField Phi = TangentGraphField::fit(fam3, 3, data, TangentSubspace::StarOdd);
  std::mt19937 rng(212);
  for (int t = 0; t < 10; ++t) {
    auto [x, v] = random_tangent_pair(rng, 3);
    GaussInverse gi = gauss_map_inverse(Phi, x, v);
    Vec y, N;
    gauss_map(Phi, gi.x, gi.v, &y, &N);
    CHECK(norm(y - x) + norm(N - v) < 1e-9);
  }
}

TEST_CASE("rotation equivariance of the round transform") {
  HarmonicField rho(2, 8);
  EquatorFieldSet z = zero_set(fam2());
  HarmonicField f = random_field(2, 6, 1.0, 71);
  // rotation by 0.7 about e3
  const double al = 0.7;
  auto rot = [&](const Vec& p) {
    return Vec(std::cos(al) * p[0] - std::sin(al) * p[1],
               std::sin(al) * p[0] + std::cos(al) * p[1], p[2]);
  };
  HarmonicField frot = HarmonicField::project(2, 6, [&](const Vec& p) { return f.value(rot(p)); });
  std::vector<double> F1 = funk_forward(rho, fam2(), z, frot);
  for (int i = 0; i < fam2().grid.size(); i += 17) {
    // integrate f over the rotated equator directly
    const Vec vr = rot(fam2().grid.reps[static_cast<size_t>(i)]);
    EquatorChart ch = EquatorChart::build(vr, fam2().Q, 2, fam2().L);
    double direct = 0.0;
    for (int q = 0; q < ch.node_count(); ++q)
      direct += ch.weights[static_cast<size_t>(q)] * f.value(ch.nodes[static_cast<size_t>(q)]);
    CHECK(F1[static_cast<size_t>(i)] == doctest::Approx(direct).epsilon(1e-10));
  }
}

TEST_CASE("tensor transform: trace, Lie-derivative and TT kernels") {
  // h = can: trace over the equator is n-1, so the value is (n-1)/2 * F(1)
  TensorSampler can = [](const Vec&, const Vec& u, const Vec& w) { return dot(u, w); };
  std::vector<double> Tc = tensor_funk_forward(fam2(), can);
  for (double v : Tc) CHECK(v == doctest::Approx(0.5 * 2.0 * M_PI).epsilon(1e-12));

  // Lie derivatives of can: closed-form for X = gradient + rotation fields
  // X(p) = a - <a,p> p + B p with B skew; D_u X = -<a,u>p - <a,p>u + B u
  const Vec a(0.3, -0.2, 0.5);
  Eigen::Matrix3d Bm;
  Bm << 0, 0.4, -0.1, -0.4, 0, 0.2, 0.1, -0.2, 0;
  TensorSampler lie = [&](const Vec& p, const Vec& u, const Vec& w) {
    auto DX = [&](const Vec& dir) {
      Vec bd(Bm(0, 0) * dir[0] + Bm(0, 1) * dir[1] + Bm(0, 2) * dir[2],
             Bm(1, 0) * dir[0] + Bm(1, 1) * dir[1] + Bm(1, 2) * dir[2],
             Bm(2, 0) * dir[0] + Bm(2, 1) * dir[1] + Bm(2, 2) * dir[2]);
      return -dot(a, dir) * p - dot(a, p) * dir + bd;
    };
    return dot(DX(u), w) + dot(DX(w), u);
  };
  std::vector<double> Tl = tensor_funk_forward(fam2(), lie);
  for (double v : Tl) CHECK(std::fabs(v) < 1e-8);

  // f can maps to (n-1)/2 F(f)
  HarmonicField f = random_field(2, 6, 1.0, 81);
  TensorSampler fcan = [&](const Vec& p, const Vec& u, const Vec& w) { return f.value(p) * dot(u, w); };
  std::vector<double> Tf = tensor_funk_forward(fam2(), fcan);
  HarmonicField rho(2, 8);
  EquatorFieldSet z = zero_set(fam2());
  std::vector<double> Ff = funk_forward(rho, fam2(), z, f);
  for (size_t i = 0; i < Tf.size(); i += 19)
    CHECK(Tf[i] == doctest::Approx(0.5 * Ff[i]).epsilon(1e-10).scale(1.0));

  // transverse-traceless on S^3: symmetric products of pointwise-orthogonal
  // Killing fields (left-invariant quaternion frame)
  EquatorFamily fam3 = EquatorFamily::build(3, 5, 5, 128);
  Eigen::Matrix4d Xi, Xj;
  Xi << 0, -1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0, -1, 0;
  Xj << 0, 0, -1, 0, 0, 0, 0, -1, 1, 0, 0, 0, 0, 1, 0, 0;
  auto kf = [](const Eigen::Matrix4d& A, const Vec& p) {
    Vec r;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) r[i] += A(i, j) * p[j];
    return r;
  };
  TensorSampler tt = [&](const Vec& p, const Vec& u, const Vec& w) {
    const Vec k1 = kf(Xi, p), k2 = kf(Xj, p);
    return dot(k1, u) * dot(k2, w) + dot(k2, u) * dot(k1, w);
  };
  std::vector<double> Tt = tensor_funk_forward(fam3, tt);
  for (double v : Tt) CHECK(std::fabs(v) < 1e-8);
}
