// Acceptance suite: runs every stated criterion at its tolerance and prints
// one pass/fail line each.  Exit code is the number of failed criteria.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "helpers.hpp"
#include "zollfunk/killing.hpp"
#include "zollfunk/serialize.hpp"
#include "zollfunk/solver.hpp"

using namespace zollfunk;
using namespace zollfunk::testing;

namespace {

int g_failures = 0;

struct Criterion {
  const char* name;
  bool ok = true;
  std::string detail;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  explicit Criterion(const char* n) : name(n) {}
  void require(bool cond, const std::string& what) {
    if (!cond && detail.empty()) detail = what;
    ok = ok && cond;
  }
  ~Criterion() {
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (ok) {
      std::printf("[PASS] %s (%.1fs)\n", name, secs);
    } else {
      std::printf("[FAIL] %s (%.1fs): %s\n", name, secs, detail.c_str());
      ++g_failures;
    }
    std::fflush(stdout);
  }
};

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), f, a, b);
  return buf;
}

const EquatorFamily& fam2() {
  static EquatorFamily f = EquatorFamily::build(2, 8, 12, 64, 14);
  return f;
}

EquatorFieldSet zero_set(const EquatorFamily& fam) {
  EquatorFieldSet out;
  for (int i = 0; i < fam.grid.size(); ++i) out.fns.emplace_back(fam.n, fam.chart_band);
  return out;
}

struct SmallState {
  HarmonicField rho;
  TangentGraphField phi;
};

SmallState small_state(unsigned seed, double scale = 0.03) {
  SmallState st;
  st.rho = random_field(2, 3, scale, seed);
  st.phi = random_tangent(fam2(), 3, scale, seed + 1000, TangentSubspace::ZeroOdd);
  return st;
}

HarmonicField xyz_seed() {
  HarmonicField f = HarmonicField::project(2, 8, [](const Vec& p) { return p[0] * p[1] * p[2]; });
  f *= 1.0 / f.l2_norm();
  return f;
}

// shared deform results for criteria 8, 9 and 12
ZollState run_deform(double t) {
  DeformOptions opt;
  opt.t = t;
  opt.tol = 1e-8;
  opt.max_iter = 6;
  opt.J = 10;
  return deform(fam2(), xyz_seed(), opt);
}

void criterion_funk_kernel() {
  Criterion c("1. transform annihilates odd fields (20 random, L=8, n=2)");
  HarmonicField rho(2, 8);
  EquatorFieldSet z = zero_set(fam2());
  for (unsigned s = 0; s < 20; ++s) {
    HarmonicField f = random_field(2, 8, 1.0, 100 + s, Parity::Odd);
    std::vector<double> F = funk_forward(rho, fam2(), z, f);
    double sup = 0.0;
    for (double v : F) sup = std::max(sup, std::fabs(v));
    const double bound = 1e-10 * f.linf_estimate();
    c.require(sup < bound, fmt("|F(f)| = %.3e vs %.3e", sup, bound));
  }
}

void criterion_round_spectrum() {
  Criterion c("2. round spectrum: lambda_0, squared action, and L1 = 2 pi^2");
  std::vector<double> lam = round_funk_spectrum(fam2(), 8);
  c.require(std::fabs(lam[0] - 2.0 * M_PI) < 1e-12,
            fmt("lambda_0 = %.15g vs %.15g", lam[0], 2.0 * M_PI));

  HarmonicField rho(2, 8);
  TangentGraphField phi(fam2(), 3, TangentSubspace::ZeroOdd);
  KernelMatrix M = assemble_kernel_operator(rho, fam2(), phi);

  Eigen::VectorXd ones = Eigen::VectorXd::Ones(fam2().grid.size());
  Eigen::VectorXd L1 = apply_kernel_operator(M, ones);
  for (int i = 0; i < L1.size(); ++i)
    c.require(std::fabs(L1[i] - 2.0 * M_PI * M_PI) < 1e-3 * 2.0 * M_PI * M_PI,
              fmt("L1 = %.6f vs %.6f", L1[i], 2.0 * M_PI * M_PI));
  // two independent oracles: analytic mass vs squared quadrature spectrum
  c.require(std::fabs(lam[0] * lam[0] / 2.0 - 2.0 * M_PI * M_PI) < 1e-3 * 2.0 * M_PI * M_PI,
            "oracle disagreement for lambda_0^2/2");

  const HarmonicBasis& B = shared_basis(2, 8);
  std::vector<double> ybuf(static_cast<size_t>(B.size()));
  for (int l : {2, 4, 6, 8}) {
    Eigen::VectorXd y(fam2().grid.size());
    const int a = HarmonicBasis::block_start(2, l) + l;
    for (int i = 0; i < fam2().grid.size(); ++i) {
      B.eval(fam2().grid.reps[static_cast<size_t>(i)], ybuf.data());
      y[i] = ybuf[static_cast<size_t>(a)];
    }
    Eigen::VectorXd Ly = apply_kernel_operator(M, y);
    const double want = lam[static_cast<size_t>(l)] * lam[static_cast<size_t>(l)] / 2.0;
    const double rel = (Ly - want * y).norm() / (std::fabs(want) * y.norm());
    c.require(rel < 1e-3, fmt("degree %.0f action error %.3e", static_cast<double>(l), rel));
  }
}

void criterion_duality() {
  Criterion c("3. duality of the transform and its dual (20 pairs, 6 states)");
  // the dual side carries content of degree ~ 8 + 3k at state order k;
  // degree 30 integrates the orders that matter at these amplitudes
  SphereQuad quad = SphereQuad::build(2, 30);
  unsigned fs = 300;
  for (int state_idx = 0; state_idx < 6; ++state_idx) {
    HarmonicField rho(2, 8);
    TangentGraphField phi(fam2(), 3, TangentSubspace::ZeroOdd);
    if (state_idx > 0) {
      SmallState st = small_state(400 + 7 * static_cast<unsigned>(state_idx));
      rho = st.rho.extended(8);
      phi = st.phi;
    }
    DualTransformPlan plan(rho, fam2(), phi, quad.points);
    const int pairs = state_idx == 0 ? 10 : 2;
    for (int p = 0; p < pairs; ++p) {
      HarmonicField f = random_field(2, 8, 1.0, ++fs);
      HarmonicField g = random_field(2, 8, 1.0, ++fs, Parity::Even);
      std::vector<double> Ff = funk_forward(rho, fam2(), phi.per_rep(), f);
      double lhs = 0.0;
      for (int i = 0; i < fam2().grid.size(); ++i)
        lhs += fam2().grid.weights[static_cast<size_t>(i)] * Ff[static_cast<size_t>(i)] *
               g.value(fam2().grid.reps[static_cast<size_t>(i)]);
      std::vector<double> fstar = plan.apply(g);
      double rhs = 0.0;
      for (size_t s = 0; s < quad.points.size(); ++s)
        rhs += quad.weights[s] * f.value(quad.points[s]) * fstar[s];
      const double bound = 1e-8 * f.l2_norm() * g.l2_norm();
      c.require(std::fabs(lhs - rhs) <= bound, fmt("defect %.3e vs %.3e", std::fabs(lhs - rhs), bound));
    }
  }
}

void criterion_constraint() {
  Criterion c("4. variational constraint identity at 10 random small states");
  for (unsigned s = 0; s < 10; ++s) {
    SmallState st = small_state(500 + 13 * s, 0.035);
    ConstraintReport r = verify_variational_constraint(st.rho, fam2(), st.phi);
    c.require(r.residual <= 1e-6 * (1.0 + r.d_area_norm),
              fmt("residual %.3e vs %.3e", r.residual, 1e-6 * (1.0 + r.d_area_norm)));
  }
}

void criterion_jacobi() {
  Criterion c("5. second-variation structure: kernel, symmetry, inverse");
  HarmonicField rho0(2, 8);
  EquatorFunction z(2, fam2().chart_band);
  for (int i : {0, 57, 120}) {
    Eigen::MatrixXd J = jacobi_matrix(rho0, fam2().charts[static_cast<size_t>(i)], z);
    c.require(std::fabs(J(1, 1)) < 1e-10 && std::fabs(J(2, 2)) < 1e-10,
              fmt("degree-1 eigenvalues %.3e, %.3e", J(1, 1), J(2, 2)));
  }
  for (unsigned s = 0; s < 3; ++s) {
    SmallState st = small_state(600 + 17 * s);
    const int i = 40 + static_cast<int>(s);
    Eigen::MatrixXd J =
        jacobi_matrix(st.rho, fam2().charts[static_cast<size_t>(i)], st.phi.per_rep().fns[static_cast<size_t>(i)]);
    const double asym = (J - J.transpose()).cwiseAbs().maxCoeff() / J.cwiseAbs().maxCoeff();
    c.require(asym < 1e-7, fmt("symmetry defect %.3e vs %.3e", asym, 1e-7));

    // P(S(psi)) = psi on random zero-degree-one data
    EquatorFieldSet psis;
    std::mt19937 rng(700 + s);
    for (int k = 0; k < fam2().grid.size(); ++k) {
      EquatorFunction p(2, fam2().chart_band);
      for (int m = 0; m < p.size(); ++m) p.modes()[m] = std::uniform_real_distribution<>(-1, 1)(rng);
      psis.fns.push_back(p.without_degree_one());
    }
    EquatorFieldSet sol = solution_map(st.rho, fam2(), st.phi.per_rep(), psis);
    double worst = 0.0;
    for (int k = 0; k < fam2().grid.size(); k += 21) {
      EquatorFunction back = apply_projected_jacobi(st.rho, fam2().charts[static_cast<size_t>(k)],
                                                    st.phi.per_rep().fns[static_cast<size_t>(k)],
                                                    sol.fns[static_cast<size_t>(k)]);
      worst = std::max(worst, (back.modes() - psis.fns[static_cast<size_t>(k)].modes()).cwiseAbs().maxCoeff());
    }
    c.require(worst < 1e-8, fmt("P(S(psi)) defect %.3e vs %.3e", worst, 1e-8));
  }
}

void criterion_right_inverse() {
  Criterion c("6. transform right inverse at 5 small states");
  for (unsigned s = 0; s < 5; ++s) {
    SmallState st = small_state(800 + 11 * s);
    FunkSystem sys(st.rho.extended(8), fam2(), st.phi, 8);
    HarmonicField b = random_field(2, 6, 1.0, 900 + s, Parity::Even);
    b.coeffs()[0] = 0.0;
    std::vector<double> bv(static_cast<size_t>(fam2().grid.size()));
    double sup = 0.0;
    for (int i = 0; i < fam2().grid.size(); ++i) {
      bv[static_cast<size_t>(i)] = b.value(fam2().grid.reps[static_cast<size_t>(i)]);
      sup = std::max(sup, std::fabs(bv[static_cast<size_t>(i)]));
    }
    HarmonicField R = sys.right_inverse(bv);
    std::vector<double> FR = sys.forward(R);
    double err = 0.0;
    for (size_t i = 0; i < bv.size(); ++i) err = std::max(err, std::fabs(FR[i] - bv[i]));
    c.require(err < 1e-6 * sup, fmt("forward residual %.3e vs %.3e", err, 1e-6 * sup));
  }
}

void criterion_linearization_kernel() {
  Criterion c("7. round linearization kernel and quadratic vanishing");
  std::vector<HarmonicField> dirs;
  dirs.push_back(HarmonicField::project(2, 8, [](const Vec& p) { return p[0]; }));
  dirs.push_back(xyz_seed());
  dirs.push_back(random_field(2, 7, 1.0, 1000, Parity::Odd));
  for (const HarmonicField& f : dirs) {
    EquatorFieldSet seed = kernel_seed_set(fam2(), f);
    TangentGraphField seed_f = kernel_seed(fam2(), 8, f);
    const double dir_norm = f.linf_estimate() + seed_f.c1_bound();

    const double h = 1e-4;
    LambdaValue lp = lambda_map(fam2(), h * f, h * seed);
    LambdaValue lm = lambda_map(fam2(), (-h) * f, (-h) * seed);
    double fd = 0.0;
    for (size_t i = 0; i < lp.lambda1.size(); ++i)
      fd = std::max(fd, std::fabs(lp.lambda1[i] - lm.lambda1[i]) / (2.0 * h));
    fd = std::max(fd, (1.0 / (2.0 * h)) * (lp.lambda2 - lm.lambda2).linf(fam2()));
    c.require(fd <= 1e-6 * dir_norm, fmt("FD norm %.3e vs %.3e", fd, 1e-6 * dir_norm));

    std::vector<double> ts{1e-2, 5e-3, 2.5e-3};
    std::vector<double> norms;
    for (double t : ts) norms.push_back(lambda_map(fam2(), t * f, t * seed).norm());
    const double slope = loglog_slope(ts, norms);
    c.require(slope >= 1.9, fmt("quadratic slope %.3f vs %.3f", slope, 1.9));
  }
}

ZollState g_state_005;

void criterion_theorem_a() {
  Criterion c("8. end-to-end corrector run (Guillemin seed, t = 0.05)");
  g_state_005 = run_deform(0.05);
  c.require(g_state_005.diag.iterations <= 6,
            fmt("%.0f iterations vs %.0f", static_cast<double>(g_state_005.diag.iterations), 6.0));
  const double lam = g_state_005.diag.lambda1_inf + g_state_005.diag.lambda2_inf;
  c.require(lam < 1e-8, fmt("|Lambda| = %.3e vs %.3e", lam, 1e-8));

  ZollReport rep = verify_zoll(fam2(), g_state_005.rho, g_state_005.phi, 2);
  c.require(rep.max_el_residual < 1e-6, fmt("max|H| = %.3e vs %.3e", rep.max_el_residual, 1e-6));
  c.require(rep.area_spread < 1e-7, fmt("area spread = %.3e vs %.3e", rep.area_spread, 1e-7));

  ZollState zs = normalize_zprime(fam2(), g_state_005);
  AreaProfile A = area_profile(zs.rho, fam2(), zs.phi);
  double worst = 0.0;
  for (double a : A.values) worst = std::max(worst, std::fabs(a - 2.0 * M_PI));
  c.require(worst < 1e-7, fmt("area deviation after scaling %.3e vs %.3e", worst, 1e-7));
}

void criterion_tangency() {
  Criterion c("9. first-order tangency of the deformation family");
  HarmonicField rd = xyz_seed();
  std::vector<double> ts{0.05, 0.025, 0.0125};
  std::vector<double> errs;
  for (double t : ts) {
    ZollState st = t == 0.05 && g_state_005.rho.size() > 0 ? g_state_005 : run_deform(t);
    HarmonicField diff = st.rho - (t * rd).extended(st.rho.degree());
    errs.push_back(diff.l2_norm());
  }
  const double slope = loglog_slope(ts, errs);
  c.require(slope >= 1.9, fmt("tangency slope %.3f vs %.3f", slope, 1.9));
}

void criterion_theorem_d() {
  Criterion c("10. Killing-tensor metric with minimal equators");
  KillingTwoTensor k = KillingTwoTensor::diagonal_s3({1.1, 1.05, 1.02}, {0.05, 0.03, 0.01});
  MetricField g = MetricField::from_killing(k);
  const double tr = equator_residual(g, 200, 1100);
  c.require(tr < 1e-9, fmt("tensor residual %.3e vs %.3e", tr, 1e-9));

  std::mt19937 rng(1101);
  std::normal_distribution<double> gauss;
  double mc = 0.0;
  for (int s = 0; s < 10; ++s) {
    Vec v, p;
    for (int i = 0; i < 4; ++i) v[i] = gauss(rng);
    v = normalized(v);
    for (int i = 0; i < 4; ++i) p[i] = gauss(rng);
    p = normalized(reject(p, v));
    mc = std::max(mc, std::fabs(equator_mean_curvature(g, v, p)));
  }
  c.require(mc < 1e-6, fmt("mean-curvature residual %.3e vs %.3e", mc, 1e-6));

  RigidityResult rig = rigidity_map({1.1, 1.05, 1.02, 0.05, 0.03, 0.01});
  c.require(rig.kernel_dim == 0, fmt("kernel dimension %.0f vs %.0f", static_cast<double>(rig.kernel_dim), 0.0));
  c.require(rig.smallest_sv > 1e-8, fmt("smallest singular value %.3e vs %.3e", rig.smallest_sv, 1e-8));
}

void criterion_tensor_funk() {
  Criterion c("11. tensor transform kernels and the trace identity");
  // Lie derivatives on S^2 (closed-form gradient + rotation fields)
  {
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
    std::vector<double> T = tensor_funk_forward(fam2(), lie);
    double sup = 0.0;
    for (double v : T) sup = std::max(sup, std::fabs(v));
    // scale: integrated absolute trace of the tensor over an equator
    double scale = 0.0;
    {
      const EquatorChart& ch = fam2().charts[0];
      for (int q = 0; q < ch.node_count(); ++q) {
        const Vec& x = ch.nodes[static_cast<size_t>(q)];
        const Vec t = normalized(cross3(ch.v, x));
        scale += ch.weights[static_cast<size_t>(q)] * std::fabs(lie(x, t, t));
      }
      scale = std::max(scale, 1.0);
    }
    c.require(sup < 1e-8 * scale, fmt("Lie-derivative image %.3e vs %.3e", sup, 1e-8 * scale));
  }
  // transverse-traceless on S^3 via orthogonal Killing products
  {
    EquatorFamily fam3 = EquatorFamily::build(3, 5, 5, 128);
    auto W = quaternion_frame();
    auto kf = [&](const Eigen::Matrix4d& A, const Vec& p) {
      Vec r;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r[i] += A(i, j) * p[j];
      return r;
    };
    for (auto pair : {std::make_pair(0, 1), std::make_pair(0, 2), std::make_pair(3, 4)}) {
      TensorSampler tt = [&](const Vec& p, const Vec& u, const Vec& w) {
        const Vec k1 = kf(W[static_cast<size_t>(pair.first)], p);
        const Vec k2 = kf(W[static_cast<size_t>(pair.second)], p);
        return dot(k1, u) * dot(k2, w) + dot(k2, u) * dot(k1, w);
      };
      std::vector<double> T = tensor_funk_forward(fam3, tt);
      double sup = 0.0;
      for (double v : T) sup = std::max(sup, std::fabs(v));
      c.require(sup < 1e-8 * 4.0 * M_PI, fmt("TT image %.3e vs %.3e", sup, 1e-8 * 4.0 * M_PI));
    }
  }
  // f can -> (n-1)/2 F(f)
  {
    HarmonicField f = random_field(2, 8, 1.0, 1200);
    TensorSampler fcan = [&](const Vec& p, const Vec& u, const Vec& w) {
      return f.value(p) * dot(u, w);
    };
    std::vector<double> T = tensor_funk_forward(fam2(), fcan);
    HarmonicField rho(2, 8);
    EquatorFieldSet z = zero_set(fam2());
    std::vector<double> F = funk_forward(rho, fam2(), z, f);
    double err = 0.0;
    for (size_t i = 0; i < T.size(); ++i) err = std::max(err, std::fabs(T[i] - 0.5 * F[i]));
    c.require(err < 1e-10, fmt("trace identity defect %.3e vs %.3e", err, 1e-10));
  }
}

void criterion_determinism() {
  Criterion c("12. byte-identical outputs across runs and thread counts");
#ifdef ZOLLFUNK_CLI_PATH
  const std::string cli = ZOLLFUNK_CLI_PATH;
  const std::string dir = "acceptance_tmp";
  if (std::system(("rm -rf " + dir + " && mkdir -p " + dir).c_str()) != 0) {
    c.require(false, "cannot create scratch directory");
    return;
  }
  {
    std::ofstream cfg(dir + "/cfg.json");
    cfg << "{\"n\":2,\"L\":8,\"L_g\":12,\"Q\":64,\"t\":0.05,\"tol\":1e-8,"
           "\"max_iter\":6,\"J\":10,\"seed\":\"guillemin-xyz\"}\n";
  }
  auto run = [&](const std::string& tag, int threads) {
    const std::string cmd = "\"" + cli + "\" --threads " + std::to_string(threads) + " deform --config " +
                            dir + "/cfg.json --out " + dir + "/" + tag + " > /dev/null";
    return std::system(cmd.c_str());
  };
  c.require(run("a", 1) == 0, "first run failed");
  c.require(run("b", 1) == 0, "second run failed");
  c.require(run("c", 4) == 0, "threaded run failed");
  auto same = [&](const std::string& x, const std::string& y) {
    std::ifstream fx(dir + "/" + x, std::ios::binary), fy(dir + "/" + y, std::ios::binary);
    std::stringstream sx, sy;
    sx << fx.rdbuf();
    sy << fy.rdbuf();
    return fx && fy && sx.str() == sy.str() && !sx.str().empty();
  };
  for (const char* suffix : {"_iters.csv", "_state.json", "_report.json"}) {
    c.require(same(std::string("a") + suffix, std::string("b") + suffix),
              std::string("repeat run differs in ") + suffix);
    c.require(same(std::string("a") + suffix, std::string("c") + suffix),
              std::string("thread count changes ") + suffix);
  }
#else
  c.require(false, "CLI path not configured");
#endif
}

}  // namespace

int main() {
  std::printf("acceptance suite: n=2 family L=8, L_g=12, Q=64\n");
  criterion_funk_kernel();
  criterion_round_spectrum();
  criterion_duality();
  criterion_constraint();
  criterion_jacobi();
  criterion_right_inverse();
  criterion_linearization_kernel();
  criterion_theorem_a();
  criterion_tangency();
  criterion_theorem_d();
  criterion_tensor_funk();
  criterion_determinism();
  if (g_failures == 0) std::printf("all criteria passed\n");
  else std::printf("%d criteria FAILED\n", g_failures);
  return g_failures;
}
