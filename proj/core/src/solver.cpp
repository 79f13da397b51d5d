#include "zollfunk/solver.hpp"

#include <cmath>

#include "zollfunk/errors.hpp"

namespace zollfunk {

LambdaValue lambda_map(const EquatorFamily& fam, const HarmonicField& rho,
                       const EquatorFieldSet& phi) {
  LambdaValue out;
  out.area = area_profile(rho, fam, phi);
  out.lambda1.resize(out.area.values.size());
  for (size_t i = 0; i < out.area.values.size(); ++i) {
    out.lambda1[i] = out.area.values[i] - out.area.mean;
    out.lambda1_inf = std::max(out.lambda1_inf, std::fabs(out.lambda1[i]));
  }
  EquatorFieldSet H = euler_lagrange_family(rho, fam, phi);
  out.lambda2 = remove_center(fam, H);
  out.lambda2_inf = out.lambda2.linf(fam);
  return out;
}

RightInverseValue approx_right_inverse(const EquatorFamily& fam, const HarmonicField& rho,
                                       const EquatorFieldSet& phi, const FunkSystem& sys,
                                       const std::vector<double>& b, const EquatorFieldSet& psi) {
  const int n = fam.n;
  RightInverseValue out;
  out.f = (1.0 / (n - 1)) * sys.right_inverse(b);
  EquatorFieldSet dH = el_conformal_derivative_family(rho, fam, phi, out.f);
  EquatorFieldSet rhs = psi - remove_center(fam, dH);
  out.phi = solution_map(rho, fam, phi, rhs);
  return out;
}

std::vector<double> quadratic_error_q1(const EquatorFamily& fam, const EquatorFieldSet& psi_tilde,
                                       const EquatorFieldSet& v2) {
  std::vector<double> q(static_cast<size_t>(fam.grid.size()));
  for (int i = 0; i < fam.grid.size(); ++i) {
    const EquatorChart& ch = fam.charts[static_cast<size_t>(i)];
    Eigen::VectorXd a = psi_tilde.fns[static_cast<size_t>(i)].node_values(ch);
    Eigen::VectorXd b = v2.fns[static_cast<size_t>(i)].node_values(ch);
    double s = 0.0;
    for (int k = 0; k < ch.node_count(); ++k) s += ch.weights[static_cast<size_t>(k)] * a[k] * b[k];
    q[static_cast<size_t>(i)] = s;
  }
  const double mean = fam.grid.mean(q);
  for (double& v : q) v -= mean;
  return q;
}

EquatorFieldSet kernel_seed_set(const EquatorFamily& fam, const HarmonicField& f) {
  const int n = fam.n;
  EquatorFieldSet out;
  out.fns.resize(static_cast<size_t>(fam.grid.size()));
  for (int i = 0; i < fam.grid.size(); ++i) {
    const EquatorChart& ch = fam.charts[static_cast<size_t>(i)];
    Eigen::VectorXd rhs_vals(ch.node_count());
    for (int q = 0; q < ch.node_count(); ++q)
      rhs_vals[q] = (n - 1) * dot(f.gradient(ch.nodes[static_cast<size_t>(q)]), ch.v);
    EquatorFunction rhs = EquatorFunction::from_nodes(ch, rhs_vals);
    if (rhs.degree_one_norm() > 1e-8)
      throw NumericalError("kernel_seed: right side has degree-one content (f not odd+constant?)");
    // Laplace phi + (n-1) phi = rhs, mode eigenvalues -m(m+n-2) + (n-1);
    // the resonant degree-one modes carry no data and are set to zero.
    EquatorFunction sol(fam.n, ch.band);
    const ChartTables& T = chart_tables(ch);
    for (int k = 0; k < rhs.size(); ++k) {
      const int m = T.mode_degree[static_cast<size_t>(k)];
      const double denom = -static_cast<double>(m) * (m + n - 2) + (n - 1);
      sol.modes()[k] = std::fabs(denom) < 1e-12 ? 0.0 : rhs.modes()[k] / denom;
    }
    out.fns[static_cast<size_t>(i)] = sol;
  }
  return out;
}

TangentGraphField kernel_seed(const EquatorFamily& fam, int J, const HarmonicField& f) {
  // a direction to be scaled, not a state: skip the embedding-size check
  return TangentGraphField::fit(fam, J, kernel_seed_set(fam, f), TangentSubspace::ZeroOdd, false);
}

namespace {

HarmonicField constant_field(int n, int L, double value) {
  HarmonicField c(n, L);
  c.coeffs()[0] = value * std::sqrt(sphere_area(n));
  return c;
}

ZollState corrector_run(const EquatorFamily& fam, HarmonicField rho, EquatorFieldSet phi,
                        const DeformOptions& opt, int* iter_base) {
  const int Ls = opt.L_solve > 0 ? opt.L_solve : std::max(fam.L, fam.grid.band_limit);
  rho = rho.extended(Ls);
  ZollState st;
  int it = 0;
  for (; it <= opt.max_iter; ++it) {
    // re-center every step: the zero_odd constraint is held exactly
    phi = phi.without_degree_one();
    TangentGraphField fit = TangentGraphField::fit(fam, opt.J, phi, TangentSubspace::ZeroOdd);
    LambdaValue lam = lambda_map(fam, rho, phi);
    if (opt.trace) opt.trace(*iter_base + it, lam);
    if (lam.norm() < opt.tol) {
      st.rho = rho;
      st.phi = phi;
      st.phi_fit = fit;
      st.diag.lambda1_inf = lam.lambda1_inf;
      st.diag.lambda2_inf = lam.lambda2_inf;
      st.diag.area_mean = lam.area.mean;
      st.diag.area_spread = lam.area.spread;
      st.diag.iterations = *iter_base + it;
      *iter_base += it;
      return st;
    }
    if (it == opt.max_iter) break;
    FunkSystem sys(rho, fam, phi, fit, fam.L, Ls);
    RightInverseValue V = approx_right_inverse(fam, rho, phi, sys, lam.lambda1, lam.lambda2);
    rho = (rho - V.f.extended(Ls)).truncated(Ls);
    phi -= V.phi;
  }
  throw NumericalError("deform: corrector did not converge in " + std::to_string(opt.max_iter) +
                       " iterations");
}

}  // namespace

ZollState deform(const EquatorFamily& fam, const HarmonicField& rho_dot, const DeformOptions& opt) {
  if (rho_dot.n() != fam.n) throw UsageError("deform: dimension mismatch");
  ZollState st;
  st.rho = HarmonicField(fam.n, fam.L);
  for (int i = 0; i < fam.grid.size(); ++i)
    st.phi.fns.push_back(EquatorFunction(fam.n, fam.chart_band));
  st.phi_fit = TangentGraphField(fam, opt.J, TangentSubspace::ZeroOdd);
  if (rho_dot.l2_norm() == 0.0 || opt.t == 0.0) {
    LambdaValue lam = lambda_map(fam, st.rho, st.phi);
    st.diag.area_mean = lam.area.mean;
    st.diag.area_spread = lam.area.spread;
    return st;
  }

  EquatorFieldSet seed = kernel_seed_set(fam, rho_dot);
  const HarmonicField rd = rho_dot.truncated(fam.L);
  int iters = 0;
  double reached = 0.0;
  while (reached < std::fabs(opt.t) - 1e-15) {
    const double dt = std::copysign(std::min(opt.step, std::fabs(opt.t) - reached), opt.t);
    reached += std::fabs(dt);
    HarmonicField rho = st.rho + (dt * rd).extended(st.rho.degree());
    EquatorFieldSet pr = st.phi + dt * seed;
    st = corrector_run(fam, rho, pr, opt, &iters);
  }
  return st;
}

ZollState normalize_zprime(const EquatorFamily& fam, ZollState state) {
  AreaProfile A = area_profile(state.rho, fam, state.phi);
  const double kappa = std::log(sphere_area(fam.n - 1) / A.mean) / (fam.n - 1);
  state.rho += constant_field(fam.n, state.rho.degree(), kappa);
  AreaProfile B = area_profile(state.rho, fam, state.phi);
  state.diag.area_mean = B.mean;
  state.diag.area_spread = B.spread;
  return state;
}

HarmonicField isometry_breaking_seed(const HarmonicField& r) {
  const int n = r.n();
  if (HarmonicField::detect_parity(r.n(), r.degree(), r.coeffs()) != Parity::Odd && r.l2_norm() > 0)
    throw UsageError("isometry_breaking_seed: r must be odd");
  const HarmonicBasis& B = shared_basis(r.n(), r.degree());
  for (int a = 0; a < r.size(); ++a)
    if (B.degree_of(a) == 1 && std::fabs(r.coeffs()[a]) > 1e-8)
      throw UsageError("isometry_breaking_seed: r must have no degree-one content");
  HarmonicField g = (-1.0 / (2.0 * (n - 1))) * r;
  return helmholtz_solve(g, static_cast<double>(n), true);
}

ZollReport verify_zoll(const EquatorFamily& fam, const HarmonicField& rho,
                       const EquatorFieldSet& phi, int resolution_factor) {
  ZollReport rep;
  std::vector<double> areas(static_cast<size_t>(fam.grid.size()));
  for (int i = 0; i < fam.grid.size(); ++i) {
    const Vec& v = fam.grid.reps[static_cast<size_t>(i)];
    EquatorChart fine =
        EquatorChart::build(v, resolution_factor * fam.Q, fam.n, phi.fns[static_cast<size_t>(i)].band());
    const EquatorFunction& pf = phi.fns[static_cast<size_t>(i)];
    Eigen::VectorXd dens = euler_lagrange_density(rho, fine, pf);
    rep.max_el_residual = std::max(rep.max_el_residual, dens.cwiseAbs().maxCoeff());
    areas[static_cast<size_t>(i)] = graph_area(rho, fine, pf);
    // center of the EL density
    Vec C;
    for (int q = 0; q < fine.node_count(); ++q)
      C += (fine.weights[static_cast<size_t>(q)] * dens[q]) * fine.nodes[static_cast<size_t>(q)];
    rep.center_norm = std::max(rep.center_norm, norm(reject(C, v)));
  }
  rep.area_mean = fam.grid.mean(areas);
  for (double a : areas) rep.area_spread = std::max(rep.area_spread, std::fabs(a - rep.area_mean));

  // Gauss-map injectivity over a coarse sample of (x, v) pairs
  std::vector<std::pair<Vec, Vec>> pre;
  std::vector<std::pair<Vec, Vec>> img;
  for (int i = 0; i < fam.grid.size(); i += std::max(1, fam.grid.size() / 24)) {
    const EquatorChart& ch = fam.charts[static_cast<size_t>(i)];
    for (int q = 0; q < ch.node_count(); q += std::max(1, ch.node_count() / 8)) {
      const Vec& x = ch.nodes[static_cast<size_t>(q)];
      const Vec y = graph_point(ch, phi.fns[static_cast<size_t>(i)], x);
      const Vec N = graph_normal(ch, phi.fns[static_cast<size_t>(i)], x);
      pre.emplace_back(x, ch.v);
      img.emplace_back(y, N);
    }
  }
  double ratio = 1e300;
  for (size_t a = 0; a < pre.size(); ++a)
    for (size_t b = a + 1; b < pre.size(); ++b) {
      const double dp = norm(pre[a].first - pre[b].first) + norm(pre[a].second - pre[b].second);
      const double di = norm(img[a].first - img[b].first) + norm(img[a].second - img[b].second);
      if (dp > 1e-12) ratio = std::min(ratio, di / dp);
    }
  rep.gauss_injectivity = ratio;
  return rep;
}

}  // namespace zollfunk
