#include "zollfunk/funk.hpp"

#include <cmath>

#include "zollfunk/errors.hpp"
#include "zollfunk/graphs.hpp"
#include "zollfunk/parallel.hpp"

namespace zollfunk {

std::vector<double> funk_forward(const HarmonicField& rho, const EquatorFamily& fam,
                                 const EquatorFieldSet& Phi, const HarmonicField& f) {
  const int n = fam.n;
  std::vector<double> out(static_cast<size_t>(fam.grid.size()));
  for (int i = 0; i < fam.grid.size(); ++i) {
    const EquatorChart& ch = fam.charts[static_cast<size_t>(i)];
    GraphNodes gn = graph_nodes(ch, Phi.fns[static_cast<size_t>(i)]);
    double s = 0.0;
    for (int q = 0; q < ch.node_count(); ++q) {
      const Vec& y = gn.point[static_cast<size_t>(q)];
      s += ch.weights[static_cast<size_t>(q)] * f.value(y) *
           std::exp((n - 1) * rho.value(y)) * gn.jac[static_cast<size_t>(q)];
    }
    out[static_cast<size_t>(i)] = s;
  }
  return out;
}

double funk_area_derivative_residual(const HarmonicField& rho, const EquatorFamily& fam,
                                     const EquatorFieldSet& Phi, const HarmonicField& f) {
  const int n = fam.n;
  std::vector<double> F = funk_forward(rho, fam, Phi, f);
  const double h = 1e-5;
  AreaProfile Ap = area_profile(rho + h * f.extended(rho.degree()), fam, Phi);
  AreaProfile Am = area_profile(rho - h * f.extended(rho.degree()), fam, Phi);
  double worst = 0.0;
  for (int i = 0; i < fam.grid.size(); ++i) {
    const double fd = (Ap.values[static_cast<size_t>(i)] - Am.values[static_cast<size_t>(i)]) /
                      (2.0 * h * (n - 1));
    worst = std::max(worst, std::fabs(fd - F[static_cast<size_t>(i)]) /
                                std::max(1.0, std::fabs(F[static_cast<size_t>(i)])));
  }
  return worst;
}

Eigen::MatrixXd funk_forward_matrix(const HarmonicField& rho, const EquatorFamily& fam,
                                    const EquatorFieldSet& Phi, int L) {
  const int n = fam.n;
  const HarmonicBasis& B = shared_basis(n, L);
  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(fam.grid.size(), B.size());
  std::vector<double> ybuf(static_cast<size_t>(B.size()));
  for (int i = 0; i < fam.grid.size(); ++i) {
    const EquatorChart& ch = fam.charts[static_cast<size_t>(i)];
    GraphNodes gn = graph_nodes(ch, Phi.fns[static_cast<size_t>(i)]);
    for (int q = 0; q < ch.node_count(); ++q) {
      const Vec& y = gn.point[static_cast<size_t>(q)];
      const double w = ch.weights[static_cast<size_t>(q)] *
                       std::exp((n - 1) * rho.value(y)) * gn.jac[static_cast<size_t>(q)];
      B.eval(y, ybuf.data());
      for (int a = 0; a < B.size(); ++a) F(i, a) += w * ybuf[static_cast<size_t>(a)];
    }
  }
  return F;
}

HarmonicField funk_dual_adjoint(const EquatorFamily& fam, const Eigen::MatrixXd& forward,
                                const std::vector<double>& g) {
  if (static_cast<int>(g.size()) != fam.grid.size())
    throw UsageError("funk_dual_adjoint: value count mismatch");
  Eigen::VectorXd wg(fam.grid.size());
  for (int i = 0; i < fam.grid.size(); ++i)
    wg[i] = fam.grid.weights[static_cast<size_t>(i)] * g[static_cast<size_t>(i)];
  Eigen::VectorXd c = forward.transpose() * wg;
  // infer L from the coefficient count
  int L = 0;
  while (HarmonicBasis::total_size(fam.n, L) < c.size()) ++L;
  return HarmonicField(fam.n, L, std::move(c));
}

// ---------------------------------------------------------------------------
// geometric dual transform

namespace {

// U(Phi)(p,[v]) at (x,v) with p = graph point of x on Sigma_v.
double dual_density(const TangentGraphField& Phi, const Vec& p, const Vec& x, const Vec& v) {
  const double f = Phi.value(x, v);
  const Vec g = Phi.equator_gradient(x, v);
  const double S = std::sqrt(std::cos(f) * std::cos(f) + dot(g, g));
  Vec nstar = level_gradient_v(Phi, p, v);
  const double r = norm(nstar);
  if (r < 1e-12) throw NumericalError("dual transform: degenerate dual normal");
  nstar = (1.0 / r) * nstar;
  if (dot(nstar, p) < 0.0) nstar = -nstar;
  const double eta = eta_deformation(Phi, x, v, nstar);
  if (std::fabs(eta) < 1e-12) throw NumericalError("dual transform: vanishing eta density");
  return S / (std::fabs(eta) * std::cos(f));
}

}  // namespace

DualTransformPlan::DualTransformPlan(const HarmonicField& rho, const EquatorFamily& fam,
                                     const TangentGraphField& Phi, const std::vector<Vec>& points)
    : points_(points) {
  const int n = fam.n;
  const int band_dual = n == 2 ? (fam.Q - 2) / 4 : fam.L;
  rho_factor_.resize(points_.size());
  xi_.resize(points_.size());
  wgt_.resize(points_.size());

  for (size_t ip = 0; ip < points_.size(); ++ip) {
    const Vec p = points_[ip];
    rho_factor_[ip] = std::exp((n - 1) * rho.value(p));
    EquatorChart wch = EquatorChart::build(p, fam.Q, n, band_dual);
    const int Q = wch.node_count();
    std::vector<Vec> xs(static_cast<size_t>(Q)), vs(static_cast<size_t>(Q));
    Vec xg = p, vg;
    bool have_guess = false;
    for (int k = 0; k < Q; ++k) {
      const Vec& w = wch.nodes[static_cast<size_t>(k)];
      GaussInverse gi = have_guess ? gauss_map_inverse(Phi, p, w, xg, vg)
                                   : gauss_map_inverse(Phi, p, w);
      xs[static_cast<size_t>(k)] = gi.x;
      vs[static_cast<size_t>(k)] = gi.v;
      // next node's direction differs, but the offsets of (x, v) from (q, w)
      // vary slowly along the chart; reuse them as the next initial guess
      if (k + 1 < Q) {
        const Vec& wn = wch.nodes[static_cast<size_t>(k + 1)];
        vg = normalized(wn + (gi.v - w));
        xg = gi.x;
        have_guess = true;
      }
    }
    // |Jac Xi| via chart-spectral derivatives of the components of Xi
    std::vector<EquatorFunction> comps;
    for (int d = 0; d <= n; ++d) {
      Eigen::VectorXd vals(Q);
      for (int k = 0; k < Q; ++k) vals[k] = vs[static_cast<size_t>(k)][d];
      comps.push_back(EquatorFunction::from_nodes(wch, vals));
    }
    xi_[ip].resize(static_cast<size_t>(Q));
    wgt_[ip].resize(static_cast<size_t>(Q));
    for (int k = 0; k < Q; ++k) {
      const Vec& w = wch.nodes[static_cast<size_t>(k)];
      double jac = 0.0;
      if (n == 2) {
        Vec dxi;
        for (int d = 0; d <= n; ++d) {
          const Vec g = comps[static_cast<size_t>(d)].grad_ambient(wch, w);
          // 1-dim tangent: the derivative along the circle direction
          const Vec tdir = normalized(cross3(wch.v, w));
          dxi[d] = dot(g, tdir);
        }
        jac = norm(dxi);
      } else {
        // pull-back metric determinant on the 2-dim tangent of the w-chart
        const std::vector<Vec> tans = complement_basis({wch.v, w}, n + 1);
        Eigen::Matrix2d G = Eigen::Matrix2d::Zero();
        for (int d = 0; d <= n; ++d) {
          const Vec g = comps[static_cast<size_t>(d)].grad_ambient(wch, w);
          for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
              G(a, b) += dot(g, tans[static_cast<size_t>(a)]) * dot(g, tans[static_cast<size_t>(b)]);
        }
        jac = std::sqrt(std::max(0.0, G.determinant()));
      }
      const double U = dual_density(Phi, p, xs[static_cast<size_t>(k)], vs[static_cast<size_t>(k)]);
      xi_[ip][static_cast<size_t>(k)] = vs[static_cast<size_t>(k)];
      wgt_[ip][static_cast<size_t>(k)] = 0.5 * wch.weights[static_cast<size_t>(k)] * U * jac;
    }
  }
}

std::vector<double> DualTransformPlan::apply(const HarmonicField& g) const {
  std::vector<double> out(points_.size());
  for (size_t ip = 0; ip < points_.size(); ++ip) {
    double s = 0.0;
    for (size_t k = 0; k < xi_[ip].size(); ++k) s += wgt_[ip][k] * g.value(xi_[ip][k]);
    out[ip] = rho_factor_[ip] * s;
  }
  return out;
}

// ---------------------------------------------------------------------------
// kernel

double kernel_value(const HarmonicField& rho, const EquatorChart& cs, const EquatorFunction& phis,
                    const EquatorChart& ct, const EquatorFunction& phit) {
  const int n = cs.n;
  GraphIntersection gi = intersect_graphs(cs, phis, ct, phit);
  double sum = 0.0;
  for (size_t k = 0; k < gi.points.size(); ++k) {
    const Vec& y = gi.points[k];
    // pre-images on the two equators: rejecting the graph offset recovers x
    const Vec xs = normalized(reject(y, cs.v));
    const Vec xt = normalized(reject(y, ct.v));
    const Vec Ns = graph_normal(cs, phis, xs);
    const Vec Nt = graph_normal(ct, phit, xt);
    const double c = dot(Ns, Nt);
    const double denom = std::sqrt(std::max(1e-300, 1.0 - c * c));
    sum += gi.weights[k] * std::exp(2.0 * (n - 1) * rho.value(y)) / denom;
  }
  return sum;
}

double inverse_sine_mass(int n) {
  if (n == 2) return M_PI * M_PI;
  if (n == 3) return 4.0 * M_PI;
  throw UsageError("inverse_sine_mass: unsupported dimension");
}

KernelMatrix assemble_kernel_operator(const HarmonicField& rho, const EquatorFamily& fam,
                                      const TangentGraphField& Phi) {
  return assemble_kernel_operator(rho, fam, Phi.per_rep(), Phi);
}

KernelMatrix assemble_kernel_operator(const HarmonicField& rho, const EquatorFamily& fam,
                                      const EquatorFieldSet& phi, const TangentGraphField& phi_global) {
  if (fam.n != 2)
    throw UsageError("assemble_kernel_operator: inversion machinery is n = 2 in this version");
  const int R = fam.grid.size();
  KernelMatrix M;
  M.n = fam.n;
  M.K = Eigen::MatrixXd::Zero(R, R);
  M.diag_k.resize(R);
  M.sin_mass = inverse_sine_mass(fam.n);

  parallel_for(R, [&](int i) {
    for (int j = i + 1; j < R; ++j)
      M.K(i, j) = kernel_value(rho, fam.charts[static_cast<size_t>(i)],
                               phi.fns[static_cast<size_t>(i)],
                               fam.charts[static_cast<size_t>(j)],
                               phi.fns[static_cast<size_t>(j)]);
  });
  for (int i = 0; i < R; ++i)
    for (int j = i + 1; j < R; ++j) M.K(j, i) = M.K(i, j);

  // diagonal: Richardson extrapolation of sin(d) K along shrinking distances
  const std::array<double, 4> ts{0.2, 0.1, 0.05, 0.025};
  parallel_for(R, [&](int i) {
    const EquatorChart& ci = fam.charts[static_cast<size_t>(i)];
    const Vec theta = ci.frame[0];
    std::array<double, 4> vals{};
    for (size_t a = 0; a < ts.size(); ++a) {
      const double t = ts[a];
      const Vec tau = std::cos(t) * ci.v + std::sin(t) * theta;
      EquatorChart ct = EquatorChart::build(tau, fam.Q, fam.n, fam.L);
      EquatorFunction pt = phi_global.restrict_to(ct);
      vals[a] = std::sin(t) * kernel_value(rho, ci, phi.fns[static_cast<size_t>(i)], ct, pt);
    }
    // Neville extrapolation to t = 0
    std::array<double, 4> f = vals;
    std::array<double, 4> x = ts;
    for (int m = 1; m < 4; ++m)
      for (int a = 0; a < 4 - m; ++a)
        f[static_cast<size_t>(a)] =
            (x[static_cast<size_t>(a + m)] * f[static_cast<size_t>(a)] -
             x[static_cast<size_t>(a)] * f[static_cast<size_t>(a + 1)]) /
            (x[static_cast<size_t>(a + m)] - x[static_cast<size_t>(a)]);
    M.diag_k[i] = f[0];
  });

  // Round inverse-sine operator, spectral on even harmonics of the grid band:
  // \int Y_l / sin d = lambda_l^2 / (2 omega_{n-2}) Y_l.
  const int Lc_band = fam.grid.band_limit;
  const HarmonicBasis& B = shared_basis(fam.n, Lc_band);
  std::vector<int> even_idx;
  for (int a = 0; a < B.size(); ++a)
    if (B.degree_of(a) % 2 == 0) even_idx.push_back(a);
  const int NE = static_cast<int>(even_idx.size());
  Eigen::MatrixXd Yg(R, NE);   // coeff -> grid
  {
    std::vector<double> ybuf(static_cast<size_t>(B.size()));
    for (int i = 0; i < R; ++i) {
      B.eval(fam.grid.reps[static_cast<size_t>(i)], ybuf.data());
      for (int e = 0; e < NE; ++e) Yg(i, e) = ybuf[static_cast<size_t>(even_idx[static_cast<size_t>(e)])];
    }
  }
  Eigen::MatrixXd Pg = 2.0 * Yg.transpose() *
                       Eigen::Map<const Eigen::VectorXd>(fam.grid.weights.data(), R).asDiagonal();
  const std::vector<double> lam = round_funk_spectrum(fam, Lc_band);
  const double omega_ns = fam.n == 2 ? 2.0 : sphere_area(fam.n - 2);
  Eigen::VectorXd Dround(NE);
  for (int e = 0; e < NE; ++e) {
    const int l = B.degree_of(even_idx[static_cast<size_t>(e)]);
    Dround[e] = lam[static_cast<size_t>(l)] * lam[static_cast<size_t>(l)] / (2.0 * omega_ns);
  }
  Eigen::MatrixXd Mround = Yg * Dround.asDiagonal() * Pg;  // grid -> grid

  // grid part: (k(s,t) - k(s,s)) f(t) / sin d, zero at the round point
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(R, R);
  for (int i = 0; i < R; ++i)
    for (int j = 0; j < R; ++j) {
      if (j == i) continue;
      const double sd = std::sin(projective_distance(fam.grid.reps[static_cast<size_t>(i)],
                                                     fam.grid.reps[static_cast<size_t>(j)]));
      G(i, j) = fam.grid.weights[static_cast<size_t>(j)] * (M.K(i, j) - M.diag_k[i] / sd);
    }
  M.L = M.diag_k.asDiagonal() * Mround + G;
  M.coeff_band = Lc_band;
  M.Lc = Pg * (M.L * Yg);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M.Lc);
  M.condition = svd.singularValues()[0] / svd.singularValues()[NE - 1];
  if (M.condition > 1e8)
    throw NumericalError("assemble_kernel_operator: operator numerically singular");
  return M;
}

Eigen::VectorXd apply_kernel_operator(const KernelMatrix& M, const Eigen::VectorXd& f) {
  return M.L * f;
}

Eigen::VectorXd solve_kernel_operator(const EquatorFamily& fam, const KernelMatrix& M,
                                      const Eigen::VectorXd& b) {
  const int R = fam.grid.size();
  const HarmonicBasis& B = shared_basis(fam.n, M.coeff_band);
  std::vector<int> even_idx;
  for (int a = 0; a < B.size(); ++a)
    if (B.degree_of(a) % 2 == 0) even_idx.push_back(a);
  const int NE = static_cast<int>(even_idx.size());
  Eigen::MatrixXd Yg(R, NE);
  std::vector<double> ybuf(static_cast<size_t>(B.size()));
  for (int i = 0; i < R; ++i) {
    B.eval(fam.grid.reps[static_cast<size_t>(i)], ybuf.data());
    for (int e = 0; e < NE; ++e) Yg(i, e) = ybuf[static_cast<size_t>(even_idx[static_cast<size_t>(e)])];
  }
  Eigen::VectorXd bc = 2.0 * Yg.transpose() *
                       (Eigen::Map<const Eigen::VectorXd>(fam.grid.weights.data(), R).cwiseProduct(b));
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(M.Lc);
  Eigen::VectorXd xc = lu.solve(bc);
  if (!((M.Lc * xc - bc).norm() <= 1e-9 * std::max(1.0, bc.norm())))
    throw NumericalError("solve_kernel_operator: solve residual too large");
  return Yg * xc;
}

// ---------------------------------------------------------------------------
// FunkSystem

FunkSystem::FunkSystem(const HarmonicField& rho, const EquatorFamily& fam,
                       const TangentGraphField& Phi, int L, int L_solution)
    : FunkSystem(rho, fam, Phi.per_rep(), Phi, L, L_solution) {}

FunkSystem::FunkSystem(const HarmonicField& rho, const EquatorFamily& fam,
                       const EquatorFieldSet& phi, const TangentGraphField& phi_global, int L,
                       int L_solution)
    : fam_(&fam), L_(L), Lsol_(L_solution > 0 ? L_solution : L + 8) {
  F_ = funk_forward_matrix(rho, fam, phi, Lsol_);
  M_ = assemble_kernel_operator(rho, fam, phi, phi_global);
  const HarmonicBasis& B = shared_basis(fam.n, M_.coeff_band);
  std::vector<int> even_idx;
  for (int a = 0; a < B.size(); ++a)
    if (B.degree_of(a) % 2 == 0) even_idx.push_back(a);
  Yg_.resize(fam.grid.size(), static_cast<int>(even_idx.size()));
  std::vector<double> ybuf(static_cast<size_t>(B.size()));
  for (int i = 0; i < fam.grid.size(); ++i) {
    B.eval(fam.grid.reps[static_cast<size_t>(i)], ybuf.data());
    for (size_t e = 0; e < even_idx.size(); ++e)
      Yg_(i, static_cast<int>(e)) = ybuf[static_cast<size_t>(even_idx[e])];
  }
  lu_.compute(M_.Lc);
  Eigen::VectorXd sw(fam.grid.size());
  for (int i = 0; i < fam.grid.size(); ++i) sw[i] = std::sqrt(fam.grid.weights[static_cast<size_t>(i)]);
  fsvd_.compute(sw.asDiagonal() * F_, Eigen::ComputeThinU | Eigen::ComputeThinV);
  // keep near-null directions (odd columns at the round point) out of the
  // least-squares polish
  fsvd_.setThreshold(1e-6);
}

Eigen::VectorXd FunkSystem::solve_core(const Eigen::VectorXd& b) const {
  const Eigen::Map<const Eigen::VectorXd> w(fam_->grid.weights.data(), fam_->grid.size());
  Eigen::VectorXd bc = 2.0 * Yg_.transpose() * w.cwiseProduct(b);
  return Yg_ * lu_.solve(bc);
}

std::vector<double> FunkSystem::forward(const HarmonicField& f) const {
  Eigen::VectorXd v = F_ * f.extended(Lsol_).coeffs();
  return std::vector<double>(v.data(), v.data() + v.size());
}

HarmonicField FunkSystem::dual_adjoint(const std::vector<double>& g) const {
  return funk_dual_adjoint(*fam_, F_, g);
}

HarmonicField FunkSystem::right_inverse(const std::vector<double>& b) const {
  const int R = fam_->grid.size();
  if (static_cast<int>(b.size()) != R) throw UsageError("right_inverse: value count mismatch");

  std::vector<double> bv = b;
  const double mean = fam_->grid.mean(bv);
  const double scale = std::max(1.0, std::fabs(fam_->grid.integrate(bv)) + 1.0);
  if (std::fabs(mean) > 1e-8 * scale)
    throw UsageError("right_inverse: data must have zero mean on RP^n");
  Eigen::VectorXd bg = Eigen::Map<const Eigen::VectorXd>(bv.data(), R);

  // Kernel solve as the core, dualized back to a field on the sphere; the
  // discrete forward operator then leaves a small residual (the exact right
  // inverse is not band-limited), which a weighted least-squares polish
  // against the forward matrix removes as far as the solution band reaches.
  Eigen::VectorXd u = solve_core(bg);
  const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(fam_->grid.weights.data(), R);
  Eigen::VectorXd sw = w.cwiseSqrt();
  Eigen::VectorXd c = F_.transpose() * w.cwiseProduct(u);
  const double target = 1e-12 * std::max(1.0, bg.norm());
  double best = 1e300;
  Eigen::VectorXd cbest = c;
  for (int it = 0; it < 6; ++it) {
    Eigen::VectorXd r = bg - F_ * c;
    if (r.norm() < best) {
      best = r.norm();
      cbest = c;
    }
    if (r.norm() <= target) break;
    c += fsvd_.solve(sw.cwiseProduct(r));
  }
  return HarmonicField(fam_->n, Lsol_, std::move(cbest));
}

std::vector<double> round_funk_spectrum(const EquatorFamily& fam, int L) {
  HarmonicField rho(fam.n, 0);
  EquatorFieldSet zero;
  for (size_t i = 0; i < fam.charts.size(); ++i)
    zero.fns.push_back(EquatorFunction(fam.n, fam.charts[i].band));
  Eigen::MatrixXd F = funk_forward_matrix(rho, fam, zero, L);
  const HarmonicBasis& B = shared_basis(fam.n, L);
  std::vector<double> lam(static_cast<size_t>(L + 1), 0.0);
  for (int l = 0; l <= L; ++l) {
    const int a = HarmonicBasis::block_start(fam.n, l);  // (l, m=0)-type element
    double s = 0.0;
    std::vector<double> ybuf(static_cast<size_t>(B.size()));
    for (int i = 0; i < fam.grid.size(); ++i) {
      B.eval(fam.grid.reps[static_cast<size_t>(i)], ybuf.data());
      s += 2.0 * fam.grid.weights[static_cast<size_t>(i)] * F(i, a) * ybuf[static_cast<size_t>(a)];
    }
    lam[static_cast<size_t>(l)] = s;
  }
  return lam;
}

std::vector<double> tensor_funk_forward(const EquatorFamily& fam, const TensorSampler& h) {
  std::vector<double> out(static_cast<size_t>(fam.grid.size()));
  for (int i = 0; i < fam.grid.size(); ++i) {
    const EquatorChart& ch = fam.charts[static_cast<size_t>(i)];
    double s = 0.0;
    for (int q = 0; q < ch.node_count(); ++q) {
      const Vec& x = ch.nodes[static_cast<size_t>(q)];
      const std::vector<Vec> tans = complement_basis({x, ch.v}, fam.n + 1);
      double tr = 0.0;
      for (const Vec& t : tans) tr += h(x, t, t);
      s += ch.weights[static_cast<size_t>(q)] * tr;
    }
    out[static_cast<size_t>(i)] = 0.5 * s;
  }
  return out;
}

}  // namespace zollfunk
