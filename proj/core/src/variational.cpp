#include "zollfunk/variational.hpp"

#include <cmath>

#include "zollfunk/errors.hpp"

namespace zollfunk {

namespace {

// Node data of the integrand A(rho)((x,v),U,L) and its (U,L)-derivatives at
// (U,L) = (phi, grad phi).  Everything is stored in chart-frame components.
struct ElCoeffs {
  int Q = 0;
  std::vector<double> A_U, A_UU;
  std::vector<Vec> A_L, A_UL;             // frame components
  std::vector<Eigen::Matrix3d> A_LL;      // frame components
  bool second_order = false;
};

ElCoeffs el_coeffs(const HarmonicField& rho, const EquatorChart& chart,
                   const EquatorFunction& phi, bool second_order) {
  const int n = chart.n;
  ElCoeffs out;
  out.second_order = second_order;
  const int Q = chart.node_count();
  out.Q = Q;
  out.A_U.resize(static_cast<size_t>(Q));
  out.A_L.resize(static_cast<size_t>(Q));
  if (second_order) {
    out.A_UU.resize(static_cast<size_t>(Q));
    out.A_UL.resize(static_cast<size_t>(Q));
    out.A_LL.resize(static_cast<size_t>(Q));
  }

  Eigen::VectorXd fv = phi.node_values(chart);
  std::vector<Vec> gf = phi.node_grads_frame(chart);

  for (int q = 0; q < Q; ++q) {
    const Vec& x = chart.nodes[static_cast<size_t>(q)];
    const double f = fv[q];
    const Vec g = gf[static_cast<size_t>(q)];  // frame components
    const double cf = std::cos(f), sf = std::sin(f);
    const double g2 = dot(g, g);
    const double S = std::sqrt(cf * cf + g2);

    const Vec y = cf * x + sf * chart.v;          // graph point
    const Vec dy = -sf * x + cf * chart.v;        // d/dU along the U-curve
    double r1 = 0.0, r2 = 0.0;
    rho.curve_derivatives(y, dy, -1.0 * y, &r1, second_order ? &r2 : nullptr);
    const double E = std::exp((n - 1) * rho.value(y));
    const double Ep = (n - 1) * r1 * E;

    const double B = n == 2 ? 1.0 : std::pow(cf, n - 2);
    const double Bp = n == 2 ? 0.0 : -(n - 2) * std::pow(cf, n - 3) * sf;
    const double F = E * B;
    const double Fp = Ep * B + E * Bp;
    const double S_U = -sf * cf / S;

    out.A_U[static_cast<size_t>(q)] = Fp * S + F * S_U;
    out.A_L[static_cast<size_t>(q)] = (F / S) * g;

    if (second_order) {
      const double Epp = (n - 1) * r2 * E + (n - 1) * r1 * Ep;
      const double Bpp =
          n == 2 ? 0.0 : (n - 2) * ((n - 3) * std::pow(cf, std::max(n - 4, 0)) * sf * sf - std::pow(cf, n - 2));
      const double Fpp = Epp * B + 2.0 * Ep * Bp + E * Bpp;
      const double c2f = cf * cf - sf * sf;
      const double S_UU = -c2f / S - (sf * cf) * (sf * cf) / (S * S * S);
      out.A_UU[static_cast<size_t>(q)] = Fpp * S + 2.0 * Fp * S_U + F * S_UU;
      out.A_UL[static_cast<size_t>(q)] = (Fp / S - F * S_U / (S * S)) * g;
      Eigen::Matrix3d M = Eigen::Matrix3d::Identity() * (F / S);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) M(i, j) -= F * g[i] * g[j] / (S * S * S);
      out.A_LL[static_cast<size_t>(q)] = M;
    }
  }
  return out;
}

Eigen::VectorXd density_from_coeffs(const EquatorChart& chart, const ElCoeffs& co) {
  Eigen::VectorXd vals = divergence_values(chart, co.A_L);
  for (int q = 0; q < co.Q; ++q) vals[q] = co.A_U[static_cast<size_t>(q)] - vals[q];
  return vals;
}

}  // namespace

double graph_area(const HarmonicField& rho, const EquatorChart& chart, const EquatorFunction& phi) {
  const int n = chart.n;
  GraphNodes gn = graph_nodes(chart, phi);
  double area = 0.0;
  for (int q = 0; q < chart.node_count(); ++q) {
    const double e = std::exp((n - 1) * rho.value(gn.point[static_cast<size_t>(q)]));
    area += chart.weights[static_cast<size_t>(q)] * e * gn.jac[static_cast<size_t>(q)];
  }
  return area;
}

AreaProfile area_profile(const HarmonicField& rho, const EquatorFamily& fam,
                         const EquatorFieldSet& Phi) {
  AreaProfile out;
  out.values.resize(static_cast<size_t>(fam.grid.size()));
  for (int i = 0; i < fam.grid.size(); ++i)
    out.values[static_cast<size_t>(i)] =
        graph_area(rho, fam.charts[static_cast<size_t>(i)], Phi.fns[static_cast<size_t>(i)]);
  out.mean = fam.grid.mean(out.values);
  out.spread = 0.0;
  for (double a : out.values) out.spread = std::max(out.spread, std::fabs(a - out.mean));
  return out;
}

Eigen::VectorXd euler_lagrange_density(const HarmonicField& rho, const EquatorChart& chart,
                                       const EquatorFunction& phi) {
  return density_from_coeffs(chart, el_coeffs(rho, chart, phi, false));
}

EquatorFunction euler_lagrange(const HarmonicField& rho, const EquatorChart& chart,
                               const EquatorFunction& phi) {
  return EquatorFunction::from_nodes(chart, euler_lagrange_density(rho, chart, phi));
}

EquatorFieldSet euler_lagrange_family(const HarmonicField& rho, const EquatorFamily& fam,
                                      const EquatorFieldSet& Phi) {
  EquatorFieldSet out;
  out.fns.resize(Phi.fns.size());
  for (size_t i = 0; i < Phi.fns.size(); ++i)
    out.fns[i] = euler_lagrange(rho, fam.charts[i], Phi.fns[i]);
  return out;
}

EquatorFunction el_conformal_derivative(const HarmonicField& rho, const EquatorChart& chart,
                                        const EquatorFunction& phi, const HarmonicField& f) {
  const int n = chart.n;
  GraphNodes gn = graph_nodes(chart, phi);
  Eigen::VectorXd Hv = euler_lagrange_density(rho, chart, phi);
  Eigen::VectorXd vals(chart.node_count());
  for (int q = 0; q < chart.node_count(); ++q) {
    const Vec& y = gn.point[static_cast<size_t>(q)];
    const double cf = std::cos(gn.phi[static_cast<size_t>(q)]);
    const double e = std::exp((n - 1) * rho.value(y));
    vals[q] = (n - 1) * f.value(y) * Hv[q] +
              (n - 1) * std::pow(cf, n - 1) * dot(f.gradient(y), gn.normal[static_cast<size_t>(q)]) * e;
  }
  return EquatorFunction::from_nodes(chart, vals);
}

EquatorFieldSet el_conformal_derivative_family(const HarmonicField& rho, const EquatorFamily& fam,
                                               const EquatorFieldSet& Phi, const HarmonicField& f) {
  EquatorFieldSet out;
  out.fns.resize(Phi.fns.size());
  for (size_t i = 0; i < Phi.fns.size(); ++i)
    out.fns[i] = el_conformal_derivative(rho, fam.charts[i], Phi.fns[i], f);
  return out;
}

namespace {

EquatorFunction apply_jacobi_coeffs(const EquatorChart& chart, const ElCoeffs& co,
                                    const Eigen::VectorXd& psi_vals,
                                    const std::vector<Vec>& psi_grads) {
  const int Q = co.Q;
  Eigen::VectorXd pointwise(Q);
  std::vector<Vec> W(static_cast<size_t>(Q));
  for (int q = 0; q < Q; ++q) {
    const Vec& gpsi = psi_grads[static_cast<size_t>(q)];
    const Vec& aul = co.A_UL[static_cast<size_t>(q)];
    pointwise[q] = co.A_UU[static_cast<size_t>(q)] * psi_vals[q] + dot(aul, gpsi);
    const Eigen::Matrix3d& M = co.A_LL[static_cast<size_t>(q)];
    Vec w = psi_vals[q] * aul;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) w[i] += M(i, j) * gpsi[j];
    W[static_cast<size_t>(q)] = w;
  }
  return EquatorFunction::from_nodes(chart, pointwise) - weak_divergence(chart, W);
}

}  // namespace

Eigen::MatrixXd jacobi_matrix(const HarmonicField& rho, const EquatorChart& chart,
                              const EquatorFunction& phi) {
  const ElCoeffs co = el_coeffs(rho, chart, phi, true);
  const ChartTables& T = chart_tables(chart);
  const int nm = static_cast<int>(T.Y.cols());
  Eigen::MatrixXd J(nm, nm);
  std::vector<Vec> grads(static_cast<size_t>(co.Q));
  for (int k = 0; k < nm; ++k) {
    Eigen::VectorXd vals = T.Y.col(k);
    for (int q = 0; q < co.Q; ++q)
      grads[static_cast<size_t>(q)] = Vec(T.G[0](q, k), T.G[1](q, k), T.G[2](q, k));
    J.col(k) = apply_jacobi_coeffs(chart, co, vals, grads).modes();
  }
  return J;
}

EquatorFunction apply_jacobi(const HarmonicField& rho, const EquatorChart& chart,
                             const EquatorFunction& phi, const EquatorFunction& psi) {
  const ElCoeffs co = el_coeffs(rho, chart, phi, true);
  return apply_jacobi_coeffs(chart, co, psi.node_values(chart), psi.node_grads_frame(chart));
}

EquatorFunction apply_projected_jacobi(const HarmonicField& rho, const EquatorChart& chart,
                                       const EquatorFunction& phi, const EquatorFunction& psi) {
  return apply_jacobi(rho, chart, phi, psi.without_degree_one()).without_degree_one();
}

namespace {

std::vector<int> nondeg1_indices(int n, int nm) {
  std::vector<int> idx;
  for (int k = 0; k < nm; ++k) {
    const bool deg1 = (n == 2) ? (k == 1 || k == 2) : (k >= 1 && k <= 3);
    if (!deg1) idx.push_back(k);
  }
  return idx;
}

}  // namespace

EquatorFunction solve_projected_jacobi(const HarmonicField& rho, const EquatorChart& chart,
                                       const EquatorFunction& phi, const EquatorFunction& rhs) {
  const Eigen::MatrixXd J = jacobi_matrix(rho, chart, phi);
  const int nm = static_cast<int>(J.rows());
  const std::vector<int> idx = nondeg1_indices(chart.n, nm);
  const int m = static_cast<int>(idx.size());
  Eigen::MatrixXd Jp(m, m);
  Eigen::VectorXd b(m);
  for (int i = 0; i < m; ++i) {
    b[i] = rhs.modes()[idx[static_cast<size_t>(i)]];
    for (int j = 0; j < m; ++j) Jp(i, j) = J(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(j)]);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Jp, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.singularValues()[m - 1] < 1e-8)
    throw NumericalError("solve_projected_jacobi: projected operator numerically singular");
  Eigen::VectorXd sol = svd.solve(b);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(nm);
  for (int i = 0; i < m; ++i) out[idx[static_cast<size_t>(i)]] = sol[i];
  return EquatorFunction(chart.n, chart.band, std::move(out));
}

EquatorFieldSet solution_map(const HarmonicField& rho, const EquatorFamily& fam,
                             const EquatorFieldSet& Phi, const EquatorFieldSet& rhs) {
  EquatorFieldSet out;
  out.fns.resize(rhs.fns.size());
  for (size_t i = 0; i < rhs.fns.size(); ++i)
    out.fns[i] = solve_projected_jacobi(rho, fam.charts[i], Phi.fns[i],
                                        rhs.fns[i].without_degree_one());
  return out;
}

double EvenOneForm::sup_norm() const {
  double m = 0.0;
  for (const Vec& x : X) m = std::max(m, norm(x));
  return m;
}

EvenOneForm& EvenOneForm::operator-=(const EvenOneForm& o) {
  if (X.size() != o.X.size()) throw UsageError("EvenOneForm: size mismatch");
  for (size_t i = 0; i < X.size(); ++i) X[i] -= o.X[i];
  return *this;
}

double center_alpha(int n) { return n / sphere_area(n - 1); }

EvenOneForm center_map(const EquatorFamily& fam, const EquatorFieldSet& Psi) {
  EvenOneForm out;
  out.X.resize(Psi.fns.size());
  for (size_t i = 0; i < Psi.fns.size(); ++i) {
    const EquatorChart& ch = fam.charts[i];
    Eigen::VectorXd vals = Psi.fns[i].node_values(ch);
    Vec X;
    for (int q = 0; q < ch.node_count(); ++q)
      X += (ch.weights[static_cast<size_t>(q)] * vals[q]) * ch.nodes[static_cast<size_t>(q)];
    out.X[i] = reject(X, ch.v);
  }
  return out;
}

EquatorFieldSet embed_center(const EquatorFamily& fam, const EvenOneForm& omega) {
  const double alpha = center_alpha(fam.n);
  EquatorFieldSet out;
  out.fns.resize(omega.X.size());
  for (size_t i = 0; i < omega.X.size(); ++i) {
    const EquatorChart& ch = fam.charts[i];
    Eigen::VectorXd vals(ch.node_count());
    for (int q = 0; q < ch.node_count(); ++q)
      vals[q] = alpha * dot(omega.X[i], ch.nodes[static_cast<size_t>(q)]);
    out.fns[i] = EquatorFunction::from_nodes(ch, vals);
  }
  return out;
}

EquatorFieldSet remove_center(const EquatorFamily& fam, const EquatorFieldSet& Psi) {
  return Psi - embed_center(fam, center_map(fam, Psi));
}

double eta_deformation(const TangentGraphField& Phi, const Vec& x, const Vec& v, const Vec& u) {
  const double xu = dot(x, u);
  const double f = Phi.value(x, v);
  if (std::fabs(f) >= M_PI / 2 - 1e-9) throw UsageError("eta_deformation: |Phi| >= pi/2");
  const double dphi = Phi.directional(x, v, (-xu) * v, u);
  const Vec geq = Phi.equator_gradient(x, v);
  return -xu + dphi - std::tan(f) * dot(geq, u);
}

EvenOneForm constraint_map(const EquatorFamily& fam, const TangentGraphField& Phi,
                           const EquatorFieldSet& Psi) {
  EvenOneForm out;
  out.X.resize(Psi.fns.size());
  for (size_t i = 0; i < Psi.fns.size(); ++i) {
    const EquatorChart& ch = fam.charts[i];
    Eigen::VectorXd vals = Psi.fns[i].node_values(ch);
    Vec K;
    for (int d = 0; d < fam.n; ++d) {
      const Vec& u = ch.frame[static_cast<size_t>(d)];
      double s = 0.0;
      for (int q = 0; q < ch.node_count(); ++q)
        s += ch.weights[static_cast<size_t>(q)] * vals[q] *
             eta_deformation(Phi, ch.nodes[static_cast<size_t>(q)], ch.v, u);
      K += s * u;
    }
    out.X[i] = K;
  }
  return out;
}

HarmonicField even_field_from_grid(const EquatorFamily& fam, const std::vector<double>& values,
                                   int L) {
  const HarmonicBasis& B = shared_basis(fam.n, L);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(B.size());
  std::vector<double> ybuf(static_cast<size_t>(B.size()));
  for (int i = 0; i < fam.grid.size(); ++i) {
    B.eval(fam.grid.reps[static_cast<size_t>(i)], ybuf.data());
    const double w = 2.0 * fam.grid.weights[static_cast<size_t>(i)] * values[static_cast<size_t>(i)];
    for (int a = 0; a < B.size(); ++a)
      if (B.degree_of(a) % 2 == 0) c[a] += w * ybuf[static_cast<size_t>(a)];
  }
  return HarmonicField(fam.n, L, std::move(c), Parity::Even);
}

ConstraintReport verify_variational_constraint(const HarmonicField& rho, const EquatorFamily& fam,
                                               const TangentGraphField& Phi) {
  // the K side integrates the full pointwise density against eta
  EvenOneForm K;
  K.X.resize(static_cast<size_t>(fam.grid.size()));
  for (int i = 0; i < fam.grid.size(); ++i) {
    const EquatorChart& ch = fam.charts[static_cast<size_t>(i)];
    Eigen::VectorXd dens = euler_lagrange_density(rho, ch, Phi.per_rep().fns[static_cast<size_t>(i)]);
    Vec Kv;
    for (int d = 0; d < fam.n; ++d) {
      const Vec& u = ch.frame[static_cast<size_t>(d)];
      double s = 0.0;
      for (int q = 0; q < ch.node_count(); ++q)
        s += ch.weights[static_cast<size_t>(q)] * dens[q] *
             eta_deformation(Phi, ch.nodes[static_cast<size_t>(q)], ch.v, u);
      Kv += s * u;
    }
    K.X[static_cast<size_t>(i)] = Kv;
  }
  const AreaProfile A = area_profile(rho, fam, Phi.per_rep());
  const HarmonicField Af = even_field_from_grid(fam, A.values, fam.grid.band_limit);

  ConstraintReport rep;
  rep.per_rep.resize(static_cast<size_t>(fam.grid.size()));
  for (int i = 0; i < fam.grid.size(); ++i) {
    const EquatorChart& ch = fam.charts[static_cast<size_t>(i)];
    const Vec dA = Af.gradient(ch.v);
    rep.d_area_norm = std::max(rep.d_area_norm, norm(dA));
    double r = 0.0;
    for (int d = 0; d < fam.n; ++d) {
      const Vec& u = ch.frame[static_cast<size_t>(d)];
      r = std::max(r, std::fabs(dot(K.X[static_cast<size_t>(i)], u) - dot(dA, u)));
    }
    rep.per_rep[static_cast<size_t>(i)] = r;
    rep.residual = std::max(rep.residual, r);
  }
  return rep;
}

}  // namespace zollfunk
