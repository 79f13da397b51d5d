#include "zollfunk/graphs.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "zollfunk/errors.hpp"

namespace zollfunk {

namespace {

Vec graph_point_raw(double phi, const Vec& x, const Vec& v) {
  return std::cos(phi) * x + std::sin(phi) * v;
}

Vec graph_normal_raw(double phi, const Vec& grad_phi, const Vec& x, const Vec& v) {
  const Vec perp = -std::sin(phi) * x + std::cos(phi) * v;
  const Vec unnorm = std::cos(phi) * perp - grad_phi;
  return normalized(unnorm);
}

double graph_jacobian_raw(int n, double phi, const Vec& grad_phi) {
  const double c = std::cos(phi);
  const double s = std::sqrt(c * c + dot(grad_phi, grad_phi));
  return (n == 2 ? 1.0 : std::pow(c, n - 2)) * s;
}

}  // namespace

Vec graph_point(const EquatorChart& chart, const EquatorFunction& phi, const Vec& x) {
  return graph_point_raw(phi.value_ambient(chart, x), x, chart.v);
}

Vec graph_normal(const EquatorChart& chart, const EquatorFunction& phi, const Vec& x) {
  return graph_normal_raw(phi.value_ambient(chart, x), phi.grad_ambient(chart, x), x, chart.v);
}

double graph_jacobian(const EquatorChart& chart, const EquatorFunction& phi, const Vec& x) {
  return graph_jacobian_raw(chart.n, phi.value_ambient(chart, x), phi.grad_ambient(chart, x));
}

Vec graph_tangent(const EquatorChart& chart, const EquatorFunction& phi, const Vec& x, const Vec& u) {
  const double f = phi.value_ambient(chart, x);
  const Vec g = phi.grad_ambient(chart, x);
  const Vec perp = -std::sin(f) * x + std::cos(f) * chart.v;
  return std::cos(f) * u + dot(g, u) * perp;
}

GraphNodes graph_nodes(const EquatorChart& chart, const EquatorFunction& phi) {
  GraphNodes out;
  const int Q = chart.node_count();
  Eigen::VectorXd vals = phi.node_values(chart);
  std::vector<Vec> gf = phi.node_grads_frame(chart);
  out.phi.resize(static_cast<size_t>(Q));
  out.grad_phi.resize(static_cast<size_t>(Q));
  out.point.resize(static_cast<size_t>(Q));
  out.normal.resize(static_cast<size_t>(Q));
  out.jac.resize(static_cast<size_t>(Q));
  for (int q = 0; q < Q; ++q) {
    const Vec& x = chart.nodes[static_cast<size_t>(q)];
    const double f = vals[q];
    const Vec g = chart.push(gf[static_cast<size_t>(q)]);
    out.phi[static_cast<size_t>(q)] = f;
    out.grad_phi[static_cast<size_t>(q)] = g;
    out.point[static_cast<size_t>(q)] = graph_point_raw(f, x, chart.v);
    out.normal[static_cast<size_t>(q)] = graph_normal_raw(f, g, x, chart.v);
    out.jac[static_cast<size_t>(q)] = graph_jacobian_raw(chart.n, f, g);
  }
  return out;
}

void gauss_map(const TangentGraphField& Phi, const Vec& x, const Vec& v, Vec* y, Vec* N) {
  const double f = Phi.value(x, v);
  if (y) *y = graph_point_raw(f, x, v);
  if (N) *N = graph_normal_raw(f, Phi.equator_gradient(x, v), x, v);
}

std::vector<Vec> complement_basis(const std::vector<Vec>& span, int ambient_dim) {
  // Greedy Gram-Schmidt of the standard axes against the span; deterministic.
  std::vector<Vec> out;
  const int want = ambient_dim - static_cast<int>(span.size());
  std::vector<Vec> cand;
  for (int i = 0; i < ambient_dim; ++i) {
    Vec e;
    e[i] = 1.0;
    for (const Vec& s : span) e = reject(e, s);
    cand.push_back(e);
  }
  while (static_cast<int>(out.size()) < want) {
    int best = -1;
    double bn = 0.05;
    for (size_t i = 0; i < cand.size(); ++i) {
      const double r = norm(cand[i]);
      if (r > bn) { bn = r; best = static_cast<int>(i); }
    }
    if (best < 0) throw NumericalError("complement_basis: degenerate span");
    Vec b = (1.0 / bn) * cand[static_cast<size_t>(best)];
    out.push_back(b);
    for (auto& c : cand) c = reject(c, b);
  }
  return out;
}

GaussInverse gauss_map_inverse(const TangentGraphField& Phi, const Vec& q, const Vec& w,
                               double tol, int max_iter) {
  return gauss_map_inverse(Phi, q, w, q, w, tol, max_iter);
}

GaussInverse gauss_map_inverse(const TangentGraphField& Phi, const Vec& q, const Vec& w,
                               const Vec& x_init, const Vec& v_init, double tol, int max_iter) {
  const int n = Phi.n();
  const int d = n + 1;
  if (std::fabs(dot(q, w)) > 1e-10) throw UsageError("gauss_map_inverse: (q,w) not in T_1 S^n");

  // 2n-1 unknowns: v moves around w (n directions), x moves around q within
  // the complement of span{q, w} (n-1 directions); the projection onto the
  // moving equator supplies the remaining motion of x along w.
  const auto frame_w = orthonormal_frame(w, n);
  const std::vector<Vec> xdirs = complement_basis({q, w}, d);
  const int nz = 2 * n - 1;
  Eigen::VectorXd z = Eigen::VectorXd::Zero(nz);
  if (dot(v_init, w) > 0.5 && dot(x_init, q) > 0.5) {
    for (int i = 0; i < n; ++i)
      z[i] = dot(v_init, frame_w[static_cast<size_t>(i)]) / dot(v_init, w);
    for (int i = 0; i < n - 1; ++i)
      z[n + i] = dot(x_init, xdirs[static_cast<size_t>(i)]) / dot(x_init, q);
  }

  auto assemble = [&](const Eigen::VectorXd& zz, Vec* xv, Vec* vv) {
    Vec v = w;
    for (int i = 0; i < n; ++i) v += zz[i] * frame_w[static_cast<size_t>(i)];
    v = normalized(v);
    Vec xt = q;
    for (int i = 0; i < n - 1; ++i) xt += zz[n + i] * xdirs[static_cast<size_t>(i)];
    *xv = normalized(reject(xt, v));
    *vv = v;
  };
  auto residual = [&](const Eigen::VectorXd& zz, Eigen::VectorXd* r) {
    Vec x, v, y, N;
    assemble(zz, &x, &v);
    gauss_map(Phi, x, v, &y, &N);
    r->resize(2 * d);
    for (int i = 0; i < d; ++i) {
      (*r)[i] = y[i] - q[i];
      (*r)[d + i] = N[i] - w[i];
    }
  };

  Eigen::VectorXd r;
  residual(z, &r);
  int it = 0;
  for (; it < max_iter; ++it) {
    if (r.norm() < tol) break;
    Eigen::MatrixXd Jm(2 * d, nz);
    const double h = 1e-7;
    for (int k = 0; k < nz; ++k) {
      Eigen::VectorXd zp = z, zm = z;
      zp[k] += h;
      zm[k] -= h;
      Eigen::VectorXd rp, rm;
      residual(zp, &rp);
      residual(zm, &rm);
      Jm.col(k) = (rp - rm) / (2.0 * h);
    }
    Eigen::VectorXd dz = Jm.colPivHouseholderQr().solve(r);
    const double dn = dz.norm();
    if (dn > 0.5) dz *= 0.5 / dn;  // graphs are C^1-small, steps should be too
    z -= dz;
    residual(z, &r);
    if (dn < 1e-15) break;
  }
  if (r.norm() > std::max(tol, 1e-10))
    throw NumericalError("gauss_map_inverse: no convergence (graph field too large?)");
  GaussInverse out;
  assemble(z, &out.x, &out.v);
  out.iterations = it;
  return out;
}

namespace {

struct LevelParts {
  double t, phi, cos_t;
  Vec x;
};

bool level_parts(const Vec& v, const Vec& p, double* s_out, LevelParts* lp) {
  double s = dot(p, v);
  if (s > 1.0) s = 1.0;
  if (s < -1.0) s = -1.0;
  const double c2 = 1.0 - s * s;
  if (c2 < 1e-16) return false;
  lp->t = std::asin(s);
  lp->cos_t = std::sqrt(c2);
  lp->x = (1.0 / lp->cos_t) * (p - s * v);
  *s_out = s;
  return true;
}

}  // namespace

double level_value(const TangentGraphField& Phi, const Vec& v, const Vec& p) {
  double s;
  LevelParts lp;
  if (!level_parts(v, p, &s, &lp)) throw UsageError("level_value: p within 1e-8 of +/-v");
  return std::sin(lp.t - Phi.value(lp.x, v));
}

double level_value_chart(const EquatorChart& chart, const EquatorFunction& phi, const Vec& p) {
  double s;
  LevelParts lp;
  if (!level_parts(chart.v, p, &s, &lp)) throw UsageError("level_value: p within 1e-8 of +/-v");
  return std::sin(lp.t - phi.value_ambient(chart, lp.x));
}

Vec level_gradient_p_chart(const EquatorChart& chart, const EquatorFunction& phi, const Vec& p) {
  double s;
  LevelParts lp;
  if (!level_parts(chart.v, p, &s, &lp)) throw UsageError("level_gradient: p within 1e-8 of +/-v");
  const double f = phi.value_ambient(chart, lp.x);
  const Vec g = phi.grad_ambient(chart, lp.x);
  Vec grad = (std::cos(lp.t - f) / lp.cos_t) * (chart.v - g);
  return reject(grad, p);
}

Vec level_gradient_v(const TangentGraphField& Phi, const Vec& q, const Vec& v) {
  double s;
  LevelParts lp;
  if (!level_parts(v, q, &s, &lp)) throw UsageError("level_gradient_v: q within 1e-8 of +/-v");
  const double f = Phi.value(lp.x, v);
  Vec gx, gv;
  Phi.gradients(lp.x, v, &gx, &gv);
  const double c = lp.cos_t;
  Vec grad = (1.0 + dot(gx, v)) / c * q + (s / c) * gx - gv;
  grad = std::cos(lp.t - f) * grad;
  return reject(grad, v);
}

Vec dual_normal(const TangentGraphField& Phi, const Vec& q, const Vec& w) {
  const GaussInverse gi = gauss_map_inverse(Phi, q, w);
  Vec g = level_gradient_v(Phi, q, gi.v);
  const double r = norm(g);
  if (r < 1e-10) throw NumericalError("dual_normal: degenerate level gradient");
  g = (1.0 / r) * g;
  if (dot(g, q) < 0.0) g = -g;
  return g;
}

GraphIntersection intersect_graphs(const EquatorChart& cs, const EquatorFunction& phis,
                                   const EquatorChart& ct, const EquatorFunction& phit,
                                   int circle_nodes) {
  const double align = std::fabs(dot(cs.v, ct.v));
  if (align > 1.0 - 1e-12) throw UsageError("intersect_graphs: sigma equals tau");
  GraphIntersection out;

  if (cs.n == 2) {
    // Trace the sigma graph and bracket the zeros of the tau level function
    // cyclically.  Near +/-tau the level function is undefined but bounded
    // away from zero with the sign of <p,tau>, which is all bracketing needs.
    const int Ns = 4 * cs.node_count();
    auto level_at = [&](double theta) {
      const Vec x = std::cos(theta) * cs.frame[0] + std::sin(theta) * cs.frame[1];
      const Vec p = graph_point(cs, phis, x);
      const double s = dot(p, ct.v);
      if (std::fabs(s) > 1.0 - 1e-10) return s;
      return level_value_chart(ct, phit, p);
    };
    std::vector<double> vals(static_cast<size_t>(Ns));
    double amp = 0.0;
    for (int i = 0; i < Ns; ++i) {
      vals[static_cast<size_t>(i)] = level_at(2.0 * M_PI * i / Ns);
      amp = std::max(amp, std::fabs(vals[static_cast<size_t>(i)]));
    }
    const double ztol = 1e-14 * amp;
    std::vector<double> roots;
    for (int i = 0; i < Ns; ++i) {
      const int j = (i + 1) % Ns;
      const double fa = vals[static_cast<size_t>(i)], fb = vals[static_cast<size_t>(j)];
      if (std::fabs(fa) <= ztol) {
        roots.push_back(2.0 * M_PI * i / Ns);
        continue;
      }
      if (std::fabs(fb) <= ztol) continue;  // recorded as its own sample
      if (fa * fb < 0.0) {
        double a = 2.0 * M_PI * i / Ns, b = 2.0 * M_PI * (i + 1) / Ns;
        double va = fa;
        for (int k = 0; k < 80; ++k) {
          const double m = 0.5 * (a + b);
          const double fm = level_at(m);
          if (va * fm <= 0.0) b = m;
          else { a = m; va = fm; }
          if (b - a < 1e-14) break;
        }
        roots.push_back(0.5 * (a + b));
      }
    }
    if (roots.size() != 2)
      throw NumericalError("intersect_graphs: expected 2 intersection points, found " +
                           std::to_string(roots.size()));
    for (double th : roots) {
      const Vec x = std::cos(th) * cs.frame[0] + std::sin(th) * cs.frame[1];
      out.points.push_back(graph_point(cs, phis, x));
      out.weights.push_back(1.0);
    }
    return out;
  }

  // n = 3: correct the round intersection circle onto both graphs by a
  // two-constraint Newton step per sample, then use trapezoid arc elements.
  Vec E1, E2;
  {
    // orthonormal basis of span(v_s, v_t)-perp
    Eigen::Matrix<double, 4, 2> Vv;
    for (int i = 0; i < 4; ++i) {
      Vv(i, 0) = cs.v[i];
      Vv(i, 1) = ct.v[i];
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Vv, Eigen::ComputeFullU);
    for (int i = 0; i < 4; ++i) {
      E1[i] = svd.matrixU()(i, 2);
      E2[i] = svd.matrixU()(i, 3);
    }
  }
  const int M = circle_nodes;
  std::vector<Vec> pts(static_cast<size_t>(M));
  for (int k = 0; k < M; ++k) {
    const double al = 2.0 * M_PI * k / M;
    Vec p = std::cos(al) * E1 + std::sin(al) * E2;
    for (int it = 0; it < 60; ++it) {
      const double r1 = level_value_chart(cs, phis, p);
      const double r2 = level_value_chart(ct, phit, p);
      if (std::fabs(r1) + std::fabs(r2) < 1e-13) break;
      const Vec g1 = level_gradient_p_chart(cs, phis, p);
      const Vec g2 = level_gradient_p_chart(ct, phit, p);
      Eigen::Matrix2d G;
      G(0, 0) = dot(g1, g1);
      G(0, 1) = G(1, 0) = dot(g1, g2);
      G(1, 1) = dot(g2, g2);
      Eigen::Vector2d rhs(r1, r2);
      Eigen::Vector2d a = G.ldlt().solve(rhs);
      p = normalized(p - a[0] * g1 - a[1] * g2);
    }
    if (std::fabs(level_value_chart(cs, phis, p)) + std::fabs(level_value_chart(ct, phit, p)) > 1e-10)
      throw NumericalError("intersect_graphs: circle correction failed");
    pts[static_cast<size_t>(k)] = p;
  }
  // arc-length elements from the spectral derivative of the closed curve
  out.points = pts;
  out.weights.resize(static_cast<size_t>(M));
  std::vector<Vec> deriv(static_cast<size_t>(M));
  const int KM = M / 2 - 1;
  for (int d = 0; d < 4; ++d) {
    for (int m = 1; m <= KM; ++m) {
      double am = 0.0, bm = 0.0;
      for (int k = 0; k < M; ++k) {
        const double al = 2.0 * M_PI * k / M;
        am += pts[static_cast<size_t>(k)][d] * std::cos(m * al);
        bm += pts[static_cast<size_t>(k)][d] * std::sin(m * al);
      }
      am *= 2.0 / M;
      bm *= 2.0 / M;
      for (int k = 0; k < M; ++k) {
        const double al = 2.0 * M_PI * k / M;
        deriv[static_cast<size_t>(k)][d] += m * (-am * std::sin(m * al) + bm * std::cos(m * al));
      }
    }
  }
  for (int k = 0; k < M; ++k)
    out.weights[static_cast<size_t>(k)] = norm(deriv[static_cast<size_t>(k)]) * (2.0 * M_PI / M);
  return out;
}

}  // namespace zollfunk
