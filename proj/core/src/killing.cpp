#include "zollfunk/killing.hpp"

#include <cmath>
#include <random>

#include "zollfunk/errors.hpp"
#include "zollfunk/graphs.hpp"

namespace zollfunk {

namespace {

Vec apply(const Eigen::Matrix4d& A, const Vec& x) {
  Vec r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r[i] += A(i, j) * x[j];
  return r;
}

Vec random_unit(std::mt19937& rng, int dim) {
  std::normal_distribution<double> g;
  Vec p;
  for (int i = 0; i <= dim; ++i) p[i] = g(rng);
  return normalized(p);
}

Vec random_tangent(std::mt19937& rng, int dim, const Vec& x) {
  std::normal_distribution<double> g;
  Vec u;
  for (int i = 0; i <= dim; ++i) u[i] = g(rng);
  return normalized(reject(u, x));
}

// parallel transport of X along the great circle through x in direction Z
Vec transport(const Vec& x, const Vec& Z, const Vec& X, double t) {
  const double xz = dot(X, Z);
  return X + (std::cos(t) - 1.0) * xz * Z - std::sin(t) * xz * x;
}

}  // namespace

std::array<Eigen::Matrix4d, 6> quaternion_frame() {
  std::array<Eigen::Matrix4d, 6> W;
  // right multiplication: p -> p q
  W[0] << 0, -1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0, -1, 0;   // X_i
  W[1] << 0, 0, -1, 0, 0, 0, 0, -1, 1, 0, 0, 0, 0, 1, 0, 0;   // X_j
  W[2] << 0, 0, 0, -1, 0, 0, 1, 0, 0, -1, 0, 0, 1, 0, 0, 0;   // X_k
  // left multiplication: p -> q p
  W[3] << 0, -1, 0, 0, 1, 0, 0, 0, 0, 0, 0, -1, 0, 0, 1, 0;   // Y_i
  W[4] << 0, 0, -1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, -1, 0, 0;   // Y_j
  W[5] << 0, 0, 0, -1, 0, 0, -1, 0, 0, 1, 0, 0, 1, 0, 0, 0;   // Y_k
  return W;
}

KillingTwoTensor::KillingTwoTensor(int n, std::vector<Term> terms)
    : n_(n), terms_(std::move(terms)) {
  if (n != 2 && n != 3) throw UsageError("KillingTwoTensor: unsupported dimension");
}

KillingTwoTensor KillingTwoTensor::round(int n) {
  std::vector<Term> terms;
  const int d = n + 1;
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b) {
      Term t;
      t.coef = 0.5;
      t.A = Eigen::Matrix4d::Zero();
      t.A(a, b) = -1.0;
      t.A(b, a) = 1.0;
      t.B = t.A;
      terms.push_back(t);
    }
  return KillingTwoTensor(n, std::move(terms));
}

KillingTwoTensor KillingTwoTensor::diagonal_s3(const std::array<double, 3>& alpha,
                                               const std::array<double, 3>& beta) {
  if (!(alpha[0] > alpha[1] && alpha[1] > alpha[2] && alpha[2] > beta[0] && beta[0] > beta[1] &&
        beta[1] > beta[2] && beta[2] > 0))
    throw UsageError("diagonal_s3: weights must satisfy a1 > a2 > a3 > b1 > b2 > b3 > 0");
  const auto W = quaternion_frame();
  std::vector<Term> terms;
  for (int i = 0; i < 3; ++i) terms.push_back({0.5 * alpha[static_cast<size_t>(i)], W[static_cast<size_t>(i)], W[static_cast<size_t>(i)]});
  for (int i = 0; i < 3; ++i) terms.push_back({0.5 * beta[static_cast<size_t>(i)], W[static_cast<size_t>(i + 3)], W[static_cast<size_t>(i + 3)]});
  KillingTwoTensor k(3, std::move(terms));
  const double mn = k.min_eigenvalue(64, 12345);
  if (mn <= 0.0) throw NumericalError("diagonal_s3: tensor is not positive definite");
  return k;
}

double KillingTwoTensor::value(const Vec& x, const Vec& u, const Vec& w) const {
  double s = 0.0;
  for (const Term& t : terms_) {
    const Vec Ka = apply(t.A, x), Kb = apply(t.B, x);
    s += t.coef * (dot(Ka, u) * dot(Kb, w) + dot(Kb, u) * dot(Ka, w));
  }
  return s;
}

double KillingTwoTensor::nabla(const Vec& x, const Vec& Z, const Vec& X, const Vec& Y) const {
  double s = 0.0;
  for (const Term& t : terms_) {
    const Vec Ka = apply(t.A, x), Kb = apply(t.B, x);
    const Vec dKa = reject(apply(t.A, Z), x);
    const Vec dKb = reject(apply(t.B, Z), x);
    s += t.coef * (dot(dKa, X) * dot(Kb, Y) + dot(Ka, X) * dot(dKb, Y) +
                   dot(dKb, X) * dot(Ka, Y) + dot(Kb, X) * dot(dKa, Y));
  }
  return s;
}

namespace {

// ambient matrix of k with k(x) x = 0; the tangent determinant is
// det(M + x x^T)
Eigen::Matrix4d ambient_matrix(const std::vector<KillingTwoTensor::Term>& terms, const Vec& x) {
  Eigen::Matrix4d M = Eigen::Matrix4d::Zero();
  for (const auto& t : terms) {
    const Vec Ka = apply(t.A, x), Kb = apply(t.B, x);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) M(i, j) += t.coef * (Ka[i] * Kb[j] + Kb[i] * Ka[j]);
  }
  return M;
}

Eigen::Matrix4d ambient_matrix_derivative(const std::vector<KillingTwoTensor::Term>& terms,
                                          const Vec& x, const Vec& Z) {
  Eigen::Matrix4d M = Eigen::Matrix4d::Zero();
  for (const auto& t : terms) {
    const Vec Ka = apply(t.A, x), Kb = apply(t.B, x);
    const Vec dKa = apply(t.A, Z), dKb = apply(t.B, Z);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        M(i, j) += t.coef * (dKa[i] * Kb[j] + Ka[i] * dKb[j] + dKb[i] * Ka[j] + Kb[i] * dKa[j]);
  }
  return M;
}

Eigen::Matrix4d embed_projector(int n, const Vec& x) {
  // x x^T plus, for n = 2, the unit mass on the unused fourth axis
  Eigen::Matrix4d P = Eigen::Matrix4d::Zero();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) P(i, j) = x[i] * x[j];
  if (n == 2) P(3, 3) += 1.0;
  return P;
}

}  // namespace

double KillingTwoTensor::det_tangent(const Vec& x) const {
  return (ambient_matrix(terms_, x) + embed_projector(n_, x)).determinant();
}

double KillingTwoTensor::dlog_det_tangent(const Vec& x, const Vec& Z) const {
  const Eigen::Matrix4d M = ambient_matrix(terms_, x) + embed_projector(n_, x);
  Eigen::Matrix4d dM = ambient_matrix_derivative(terms_, x, Z);
  // the x x^T part moves with the curve: d/dt (x x^T) = Z x^T + x Z^T
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) dM(i, j) += Z[i] * x[j] + x[i] * Z[j];
  return (M.inverse() * dM).trace();
}

double KillingTwoTensor::killing_residual(int samples, unsigned seed) const {
  std::mt19937 rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Vec x = random_unit(rng, n_);
    const Vec X = random_tangent(rng, n_, x);
    const Vec Y = random_tangent(rng, n_, x);
    const Vec Z = random_tangent(rng, n_, x);
    const double cyc = nabla(x, X, Y, Z) + nabla(x, Y, Z, X) + nabla(x, Z, X, Y);
    worst = std::max(worst, std::fabs(cyc));
  }
  return worst;
}

double KillingTwoTensor::min_eigenvalue(int samples, unsigned seed) const {
  std::mt19937 rng(seed);
  double mn = 1e300;
  for (int s = 0; s < samples; ++s) {
    const Vec x = random_unit(rng, n_);
    const std::vector<Vec> tan = complement_basis({x}, n_ + 1);
    Eigen::MatrixXd G(n_, n_);
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b) G(a, b) = value(x, tan[static_cast<size_t>(a)], tan[static_cast<size_t>(b)]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(G);
    mn = std::min(mn, eig.eigenvalues().minCoeff());
  }
  return mn;
}

MetricField MetricField::from_killing(const KillingTwoTensor& k) {
  MetricField g;
  g.n_ = k.n();
  g.killing_ = true;
  g.k_ = k;
  return g;
}

MetricField MetricField::from_sampler(int n, Sampler s) {
  MetricField g;
  g.n_ = n;
  g.killing_ = false;
  g.sampler_ = std::move(s);
  return g;
}

double MetricField::value(const Vec& x, const Vec& u, const Vec& w) const {
  if (!killing_) return sampler_(x, u, w);
  const double D = std::pow(k_.det_tangent(x), 2.0 / (n_ - 1));
  return k_.value(x, u, w) / D;
}

double MetricField::nabla(const Vec& x, const Vec& Z, const Vec& X, const Vec& Y) const {
  if (killing_) {
    const double D = std::pow(k_.det_tangent(x), 2.0 / (n_ - 1));
    const double dlogD = (2.0 / (n_ - 1)) * k_.dlog_det_tangent(x, Z);
    return k_.nabla(x, Z, X, Y) / D - dlogD * k_.value(x, X, Y) / D;
  }
  const double h = 1e-5;
  auto at = [&](double t) {
    const Vec xt = std::cos(t) * x + std::sin(t) * Z;
    return sampler_(xt, transport(x, Z, X, t), transport(x, Z, Y, t));
  };
  return (at(h) - at(-h)) / (2.0 * h);
}

namespace {

double det_tangent_of(const MetricField& g, const Vec& x) {
  const std::vector<Vec> tan = complement_basis({x}, g.n() + 1);
  Eigen::MatrixXd G(g.n(), g.n());
  for (int a = 0; a < g.n(); ++a)
    for (int b = 0; b < g.n(); ++b) G(a, b) = g.value(x, tan[static_cast<size_t>(a)], tan[static_cast<size_t>(b)]);
  return G.determinant();
}

}  // namespace

double MetricField::dlog_volume(const Vec& x, const Vec& Z) const {
  if (killing_) {
    // psi = sqrt(det g) = (det k)^{1/2} D^{-n/2} with D = (det k)^{2/(n-1)}
    return -(n_ + 1.0) / (2.0 * (n_ - 1.0)) * k_.dlog_det_tangent(x, Z);
  }
  const double h = 1e-4;
  auto logdet = [&](double t) {
    const Vec xt = std::cos(t) * x + std::sin(t) * Z;
    return std::log(det_tangent_of(*this, xt));
  };
  return 0.5 * (logdet(h) - logdet(-h)) / (2.0 * h);
}

double killing_of_metric(const MetricField& g, const Vec& x, const Vec& u, const Vec& w) {
  const double F = std::pow(det_tangent_of(g, x), 2.0 / (g.n() + 1));
  return g.value(x, u, w) / F;
}

double equator_residual(const MetricField& g, int samples, unsigned seed) {
  std::mt19937 rng(seed);
  const double c = 4.0 / (g.n() + 1.0);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Vec x = random_unit(rng, g.n());
    const Vec X = random_tangent(rng, g.n(), x);
    const Vec Y = random_tangent(rng, g.n(), x);
    const Vec Z = random_tangent(rng, g.n(), x);
    auto term = [&](const Vec& a, const Vec& b, const Vec& d) {
      return g.nabla(x, d, a, b) - c * g.dlog_volume(x, d) * g.value(x, a, b);
    };
    const double cyc = term(X, Y, Z) + term(Y, Z, X) + term(Z, X, Y);
    worst = std::max(worst, std::fabs(cyc));
  }
  return worst;
}

double equator_mean_curvature(const MetricField& g, const Vec& v, const Vec& p) {
  if (std::fabs(dot(v, p)) > 1e-10) throw UsageError("equator_mean_curvature: p not on Sigma_v");
  const int n = g.n();
  const int d = n + 1;
  // local chart y(s) = normalize(p + sum s_i e_i), e_n aligned with v
  std::vector<Vec> e = complement_basis({p, v}, d);
  e.push_back(v);
  auto chart = [&](const Eigen::VectorXd& s) {
    Vec y = p;
    for (int i = 0; i < n; ++i) y += s[i] * e[static_cast<size_t>(i)];
    return normalized(y);
  };
  auto frame_at = [&](const Eigen::VectorXd& s, int i) {
    Vec y = p;
    for (int k = 0; k < n; ++k) y += s[k] * e[static_cast<size_t>(k)];
    const double r = norm(y);
    const Vec yn = (1.0 / r) * y;
    return (1.0 / r) * reject(e[static_cast<size_t>(i)], yn);
  };
  auto metric_at = [&](const Eigen::VectorXd& s, int i, int j) {
    return g.value(chart(s), frame_at(s, i), frame_at(s, j));
  };

  const double h = 1e-4;
  Eigen::MatrixXd G(n, n);
  std::vector<Eigen::MatrixXd> dG(static_cast<size_t>(n), Eigen::MatrixXd(n, n));
  Eigen::VectorXd s0 = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      G(i, j) = metric_at(s0, i, j);
      for (int k = 0; k < n; ++k) {
        Eigen::VectorXd sp = s0, sm = s0;
        sp[k] += h;
        sm[k] -= h;
        dG[static_cast<size_t>(k)](i, j) = (metric_at(sp, i, j) - metric_at(sm, i, j)) / (2.0 * h);
      }
    }
  Eigen::MatrixXd Ginv = G.inverse();
  // Christoffels of g in the chart
  auto gamma = [&](int k, int i, int j) {
    double s = 0.0;
    for (int l = 0; l < n; ++l)
      s += 0.5 * Ginv(k, l) * (dG[static_cast<size_t>(i)](j, l) + dG[static_cast<size_t>(j)](i, l) - dG[static_cast<size_t>(l)](i, j));
    return s;
  };
  // level function V(y) = <y, v>;  dV/ds_i and Hessian in the chart
  auto level = [&](const Eigen::VectorXd& s) { return dot(chart(s), v); };
  Eigen::VectorXd dV(n);
  Eigen::MatrixXd HV(n, n);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd sp = s0, sm = s0;
    sp[i] += h;
    sm[i] -= h;
    dV[i] = (level(sp) - level(sm)) / (2.0 * h);
    for (int j = 0; j < n; ++j) {
      Eigen::VectorXd spp = s0, spm = s0, smp = s0, smm = s0;
      spp[i] += h; spp[j] += h;
      spm[i] += h; spm[j] -= h;
      smp[i] -= h; smp[j] += h;
      smm[i] -= h; smm[j] -= h;
      HV(i, j) = (level(spp) - level(spm) - level(smp) + level(smm)) / (4.0 * h * h);
    }
  }
  Eigen::MatrixXd Hess(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = HV(i, j);
      for (int k = 0; k < n; ++k) s -= gamma(k, i, j) * dV[k];
      Hess(i, j) = s;
    }
  const double gradnorm = std::sqrt((Ginv * dV).dot(dV));
  // trace over the tangent of Sigma_v: directions e_0 .. e_{n-2}
  Eigen::MatrixXd Gt = G.topLeftCorner(n - 1, n - 1);
  Eigen::MatrixXd Gtinv = Gt.inverse();
  double H = 0.0;
  for (int a = 0; a < n - 1; ++a)
    for (int b = 0; b < n - 1; ++b) H += Gtinv(a, b) * Hess(a, b);
  return H / gradnorm;
}

RigidityResult rigidity_map(const std::array<double, 6>& weights, double threshold) {
  const auto W = quaternion_frame();
  // basis of trace-free 4x4 matrices
  std::vector<Eigen::Matrix4d> tbasis;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (i == j) continue;
      Eigen::Matrix4d T = Eigen::Matrix4d::Zero();
      T(i, j) = 1.0;
      tbasis.push_back(T);
    }
  for (int i = 0; i < 3; ++i) {
    Eigen::Matrix4d T = Eigen::Matrix4d::Zero();
    T(i, i) = 1.0;
    T(i + 1, i + 1) = -1.0;
    tbasis.push_back(T);
  }

  RigidityResult out;
  out.map.resize(15, 15);
  for (size_t col = 0; col < tbasis.size(); ++col) {
    int row = 0;
    for (int p = 0; p < 6; ++p)
      for (int q = p + 1; q < 6; ++q) {
        const double c =
            -0.5 * (weights[static_cast<size_t>(p)] * (W[static_cast<size_t>(q)] * W[static_cast<size_t>(p)] * tbasis[col]).trace() +
                    weights[static_cast<size_t>(q)] * (W[static_cast<size_t>(p)] * W[static_cast<size_t>(q)] * tbasis[col]).trace());
        out.map(row++, static_cast<int>(col)) = c;
      }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(out.map);
  out.singular_values = svd.singularValues();
  out.smallest_sv = out.singular_values[14];
  out.kernel_dim = 0;
  const double cut = threshold * std::max(1.0, out.singular_values[0]);
  for (int i = 0; i < 15; ++i)
    if (out.singular_values[i] < cut) ++out.kernel_dim;
  return out;
}

}  // namespace zollfunk
