#include "zollfunk/fields.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "zollfunk/errors.hpp"

namespace zollfunk {

const HarmonicBasis& shared_basis(int sphere_dim, int L) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<HarmonicBasis>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(sphere_dim, L);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, std::make_unique<HarmonicBasis>(sphere_dim, L)).first;
  return *it->second;
}

HarmonicField::HarmonicField(int n, int L, Parity parity)
    : n_(n), L_(L), parity_(parity) {
  c_ = Eigen::VectorXd::Zero(HarmonicBasis::total_size(n, L));
}

HarmonicField::HarmonicField(int n, int L, Eigen::VectorXd coeffs, Parity parity)
    : n_(n), L_(L), parity_(parity), c_(std::move(coeffs)) {
  if (c_.size() != HarmonicBasis::total_size(n, L))
    throw UsageError("HarmonicField: coefficient count does not match (n, L)");
  enforce_parity();
}

void HarmonicField::enforce_parity() {
  if (parity_ == Parity::Any) return;
  const HarmonicBasis& B = shared_basis(n_, L_);
  for (int i = 0; i < size(); ++i) {
    const bool even = B.degree_of(i) % 2 == 0;
    if ((parity_ == Parity::Even && !even) || (parity_ == Parity::Odd && even)) c_[i] = 0.0;
  }
}

Parity HarmonicField::detect_parity(int n, int L, const Eigen::VectorXd& coeffs) {
  const HarmonicBasis& B = shared_basis(n, L);
  double even_mass = 0.0, odd_mass = 0.0;
  for (int i = 0; i < coeffs.size(); ++i) {
    if (B.degree_of(static_cast<int>(i)) % 2 == 0) even_mass += coeffs[i] * coeffs[i];
    else odd_mass += coeffs[i] * coeffs[i];
  }
  const double tot = std::sqrt(even_mass + odd_mass);
  if (tot == 0.0) return Parity::Any;
  if (std::sqrt(odd_mass) < 1e-10 * tot) return Parity::Even;
  if (std::sqrt(even_mass) < 1e-10 * tot) return Parity::Odd;
  return Parity::Any;
}

HarmonicField HarmonicField::project(int n, int L, const std::function<double(const Vec&)>& f,
                                     Parity parity, int quad_degree) {
  const HarmonicBasis& B = shared_basis(n, L);
  const int D = quad_degree > 0 ? quad_degree : 2 * L + 1;
  const SphereQuad quad = SphereQuad::build(n, D);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(B.size());
  std::vector<double> vals(static_cast<size_t>(B.size()));
  for (size_t s = 0; s < quad.points.size(); ++s) {
    B.eval(quad.points[s], vals.data());
    const double wf = quad.weights[s] * f(quad.points[s]);
    for (int a = 0; a < B.size(); ++a) c[a] += wf * vals[static_cast<size_t>(a)];
  }
  return HarmonicField(n, L, std::move(c), parity);
}

double HarmonicField::value(const Vec& p) const {
  const HarmonicBasis& B = shared_basis(n_, L_);
  thread_local std::vector<double> vals;
  vals.resize(static_cast<size_t>(B.size()));
  B.eval(p, vals.data());
  double s = 0.0;
  for (int a = 0; a < B.size(); ++a) s += c_[a] * vals[static_cast<size_t>(a)];
  return s;
}

Vec HarmonicField::gradient(const Vec& p) const {
  const HarmonicBasis& B = shared_basis(n_, L_);
  thread_local std::vector<double> vals;
  thread_local std::vector<Vec> grads;
  vals.resize(static_cast<size_t>(B.size()));
  grads.resize(static_cast<size_t>(B.size()));
  B.eval_grad(p, vals.data(), grads.data());
  double v = 0.0;
  Vec g;
  double radial = 0.0;
  for (int a = 0; a < B.size(); ++a) {
    v += c_[a] * vals[static_cast<size_t>(a)];
    g += c_[a] * grads[static_cast<size_t>(a)];
    radial += c_[a] * B.degree_of(a) * vals[static_cast<size_t>(a)];
  }
  (void)v;
  return g - radial * p;
}

HarmonicField::SolidJet HarmonicField::solid_jet(const Vec& p) const {
  const HarmonicBasis& B = shared_basis(n_, L_);
  thread_local std::vector<double> vals;
  thread_local std::vector<Vec> grads;
  thread_local std::vector<SymMat4> hesss;
  vals.resize(static_cast<size_t>(B.size()));
  grads.resize(static_cast<size_t>(B.size()));
  hesss.resize(static_cast<size_t>(B.size()));
  B.eval_hess(p, vals.data(), grads.data(), hesss.data());
  SolidJet out;
  for (int a = 0; a < B.size(); ++a) {
    out.value += c_[a] * vals[static_cast<size_t>(a)];
    out.grad += c_[a] * grads[static_cast<size_t>(a)];
    for (int t = 0; t < 10; ++t)
      out.hess.a[static_cast<size_t>(t)] += c_[a] * hesss[static_cast<size_t>(a)].a[static_cast<size_t>(t)];
  }
  return out;
}

void HarmonicField::curve_derivatives(const Vec& p, const Vec& dp, const Vec& ddp,
                                      double* d1, double* d2) const {
  const SolidJet j = solid_jet(p);
  if (d1) *d1 = dot(j.grad, dp);
  if (d2) {
    double q = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 4; ++k) q += dp[i] * dp[k] * j.hess(i, k);
    *d2 = q + dot(j.grad, ddp);
  }
}

double HarmonicField::integral() const {
  // Y_0 = 1/sqrt(omega_n), so the mean-mode coefficient carries the integral.
  return c_[0] * std::sqrt(sphere_area(n_));
}

double HarmonicField::mean() const { return integral() / sphere_area(n_); }

double HarmonicField::linf_estimate() const {
  const SphereQuad quad = SphereQuad::build(n_, 2 * L_ + 8);
  double m = 0.0;
  for (const Vec& p : quad.points) m = std::max(m, std::fabs(value(p)));
  return m;
}

HarmonicField HarmonicField::truncated(int newL) const {
  if (newL == L_) return *this;
  if (newL > L_) return extended(newL);
  Eigen::VectorXd c = c_.head(HarmonicBasis::total_size(n_, newL));
  return HarmonicField(n_, newL, std::move(c), parity_);
}

HarmonicField HarmonicField::extended(int newL) const {
  if (newL == L_) return *this;
  if (newL < L_) return truncated(newL);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(HarmonicBasis::total_size(n_, newL));
  c.head(c_.size()) = c_;
  return HarmonicField(n_, newL, std::move(c), parity_);
}

HarmonicField HarmonicField::with_parity(Parity p) const {
  return HarmonicField(n_, L_, c_, p);
}

HarmonicField& HarmonicField::operator+=(const HarmonicField& o) {
  if (n_ != o.n_ || L_ != o.L_) throw UsageError("HarmonicField: shape mismatch");
  c_ += o.c_;
  if (parity_ != o.parity_) parity_ = Parity::Any;
  return *this;
}

HarmonicField& HarmonicField::operator-=(const HarmonicField& o) {
  if (n_ != o.n_ || L_ != o.L_) throw UsageError("HarmonicField: shape mismatch");
  c_ -= o.c_;
  if (parity_ != o.parity_) parity_ = Parity::Any;
  return *this;
}

HarmonicField& HarmonicField::operator*=(double s) {
  c_ *= s;
  return *this;
}

HarmonicField operator+(HarmonicField a, const HarmonicField& b) { return a += b; }
HarmonicField operator-(HarmonicField a, const HarmonicField& b) { return a -= b; }
HarmonicField operator*(double s, HarmonicField a) { return a *= s; }

HarmonicField helmholtz_solve(const HarmonicField& g, double c, bool project_resonant) {
  const HarmonicBasis& B = shared_basis(g.n(), g.degree());
  Eigen::VectorXd out = Eigen::VectorXd::Zero(g.size());
  const double scale = g.l2_norm();
  for (int a = 0; a < g.size(); ++a) {
    const int l = B.degree_of(a);
    const double denom = -static_cast<double>(l) * (l + g.n() - 1) + c;
    if (std::fabs(denom) < 1e-8) {
      if (!project_resonant && std::fabs(g.coeffs()[a]) > 1e-10 * (1.0 + scale))
        throw NumericalError("helmholtz_solve: resonant component present at degree " + std::to_string(l));
      out[a] = 0.0;
    } else {
      out[a] = g.coeffs()[a] / denom;
    }
  }
  return HarmonicField(g.n(), g.degree(), std::move(out), g.parity());
}

HarmonicField remove_degree_one(const HarmonicField& f) {
  const HarmonicBasis& B = shared_basis(f.n(), f.degree());
  Eigen::VectorXd c = f.coeffs();
  for (int a = 0; a < f.size(); ++a)
    if (B.degree_of(a) == 1) c[a] = 0.0;
  return HarmonicField(f.n(), f.degree(), std::move(c), f.parity());
}

}  // namespace zollfunk
