#include "zollfunk/tangent_field.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "zollfunk/errors.hpp"

namespace zollfunk {

// ---------------------------------------------------------------------------
// EquatorFieldSet

EquatorFieldSet& EquatorFieldSet::operator+=(const EquatorFieldSet& o) {
  if (fns.size() != o.fns.size()) throw UsageError("EquatorFieldSet: size mismatch");
  for (size_t i = 0; i < fns.size(); ++i) fns[i] += o.fns[i];
  return *this;
}
EquatorFieldSet& EquatorFieldSet::operator-=(const EquatorFieldSet& o) {
  if (fns.size() != o.fns.size()) throw UsageError("EquatorFieldSet: size mismatch");
  for (size_t i = 0; i < fns.size(); ++i) fns[i] -= o.fns[i];
  return *this;
}
EquatorFieldSet& EquatorFieldSet::operator*=(double s) {
  for (auto& f : fns) f *= s;
  return *this;
}
EquatorFieldSet operator+(EquatorFieldSet a, const EquatorFieldSet& b) { return a += b; }
EquatorFieldSet operator-(EquatorFieldSet a, const EquatorFieldSet& b) { return a -= b; }
EquatorFieldSet operator*(double s, EquatorFieldSet a) { return a *= s; }

double EquatorFieldSet::linf(const EquatorFamily& fam) const {
  double m = 0.0;
  for (size_t i = 0; i < fns.size(); ++i)
    m = std::max(m, fns[i].linf_nodes(fam.charts[i]));
  return m;
}

double EquatorFieldSet::max_degree_one_norm() const {
  double m = 0.0;
  for (const auto& f : fns) m = std::max(m, f.degree_one_norm());
  return m;
}

EquatorFieldSet EquatorFieldSet::without_degree_one() const {
  EquatorFieldSet out;
  out.fns.reserve(fns.size());
  for (const auto& f : fns) out.fns.push_back(f.without_degree_one());
  return out;
}

// ---------------------------------------------------------------------------
// TangentBundleBasis

TangentBundleBasis::TangentBundleBasis(int n, int J) : n_(n), J_(J) {
  if (J < 1) throw UsageError("TangentBundleBasis: joint degree must be >= 1");
  bx_ = &shared_basis(n, J - 1);
  bv_ = &shared_basis(n, J);
  for (int b = 0; b < bv_->size(); ++b) {
    const int lb = bv_->degree_of(b);
    if (lb % 2 == 0) continue;
    for (int a = 0; a < bx_->size(); ++a) {
      if (bx_->degree_of(a) + lb <= J) pairs_.emplace_back(a, b);
    }
  }
}

void TangentBundleBasis::tables(const Vec& x, const Vec& v, bool with_grad, Eval* e) const {
  e->with_grad = with_grad;
  e->yx.resize(static_cast<size_t>(bx_->size()));
  e->yv.resize(static_cast<size_t>(bv_->size()));
  if (with_grad) {
    e->gx.resize(static_cast<size_t>(bx_->size()));
    e->gv.resize(static_cast<size_t>(bv_->size()));
    bx_->eval_grad(x, e->yx.data(), e->gx.data());
    bv_->eval_grad(v, e->yv.data(), e->gv.data());
  } else {
    bx_->eval(x, e->yx.data());
    bv_->eval(v, e->yv.data());
  }
}

double TangentBundleBasis::value(const Eigen::VectorXd& c, const Eval& e) const {
  double s = 0.0;
  for (size_t k = 0; k < pairs_.size(); ++k)
    s += c[static_cast<Eigen::Index>(k)] * e.yx[static_cast<size_t>(pairs_[k].first)] *
         e.yv[static_cast<size_t>(pairs_[k].second)];
  return s;
}

void TangentBundleBasis::gradients(const Eigen::VectorXd& c, const Vec& x, const Vec& v,
                                   const Eval& e, Vec* grad_x, Vec* grad_v) const {
  Vec sgx, sgv;
  double radial_x = 0.0, radial_v = 0.0;
  for (size_t k = 0; k < pairs_.size(); ++k) {
    const int a = pairs_[k].first, b = pairs_[k].second;
    const double ck = c[static_cast<Eigen::Index>(k)];
    const double ya = e.yx[static_cast<size_t>(a)], yb = e.yv[static_cast<size_t>(b)];
    if (grad_x) {
      sgx += (ck * yb) * e.gx[static_cast<size_t>(a)];
      radial_x += ck * yb * bx_->degree_of(a) * ya;
    }
    if (grad_v) {
      sgv += (ck * ya) * e.gv[static_cast<size_t>(b)];
      radial_v += ck * ya * bv_->degree_of(b) * yb;
    }
  }
  if (grad_x) *grad_x = sgx - radial_x * x;
  if (grad_v) *grad_v = sgv - radial_v * v;
}

// ---------------------------------------------------------------------------
// TangentFieldFitter

TangentFieldFitter::TangentFieldFitter(const EquatorFamily& fam, int J)
    : basis_(fam.n, J) {
  const int N = basis_.size();
  const int NA = basis_.xbasis().size();
  const int NB = basis_.vbasis().size();
  const int R = fam.grid.size();

  xtabs_.resize(static_cast<size_t>(R));
  vtabs_.resize(static_cast<size_t>(R));
  {
    std::vector<double> ybuf;
    for (int i = 0; i < R; ++i) {
      const EquatorChart& ch = fam.charts[static_cast<size_t>(i)];
      const int Q = ch.node_count();
      xtabs_[static_cast<size_t>(i)].resize(Q, NA);
      ybuf.resize(static_cast<size_t>(NA));
      for (int q = 0; q < Q; ++q) {
        basis_.xbasis().eval(ch.nodes[static_cast<size_t>(q)], ybuf.data());
        for (int a = 0; a < NA; ++a) xtabs_[static_cast<size_t>(i)](q, a) = ybuf[static_cast<size_t>(a)];
      }
      vtabs_[static_cast<size_t>(i)].resize(NB);
      ybuf.resize(static_cast<size_t>(NB));
      basis_.vbasis().eval(fam.grid.reps[static_cast<size_t>(i)], ybuf.data());
      for (int b = 0; b < NB; ++b) vtabs_[static_cast<size_t>(i)][b] = ybuf[static_cast<size_t>(b)];
    }
  }

  // Weighted normal matrix over all (rep, node) samples.
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N, N);
  for (int i = 0; i < R; ++i) {
    const EquatorChart& ch = fam.charts[static_cast<size_t>(i)];
    const Eigen::MatrixXd& yx = xtabs_[static_cast<size_t>(i)];
    Eigen::VectorXd w(ch.node_count());
    for (int q = 0; q < ch.node_count(); ++q) w[q] = ch.weights[static_cast<size_t>(q)];
    Eigen::MatrixXd xg = yx.transpose() * (w.asDiagonal() * yx);  // NA x NA
    const double wg = fam.grid.weights[static_cast<size_t>(i)];
    const Eigen::VectorXd& yv = vtabs_[static_cast<size_t>(i)];
    for (int k = 0; k < N; ++k) {
      const auto [ak, bk] = basis_.pairs()[static_cast<size_t>(k)];
      const double wvk = wg * yv[bk];
      for (int m = k; m < N; ++m) {
        const auto [am, bm] = basis_.pairs()[static_cast<size_t>(m)];
        A(k, m) += wvk * yv[bm] * xg(ak, am);
      }
    }
  }
  A = A.selfadjointView<Eigen::Upper>();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A);
  if (eig.info() != Eigen::Success) throw NumericalError("TangentFieldFitter: eigendecomposition failed");
  eigvec_ = eig.eigenvectors();
  const Eigen::VectorXd& ev = eig.eigenvalues();
  const double cutoff = 1e-11 * ev.cwiseAbs().maxCoeff();
  inv_eval_.resize(N);
  for (int k = 0; k < N; ++k) inv_eval_[k] = ev[k] > cutoff ? 1.0 / ev[k] : 0.0;

  // Degree-one constraint rows: per rep i and frame direction d,
  // \int_{Sigma_v} B_k(x, v_i) <x, f_d> dA(x).
  const int n = fam.n;
  constraint_.resize(R * n, N);
  for (int i = 0; i < R; ++i) {
    const EquatorChart& ch = fam.charts[static_cast<size_t>(i)];
    const Eigen::MatrixXd& yx = xtabs_[static_cast<size_t>(i)];
    const int Q = ch.node_count();
    Eigen::MatrixXd wl(Q, n);
    for (int q = 0; q < Q; ++q)
      for (int d = 0; d < n; ++d)
        wl(q, d) = ch.weights[static_cast<size_t>(q)] * ch.nhat[static_cast<size_t>(q)][d];
    Eigen::MatrixXd xmom = wl.transpose() * yx;  // n x NA
    const Eigen::VectorXd& yv = vtabs_[static_cast<size_t>(i)];
    for (int k = 0; k < N; ++k) {
      const auto [ak, bk] = basis_.pairs()[static_cast<size_t>(k)];
      for (int d = 0; d < n; ++d) constraint_(i * n + d, k) = xmom(d, ak) * yv[bk];
    }
  }
  {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(constraint_, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double cut = 1e-12 * sv[0];
    Eigen::VectorXd inv = sv;
    for (int k = 0; k < inv.size(); ++k) inv[k] = sv[k] > cut ? 1.0 / sv[k] : 0.0;
    constraint_pinv_ = svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
  }
}

Eigen::VectorXd TangentFieldFitter::fit(const EquatorFamily& fam, const EquatorFieldSet& data,
                                        bool project_zero_degree_one) const {
  const int N = basis_.size();
  const int R = fam.grid.size();
  if (data.size() != R) throw UsageError("TangentFieldFitter::fit: rep count mismatch");

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(N);
  for (int i = 0; i < R; ++i) {
    const EquatorChart& ch = fam.charts[static_cast<size_t>(i)];
    Eigen::VectorXd vals = data.fns[static_cast<size_t>(i)].node_values(ch);
    Eigen::VectorXd wvals(vals.size());
    for (int q = 0; q < vals.size(); ++q) wvals[q] = ch.weights[static_cast<size_t>(q)] * vals[q];
    Eigen::VectorXd xmom = xtabs_[static_cast<size_t>(i)].transpose() * wvals;
    const double wg = fam.grid.weights[static_cast<size_t>(i)];
    const Eigen::VectorXd& yv = vtabs_[static_cast<size_t>(i)];
    for (int k = 0; k < N; ++k) {
      const auto [ak, bk] = basis_.pairs()[static_cast<size_t>(k)];
      rhs[k] += wg * xmom(ak) * yv[bk];
    }
  }
  Eigen::VectorXd c = eigvec_ * (inv_eval_.asDiagonal() * (eigvec_.transpose() * rhs));
  if (project_zero_degree_one) c -= constraint_pinv_ * (constraint_ * c);
  return c;
}

EquatorFieldSet TangentFieldFitter::restrict_to_family(const EquatorFamily& fam,
                                                       const Eigen::VectorXd& c) const {
  const int NA = basis_.xbasis().size();
  const int R = fam.grid.size();
  EquatorFieldSet out;
  out.fns.resize(static_cast<size_t>(R));
  for (int i = 0; i < R; ++i) {
    Eigen::VectorXd cx = Eigen::VectorXd::Zero(NA);  // x-coefficients of Phi(., v_i)
    const Eigen::VectorXd& yv = vtabs_[static_cast<size_t>(i)];
    for (int k = 0; k < basis_.size(); ++k) {
      const auto [ak, bk] = basis_.pairs()[static_cast<size_t>(k)];
      cx[ak] += c[k] * yv[bk];
    }
    Eigen::VectorXd vals = xtabs_[static_cast<size_t>(i)] * cx;
    out.fns[static_cast<size_t>(i)] =
        EquatorFunction::from_nodes(fam.charts[static_cast<size_t>(i)], vals);
  }
  return out;
}

const TangentFieldFitter& tangent_fitter(const EquatorFamily& fam, int J) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int, int, int>, std::unique_ptr<TangentFieldFitter>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(fam.n, fam.grid.band_limit, fam.Q, fam.chart_band * 1000 + fam.L, J);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, std::make_unique<TangentFieldFitter>(fam, J)).first;
  return *it->second;
}

// ---------------------------------------------------------------------------
// TangentGraphField

TangentGraphField::TangentGraphField(const EquatorFamily& fam, int J, TangentSubspace subspace)
    : n_(fam.n), J_(J), subspace_(subspace) {
  fitter_ = &tangent_fitter(fam, J);
  c_ = Eigen::VectorXd::Zero(fitter_->basis().size());
  finish(fam, false);
}

TangentGraphField TangentGraphField::fit(const EquatorFamily& fam, int J,
                                         const EquatorFieldSet& data, TangentSubspace subspace,
                                         bool check_small) {
  TangentGraphField f;
  f.n_ = fam.n;
  f.J_ = J;
  f.subspace_ = subspace;
  f.fitter_ = &tangent_fitter(fam, J);
  f.c_ = f.fitter_->fit(fam, data, subspace == TangentSubspace::ZeroOdd);
  f.finish(fam, check_small);
  return f;
}

TangentGraphField TangentGraphField::from_coeffs(const EquatorFamily& fam, int J,
                                                 Eigen::VectorXd c, TangentSubspace subspace,
                                                 bool check_small) {
  TangentGraphField f;
  f.n_ = fam.n;
  f.J_ = J;
  f.subspace_ = subspace;
  f.fitter_ = &tangent_fitter(fam, J);
  if (c.size() != f.fitter_->basis().size())
    throw UsageError("TangentGraphField: coefficient count mismatch");
  f.c_ = std::move(c);
  f.finish(fam, check_small);
  return f;
}

void TangentGraphField::finish(const EquatorFamily& fam, bool check_small) {
  per_rep_ = fitter_->restrict_to_family(fam, c_);
  double m = 0.0;
  for (size_t i = 0; i < per_rep_.fns.size(); ++i) {
    const EquatorChart& ch = fam.charts[i];
    Eigen::VectorXd vals = per_rep_.fns[i].node_values(ch);
    std::vector<Vec> grads = per_rep_.fns[i].node_grads_frame(ch);
    for (int q = 0; q < vals.size(); ++q)
      m = std::max(m, std::fabs(vals[q]) + norm(grads[static_cast<size_t>(q)]));
  }
  c1_bound_ = m;
  if (check_small && c1_bound_ > kEpsGraph)
    throw NumericalError("TangentGraphField: C^1 size " + std::to_string(c1_bound_) +
                         " exceeds the graph-embedding bound " + std::to_string(kEpsGraph));
}

double TangentGraphField::value(const Vec& x, const Vec& v) const {
  thread_local TangentBundleBasis::Eval e;
  fitter_->basis().tables(x, v, false, &e);
  return fitter_->basis().value(c_, e);
}

void TangentGraphField::gradients(const Vec& x, const Vec& v, Vec* grad_x, Vec* grad_v) const {
  thread_local TangentBundleBasis::Eval e;
  fitter_->basis().tables(x, v, true, &e);
  fitter_->basis().gradients(c_, x, v, e, grad_x, grad_v);
}

Vec TangentGraphField::equator_gradient(const Vec& x, const Vec& v) const {
  Vec gx;
  gradients(x, v, &gx, nullptr);
  return reject(gx, v);
}

double TangentGraphField::directional(const Vec& x, const Vec& v, const Vec& dx,
                                      const Vec& dv) const {
  Vec gx, gv;
  gradients(x, v, &gx, &gv);
  return dot(gx, dx) + dot(gv, dv);
}

EquatorFunction TangentGraphField::restrict_to(const EquatorChart& chart) const {
  Eigen::VectorXd vals(chart.node_count());
  for (int q = 0; q < chart.node_count(); ++q)
    vals[q] = value(chart.nodes[static_cast<size_t>(q)], chart.v);
  return EquatorFunction::from_nodes(chart, vals);
}

TangentGraphField& TangentGraphField::operator*=(double s) {
  c_ *= s;
  per_rep_ *= s;
  c1_bound_ *= std::fabs(s);
  return *this;
}

}  // namespace zollfunk
