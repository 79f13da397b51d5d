#include "zollfunk/equator.hpp"

#include <cmath>
#include <mutex>

#include "zollfunk/errors.hpp"
#include "zollfunk/fields.hpp"

namespace zollfunk {

namespace {

std::shared_ptr<const ChartTables> build_tables(const EquatorChart& chart, int M) {
  auto T = std::make_shared<ChartTables>();
  const int Q = chart.node_count();
  T->M = M;
  const int nm = EquatorFunction::mode_count(chart.n, M);
  T->Y.resize(Q, nm);
  for (auto& g : T->G) g = Eigen::MatrixXd::Zero(Q, nm);
  T->w.resize(Q);
  T->mode_degree.resize(static_cast<size_t>(nm));
  for (int i = 0; i < Q; ++i) T->w[i] = chart.weights[static_cast<size_t>(i)];

  if (chart.n == 2) {
    const double c0 = 1.0 / std::sqrt(2.0 * M_PI);
    const double cm = 1.0 / std::sqrt(M_PI);
    T->mode_degree[0] = 0;
    for (int m = 1; m <= M; ++m) {
      T->mode_degree[static_cast<size_t>(2 * m - 1)] = m;
      T->mode_degree[static_cast<size_t>(2 * m)] = m;
    }
    for (int i = 0; i < Q; ++i) {
      const double t = chart.theta[static_cast<size_t>(i)];
      const double tx = -std::sin(t), ty = std::cos(t);
      T->Y(i, 0) = c0;
      for (int m = 1; m <= M; ++m) {
        const double cv = cm * std::cos(m * t), sv = cm * std::sin(m * t);
        T->Y(i, 2 * m - 1) = cv;
        T->Y(i, 2 * m) = sv;
        const double dc = -m * sv, ds = m * cv;  // d/dtheta
        T->G[0](i, 2 * m - 1) = dc * tx;
        T->G[1](i, 2 * m - 1) = dc * ty;
        T->G[0](i, 2 * m) = ds * tx;
        T->G[1](i, 2 * m) = ds * ty;
      }
    }
  } else {
    const HarmonicBasis& B = shared_basis(2, M);
    std::vector<double> vals(static_cast<size_t>(nm));
    std::vector<Vec> grads(static_cast<size_t>(nm));
    for (int k = 0; k < nm; ++k) T->mode_degree[static_cast<size_t>(k)] = B.degree_of(k);
    for (int i = 0; i < Q; ++i) {
      const Vec& nh = chart.nhat[static_cast<size_t>(i)];
      B.eval_grad(nh, vals.data(), grads.data());
      for (int k = 0; k < nm; ++k) {
        T->Y(i, k) = vals[static_cast<size_t>(k)];
        const Vec g = HarmonicBasis::sphere_grad(B.degree_of(k), vals[static_cast<size_t>(k)],
                                                 grads[static_cast<size_t>(k)], nh);
        for (int d = 0; d < 3; ++d) T->G[d](i, k) = g[d];
      }
    }
  }
  return T;
}

}  // namespace

const ChartTables& chart_tables(const EquatorChart& chart) {
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  if (!chart.tables_cache) chart.tables_cache = build_tables(chart, chart.band);
  return *chart.tables_cache;
}

const ChartTables& chart_tables_full(const EquatorChart& chart) {
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  if (!chart.tables_full_cache) {
    const int M = chart.n == 2 ? chart.node_count() / 2 - 2 : chart.ntheta - 1;
    chart.tables_full_cache = build_tables(chart, std::max(M, chart.band));
  }
  return *chart.tables_full_cache;
}

EquatorFunction::EquatorFunction(int n, int M) : n_(n), M_(M) {
  m_ = Eigen::VectorXd::Zero(mode_count(n, M));
}

EquatorFunction::EquatorFunction(int n, int M, Eigen::VectorXd modes)
    : n_(n), M_(M), m_(std::move(modes)) {
  if (m_.size() != mode_count(n, M)) throw UsageError("EquatorFunction: mode count mismatch");
}

int EquatorFunction::mode_count(int n, int M) {
  return n == 2 ? 2 * M + 1 : (M + 1) * (M + 1);
}

EquatorFunction EquatorFunction::from_nodes(const EquatorChart& chart,
                                            const Eigen::VectorXd& node_values) {
  const ChartTables& T = chart_tables(chart);
  if (node_values.size() != T.Y.rows()) throw UsageError("from_nodes: node count mismatch");
  Eigen::VectorXd c = T.Y.transpose() * (T.w.asDiagonal() * node_values);
  return EquatorFunction(chart.n, chart.band, std::move(c));
}

EquatorFunction project_nodes(const EquatorChart& chart, const Eigen::VectorXd& node_values) {
  return EquatorFunction::from_nodes(chart, node_values);
}

Eigen::VectorXd EquatorFunction::node_values(const EquatorChart& chart) const {
  const ChartTables& T = chart_tables(chart);
  return T.Y * m_;
}

std::vector<Vec> EquatorFunction::node_grads_frame(const EquatorChart& chart) const {
  const ChartTables& T = chart_tables(chart);
  std::vector<Vec> out(static_cast<size_t>(T.Y.rows()));
  Eigen::VectorXd gx = T.G[0] * m_;
  Eigen::VectorXd gy = T.G[1] * m_;
  Eigen::VectorXd gz = T.G[2] * m_;
  for (Eigen::Index i = 0; i < gx.size(); ++i)
    out[static_cast<size_t>(i)] = Vec(gx[i], gy[i], gz[i]);
  return out;
}

double EquatorFunction::value_frame(const Vec& fc) const {
  if (n_ == 2) {
    const double t = std::atan2(fc[1], fc[0]);
    double s = m_[0] / std::sqrt(2.0 * M_PI);
    const double cm = 1.0 / std::sqrt(M_PI);
    for (int m = 1; m <= M_; ++m)
      s += cm * (m_[2 * m - 1] * std::cos(m * t) + m_[2 * m] * std::sin(m * t));
    return s;
  }
  const HarmonicBasis& B = shared_basis(2, M_);
  thread_local std::vector<double> vals;
  vals.resize(static_cast<size_t>(B.size()));
  B.eval(normalized(fc), vals.data());
  double s = 0.0;
  for (int k = 0; k < B.size(); ++k) s += m_[k] * vals[static_cast<size_t>(k)];
  return s;
}

double EquatorFunction::value_ambient(const EquatorChart& chart, const Vec& x) const {
  return value_frame(chart.pull(x));
}

Vec EquatorFunction::grad_ambient(const EquatorChart& chart, const Vec& x) const {
  const Vec fc = chart.pull(x);
  if (n_ == 2) {
    const double t = std::atan2(fc[1], fc[0]);
    const double cm = 1.0 / std::sqrt(M_PI);
    double d = 0.0;
    for (int m = 1; m <= M_; ++m)
      d += cm * m * (-m_[2 * m - 1] * std::sin(m * t) + m_[2 * m] * std::cos(m * t));
    const Vec tf = Vec(-std::sin(t), std::cos(t), 0.0);
    return chart.push(d * tf);
  }
  const HarmonicBasis& B = shared_basis(2, M_);
  thread_local std::vector<double> vals;
  thread_local std::vector<Vec> grads;
  vals.resize(static_cast<size_t>(B.size()));
  grads.resize(static_cast<size_t>(B.size()));
  const Vec nh = normalized(fc);
  B.eval_grad(nh, vals.data(), grads.data());
  Vec g;
  for (int k = 0; k < B.size(); ++k)
    g += m_[k] * HarmonicBasis::sphere_grad(B.degree_of(k), vals[static_cast<size_t>(k)],
                                            grads[static_cast<size_t>(k)], nh);
  return chart.push(g);
}

EquatorFunction EquatorFunction::laplacian() const {
  Eigen::VectorXd c = m_;
  if (n_ == 2) {
    c[0] = 0.0;
    for (int m = 1; m <= M_; ++m) {
      c[2 * m - 1] *= -static_cast<double>(m) * m;
      c[2 * m] *= -static_cast<double>(m) * m;
    }
  } else {
    const HarmonicBasis& B = shared_basis(2, M_);
    for (int k = 0; k < size(); ++k) {
      const int l = B.degree_of(k);
      c[k] *= -static_cast<double>(l) * (l + 1);
    }
  }
  return EquatorFunction(n_, M_, std::move(c));
}

Vec EquatorFunction::degree_one_frame() const {
  if (n_ == 2) {
    if (M_ < 1) return Vec();
    const double cm = 1.0 / std::sqrt(M_PI);
    return Vec(cm * m_[1], cm * m_[2], 0.0);
  }
  if (M_ < 1) return Vec();
  const double N = std::sqrt(3.0 / (4.0 * M_PI));
  // chart indices 1,2,3 <-> k=-1,0,+1 <-> y,z,x
  return Vec(N * m_[3], N * m_[1], N * m_[2]);
}

EquatorFunction EquatorFunction::without_degree_one() const {
  Eigen::VectorXd c = m_;
  if (M_ >= 1) {
    if (n_ == 2) c[1] = c[2] = 0.0;
    else c[1] = c[2] = c[3] = 0.0;
  }
  return EquatorFunction(n_, M_, std::move(c));
}

double EquatorFunction::degree_one_norm() const {
  if (M_ < 1) return 0.0;
  if (n_ == 2) return std::hypot(m_[1], m_[2]);
  return std::sqrt(m_[1] * m_[1] + m_[2] * m_[2] + m_[3] * m_[3]);
}

double EquatorFunction::linf_nodes(const EquatorChart& chart) const {
  return node_values(chart).cwiseAbs().maxCoeff();
}

EquatorFunction& EquatorFunction::operator+=(const EquatorFunction& o) {
  if (m_.size() != o.m_.size()) throw UsageError("EquatorFunction: size mismatch");
  m_ += o.m_;
  return *this;
}
EquatorFunction& EquatorFunction::operator-=(const EquatorFunction& o) {
  if (m_.size() != o.m_.size()) throw UsageError("EquatorFunction: size mismatch");
  m_ -= o.m_;
  return *this;
}
EquatorFunction& EquatorFunction::operator*=(double s) {
  m_ *= s;
  return *this;
}
EquatorFunction operator+(EquatorFunction a, const EquatorFunction& b) { return a += b; }
EquatorFunction operator-(EquatorFunction a, const EquatorFunction& b) { return a -= b; }
EquatorFunction operator*(double s, EquatorFunction a) { return a *= s; }

namespace {

Eigen::VectorXd weak_divergence_with(const ChartTables& T, const std::vector<Vec>& field_frame) {
  const int Q = static_cast<int>(T.Y.rows());
  const int nm = static_cast<int>(T.Y.cols());
  if (static_cast<int>(field_frame.size()) != Q) throw UsageError("weak_divergence: node count mismatch");
  Eigen::VectorXd c = Eigen::VectorXd::Zero(nm);
  for (int k = 0; k < nm; ++k) {
    double s = 0.0;
    for (int i = 0; i < Q; ++i) {
      const Vec& W = field_frame[static_cast<size_t>(i)];
      s += T.w[i] * (W[0] * T.G[0](i, k) + W[1] * T.G[1](i, k) + W[2] * T.G[2](i, k));
    }
    c[k] = -s;
  }
  return c;
}

}  // namespace

Eigen::VectorXd divergence_values(const EquatorChart& chart, const std::vector<Vec>& field_frame) {
  const ChartTables& T = chart_tables_full(chart);
  return T.Y * weak_divergence_with(T, field_frame);
}

EquatorFunction weak_divergence(const EquatorChart& chart, const std::vector<Vec>& field_frame) {
  const ChartTables& T = chart_tables(chart);
  Eigen::VectorXd c = weak_divergence_with(T, field_frame);
  return EquatorFunction(chart.n, chart.band, std::move(c));
}

}  // namespace zollfunk
