#pragma once

#include <Eigen/Dense>
#include <memory>

#include "zollfunk/grids.hpp"
#include "zollfunk/vec.hpp"

namespace zollfunk {

/// Cached per-chart basis tables: orthonormal chart-mode values and frame
/// gradients at the quadrature nodes.
struct ChartTables {
  int M = 0;                 // chart band limit
  Eigen::MatrixXd Y;         // node x mode values
  Eigen::MatrixXd G[3];      // node x mode, frame components of sphere gradient
  Eigen::VectorXd w;         // node weights
  std::vector<int> mode_degree;
};

const ChartTables& chart_tables(const EquatorChart& chart);

/// Tables at the highest band the chart's quadrature can still project
/// exactly; used where pointwise (unprojected) densities are needed.
const ChartTables& chart_tables_full(const EquatorChart& chart);

/// Band-limited function on one equator, in the orthonormal chart-mode basis
/// (normalized Fourier modes for n=2, S^2 harmonics in the frame for n=3).
/// The chart is passed alongside rather than owned.
class EquatorFunction {
 public:
  EquatorFunction() = default;
  EquatorFunction(int n, int M);  // zero
  EquatorFunction(int n, int M, Eigen::VectorXd modes);

  static int mode_count(int n, int M);
  static EquatorFunction from_nodes(const EquatorChart& chart, const Eigen::VectorXd& node_values);

  int n() const { return n_; }
  int band() const { return M_; }
  const Eigen::VectorXd& modes() const { return m_; }
  Eigen::VectorXd& modes() { return m_; }
  int size() const { return static_cast<int>(m_.size()); }

  Eigen::VectorXd node_values(const EquatorChart& chart) const;
  /// Frame-coordinate sphere gradients at all nodes.
  std::vector<Vec> node_grads_frame(const EquatorChart& chart) const;

  double value_frame(const Vec& frame_coords) const;
  double value_ambient(const EquatorChart& chart, const Vec& x) const;
  /// Tangential gradient (ambient coordinates) at a point of the equator.
  Vec grad_ambient(const EquatorChart& chart, const Vec& x) const;

  /// Exact Laplace-Beltrami of the chart sphere S^{n-1} in mode space.
  EquatorFunction laplacian() const;

  /// Degree-1 (linear) part; u on the chart sphere with phi_1 = <nhat, u>.
  Vec degree_one_frame() const;
  EquatorFunction without_degree_one() const;
  double degree_one_norm() const;

  double linf_nodes(const EquatorChart& chart) const;
  double l2_norm() const { return m_.norm(); }

  EquatorFunction& operator+=(const EquatorFunction& o);
  EquatorFunction& operator-=(const EquatorFunction& o);
  EquatorFunction& operator*=(double s);

 private:
  int n_ = 0;   // ambient sphere dimension (equator is S^{n-1})
  int M_ = -1;
  Eigen::VectorXd m_;
};

EquatorFunction operator+(EquatorFunction a, const EquatorFunction& b);
EquatorFunction operator-(EquatorFunction a, const EquatorFunction& b);
EquatorFunction operator*(double s, EquatorFunction a);

/// Divergence (as chart modes) of a tangent field on the equator given by
/// frame components at the nodes, via the weak form
/// \int div(W) Y = -\int <W, grad Y>.
EquatorFunction weak_divergence(const EquatorChart& chart, const std::vector<Vec>& field_frame);

/// Pointwise divergence values at the chart nodes, computed at the chart's
/// full spectral resolution rather than the field band limit.
Eigen::VectorXd divergence_values(const EquatorChart& chart, const std::vector<Vec>& field_frame);

/// Project node values of an arbitrary function to chart modes (same as
/// EquatorFunction::from_nodes, kept as a free function for symmetry).
EquatorFunction project_nodes(const EquatorChart& chart, const Eigen::VectorXd& node_values);

}  // namespace zollfunk
