#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>

#include "zollfunk/vec.hpp"

namespace zollfunk {

/// The quaternion Killing frame of S^3: right-multiplication fields
/// X_i, X_j, X_k followed by left-multiplication fields Y_i, Y_j, Y_k,
/// as skew matrices acting on ambient coordinates (1, i, j, k).
std::array<Eigen::Matrix4d, 6> quaternion_frame();

/// Symmetric Killing two-tensor as a combination of symmetric products of
/// Killing vector fields K(x) = A x (A skew).  All derivatives are closed
/// form.
class KillingTwoTensor {
 public:
  struct Term {
    double coef;
    Eigen::Matrix4d A, B;  // top-left 3x3 block in play for n = 2
  };

  KillingTwoTensor() = default;
  KillingTwoTensor(int n, std::vector<Term> terms);

  /// can = (1/2) sum of E_ab ⊙ E_ab over the rotation basis.
  static KillingTwoTensor round(int n);
  /// k-bar: (1/2) sum alpha_i X_i⊙X_i + (1/2) sum beta_i Y_i⊙Y_i on S^3;
  /// requires alpha_1 > alpha_2 > alpha_3 > beta_1 > beta_2 > beta_3 > 0 and
  /// verifies positive definiteness on samples.
  static KillingTwoTensor diagonal_s3(const std::array<double, 3>& alpha,
                                      const std::array<double, 3>& beta);

  int n() const { return n_; }
  const std::vector<Term>& terms() const { return terms_; }

  double value(const Vec& x, const Vec& u, const Vec& w) const;
  /// (nabla_Z k)(X, Y) in the round connection.
  double nabla(const Vec& x, const Vec& Z, const Vec& X, const Vec& Y) const;
  /// Determinant of k restricted to T_x S^n.
  double det_tangent(const Vec& x) const;
  /// d/dt log det_tangent along the great circle through x in direction Z.
  double dlog_det_tangent(const Vec& x, const Vec& Z) const;

  /// sup over random samples of the cyclic-symmetrized covariant derivative.
  double killing_residual(int samples, unsigned seed) const;
  /// smallest sampled eigenvalue of k on tangent spaces.
  double min_eigenvalue(int samples, unsigned seed) const;

 private:
  int n_ = 3;
  std::vector<Term> terms_;
};

/// Riemannian metric on S^n through a pointwise evaluator; either the
/// closed-form Killing correspondence g = k / D_k, or a generic sampler with
/// finite-difference derivatives (for controls and cross-checks).
class MetricField {
 public:
  using Sampler = std::function<double(const Vec& x, const Vec& u, const Vec& w)>;

  static MetricField from_killing(const KillingTwoTensor& k);
  static MetricField from_sampler(int n, Sampler g);

  int n() const { return n_; }
  double value(const Vec& x, const Vec& u, const Vec& w) const;
  double nabla(const Vec& x, const Vec& Z, const Vec& X, const Vec& Y) const;
  /// dlog(psi)(Z), psi the volume density against the round measure.
  double dlog_volume(const Vec& x, const Vec& Z) const;

 private:
  int n_ = 3;
  bool killing_ = false;
  KillingTwoTensor k_;
  Sampler sampler_;
};

/// Reconstructs the Killing tensor of a metric: k_g = g / F_g with
/// dV_g = F_g^{(n+1)/4} dV_can.
double killing_of_metric(const MetricField& g, const Vec& x, const Vec& u, const Vec& w);

/// sup over random points/directions of the minimal-equator tensor
/// (nabla^can g - 4/(n+1) dlog(psi) ⊗ g)^S.
double equator_residual(const MetricField& g, int samples, unsigned seed);

/// Mean curvature of the equator Sigma_v in (S^n, g) at p, assembled from
/// the metric evaluator by finite differences (independent of the tensor
/// route above).
double equator_mean_curvature(const MetricField& g, const Vec& v, const Vec& p);

/// The linearized isometry action on a diagonal tensor: the 15 x 15 matrix
/// of t -> k.t over the trace-free 4x4 matrices, expressed in the
/// {W_p ⊙ W_q, p < q} basis.
struct RigidityResult {
  Eigen::MatrixXd map;
  Eigen::VectorXd singular_values;
  int kernel_dim = 0;
  double smallest_sv = 0.0;
};
RigidityResult rigidity_map(const std::array<double, 6>& weights, double threshold = 1e-10);

}  // namespace zollfunk
