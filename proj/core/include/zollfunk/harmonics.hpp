#pragma once

#include <array>
#include <vector>

#include "zollfunk/vec.hpp"

namespace zollfunk {

/// Packed symmetric 4x4 matrix (upper triangle, row major).
struct SymMat4 {
  std::array<double, 10> a{};
  static constexpr int idx(int i, int j) {
    if (i > j) { const int t = i; i = j; j = t; }
    return i * 4 - i * (i + 1) / 2 + j;
  }
  double operator()(int i, int j) const { return a[static_cast<size_t>(idx(i, j))]; }
  double& at(int i, int j) { return a[static_cast<size_t>(idx(i, j))]; }
};

/// Real, fully normalized spherical harmonics on S^m (m = sphere dimension,
/// 2 or 3), orthonormal with respect to the surface measure, no
/// Condon-Shortley phase.
///
/// Ordering:
///   m=2: (l, k) with k = -l..l, index = l^2 + (k + l), l = 0..L row major.
///   m=3: (l, lam, k), lam = 0..l, k = -lam..lam; degree-l block is contiguous
///        and internally ordered like the S^2 convention over (lam, k).
///
/// Evaluation is through the solid (homogeneous harmonic polynomial)
/// extension, so values, ambient gradients and ambient Hessians are exact
/// polynomials in the coordinates; no pole special-casing is required.
class HarmonicBasis {
 public:
  HarmonicBasis(int sphere_dim, int max_degree);

  int sphere_dim() const { return m_; }
  int max_degree() const { return L_; }
  int size() const { return size_; }
  int ambient_dim() const { return m_ + 1; }

  static int block_size(int sphere_dim, int l);
  static int block_start(int sphere_dim, int l);
  static int total_size(int sphere_dim, int L);

  int degree_of(int index) const { return degree_[static_cast<size_t>(index)]; }

  /// Values of all basis functions at a point (assumed near-unit).
  void eval(const Vec& p, double* out) const;

  /// Values and ambient gradients of the solid extensions.
  void eval_grad(const Vec& p, double* val, Vec* grad) const;

  /// Values, ambient gradients and ambient Hessians of the solid extensions.
  void eval_hess(const Vec& p, double* val, Vec* grad, SymMat4* hess) const;

  /// Tangential (sphere) gradient at a unit point p from solid data:
  /// grad_S Y = grad_solid - l * Y * p.
  static Vec sphere_grad(int degree, double value, const Vec& solid_grad,
                         const Vec& p) {
    return solid_grad - (static_cast<double>(degree) * value) * p;
  }

 private:
  int m_;
  int L_;
  int size_;
  std::vector<int> degree_;
  std::vector<double> norm_;  // per-basis normalization constant

  template <int ORDER>
  void eval_impl(const Vec& p, double* val, Vec* grad, SymMat4* hess) const;
};

}  // namespace zollfunk
