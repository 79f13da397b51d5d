#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "zollfunk/equator.hpp"
#include "zollfunk/fields.hpp"
#include "zollfunk/grids.hpp"

namespace zollfunk {

/// One chart function per grid representative; the working form of functions
/// on the unit tangent bundle inside per-equator pipelines.
struct EquatorFieldSet {
  std::vector<EquatorFunction> fns;

  int size() const { return static_cast<int>(fns.size()); }
  EquatorFieldSet& operator+=(const EquatorFieldSet& o);
  EquatorFieldSet& operator-=(const EquatorFieldSet& o);
  EquatorFieldSet& operator*=(double s);
  double linf(const EquatorFamily& fam) const;
  double max_degree_one_norm() const;
  EquatorFieldSet without_degree_one() const;
};

EquatorFieldSet operator+(EquatorFieldSet a, const EquatorFieldSet& b);
EquatorFieldSet operator-(EquatorFieldSet a, const EquatorFieldSet& b);
EquatorFieldSet operator*(double s, EquatorFieldSet a);

/// Product basis Y_a(x) * Y_b(v) restricted to the unit tangent bundle,
/// joint degree deg(a) + deg(b) <= J, odd v-degrees only (so every element
/// is odd under v -> -v).  The restriction has relations, so fitting works
/// through a pseudo-inverse with a spectral cutoff; evaluation is pointwise
/// exact for whatever coefficients are held.
class TangentBundleBasis {
 public:
  TangentBundleBasis(int n, int J);

  int n() const { return n_; }
  int joint_degree() const { return J_; }
  int size() const { return static_cast<int>(pairs_.size()); }
  const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }

  struct Eval {
    std::vector<double> yx, yv;       // basis tables at x and v
    std::vector<Vec> gx, gv;          // solid gradients
    bool with_grad = false;
  };
  void tables(const Vec& x, const Vec& v, bool with_grad, Eval* e) const;

  double value(const Eigen::VectorXd& c, const Eval& e) const;
  /// Tangential (sphere) gradients of Phi(.,v) at x and Phi(x,.) at v.
  void gradients(const Eigen::VectorXd& c, const Vec& x, const Vec& v,
                 const Eval& e, Vec* grad_x, Vec* grad_v) const;

  const HarmonicBasis& xbasis() const { return *bx_; }
  const HarmonicBasis& vbasis() const { return *bv_; }

 private:
  int n_, J_;
  const HarmonicBasis* bx_;
  const HarmonicBasis* bv_;
  std::vector<std::pair<int, int>> pairs_;  // (a index, b index)
};

/// Precomputed least-squares fitter from per-rep chart samples to
/// TangentBundleBasis coefficients (weighted normal equations,
/// eigen-decomposition with relative cutoff; optional exact per-rep
/// degree-one removal).  One instance per (family, J); heavy to build,
/// cached by tangent_fitter().
class TangentFieldFitter {
 public:
  TangentFieldFitter(const EquatorFamily& fam, int J);

  const TangentBundleBasis& basis() const { return basis_; }

  Eigen::VectorXd fit(const EquatorFamily& fam, const EquatorFieldSet& data,
                      bool project_zero_degree_one) const;

  /// Per-rep chart samples of a coefficient vector (restriction).
  EquatorFieldSet restrict_to_family(const EquatorFamily& fam, const Eigen::VectorXd& c) const;

 private:
  TangentBundleBasis basis_;
  // pinv pieces of the weighted normal matrix
  Eigen::MatrixXd eigvec_;
  Eigen::VectorXd inv_eval_;   // 1/lambda with cutoff
  // cached tables: x-basis at chart nodes per rep, v-basis at each rep
  std::vector<Eigen::MatrixXd> xtabs_;      // per rep: nodes x NA
  std::vector<Eigen::VectorXd> vtabs_;      // per rep: NB
  // degree-one constraint projector data
  Eigen::MatrixXd constraint_;              // rows: (rep, frame dir) x basis
  Eigen::MatrixXd constraint_pinv_;         // basis x rows
};

const TangentFieldFitter& tangent_fitter(const EquatorFamily& fam, int J);

enum class TangentSubspace { StarOdd, ZeroOdd };

/// Band-limited function on T_1 S^n, odd in the direction argument;
/// the home of the graph fields Phi, phi, psi.
///
/// Carries both the global coefficients (for evaluation at arbitrary (x,v))
/// and cached per-rep chart functions (for quadrature pipelines).  Graphs
/// are only embedded for small C^1 size; construction enforces the
/// eps_graph bound.
class TangentGraphField {
 public:
  static constexpr double kEpsGraph = 0.3;

  TangentGraphField() = default;
  /// Zero field over a family.
  TangentGraphField(const EquatorFamily& fam, int J, TangentSubspace subspace);
  /// Fit from per-rep data.
  static TangentGraphField fit(const EquatorFamily& fam, int J, const EquatorFieldSet& data,
                               TangentSubspace subspace, bool check_small = true);
  /// Adopt global coefficients directly.
  static TangentGraphField from_coeffs(const EquatorFamily& fam, int J, Eigen::VectorXd c,
                                       TangentSubspace subspace, bool check_small = true);

  bool valid() const { return fitter_ != nullptr; }
  int n() const { return n_; }
  int joint_degree() const { return J_; }
  TangentSubspace subspace() const { return subspace_; }
  const Eigen::VectorXd& coeffs() const { return c_; }

  double value(const Vec& x, const Vec& v) const;
  /// Tangential gradients in both slots.
  void gradients(const Vec& x, const Vec& v, Vec* grad_x, Vec* grad_v) const;
  /// Gradient of Phi(.,v) within the equator Sigma_v (projects grad_x).
  Vec equator_gradient(const Vec& x, const Vec& v) const;
  /// Directional derivative D Phi_(x,v) . (dx, dv).
  double directional(const Vec& x, const Vec& v, const Vec& dx, const Vec& dv) const;

  /// Chart function on Sigma_v for an arbitrary unit v.
  EquatorFunction restrict_to(const EquatorChart& chart) const;
  /// Cached chart functions over the family reps.
  const EquatorFieldSet& per_rep() const { return per_rep_; }

  double c1_bound() const { return c1_bound_; }  // sampled sup |Phi| + |grad Phi|

  TangentGraphField& operator*=(double s);

 private:
  int n_ = 0;
  int J_ = 0;
  TangentSubspace subspace_ = TangentSubspace::StarOdd;
  Eigen::VectorXd c_;
  EquatorFieldSet per_rep_;
  double c1_bound_ = 0.0;
  const TangentFieldFitter* fitter_ = nullptr;

  void finish(const EquatorFamily& fam, bool check_small);
};

}  // namespace zollfunk
