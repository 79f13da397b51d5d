#pragma once

#include <Eigen/Dense>
#include <functional>

#include "zollfunk/grids.hpp"
#include "zollfunk/harmonics.hpp"
#include "zollfunk/vec.hpp"

namespace zollfunk {

enum class Parity { Any, Even, Odd };

/// Shared basis registry; builds each (sphere_dim, L) basis once.
const HarmonicBasis& shared_basis(int sphere_dim, int L);

/// Band-limited scalar field on S^n given by real spherical-harmonic
/// coefficients.  A declared parity is enforced exactly: the complementary
/// coefficients are zeroed, so antipodal evaluation respects it to the bit.
class HarmonicField {
 public:
  HarmonicField() = default;
  HarmonicField(int n, int L, Parity parity = Parity::Any);
  HarmonicField(int n, int L, Eigen::VectorXd coeffs, Parity parity = Parity::Any);

  static HarmonicField project(int n, int L, const std::function<double(const Vec&)>& f,
                               Parity parity = Parity::Any, int quad_degree = -1);
  /// Parity detection: flags Even/Odd when the complementary coefficient mass
  /// is below 1e-10 relative.
  static Parity detect_parity(int n, int L, const Eigen::VectorXd& coeffs);

  int n() const { return n_; }
  int degree() const { return L_; }
  Parity parity() const { return parity_; }
  const Eigen::VectorXd& coeffs() const { return c_; }
  Eigen::VectorXd& coeffs() { return c_; }
  int size() const { return static_cast<int>(c_.size()); }

  double value(const Vec& p) const;
  Vec gradient(const Vec& p) const;  // tangential gradient on S^n

  /// Value, ambient gradient and ambient Hessian of the solid extension
  /// (sums of homogeneous harmonic polynomials); exact for derivatives of the
  /// field along curves that stay on the sphere.
  struct SolidJet {
    double value = 0.0;
    Vec grad;
    SymMat4 hess;
  };
  SolidJet solid_jet(const Vec& p) const;
  /// d/dt and d^2/dt^2 of f(y(t)) at t=0 for a curve with y(0)=p on S^n.
  void curve_derivatives(const Vec& p, const Vec& dp, const Vec& ddp,
                         double* d1, double* d2) const;

  double integral() const;  // over S^n
  double mean() const;
  double l2_norm() const { return c_.norm(); }
  double linf_estimate() const;  // sup over a dense sample grid

  HarmonicField truncated(int newL) const;
  HarmonicField extended(int newL) const;
  HarmonicField with_parity(Parity p) const;

  HarmonicField& operator+=(const HarmonicField& o);
  HarmonicField& operator-=(const HarmonicField& o);
  HarmonicField& operator*=(double s);

 private:
  int n_ = 0;
  int L_ = -1;
  Parity parity_ = Parity::Any;
  Eigen::VectorXd c_;

  void enforce_parity();
};

HarmonicField operator+(HarmonicField a, const HarmonicField& b);
HarmonicField operator-(HarmonicField a, const HarmonicField& b);
HarmonicField operator*(double s, HarmonicField a);

/// Solves Laplace_{S^n} f + c f = g coefficient-wise (eigenvalues
/// -l(l+n-1)).  Resonant components are zeroed when project_resonant is set
/// and rejected otherwise (above tolerance).
HarmonicField helmholtz_solve(const HarmonicField& g, double c, bool project_resonant = false);

/// L^2-orthogonal projection onto the complement of the degree-1 harmonics.
HarmonicField remove_degree_one(const HarmonicField& f);

}  // namespace zollfunk
