#pragma once

#include <Eigen/Dense>
#include <functional>

#include "zollfunk/variational.hpp"

namespace zollfunk {

/// Forward transform: integrals of f over every member of the graph family
/// in the metric e^{2 rho} can, as values on the direction grid.
std::vector<double> funk_forward(const HarmonicField& rho, const EquatorFamily& fam,
                                 const EquatorFieldSet& Phi, const HarmonicField& f);

/// Residual of the identity F(rho,Phi)(f) = (1/(n-1)) d/dt A(rho + t f, Phi)
/// with the derivative taken by central differences; returns the worst
/// relative defect over the grid.
double funk_area_derivative_residual(const HarmonicField& rho, const EquatorFamily& fam,
                                     const EquatorFieldSet& Phi, const HarmonicField& f);

/// Discrete forward matrix: (rep, basis element) for fields of band L.
Eigen::MatrixXd funk_forward_matrix(const HarmonicField& rho, const EquatorFamily& fam,
                                    const EquatorFieldSet& Phi, int L);

/// Adjoint-route dual transform: the exact adjoint of the discrete forward
/// matrix between grid values (RP^n measure) and field coefficients (L^2).
HarmonicField funk_dual_adjoint(const EquatorFamily& fam, const Eigen::MatrixXd& forward,
                                const std::vector<double>& g);

/// Geometric dual transform: for each evaluation point p, integrates
/// g([Xi_p(w)]) U(Phi) |Jac Xi_p| over the dual sphere of p.  Building the
/// plan runs one Gauss-map inversion per (point, node); applying it to
/// further fields g is cheap.
class DualTransformPlan {
 public:
  DualTransformPlan(const HarmonicField& rho, const EquatorFamily& fam,
                    const TangentGraphField& Phi, const std::vector<Vec>& points);

  const std::vector<Vec>& points() const { return points_; }
  std::vector<double> apply(const HarmonicField& g) const;

 private:
  std::vector<Vec> points_;
  std::vector<double> rho_factor_;
  std::vector<std::vector<Vec>> xi_;        // per point: Xi at chart nodes
  std::vector<std::vector<double>> wgt_;    // per point: 1/2 * w * U * Jac
};

/// Kernel of F∘F* between two graph members: sum/quadrature over the
/// intersection of e^{2(n-1)rho} / sqrt(1 - <N_sigma, N_tau>^2).
double kernel_value(const HarmonicField& rho, const EquatorChart& cs, const EquatorFunction& phis,
                    const EquatorChart& ct, const EquatorFunction& phit);

/// Dense kernel operator with the sin-distance diagonal split
///   L f(s) = k(s,s) f(s) S + \int [K(s,t) f(t) - k(s,s) f(s)] / sin d dt,
/// k = sin(d) K extending smoothly to the diagonal and S = \int dt / sin d
/// analytic on the round RP^n.  The f(t) - f(s) part of the subtracted
/// integral is carried out spectrally through the round inverse-sine
/// operator (exact on band-limited data; the whole remainder then vanishes
/// identically at the round point), leaving only the small
/// (k(s,t) - k(s,s)) f(t) / sin d correction on the grid.
struct KernelMatrix {
  int n = 2;
  Eigen::MatrixXd K;        // off-diagonal kernel values, zero diagonal
  Eigen::VectorXd diag_k;   // k(s,s) by Richardson extrapolation of sin(d) K
  double sin_mass = 0.0;    // S = \int dtau / sin d
  Eigen::MatrixXd L;        // operator matrix on grid values
  Eigen::MatrixXd Lc;       // operator on even harmonic coefficients (band = grid band)
  int coeff_band = 0;
  double condition = 0.0;   // of Lc
};

/// phi carries the per-equator chart data (off-diagonal intersections);
/// phi_global supplies evaluation at the off-grid directions the diagonal
/// extrapolation needs.
KernelMatrix assemble_kernel_operator(const HarmonicField& rho, const EquatorFamily& fam,
                                      const EquatorFieldSet& phi, const TangentGraphField& phi_global);
KernelMatrix assemble_kernel_operator(const HarmonicField& rho, const EquatorFamily& fam,
                                      const TangentGraphField& Phi);

Eigen::VectorXd apply_kernel_operator(const KernelMatrix& M, const Eigen::VectorXd& f);

/// Solve L x = b for grid data b, working in the even-coefficient space
/// (dense LU, residual <= 1e-9); throws when the operator is numerically
/// singular or its condition number exceeds 1e8.
Eigen::VectorXd solve_kernel_operator(const EquatorFamily& fam, const KernelMatrix& M,
                                      const Eigen::VectorXd& b);

/// \int dtau / sin d(s, tau) over RP^n (independent of s).
double inverse_sine_mass(int n);

/// The pieces of the Funk right-inverse at one state, built once and
/// applied to many right-hand sides.
class FunkSystem {
 public:
  /// L is the band of the right-hand data; the solution field is resolved on
  /// a richer band (default: the grid band) because the exact right inverse
  /// of the transform is not band-limited at perturbed states.
  FunkSystem(const HarmonicField& rho, const EquatorFamily& fam, const EquatorFieldSet& phi,
             const TangentGraphField& phi_global, int L, int L_solution = -1);
  FunkSystem(const HarmonicField& rho, const EquatorFamily& fam, const TangentGraphField& Phi,
             int L, int L_solution = -1);

  const Eigen::MatrixXd& forward_matrix() const { return F_; }
  const KernelMatrix& kernel() const { return M_; }

  std::vector<double> forward(const HarmonicField& f) const;
  HarmonicField dual_adjoint(const std::vector<double>& g) const;

  /// Right inverse of the forward transform on zero-mean even data:
  /// dual transform composed with the kernel-operator solve, refined by
  /// defect correction until the forward residual is at solver precision.
  HarmonicField right_inverse(const std::vector<double>& b) const;

 private:
  const EquatorFamily* fam_;
  int L_;
  int Lsol_;
  Eigen::MatrixXd F_;
  KernelMatrix M_;
  Eigen::MatrixXd Yg_;  // even coefficients (grid band) -> grid values
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;   // of M_.Lc
  Eigen::BDCSVD<Eigen::MatrixXd> fsvd_;       // of sqrt(w) F, for the LS polish

  Eigen::VectorXd solve_core(const Eigen::VectorXd& b) const;
};

/// Eigenvalues of the round Funk transform on degrees 0..L by quadrature
/// (zero at odd degrees).
std::vector<double> round_funk_spectrum(const EquatorFamily& fam, int L);

/// Forward transform of a symmetric two-tensor at the round point:
/// (1/2) \int tr_{Sigma_sigma} h dA per rep.
using TensorSampler = std::function<double(const Vec& p, const Vec& u, const Vec& w)>;
std::vector<double> tensor_funk_forward(const EquatorFamily& fam, const TensorSampler& h);

}  // namespace zollfunk
