#pragma once

#include <Eigen/Dense>

#include "zollfunk/fields.hpp"
#include "zollfunk/graphs.hpp"
#include "zollfunk/tangent_field.hpp"

namespace zollfunk {

/// Areas of the graph family in the conformal metric e^{2 rho} can,
/// identified with an even function on S^n through the direction grid.
struct AreaProfile {
  std::vector<double> values;
  double mean = 0.0;
  double spread = 0.0;  // sup |A - mean|
};

double graph_area(const HarmonicField& rho, const EquatorChart& chart, const EquatorFunction& phi);
AreaProfile area_profile(const HarmonicField& rho, const EquatorFamily& fam,
                         const EquatorFieldSet& Phi);

/// Euler-Lagrange density of the area functional on one equator
/// (divergence form, assembled spectrally on the chart).
EquatorFunction euler_lagrange(const HarmonicField& rho, const EquatorChart& chart,
                               const EquatorFunction& phi);

/// Pointwise values of the Euler-Lagrange density at the chart nodes, with
/// the divergence taken at full chart resolution (no band truncation).
Eigen::VectorXd euler_lagrange_density(const HarmonicField& rho, const EquatorChart& chart,
                                       const EquatorFunction& phi);
EquatorFieldSet euler_lagrange_family(const HarmonicField& rho, const EquatorFamily& fam,
                                      const EquatorFieldSet& Phi);

/// Conformal derivative of the Euler-Lagrange density in the direction f:
/// (n-1) (f∘graph) H + (n-1) cos^{n-1}(phi) <grad f ∘ graph, N> e^{(n-1) rho∘graph}.
EquatorFunction el_conformal_derivative(const HarmonicField& rho, const EquatorChart& chart,
                                        const EquatorFunction& phi, const HarmonicField& f);
EquatorFieldSet el_conformal_derivative_family(const HarmonicField& rho, const EquatorFamily& fam,
                                               const EquatorFieldSet& Phi, const HarmonicField& f);

/// Second-variation operator on chart modes (analytic linearization of the
/// divergence form); symmetric up to quadrature error.
Eigen::MatrixXd jacobi_matrix(const HarmonicField& rho, const EquatorChart& chart,
                              const EquatorFunction& phi);
EquatorFunction apply_jacobi(const HarmonicField& rho, const EquatorChart& chart,
                             const EquatorFunction& phi, const EquatorFunction& psi);

/// P_v ∘ J_v ∘ P_v^* applied to a zero-degree-one function.
EquatorFunction apply_projected_jacobi(const HarmonicField& rho, const EquatorChart& chart,
                                       const EquatorFunction& phi, const EquatorFunction& psi);

/// Inverse of the projected Jacobi operator on one equator.  Throws when the
/// projected operator is numerically singular (leaving the perturbative
/// regime).
EquatorFunction solve_projected_jacobi(const HarmonicField& rho, const EquatorChart& chart,
                                       const EquatorFunction& phi, const EquatorFunction& rhs);

/// The solution map: per-equator inverses over the whole family.
EquatorFieldSet solution_map(const HarmonicField& rho, const EquatorFamily& fam,
                             const EquatorFieldSet& Phi, const EquatorFieldSet& rhs);

/// Even one-form on S^n stored as the dual vector field at grid reps,
/// X(-v) = -X(v) by convention.
struct EvenOneForm {
  std::vector<Vec> X;
  double sup_norm() const;
  EvenOneForm& operator-=(const EvenOneForm& o);
};

/// alpha_n = n / omega_{n-1}, the constant making j a right-inverse of the
/// center map.
double center_alpha(int n);

/// C(Psi)_v(u) = \int_{Sigma_v} Psi <x,u> dA.
EvenOneForm center_map(const EquatorFamily& fam, const EquatorFieldSet& Psi);

/// j(omega)(x,v) = alpha_n <X(v), x>.
EquatorFieldSet embed_center(const EquatorFamily& fam, const EvenOneForm& omega);

/// Per-rep removal of the center: Psi - j C(Psi).
EquatorFieldSet remove_center(const EquatorFamily& fam, const EquatorFieldSet& Psi);

/// eta(Phi)(x,v,u) = -<x,u> + DPhi.(-<x,u>v, u) - tan(Phi) <grad Phi_v, u>.
double eta_deformation(const TangentGraphField& Phi, const Vec& x, const Vec& v, const Vec& u);

/// K(Phi, Psi)_v(u) = \int Psi eta(Phi)(.,v,u) dA.
EvenOneForm constraint_map(const EquatorFamily& fam, const TangentGraphField& Phi,
                           const EquatorFieldSet& Psi);

struct ConstraintReport {
  double residual = 0.0;     // sup |K(Phi,H) - dA|
  double d_area_norm = 0.0;  // sup |dA|
  std::vector<double> per_rep;
};
/// Checks the variational-constraint identity K(Phi, H(rho,Phi)) = dA(rho,Phi)
/// with dA computed spectrally from the even-harmonic expansion of the areas.
ConstraintReport verify_variational_constraint(const HarmonicField& rho, const EquatorFamily& fam,
                                               const TangentGraphField& Phi);

/// Even-harmonic field on S^n fitted to per-rep values on the direction grid.
HarmonicField even_field_from_grid(const EquatorFamily& fam, const std::vector<double>& values,
                                   int L);

}  // namespace zollfunk
