#pragma once

#include <functional>

#include "zollfunk/funk.hpp"
#include "zollfunk/variational.hpp"

namespace zollfunk {

/// Conformal factor and graph field of one solver state, with the
/// diagnostics recomputed after every change.  The graph field is carried as
/// per-equator chart modes (the working representation of the corrector);
/// phi_fit is the band-limited fit on the tangent bundle used wherever
/// off-grid directions are needed (kernel diagonal, Gauss-map work,
/// serialization of the global object).
struct ZollState {
  HarmonicField rho;
  EquatorFieldSet phi;
  TangentGraphField phi_fit;
  struct Diagnostics {
    double lambda1_inf = 0.0;
    double lambda2_inf = 0.0;
    double area_mean = 0.0;
    double area_spread = 0.0;
    int iterations = 0;
  } diag;
};

/// The residual pair: centered areas and the centered Euler-Lagrange field.
struct LambdaValue {
  std::vector<double> lambda1;  // zero grid mean by construction
  EquatorFieldSet lambda2;      // per-equator center removed
  AreaProfile area;
  double lambda1_inf = 0.0;
  double lambda2_inf = 0.0;
  double norm() const { return lambda1_inf + lambda2_inf; }
};

LambdaValue lambda_map(const EquatorFamily& fam, const HarmonicField& rho,
                       const EquatorFieldSet& phi);

struct RightInverseValue {
  HarmonicField f;
  EquatorFieldSet phi;
};

/// Approximate right inverse V of D Lambda at the state: the Funk right
/// inverse feeds the conformal slot, the solution map absorbs the remainder
/// in the graph slot.
RightInverseValue approx_right_inverse(const EquatorFamily& fam, const HarmonicField& rho,
                                       const EquatorFieldSet& phi, const FunkSystem& sys,
                                       const std::vector<double>& b, const EquatorFieldSet& psi);

/// First component of the quadratic error: centered pairings of psi_tilde
/// with the graph component of V (the second component vanishes identically).
std::vector<double> quadratic_error_q1(const EquatorFamily& fam, const EquatorFieldSet& psi_tilde,
                                       const EquatorFieldSet& v2);

/// Per-equator Helmholtz solve pairing an odd-plus-constant conformal
/// direction f with the graph direction that keeps (f, phi) in the kernel of
/// the round linearization.
EquatorFieldSet kernel_seed_set(const EquatorFamily& fam, const HarmonicField& f);
TangentGraphField kernel_seed(const EquatorFamily& fam, int J, const HarmonicField& f);

struct DeformOptions {
  double t = 0.05;
  double tol = 1e-8;
  int max_iter = 20;
  double step = 0.05;   // continuation step for larger t
  int J = 10;           // graph-field joint band
  int L_solve = -1;     // conformal-factor solution band (default: the grid
                        // band).  The solution is not band-L even when the
                        // seed is; content beyond the grid band would alias
                        // invisibly into the area residual and leave a
                        // spurious Euler-Lagrange center behind
  std::function<void(int iter, const LambdaValue&)> trace;
};

/// Corrector iteration (rho, Phi) <- (rho, Phi) - V(rho, Phi) Lambda(rho, Phi)
/// from the first-order seed (t rho_dot, t kernel_seed(rho_dot)); both fields
/// are re-projected to their bands after every step, the graph field is
/// re-centered.  Larger t runs by continuation in steps of `step`.
ZollState deform(const EquatorFamily& fam, const HarmonicField& rho_dot, const DeformOptions& opt);

/// Scales the conformal factor so every area equals area(S^{n-1}, can).
ZollState normalize_zprime(const EquatorFamily& fam, ZollState state);

/// Unique solution in the complement of the linear functions of
/// Laplace f + n f = -r / (2(n-1)); r odd with no degree-1 content.
HarmonicField isometry_breaking_seed(const HarmonicField& r);

struct ZollReport {
  double max_el_residual = 0.0;   // sup of the EL density at refined resolution
  double area_mean = 0.0;
  double area_spread = 0.0;
  double center_norm = 0.0;       // sup over reps of |C(H)_v|
  double gauss_injectivity = 0.0; // min image/preimage distance ratio over samples
};

/// Re-verifies a state at `resolution_factor` times the chart resolution,
/// independently of the solver's own quadrature (the per-rep chart modes are
/// synthesized directly on the refined charts).
ZollReport verify_zoll(const EquatorFamily& fam, const HarmonicField& rho,
                       const EquatorFieldSet& phi, int resolution_factor = 2);

}  // namespace zollfunk
