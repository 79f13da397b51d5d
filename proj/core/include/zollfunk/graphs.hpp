#pragma once

#include <vector>

#include "zollfunk/equator.hpp"
#include "zollfunk/tangent_field.hpp"

namespace zollfunk {

/// Graph point cos(phi(x)) x + sin(phi(x)) v over the equator of the chart.
Vec graph_point(const EquatorChart& chart, const EquatorFunction& phi, const Vec& x);

/// Unit normal of the graph at the image of x, pointing toward v.
Vec graph_normal(const EquatorChart& chart, const EquatorFunction& phi, const Vec& x);

/// Jacobian determinant cos^{n-2}(phi) sqrt(cos^2 phi + |grad phi|^2).
double graph_jacobian(const EquatorChart& chart, const EquatorFunction& phi, const Vec& x);

/// Tangent vector of the graph at the image of x in the direction u on the
/// equator: cos(phi) u + (D phi . u) (-sin(phi) x + cos(phi) v).
Vec graph_tangent(const EquatorChart& chart, const EquatorFunction& phi, const Vec& x, const Vec& u);

/// Per-node graph data over a chart, the common input of area and
/// Euler-Lagrange quadratures.
struct GraphNodes {
  std::vector<double> phi;
  std::vector<Vec> grad_phi;   // ambient, tangent to the equator
  std::vector<Vec> point;      // graph points
  std::vector<Vec> normal;     // unit normals toward v
  std::vector<double> jac;
};
GraphNodes graph_nodes(const EquatorChart& chart, const EquatorFunction& phi);

/// Orthonormal basis of the orthogonal complement of the given span.
std::vector<Vec> complement_basis(const std::vector<Vec>& span, int ambient_dim);

/// Forward generalized Gauss map (y, N) at (x, v) with a global field.
void gauss_map(const TangentGraphField& Phi, const Vec& x, const Vec& v, Vec* y, Vec* N);

struct GaussInverse {
  Vec x;  // Upsilon_q(Phi)(w)
  Vec v;  // Xi_q(Phi)(w)
  int iterations = 0;
};
/// Inverse of the Gauss map at (q, w): the pair (x, v) with
/// Sigma_v(Phi)(x) = q and N_v(Phi)(x) = w.  Gauss-Newton from (q, w), or
/// from a caller-supplied initial guess.
GaussInverse gauss_map_inverse(const TangentGraphField& Phi, const Vec& q, const Vec& w,
                               double tol = 1e-12, int max_iter = 50);
GaussInverse gauss_map_inverse(const TangentGraphField& Phi, const Vec& q, const Vec& w,
                               const Vec& x_init, const Vec& v_init, double tol = 1e-12,
                               int max_iter = 50);

/// Graph-coordinate level function of Sigma_v(Phi):
/// sin(t - phi_v(x)) with p = cos(t) x + sin(t) v.  Zero exactly on the
/// graph (for |t| < pi/2), positive on the v side, odd in v.
double level_value(const TangentGraphField& Phi, const Vec& v, const Vec& p);
double level_value_chart(const EquatorChart& chart, const EquatorFunction& phi, const Vec& p);

/// Ambient-tangential gradient of the level function in p (chart data).
Vec level_gradient_p_chart(const EquatorChart& chart, const EquatorFunction& phi, const Vec& p);

/// Gradient of v -> level(v, q) at v, tangent at v (for dual normals).
Vec level_gradient_v(const TangentGraphField& Phi, const Vec& q, const Vec& v);

/// Unit normal of the dual hypersurface at Xi_q(Phi)(w), oriented toward q.
Vec dual_normal(const TangentGraphField& Phi, const Vec& q, const Vec& w);

struct GraphIntersection {
  std::vector<Vec> points;
  std::vector<double> weights;  // counting measure (n=2) or arc elements (n=3)
};
/// Intersection Sigma_sigma(Phi) ∩ Sigma_tau(Phi) from chart data of the two
/// graphs.  n=2: exactly two points (weight 1 each); n=3: quadrature nodes
/// along the intersection circle.
GraphIntersection intersect_graphs(const EquatorChart& cs, const EquatorFunction& phis,
                                   const EquatorChart& ct, const EquatorFunction& phit,
                                   int circle_nodes = 32);

}  // namespace zollfunk
