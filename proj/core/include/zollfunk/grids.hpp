#pragma once

#include <array>
#include <memory>
#include <vector>

#include "zollfunk/vec.hpp"

namespace zollfunk {

struct ChartTables;

/// Full-sphere product quadrature on S^n, exact for spherical polynomials
/// up to the stated degree.
struct SphereQuad {
  int n = 2;
  int exact_degree = 0;
  std::vector<Vec> points;
  std::vector<double> weights;

  static SphereQuad build(int n, int exact_degree);
};

/// Quadrature over RP^n: one representative per antipodal pair of a
/// full-sphere Gauss product grid, with the pair's weight kept once.
/// Total weight is vol(RP^n) = omega_n / 2, and the rule integrates even
/// spherical polynomials of degree <= 2*band_limit exactly.
struct DirectionGrid {
  int n = 2;
  int band_limit = 0;  // L_g
  std::vector<Vec> reps;
  std::vector<double> weights;

  static DirectionGrid make(int n, int band_limit);

  int size() const { return static_cast<int>(reps.size()); }
  double total_weight() const;
  /// Integral over RP^n of per-rep values.
  double integrate(const std::vector<double>& values) const;
  /// Mean over RP^n of per-rep values.
  double mean(const std::vector<double>& values) const;
};

/// Quadrature chart on the equator Sigma_v = S^n ∩ v-perp.
///
/// The frame spanning v-perp comes from Gram-Schmidt against a fixed fallback
/// axis order.  It is NOT continuous in v (no global frame exists); nothing
/// here relies on cross-equator frame coherence -- all coupling between
/// equators goes through fields on S^n.
struct EquatorChart {
  int n = 2;  // ambient sphere dimension
  Vec v;
  std::array<Vec, 3> frame{};  // n orthonormal vectors spanning v-perp
  int band = 0;                // chart band limit L

  std::vector<Vec> nodes;      // ambient positions on Sigma_v
  std::vector<double> weights; // sum = omega_{n-1}
  std::vector<Vec> nhat;       // frame coordinates of the nodes (n components)
  std::vector<double> theta;   // n=2 only: node angles

  int ntheta = 0, nphi = 0;    // n=3 product structure

  mutable std::shared_ptr<const ChartTables> tables_cache;       // lazy, see equator.hpp
  mutable std::shared_ptr<const ChartTables> tables_full_cache;  // full-resolution variant

  static EquatorChart build(const Vec& v, int node_budget, int n, int band);

  int node_count() const { return static_cast<int>(nodes.size()); }
  Vec ambient(const Vec& frame_coords) const;
  Vec to_frame(const Vec& ambient_pt) const;   // frame coordinates of a point
  Vec push(const Vec& frame_vec) const;        // F * w for tangent vectors
  Vec pull(const Vec& ambient_vec) const;      // F^T * w
};

/// Direction grid together with one chart per representative: the shared
/// context for every per-equator operation.  The chart band may exceed the
/// field band L: graph fields resolved on the equators generally need more
/// modes than the conformal data that drives them.
struct EquatorFamily {
  int n = 2;
  int L = 0;           // field band limit
  int chart_band = 0;  // equator-function band (>= L)
  int Q = 0;           // chart node budget
  DirectionGrid grid;
  std::vector<EquatorChart> charts;

  static EquatorFamily build(int n, int L, int band_limit_grid, int Q, int chart_band = -1);
};

/// Deterministic orthonormal frame of v-perp (n vectors).
std::array<Vec, 3> orthonormal_frame(const Vec& v, int n);

}  // namespace zollfunk
