#pragma once

#include <functional>
#include <random>

#include "zollfunk/tangent_field.hpp"

namespace zollfunk::testing {

inline HarmonicField random_field(int n, int L, double scale, unsigned seed,
                                  Parity parity = Parity::Any) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  Eigen::VectorXd c(HarmonicBasis::total_size(n, L));
  for (int i = 0; i < c.size(); ++i) c[i] = g(rng);
  HarmonicField f(n, L, std::move(c), parity);
  const double m = f.linf_estimate();
  if (m > 0) f *= scale / m;
  return f;
}

inline EquatorFieldSet sample_set(const EquatorFamily& fam,
                                  const std::function<double(const Vec&, const Vec&)>& f) {
  EquatorFieldSet out;
  for (size_t i = 0; i < fam.charts.size(); ++i) {
    const EquatorChart& ch = fam.charts[i];
    Eigen::VectorXd vals(ch.node_count());
    for (int q = 0; q < ch.node_count(); ++q) vals[q] = f(ch.nodes[static_cast<size_t>(q)], ch.v);
    out.fns.push_back(EquatorFunction::from_nodes(ch, vals));
  }
  return out;
}

/// Random band-limited field on T_1 S^n with C^1 size scaled to `scale`.
inline TangentGraphField random_tangent(const EquatorFamily& fam, int J, double scale,
                                        unsigned seed,
                                        TangentSubspace sub = TangentSubspace::ZeroOdd) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  const TangentFieldFitter& fit = tangent_fitter(fam, J);
  Eigen::VectorXd c(fit.basis().size());
  for (int i = 0; i < c.size(); ++i) c[i] = g(rng);
  TangentGraphField f = TangentGraphField::from_coeffs(fam, J, c, TangentSubspace::StarOdd, false);
  const double m = f.c1_bound();
  Eigen::VectorXd cs = (m > 0 ? scale / m : 1.0) * f.coeffs();
  if (sub == TangentSubspace::ZeroOdd) {
    // re-fit through the projector to land in the zero-center subspace
    TangentGraphField raw = TangentGraphField::from_coeffs(fam, J, cs, TangentSubspace::StarOdd, false);
    return TangentGraphField::fit(fam, J, raw.per_rep(), TangentSubspace::ZeroOdd);
  }
  return TangentGraphField::from_coeffs(fam, J, cs, sub);
}

inline std::pair<Vec, Vec> random_tangent_pair(std::mt19937& rng, int n) {
  std::normal_distribution<double> g;
  Vec v, x;
  for (int i = 0; i <= n; ++i) v[i] = g(rng);
  v = normalized(v);
  for (int i = 0; i <= n; ++i) x[i] = g(rng);
  x = normalized(reject(x, v));
  return {x, v};
}

/// Least-squares slope of log(err) against log(t).
inline double loglog_slope(const std::vector<double>& ts, const std::vector<double>& errs) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int m = static_cast<int>(ts.size());
  for (int i = 0; i < m; ++i) {
    const double X = std::log(ts[static_cast<size_t>(i)]);
    const double Y = std::log(std::max(errs[static_cast<size_t>(i)], 1e-300));
    sx += X; sy += Y; sxx += X * X; sxy += X * Y;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace zollfunk::testing
