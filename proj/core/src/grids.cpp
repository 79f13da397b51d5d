#include "zollfunk/grids.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>

#include "zollfunk/errors.hpp"
#include "zollfunk/quadrature.hpp"

namespace zollfunk {

namespace {

// S^2 Gauss-Legendre x uniform-longitude grid, polar axis = last coordinate
// of the (ix,iy,iz) triple.
void append_s2_grid(int ntheta, int nphi, double scale,
                    std::vector<Vec>* pts, std::vector<double>* wts) {
  const Rule1D gl = gauss_legendre(ntheta);
  for (int i = 0; i < ntheta; ++i) {
    const double c = gl.nodes[i];
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    for (int j = 0; j < nphi; ++j) {
      const double phi = 2.0 * M_PI * j / nphi;
      pts->push_back(Vec(s * std::cos(phi), s * std::sin(phi), c));
      wts->push_back(scale * gl.weights[i] * 2.0 * M_PI / nphi);
    }
  }
}

void append_s3_grid(int nchi, int ntheta, int nphi,
                    std::vector<Vec>* pts, std::vector<double>* wts) {
  const Rule1D ch = gauss_chebyshev2(nchi);
  std::vector<Vec> s2p;
  std::vector<double> s2w;
  append_s2_grid(ntheta, nphi, 1.0, &s2p, &s2w);
  for (int k = 0; k < nchi; ++k) {
    const double c = ch.nodes[k];
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    for (size_t j = 0; j < s2p.size(); ++j) {
      pts->push_back(Vec(c, s * s2p[j][0], s * s2p[j][1], s * s2p[j][2]));
      wts->push_back(ch.weights[k] * s2w[j]);
    }
  }
}

int64_t key_round(double x) { return static_cast<int64_t>(std::llround(x * 1e9)); }

std::array<int64_t, 4> point_key(const Vec& p) {
  // Snap near-zero coordinates so antipodal keys match exactly.
  std::array<int64_t, 4> k{};
  for (int i = 0; i < 4; ++i) {
    int64_t v = key_round(p[i]);
    if (v == 0) v = 0;  // normalize -0
    k[static_cast<size_t>(i)] = v;
  }
  return k;
}

bool lex_positive(const Vec& p) {
  for (int i = 0; i < 4; ++i) {
    if (p[i] > 1e-9) return true;
    if (p[i] < -1e-9) return false;
  }
  return false;
}

}  // namespace

SphereQuad SphereQuad::build(int n, int exact_degree) {
  if (n != 2 && n != 3) throw UsageError("SphereQuad: unsupported dimension");
  SphereQuad q;
  q.n = n;
  q.exact_degree = exact_degree;
  const int D = std::max(exact_degree, 1);
  if (n == 2) {
    const int ntheta = D / 2 + 1;
    const int nphi = D + 2;
    append_s2_grid(ntheta, nphi, 1.0, &q.points, &q.weights);
  } else {
    const int nchi = D / 2 + 1;
    const int ntheta = D / 2 + 1;
    const int nphi = D + 2;
    append_s3_grid(nchi, ntheta, nphi, &q.points, &q.weights);
  }
  return q;
}

DirectionGrid DirectionGrid::make(int n, int band_limit) {
  if (n != 2 && n != 3) throw UsageError("make_direction_grid: unsupported dimension");
  if (band_limit < 4) throw UsageError("make_direction_grid: band limit must be >= 4");

  std::vector<Vec> pts;
  std::vector<double> wts;
  if (n == 2) {
    const int ntheta = band_limit + 1;
    int nphi = 2 * band_limit + 2;
    if (nphi % 2) ++nphi;
    append_s2_grid(ntheta, nphi, 1.0, &pts, &wts);
  } else {
    const int nchi = band_limit + 1;
    const int ntheta = band_limit + 1;
    int nphi = 2 * band_limit + 2;
    if (nphi % 2) ++nphi;
    append_s3_grid(nchi, ntheta, nphi, &pts, &wts);
  }

  // Fold antipodal pairs; keep the lexicographically positive member with the
  // pair's halved summed weight (equal weights by grid symmetry).
  std::map<std::array<int64_t, 4>, std::pair<int, int>> pairing;  // key -> (idx_pos, idx_neg)
  for (size_t i = 0; i < pts.size(); ++i) {
    const bool pos = lex_positive(pts[i]);
    Vec canon = pos ? pts[i] : -pts[i];
    auto key = point_key(canon);
    auto it = pairing.find(key);
    if (it == pairing.end()) pairing[key] = {pos ? static_cast<int>(i) : -1, pos ? -1 : static_cast<int>(i)};
    else (pos ? it->second.first : it->second.second) = static_cast<int>(i);
  }

  DirectionGrid g;
  g.n = n;
  g.band_limit = band_limit;
  for (const auto& [key, pr] : pairing) {
    (void)key;
    if (pr.first < 0 || pr.second < 0)
      throw NumericalError("make_direction_grid: grid is not antipodally symmetric");
    g.reps.push_back(pts[static_cast<size_t>(pr.first)]);
    g.weights.push_back(0.5 * (wts[static_cast<size_t>(pr.first)] + wts[static_cast<size_t>(pr.second)]));
  }
  return g;
}

double DirectionGrid::total_weight() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

double DirectionGrid::integrate(const std::vector<double>& values) const {
  if (values.size() != weights.size()) throw UsageError("DirectionGrid::integrate: size mismatch");
  double s = 0.0;
  for (size_t i = 0; i < weights.size(); ++i) s += weights[i] * values[i];
  return s;
}

double DirectionGrid::mean(const std::vector<double>& values) const {
  return integrate(values) / total_weight();
}

std::array<Vec, 3> orthonormal_frame(const Vec& v, int n) {
  const int d = n + 1;
  // Axis order: most orthogonal to v first; index breaks ties.
  std::array<int, 4> order{0, 1, 2, 3};
  std::sort(order.begin(), order.begin() + d, [&](int a, int b) {
    const double fa = std::fabs(v[a]), fb = std::fabs(v[b]);
    if (fa != fb) return fa < fb;
    return a < b;
  });
  std::array<Vec, 3> frame{};
  int have = 0;
  for (int k = 0; k < d && have < n; ++k) {
    Vec e;
    e[order[static_cast<size_t>(k)]] = 1.0;
    Vec w = reject(e, v);
    for (int j = 0; j < have; ++j) w = reject(w, frame[static_cast<size_t>(j)]);
    const double r = norm(w);
    if (r < 1e-8) continue;
    frame[static_cast<size_t>(have++)] = (1.0 / r) * w;
  }
  if (have != n) throw NumericalError("orthonormal_frame: degenerate axis set");
  return frame;
}

EquatorChart EquatorChart::build(const Vec& v, int node_budget, int n, int band) {
  if (n != 2 && n != 3) throw UsageError("equator_chart: unsupported dimension");
  if (std::fabs(dot(v, v) - 1.0) > 1e-10) throw UsageError("equator_chart: v not unit");
  EquatorChart ch;
  ch.n = n;
  ch.v = v;
  ch.band = band;
  ch.frame = orthonormal_frame(v, n);
  if (n == 2) {
    if (node_budget < 4 * band + 2) throw UsageError("equator_chart: node count too small for band limit");
    const int Q = node_budget;
    ch.nodes.resize(static_cast<size_t>(Q));
    ch.weights.assign(static_cast<size_t>(Q), 2.0 * M_PI / Q);
    ch.nhat.resize(static_cast<size_t>(Q));
    ch.theta.resize(static_cast<size_t>(Q));
    for (int i = 0; i < Q; ++i) {
      const double t = 2.0 * M_PI * i / Q;
      ch.theta[static_cast<size_t>(i)] = t;
      ch.nhat[static_cast<size_t>(i)] = Vec(std::cos(t), std::sin(t), 0.0);
      ch.nodes[static_cast<size_t>(i)] = std::cos(t) * ch.frame[0] + std::sin(t) * ch.frame[1];
    }
  } else {
    const int ntheta = static_cast<int>(std::floor(std::sqrt(node_budget / 2.0)));
    if (ntheta < band + 1) throw UsageError("equator_chart: node count too small for band limit");
    const int nphi = 2 * ntheta;
    ch.ntheta = ntheta;
    ch.nphi = nphi;
    std::vector<Vec> s2p;
    std::vector<double> s2w;
    append_s2_grid(ntheta, nphi, 1.0, &s2p, &s2w);
    for (size_t k = 0; k < s2p.size(); ++k) {
      ch.nhat.push_back(s2p[k]);
      ch.weights.push_back(s2w[k]);
      ch.nodes.push_back(ch.push(s2p[k]));
    }
  }
  return ch;
}

Vec EquatorChart::ambient(const Vec& fc) const { return push(fc); }

Vec EquatorChart::push(const Vec& w) const {
  Vec r;
  for (int i = 0; i < n; ++i) r += w[i] * frame[static_cast<size_t>(i)];
  return r;
}

Vec EquatorChart::to_frame(const Vec& x) const { return pull(x); }

Vec EquatorChart::pull(const Vec& w) const {
  Vec r;
  for (int i = 0; i < n; ++i) r[i] = dot(w, frame[static_cast<size_t>(i)]);
  return r;
}

EquatorFamily EquatorFamily::build(int n, int L, int band_limit_grid, int Q, int chart_band) {
  EquatorFamily fam;
  fam.n = n;
  fam.L = L;
  fam.chart_band = chart_band > 0 ? chart_band : L;
  if (fam.chart_band < L) throw UsageError("EquatorFamily: chart band below the field band");
  fam.Q = Q;
  fam.grid = DirectionGrid::make(n, band_limit_grid);
  fam.charts.reserve(fam.grid.reps.size());
  for (const Vec& v : fam.grid.reps)
    fam.charts.push_back(EquatorChart::build(v, Q, n, fam.chart_band));
  return fam;
}

}  // namespace zollfunk
