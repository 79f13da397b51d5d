#include "zollfunk/harmonics.hpp"

#include <cmath>

#include "zollfunk/errors.hpp"

namespace zollfunk {

namespace {

// Truncated Taylor jet (value, gradient, Hessian) of a polynomial in up to
// four ambient coordinates.  Recurrences below are plain polynomial algebra,
// so propagating jets through them yields exact derivatives.
template <int ORDER>
struct Jet {
  double v = 0.0;
  std::array<double, 4> g{};
  std::array<double, 10> h{};
};

template <int ORDER>
Jet<ORDER> jet_const(double c) {
  Jet<ORDER> j;
  j.v = c;
  return j;
}

template <int ORDER>
Jet<ORDER> jet_coord(const Vec& p, int i) {
  Jet<ORDER> j;
  j.v = p[i];
  if constexpr (ORDER >= 1) j.g[static_cast<size_t>(i)] = 1.0;
  return j;
}

// |p|^2 over a coordinate subset.
template <int ORDER>
Jet<ORDER> jet_r2(const Vec& p, int first, int count) {
  Jet<ORDER> j;
  for (int i = first; i < first + count; ++i) {
    j.v += p[i] * p[i];
    if constexpr (ORDER >= 1) j.g[static_cast<size_t>(i)] = 2.0 * p[i];
    if constexpr (ORDER >= 2) j.h[static_cast<size_t>(SymMat4::idx(i, i))] = 2.0;
  }
  return j;
}

template <int ORDER>
Jet<ORDER> operator+(const Jet<ORDER>& a, const Jet<ORDER>& b) {
  Jet<ORDER> r;
  r.v = a.v + b.v;
  if constexpr (ORDER >= 1)
    for (int i = 0; i < 4; ++i) r.g[i] = a.g[i] + b.g[i];
  if constexpr (ORDER >= 2)
    for (int i = 0; i < 10; ++i) r.h[i] = a.h[i] + b.h[i];
  return r;
}

template <int ORDER>
Jet<ORDER> operator-(const Jet<ORDER>& a, const Jet<ORDER>& b) {
  Jet<ORDER> r;
  r.v = a.v - b.v;
  if constexpr (ORDER >= 1)
    for (int i = 0; i < 4; ++i) r.g[i] = a.g[i] - b.g[i];
  if constexpr (ORDER >= 2)
    for (int i = 0; i < 10; ++i) r.h[i] = a.h[i] - b.h[i];
  return r;
}

template <int ORDER>
Jet<ORDER> operator*(double s, const Jet<ORDER>& a) {
  Jet<ORDER> r;
  r.v = s * a.v;
  if constexpr (ORDER >= 1)
    for (int i = 0; i < 4; ++i) r.g[i] = s * a.g[i];
  if constexpr (ORDER >= 2)
    for (int i = 0; i < 10; ++i) r.h[i] = s * a.h[i];
  return r;
}

template <int ORDER>
Jet<ORDER> operator*(const Jet<ORDER>& a, const Jet<ORDER>& b) {
  Jet<ORDER> r;
  r.v = a.v * b.v;
  if constexpr (ORDER >= 1)
    for (int i = 0; i < 4; ++i) r.g[i] = a.v * b.g[i] + b.v * a.g[i];
  if constexpr (ORDER >= 2) {
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j)
        r.h[static_cast<size_t>(SymMat4::idx(i, j))] =
            a.v * b.h[static_cast<size_t>(SymMat4::idx(i, j))] +
            b.v * a.h[static_cast<size_t>(SymMat4::idx(i, j))] +
            a.g[static_cast<size_t>(i)] * b.g[static_cast<size_t>(j)] +
            a.g[static_cast<size_t>(j)] * b.g[static_cast<size_t>(i)];
  }
  return r;
}

double dfact(int k) {  // k!! for odd k (and dfact(-1) = 1)
  double r = 1.0;
  for (int i = k; i >= 2; i -= 2) r *= i;
  return r;
}

double s2_norm(int l, int am) {
  const double ratio = std::exp(0.5 * (std::lgamma(l - am + 1.0) - std::lgamma(l + am + 1.0)));
  double n = std::sqrt((2.0 * l + 1.0) / (4.0 * M_PI)) * ratio;
  if (am != 0) n *= std::sqrt(2.0);
  return n;
}

// 1/sqrt of the Gegenbauer L^2 constant: integral over [-1,1] of
// [C_k^(alpha)]^2 (1-t^2)^(alpha-1/2) dt.
double geg_norm(int k, int alpha) {
  const double logI = std::log(M_PI) + (1.0 - 2.0 * alpha) * std::log(2.0) +
                      std::lgamma(k + 2.0 * alpha) - std::lgamma(k + 1.0) -
                      std::log(static_cast<double>(k + alpha)) - 2.0 * std::lgamma(static_cast<double>(alpha));
  return std::exp(-0.5 * logI);
}

// Normalized solid harmonics on S^2 for all (l,k), l <= L, over the ambient
// coordinates (ix, iy, iz); writes jets at index l^2 + l + k.
template <int ORDER>
void s2_solid(const Vec& p, int ix, int iy, int iz, int L, const double* norms,
              Jet<ORDER>* out) {
  const Jet<ORDER> x = jet_coord<ORDER>(p, ix);
  const Jet<ORDER> y = jet_coord<ORDER>(p, iy);
  const Jet<ORDER> z = jet_coord<ORDER>(p, iz);
  Jet<ORDER> r2 = x * x + y * y + z * z;

  Jet<ORDER> C = jet_const<ORDER>(1.0);  // Re (x+iy)^m
  Jet<ORDER> S = jet_const<ORDER>(0.0);  // Im (x+iy)^m
  for (int m = 0; m <= L; ++m) {
    if (m > 0) {
      const Jet<ORDER> Cn = x * C - y * S;
      const Jet<ORDER> Sn = x * S + y * C;
      C = Cn;
      S = Sn;
    }
    // Associated-Legendre tower at fixed order m, homogenized in (z, r^2).
    Jet<ORDER> Tmm = jet_const<ORDER>(dfact(2 * m - 1));
    Jet<ORDER> Tprev = jet_const<ORDER>(0.0);
    Jet<ORDER> Tcur = Tmm;
    for (int l = m; l <= L; ++l) {
      if (l > m) {
        Jet<ORDER> Tnext;
        if (l == m + 1) {
          Tnext = (2.0 * m + 1.0) * (z * Tcur);
        } else {
          Tnext = (1.0 / (l - m)) *
                  ((2.0 * l - 1.0) * (z * Tcur) - static_cast<double>(l - 1 + m) * (r2 * Tprev));
        }
        Tprev = Tcur;
        Tcur = Tnext;
      }
      const int base = l * l + l;
      if (m == 0) {
        out[base] = norms[base] * Tcur;
      } else {
        out[base + m] = norms[base + m] * (C * Tcur);
        out[base - m] = norms[base - m] * (S * Tcur);
      }
    }
  }
}

}  // namespace

int HarmonicBasis::block_size(int sphere_dim, int l) {
  return sphere_dim == 2 ? 2 * l + 1 : (l + 1) * (l + 1);
}

int HarmonicBasis::block_start(int sphere_dim, int l) {
  if (sphere_dim == 2) return l * l;
  return l * (l + 1) * (2 * l + 1) / 6;
}

int HarmonicBasis::total_size(int sphere_dim, int L) {
  return block_start(sphere_dim, L) + block_size(sphere_dim, L);
}

HarmonicBasis::HarmonicBasis(int sphere_dim, int max_degree)
    : m_(sphere_dim), L_(max_degree) {
  if (m_ != 2 && m_ != 3) throw UsageError("HarmonicBasis: sphere dimension must be 2 or 3");
  if (L_ < 0) throw UsageError("HarmonicBasis: negative degree");
  size_ = total_size(m_, L_);
  degree_.resize(static_cast<size_t>(size_));
  norm_.resize(static_cast<size_t>(size_));
  if (m_ == 2) {
    for (int l = 0; l <= L_; ++l)
      for (int k = -l; k <= l; ++k) {
        const int idx = l * l + l + k;
        degree_[static_cast<size_t>(idx)] = l;
        norm_[static_cast<size_t>(idx)] = s2_norm(l, std::abs(k));
      }
  } else {
    for (int l = 0; l <= L_; ++l) {
      const int start = block_start(3, l);
      for (int lam = 0; lam <= l; ++lam) {
        const double gn = geg_norm(l - lam, lam + 1);
        for (int k = -lam; k <= lam; ++k) {
          const int idx = start + lam * lam + lam + k;
          degree_[static_cast<size_t>(idx)] = l;
          norm_[static_cast<size_t>(idx)] = gn;  // S^2 factor applied separately
        }
      }
    }
  }
}

template <int ORDER>
void HarmonicBasis::eval_impl(const Vec& p, double* val, Vec* grad, SymMat4* hess) const {
  thread_local std::vector<Jet<ORDER>> buf;
  thread_local std::vector<Jet<ORDER>> s2buf;
  thread_local std::vector<double> s2norms;
  buf.resize(static_cast<size_t>(size_));

  if (m_ == 2) {
    s2_solid<ORDER>(p, 0, 1, 2, L_, norm_.data(), buf.data());
  } else {
    // S^2 factor over the spatial coordinates (1,2,3), polar axis p[0].
    const int ns2 = (L_ + 1) * (L_ + 1);
    s2buf.resize(static_cast<size_t>(ns2));
    if (static_cast<int>(s2norms.size()) != ns2) {
      s2norms.resize(static_cast<size_t>(ns2));
      for (int lam = 0; lam <= L_; ++lam)
        for (int k = -lam; k <= lam; ++k)
          s2norms[static_cast<size_t>(lam * lam + lam + k)] = s2_norm(lam, std::abs(k));
    }
    s2_solid<ORDER>(p, 1, 2, 3, L_, s2norms.data(), s2buf.data());

    const Jet<ORDER> x0 = jet_coord<ORDER>(p, 0);
    const Jet<ORDER> r2 = jet_r2<ORDER>(p, 0, 4);
    for (int lam = 0; lam <= L_; ++lam) {
      const int alpha = lam + 1;
      // Homogenized Gegenbauer tower C_k^(alpha)(x0 / r) * r^k.
      Jet<ORDER> Gprev = jet_const<ORDER>(0.0);
      Jet<ORDER> Gcur = jet_const<ORDER>(1.0);
      for (int l = lam; l <= L_; ++l) {
        const int k = l - lam;
        if (k > 0) {
          Jet<ORDER> Gnext;
          if (k == 1) {
            Gnext = (2.0 * alpha) * (x0 * Gcur);
          } else {
            Gnext = (1.0 / k) * (2.0 * (k + alpha - 1.0) * (x0 * Gcur) -
                                 static_cast<double>(k + 2 * alpha - 2) * (r2 * Gprev));
          }
          Gprev = Gcur;
          Gcur = Gnext;
        }
        const int start = block_start(3, l);
        for (int kk = -lam; kk <= lam; ++kk) {
          const int idx = start + lam * lam + lam + kk;
          buf[static_cast<size_t>(idx)] =
              norm_[static_cast<size_t>(idx)] * (Gcur * s2buf[static_cast<size_t>(lam * lam + lam + kk)]);
        }
      }
    }
  }

  for (int i = 0; i < size_; ++i) {
    const Jet<ORDER>& j = buf[static_cast<size_t>(i)];
    val[i] = j.v;
    if constexpr (ORDER >= 1) {
      Vec g;
      for (int d = 0; d < 4; ++d) g[d] = j.g[static_cast<size_t>(d)];
      grad[i] = g;
    }
    if constexpr (ORDER >= 2) {
      hess[i].a = j.h;
    }
  }
}

void HarmonicBasis::eval(const Vec& p, double* out) const {
  eval_impl<0>(p, out, nullptr, nullptr);
}

void HarmonicBasis::eval_grad(const Vec& p, double* val, Vec* grad) const {
  eval_impl<1>(p, val, grad, nullptr);
}

void HarmonicBasis::eval_hess(const Vec& p, double* val, Vec* grad, SymMat4* hess) const {
  eval_impl<2>(p, val, grad, hess);
}

}  // namespace zollfunk
