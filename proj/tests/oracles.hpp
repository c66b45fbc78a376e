#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the library, so a test comparing the two is a genuine cross-check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using C = std::complex<double>;
using LC = std::complex<long double>;

/// e_k by enumerating every k-subset.
template <class T>
T esym_subsets(const std::vector<T>& v, std::size_t k) {
  const std::size_t n = v.size();
  T total(0);
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != k) continue;
    T prod(1);
    for (std::size_t j = 0; j < n; ++j)
      if (mask & (1u << j)) prod *= v[j];
    total += prod;
  }
  return total;
}

/// prod (z - r_j) by repeated convolution; constant term first.
inline std::vector<C> expand(const std::vector<C>& roots) {
  std::vector<C> c{1.0};
  for (const auto& r : roots) {
    std::vector<C> next(c.size() + 1, 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
      next[k + 1] += c[k];
      next[k] -= r * c[k];
    }
    c = std::move(next);
  }
  return c;
}

inline std::vector<C> differentiate(const std::vector<C>& c) {
  std::vector<C> d;
  for (std::size_t k = 1; k < c.size(); ++k) d.push_back(c[k] * static_cast<double>(k));
  return d;
}

/// Durand-Kerner (Weierstrass) iteration in long double. Only for
/// well-separated roots.
inline std::vector<C> weierstrass_roots(const std::vector<C>& coeffs) {
  const std::size_t n = coeffs.size() - 1;
  std::vector<LC> a(coeffs.begin(), coeffs.end());
  for (auto& x : a) x /= LC(coeffs.back());
  auto eval = [&](LC z) {
    LC acc = a[n];
    for (std::size_t k = n; k-- > 0;) acc = acc * z + a[k];
    return acc;
  };
  long double bound = 0;
  for (std::size_t k = 0; k < n; ++k) bound = std::max(bound, std::abs(a[k]));
  const LC seed(0.4L, 0.9L);
  std::vector<LC> z(n);
  for (std::size_t k = 0; k < n; ++k) z[k] = (1 + bound) * std::pow(seed, static_cast<long double>(k)) / std::abs(std::pow(seed, static_cast<long double>(k)));
  for (int it = 0; it < 2000; ++it) {
    long double move = 0;
    for (std::size_t i = 0; i < n; ++i) {
      LC denom(1);
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) denom *= z[i] - z[j];
      const LC step = eval(z[i]) / denom;
      z[i] -= step;
      move = std::max(move, std::abs(step));
    }
    if (move < 1e-17L) break;
  }
  std::vector<C> out;
  for (const auto& x : z) out.emplace_back(static_cast<double>(x.real()), static_cast<double>(x.imag()));
  return out;
}

/// Roots of a z^2 + b z + c.
inline std::pair<C, C> quadratic(C a, C b, C c) {
  const C d = std::sqrt(b * b - 4.0 * a * c);
  return {(-b + d) / (2.0 * a), (-b - d) / (2.0 * a)};
}

/// Optimal matching distance by trying every permutation (n <= 8).
inline double best_matching(std::vector<C> a, std::vector<C> b) {
  std::vector<std::size_t> perm(b.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  double best = std::numeric_limits<double>::infinity();
  do {
    double worst = 0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[perm[i]]));
    best = std::min(best, worst);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

inline double cross(C o, C a, C b) {
  return (a.real() - o.real()) * (b.imag() - o.imag()) - (a.imag() - o.imag()) * (b.real() - o.real());
}

inline double segment_distance(C p, C a, C b) {
  const C ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0) return std::abs(p - a);
  const double t = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

/// Euclidean distance from p to the convex hull of pts (0 inside).
inline double hull_distance(C p, std::vector<C> pts) {
  std::sort(pts.begin(), pts.end(), [](C x, C y) { return x.real() < y.real() || (x.real() == y.real() && x.imag() < y.imag()); });
  std::vector<C> h;
  for (int pass = 0; pass < 2; ++pass) {
    const std::size_t base = h.size();
    for (const auto& q : pts) {
      while (h.size() >= base + 2 && cross(h[h.size() - 2], h.back(), q) <= 0) h.pop_back();
      h.push_back(q);
    }
    h.pop_back();
    std::reverse(pts.begin(), pts.end());
  }
  if (h.size() == 1) return std::abs(p - h[0]);
  if (h.size() == 2) return segment_distance(p, h[0], h[1]);
  bool inside = true;
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < h.size(); ++i) {
    const C a = h[i], b = h[(i + 1) % h.size()];
    if (cross(a, b, p) < 0) inside = false;
    d = std::min(d, segment_distance(p, a, b));
  }
  return inside ? 0.0 : d;
}

// Order-six right-hand sides, written straight from their displayed sums.
inline double star_sum(const std::vector<C>& z) {
  const double n = static_cast<double>(z.size());
  double a2 = 0, a4 = 0, a6 = 0;
  C zz(0);
  for (const auto& x : z) {
    const double m = std::norm(x);
    a2 += m;
    a4 += m * m;
    a6 += m * m * m;
    zz += x * m;
  }
  return (n - 6) / n * a6 + 6 / (n * n) * a4 * a2 + 3 / (n * n) * std::norm(zz) - 2 / (n * n * n) * a2 * a2 * a2;
}

inline double starstar_sum(const std::vector<C>& z) {
  const double n = static_cast<double>(z.size());
  double a2 = 0, a4 = 0, a6 = 0;
  C zz(0), s2(0), s2m(0), s3(0);
  for (const auto& x : z) {
    const double m = std::norm(x);
    a2 += m;
    a4 += m * m;
    a6 += m * m * m;
    zz += x * m;
    s2 += x * x;
    s2m += x * x * m;
    s3 += x * x * x;
  }
  return (n - 6) / n * a6 + 2 / (n * n) * a4 * a2 + 4 / (n * n) * (s2m * std::conj(s2)).real() +
         2 / (n * n) * std::norm(zz) + std::norm(s3) / (n * n) - 2 / (n * n * n) * a2 * std::norm(s2);
}

using Mat = std::vector<std::vector<C>>;

inline Mat mat_mul(const Mat& a, const Mat& b) {
  const std::size_t n = a.size();
  Mat c(n, std::vector<C>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

/// tr((S D* S D)^3) with plain nested vectors.
inline double star_trace(const std::vector<C>& z) {
  const std::size_t n = z.size();
  Mat s(n, std::vector<C>(n, -1.0 / n)), d(n, std::vector<C>(n, 0.0)), da = d;
  for (std::size_t i = 0; i < n; ++i) {
    s[i][i] += 1.0;
    d[i][i] = z[i];
    da[i][i] = std::conj(z[i]);
  }
  const Mat unit = mat_mul(mat_mul(mat_mul(s, da), s), d);
  const Mat cube = mat_mul(mat_mul(unit, unit), unit);
  C t(0);
  for (std::size_t i = 0; i < n; ++i) t += cube[i][i];
  return t.real();
}

/// tr((S D* S)^3 (S D S)^3) with plain nested vectors.
inline double starstar_trace(const std::vector<C>& z) {
  const std::size_t n = z.size();
  Mat s(n, std::vector<C>(n, -1.0 / n)), d(n, std::vector<C>(n, 0.0)), da = d;
  for (std::size_t i = 0; i < n; ++i) {
    s[i][i] += 1.0;
    d[i][i] = z[i];
    da[i][i] = std::conj(z[i]);
  }
  const Mat left = mat_mul(mat_mul(s, da), s);
  const Mat right = mat_mul(mat_mul(s, d), s);
  const Mat l3 = mat_mul(mat_mul(left, left), left);
  const Mat r3 = mat_mul(mat_mul(right, right), right);
  const Mat prod = mat_mul(l3, r3);
  C t(0);
  for (std::size_t i = 0; i < n; ++i) t += prod[i][i];
  return t.real();
}

// Samplers driven by the standard library engine, not the library's own.

inline std::vector<C> disk(std::mt19937_64& g, std::size_t n) {
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<C> z;
  for (std::size_t i = 0; i < n; ++i) z.push_back(std::polar(std::sqrt(u(g)), 2 * std::numbers::pi * u(g)));
  return z;
}

inline std::vector<C> centered_unit(std::mt19937_64& g, std::size_t n) {
  auto z = disk(g, n);
  C mean(0);
  for (const auto& x : z) mean += x;
  mean /= static_cast<double>(n);
  double m = 0;
  for (auto& x : z) {
    x -= mean;
    m = std::max(m, std::abs(x));
  }
  if (m > 0)
    for (auto& x : z) x /= m;
  return z;
}

/// c + t_j e^{i theta} with real t_j.
inline std::vector<C> line(std::mt19937_64& g, std::size_t n) {
  std::uniform_real_distribution<double> u(-1, 1);
  const C c(u(g), u(g));
  const C dir = std::polar(1.0, std::numbers::pi * u(g));
  std::vector<C> z;
  for (std::size_t i = 0; i < n; ++i) z.push_back(c + u(g) * dir);
  return z;
}

}  // namespace oracle
