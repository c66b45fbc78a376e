#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "schoenberg/polynomial.hpp"
#include "schoenberg/types.hpp"

namespace schoenberg {

struct RootSolverSettings {
  int max_iterations = 500;
  double tol_root = 1e-9;
  double initial_radius_factor = 0.1;
  std::uint64_t rng_seed = 0x9e3779b97f4a7c15ULL;

  void validate() const {
    if (max_iterations < 1) throw InvalidInput("max_iterations must be >= 1");
    if (!(tol_root > 0)) throw InvalidInput("tol_root must be > 0");
    if (!(initial_radius_factor >= 0)) throw InvalidInput("initial_radius_factor must be >= 0");
  }
};

/// Critical points w_1..w_{n-1} of a configuration, with multiplicity.
template <std::floating_point Real>
struct BasicCriticalSet {
  std::vector<std::complex<Real>> points;

  std::size_t size() const noexcept { return points.size(); }
  auto begin() const noexcept { return points.begin(); }
  auto end() const noexcept { return points.end(); }
};

using CriticalSet = BasicCriticalSet<double>;

namespace detail {

/// Unique positive root of |a_n| x^n - sum_{k<n} |a_k| x^k.
template <std::floating_point Real>
Real cauchy_bound(const Polynomial<Real>& p) {
  const std::size_t n = p.degree();
  const Real lead = std::abs(p.leading());
  std::vector<Real> mag(n);
  Real hi = 1;
  for (std::size_t k = 0; k < n; ++k) {
    mag[k] = std::abs(p[k]) / lead;
    hi = std::max(hi, Real(1) + mag[k]);
  }
  auto f = [&](Real x) {
    Real acc = 1;
    for (std::size_t k = n; k-- > 0;) acc = acc * x - mag[k];
    return acc;
  };
  // f(0) <= 0 and f(hi) > 0; bisect on [0, hi].
  Real lo = 0;
  for (int i = 0; i < 200 && hi - lo > std::numeric_limits<Real>::epsilon() * hi; ++i) {
    const Real mid = (lo + hi) / 2;
    (f(mid) > 0 ? hi : lo) = mid;
  }
  return hi;
}

template <std::floating_point Real>
Real relative_residual(const Polynomial<Real>& p, const std::complex<Real>& z) {
  return std::abs(p(z)) / p.residual_scale(z);
}

/// sum |a_k| |z|^k, the running error scale of Horner evaluation at z.
template <std::floating_point Real>
Real horner_bound(const Polynomial<Real>& p, const std::complex<Real>& z) {
  const Real r = std::abs(z);
  Real acc = 0;
  for (std::size_t k = p.coefficients().size(); k-- > 0;) acc = acc * r + std::abs(p[k]);
  return acc;
}

template <std::floating_point Real>
std::vector<Complex> to_double(std::span<const std::complex<Real>> v) {
  std::vector<Complex> out;
  out.reserve(v.size());
  for (const auto& z : v) out.emplace_back(static_cast<double>(z.real()), static_cast<double>(z.imag()));
  return out;
}

}  // namespace detail

/// Groups root approximations whose inclusion disks overlap. The disk about
/// r_i has radius n (|p(r_i)| + 4 eps p~(|r_i|)) / |a_n prod_{j != i} (r_i - r_j)|,
/// with p~ the Horner error scale; an isolated disk holds exactly one root, so
/// only groups of two or more are unresolved clusters.
template <std::floating_point Real>
std::vector<std::vector<std::size_t>> root_clusters(const Polynomial<Real>& p,
                                                    std::span<const std::complex<Real>> z) {
  const std::size_t n = z.size();
  const Real eps = std::numeric_limits<Real>::epsilon();
  std::vector<Real> radius(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::complex<Real> prod = p.leading();
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) prod *= z[i] - z[j];
    const Real num = static_cast<Real>(n) * (std::abs(p(z[i])) + 4 * eps * detail::horner_bound(p, z[i]));
    radius[i] = std::abs(prod) == 0 ? std::numeric_limits<Real>::infinity() : num / std::abs(prod);
  }
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(z[i] - z[j]) <= radius[i] + radius[j]) parent[find(j)] = find(i);
  std::vector<std::vector<std::size_t>> comps(n), groups;
  for (std::size_t i = 0; i < n; ++i) comps[find(i)].push_back(i);
  for (auto& c : comps)
    if (!c.empty()) groups.push_back(std::move(c));
  return groups;
}

namespace detail {

/// Collapses each unresolved cluster of m approximations onto the nearby
/// simple root of p^(m-1), found by Newton from the cluster mean. A cluster
/// whose refined centre leaves the cluster's hull radius is left alone.
template <std::floating_point Real>
void refine_clusters(const Polynomial<Real>& p, std::vector<std::complex<Real>>& z,
                     const std::vector<std::vector<std::size_t>>& groups) {
  using C = std::complex<Real>;
  for (const auto& group : groups) {
    const std::size_t m = group.size();
    if (m < 2) continue;
    Polynomial<Real> g = p;
    for (std::size_t k = 1; k < m; ++k) g = derivative(g);
    C c(0);
    for (auto i : group) c += z[i];
    c /= static_cast<Real>(m);
    Real spread = 0;
    for (auto i : group) spread = std::max(spread, std::abs(z[i] - c));
    const C start = c;
    Real res = std::abs(g(c));
    for (int it = 0; it < 60 && res > 0; ++it) {
      const auto [gv, gd] = g.value_and_slope(c);
      if (gd == C(0)) break;
      const C next = c - gv / gd;
      const Real nres = std::abs(g(next));
      if (!(nres < res)) break;
      c = next;
      res = nres;
    }
    if (std::abs(c - start) > spread) continue;
    for (auto i : group) z[i] = c;
  }
}

/// Aberth-Ehrlich iteration plus Newton polishing, with no cluster handling
/// and no acceptance check. Degree >= 2.
template <std::floating_point Real>
std::vector<std::complex<Real>> aberth(const Polynomial<Real>& p, const RootSolverSettings& settings) {
  using C = std::complex<Real>;
  const std::size_t n = p.degree();

  const Real eps = std::numeric_limits<Real>::epsilon();
  const Real two_pi = 2 * std::numbers::pi_v<Real>;
  const Real radius = (1 + static_cast<Real>(settings.initial_radius_factor)) * detail::cauchy_bound(p);

  std::mt19937_64 rng(settings.rng_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Real sector = two_pi / static_cast<Real>(n);
  const Real offset = static_cast<Real>(unit(rng)) * sector;
  std::vector<C> z(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Real jitter = static_cast<Real>(unit(rng) - 0.5) * Real(0.25) * sector;
    z[k] = std::polar(radius, offset + static_cast<Real>(k) * sector + jitter);
  }

  std::vector<bool> done(n, false);
  for (int it = 0; it < settings.max_iterations; ++it) {
    bool all_done = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i]) continue;
      const auto [pv, dv] = p.value_and_slope(z[i]);
      if (std::abs(pv) <= 4 * eps * detail::horner_bound(p, z[i])) {
        done[i] = true;
        continue;
      }
      all_done = false;
      C repulsion(0);
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const C diff = z[i] - z[j];
        if (diff != C(0)) repulsion += C(1) / diff;
      }
      C step;
      if (dv == C(0)) {
        // Flat spot: nudge outward.
        step = -C(std::abs(z[i]) + 1) * eps * Real(1024);
      } else {
        const C ratio = pv / dv;
        const C denom = C(1) - ratio * repulsion;
        step = (denom == C(0)) ? ratio : ratio / denom;
      }
      z[i] -= step;
      if (std::abs(step) <= eps * std::abs(z[i])) done[i] = true;
    }
    if (all_done) break;
  }

  // Newton polishing, accepting a step only if the residual shrinks.
  for (auto& r : z) {
    Real res = std::abs(p(r));
    for (int k = 0; k < 4 && res > 0; ++k) {
      const auto [pv, dv] = p.value_and_slope(r);
      if (dv == C(0)) break;
      const C candidate = r - pv / dv;
      const Real cres = std::abs(p(candidate));
      if (!(cres < res)) break;
      r = candidate;
      res = cres;
    }
  }

  return z;
}

template <std::floating_point Real>
void check_residuals(const Polynomial<Real>& p, const std::vector<std::complex<Real>>& z,
                     const RootSolverSettings& settings) {
  Real worst = 0;
  for (const auto& r : z) worst = std::max(worst, relative_residual(p, r));
  if (!(worst <= static_cast<Real>(settings.tol_root))) {
    throw ConvergenceError("root finder did not converge within " + std::to_string(settings.max_iterations) +
                               " iterations",
                           to_double<Real>(z), static_cast<double>(worst));
  }
}

}  // namespace detail

/// Roots of p with multiplicity, by Aberth-Ehrlich simultaneous iteration
/// followed by Newton polishing and collapse of unresolved clusters.
///
/// Starting points sit on a circle of radius (1 + initial_radius_factor)
/// times the Cauchy bound, with angular jitter drawn from rng_seed. Every
/// returned root r satisfies |p(r)| <= tol_root * p.residual_scale(r).
template <std::floating_point Real>
std::vector<std::complex<Real>> find_roots(const Polynomial<Real>& p, const RootSolverSettings& settings = {}) {
  settings.validate();
  if (p.is_zero() || p.degree() == 0) throw InvalidInput("root finding needs degree >= 1");
  if (p.degree() == 1) return {-p[0] / p[1]};
  auto z = detail::aberth(p, settings);
  detail::refine_clusters(p, z, root_clusters<Real>(p, z));
  detail::check_residuals(p, z, settings);
  return z;
}

namespace detail {

/// The distinct zeros u_j of a configuration with multiplicities m_j, and
/// H(z) = sum_j m_j prod_{i != j} (z - u_i), so that
/// p'(z) = H(z) prod_j (z - u_j)^(m_j - 1).
template <std::floating_point Real>
struct ReducedDerivative {
  using C = std::complex<Real>;

  std::vector<C> u;
  std::vector<Real> m;

  struct Value {
    C h, ratio;  // H(x) and H(x) / H'(x)
    Real error = 0;
    bool ok = false;
  };

  /// Zeros closer than a few ulps of the configuration scale are merged.
  explicit ReducedDerivative(const BasicRootConfiguration<Real>& config) {
    const Real merge = 16 * std::numeric_limits<Real>::epsilon() * config.scale();
    for (const auto& z : config) {
      const auto it = std::find_if(u.begin(), u.end(), [&](const C& x) { return std::abs(x - z) <= merge; });
      if (it == u.end()) {
        u.push_back(z);
        m.push_back(1);
      } else {
        m[static_cast<std::size_t>(it - u.begin())] += 1;
      }
    }
  }

  Polynomial<Real> expanded() const {
    std::vector<C> total(u.size(), C(0));
    for (std::size_t j = 0; j < u.size(); ++j) {
      std::vector<C> c{C(1)};
      for (std::size_t i = 0; i < u.size(); ++i) {
        if (i == j) continue;
        std::vector<C> next(c.size() + 1, C(0));
        for (std::size_t k = 0; k < c.size(); ++k) {
          next[k + 1] += c[k];
          next[k] -= u[i] * c[k];
        }
        c = std::move(next);
      }
      for (std::size_t k = 0; k < c.size(); ++k) total[k] += m[j] * c[k];
    }
    return Polynomial<Real>(std::move(total));
  }

  /// H and H/H' evaluated in product form, with a round-off bound on H.
  Value operator()(const C& x) const {
    Value v;
    C prod(1), g(0), s(0), dg(0);
    Real weight = 0;
    for (std::size_t j = 0; j < u.size(); ++j) {
      const C d = x - u[j];
      if (d == C(0)) return v;
      const C inv = C(1) / d;
      prod *= d;
      s += inv;
      g += m[j] * inv;
      dg -= m[j] * inv * inv;
      weight += m[j] * std::abs(inv);
    }
    const Real eps = std::numeric_limits<Real>::epsilon();
    v.h = prod * g;
    v.error = 4 * static_cast<Real>(u.size()) * eps * std::abs(prod) * weight;
    const C denom = g * s + dg;
    v.ratio = denom == C(0) ? C(0) : g / denom;
    v.ok = std::isfinite(std::abs(v.h)) && denom != C(0);
    return v;
  }
};

/// Aberth sweeps on H in product form. A point stops once |H| is down to
/// round-off or its step is negligible.
template <std::floating_point Real>
void polish_product(const ReducedDerivative<Real>& red, std::vector<std::complex<Real>>& v, int max_sweeps) {
  using C = std::complex<Real>;
  const Real eps = std::numeric_limits<Real>::epsilon();
  std::vector<bool> frozen(v.size(), false);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool moved = false;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (frozen[i]) continue;
      const auto cur = red(v[i]);
      if (!cur.ok || std::abs(cur.h) <= cur.error) {
        frozen[i] = true;
        continue;
      }
      C repulsion(0);
      for (std::size_t k = 0; k < v.size(); ++k)
        if (k != i && v[k] != v[i]) repulsion += C(1) / (v[i] - v[k]);
      const C denom = C(1) - cur.ratio * repulsion;
      const C step = denom == C(0) ? cur.ratio : cur.ratio / denom;
      const C next = v[i] - step;
      if (!std::isfinite(std::abs(next))) {
        frozen[i] = true;
        continue;
      }
      v[i] = next;
      moved = true;
      if (std::abs(step) <= eps * std::abs(next)) frozen[i] = true;
    }
    if (!moved) break;
  }
}

/// Inclusion-disk clusters for roots of H, with radii from the product-form
/// evaluation. Identical approximations always share a cluster.
template <std::floating_point Real>
std::vector<std::vector<std::size_t>> product_clusters(const ReducedDerivative<Real>& red,
                                                       const std::vector<std::complex<Real>>& v) {
  using C = std::complex<Real>;
  const std::size_t d = v.size();
  Real total_weight = 0;
  for (Real w : red.m) total_weight += w;
  std::vector<Real> radius(d);
  for (std::size_t i = 0; i < d; ++i) {
    const auto val = red(v[i]);
    C prod(total_weight);
    for (std::size_t k = 0; k < d; ++k)
      if (k != i && v[k] != v[i]) prod *= v[i] - v[k];
    radius[i] = val.ok ? static_cast<Real>(d) * (std::abs(val.h) + val.error) / std::abs(prod)
                       : std::numeric_limits<Real>::infinity();
  }
  std::vector<std::size_t> parent(d);
  for (std::size_t i = 0; i < d; ++i) parent[i] = i;
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = i + 1; k < d; ++k)
      if (v[i] == v[k] || std::abs(v[i] - v[k]) <= radius[i] + radius[k]) parent[find(k)] = find(i);
  std::vector<std::vector<std::size_t>> comps(d), groups;
  for (std::size_t i = 0; i < d; ++i) comps[find(i)].push_back(i);
  for (auto& c : comps)
    if (!c.empty()) groups.push_back(std::move(c));
  return groups;
}

}  // namespace detail

/// Zeros of p'(z) for p = prod (z - z_j); exactly n - 1 values.
///
/// A zero of multiplicity m contributes m - 1 critical points at itself. The
/// rest are roots of the reduced derivative H, seeded from its expanded
/// coefficients and then polished in product form, which stays accurate when
/// the coefficients are badly conditioned. Should that fail the residual
/// test, the roots of the expanded p' are used instead.
template <std::floating_point Real>
BasicCriticalSet<Real> critical_points(const BasicRootConfiguration<Real>& config,
                                       const RootSolverSettings& settings = {}) {
  using C = std::complex<Real>;
  settings.validate();
  const detail::ReducedDerivative<Real> red(config);
  std::vector<C> w;
  w.reserve(config.size() - 1);
  for (std::size_t j = 0; j < red.u.size(); ++j)
    for (Real k = 1; k < red.m[j]; ++k) w.push_back(red.u[j]);
  if (red.u.size() >= 2) {
    const auto h = red.expanded();
    auto v = h.degree() == 1 ? std::vector<C>{-h[0] / h[1]} : detail::aberth(h, settings);
    detail::polish_product(red, v, settings.max_iterations);
    detail::refine_clusters(h, v, detail::product_clusters(red, v));
    w.insert(w.end(), v.begin(), v.end());
  }
  const auto dp = derivative(from_roots(config));
  try {
    detail::check_residuals(dp, w, settings);
  } catch (const ConvergenceError&) {
    w = find_roots(dp, settings);
  }
  return {std::move(w)};
}

/// Critical points xi_1 >= ... >= xi_{n-1} of q(z) = prod (z - |z_j|).
///
/// q is real-rooted, so each xi is real and nonnegative. Imaginary parts and
/// negative values up to sqrt(tol_root) * scale are round-off and dropped;
/// anything larger is reported as a numeric inconsistency.
template <std::floating_point Real>
std::vector<Real> moduli_critical_points(const BasicRootConfiguration<Real>& config,
                                         const RootSolverSettings& settings = {}) {
  std::vector<std::complex<Real>> moduli;
  moduli.reserve(config.size());
  for (const auto& z : config) moduli.emplace_back(std::abs(z), Real(0));
  const BasicRootConfiguration<Real> q_roots(std::move(moduli));
  const auto raw = critical_points(q_roots, settings).points;

  const Real bound = std::sqrt(static_cast<Real>(settings.tol_root)) * q_roots.scale();
  std::vector<Real> xi;
  xi.reserve(raw.size());
  for (const auto& w : raw) {
    if (std::abs(w.imag()) > bound) {
      throw NumericConsistencyError("moduli critical point has imaginary residual " +
                                    std::to_string(static_cast<double>(w.imag())));
    }
    if (w.real() < -bound) throw NumericConsistencyError("moduli critical point is negative");
    xi.push_back(std::max(Real(0), w.real()));
  }
  std::sort(xi.begin(), xi.end(), std::greater<>());
  return xi;
}

/// Maximum pairing distance under greedy assignment: repeatedly pair the
/// globally closest unmatched elements.
template <std::floating_point Real>
Real match_multisets(std::span<const std::complex<Real>> a, std::span<const std::complex<Real>> b) {
  if (a.size() != b.size()) {
    throw InvalidInput("multiset lengths differ: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  }
  struct Pair {
    Real d;
    std::size_t i, j;
  };
  std::vector<Pair> pairs;
  pairs.reserve(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) pairs.push_back({std::abs(a[i] - b[j]), i, j});
  std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) { return x.d < y.d; });
  std::vector<bool> used_a(a.size(), false), used_b(b.size(), false);
  Real worst = 0;
  std::size_t matched = 0;
  for (const auto& pr : pairs) {
    if (matched == a.size()) break;
    if (used_a[pr.i] || used_b[pr.j]) continue;
    used_a[pr.i] = used_b[pr.j] = true;
    worst = std::max(worst, pr.d);
    ++matched;
  }
  return worst;
}

template <std::floating_point Real>
Real match_multisets(const std::vector<std::complex<Real>>& a, const std::vector<std::complex<Real>>& b) {
  return match_multisets(std::span<const std::complex<Real>>(a), std::span<const std::complex<Real>>(b));
}

}  // namespace schoenberg
