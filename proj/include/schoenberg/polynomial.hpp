#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "schoenberg/types.hpp"

namespace schoenberg {

namespace detail {

template <class T>
struct real_of {
  using type = T;
};
template <class T>
struct real_of<std::complex<T>> {
  using type = T;
};

template <std::floating_point Real>
bool is_finite(const std::complex<Real>& z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

}  // namespace detail

/// Ordered list of complex zeros z_1..z_n with n >= 2, all finite.
template <std::floating_point Real>
class BasicRootConfiguration {
 public:
  using real_type = Real;
  using value_type = std::complex<Real>;

  explicit BasicRootConfiguration(std::vector<value_type> zeros)
      : zeros_(std::move(zeros)) {
    if (zeros_.size() < 2) {
      throw InvalidInput("root configuration needs at least 2 zeros, got " +
                         std::to_string(zeros_.size()));
    }
    for (const auto& z : zeros_) {
      if (!detail::is_finite(z)) throw InvalidInput("root configuration has a non-finite zero");
    }
  }

  std::size_t size() const noexcept { return zeros_.size(); }
  std::span<const value_type> zeros() const noexcept { return zeros_; }
  const value_type& operator[](std::size_t i) const { return zeros_[i]; }
  auto begin() const noexcept { return zeros_.begin(); }
  auto end() const noexcept { return zeros_.end(); }

  /// max(1, max_j |z_j|), the scale most tolerances are measured against.
  Real scale() const {
    Real s = 1;
    for (const auto& z : zeros_) s = std::max(s, std::abs(z));
    return s;
  }

  Real max_modulus() const {
    Real s = 0;
    for (const auto& z : zeros_) s = std::max(s, std::abs(z));
    return s;
  }

  template <std::floating_point Other>
  BasicRootConfiguration<Other> cast() const {
    std::vector<std::complex<Other>> out;
    out.reserve(zeros_.size());
    for (const auto& z : zeros_) out.emplace_back(static_cast<Other>(z.real()), static_cast<Other>(z.imag()));
    return BasicRootConfiguration<Other>(std::move(out));
  }

  friend bool operator==(const BasicRootConfiguration&, const BasicRootConfiguration&) = default;

 private:
  std::vector<value_type> zeros_;
};

using RootConfiguration = BasicRootConfiguration<double>;

/// Dense complex polynomial, coefficients ordered constant term first.
///
/// The leading coefficient is nonzero except for the zero polynomial, which is
/// stored as a single zero coefficient and reports is_zero().
template <std::floating_point Real>
class Polynomial {
 public:
  using value_type = std::complex<Real>;

  Polynomial() : coeffs_{value_type(0)} {}

  explicit Polynomial(std::vector<value_type> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw InvalidInput("polynomial needs at least one coefficient");
    for (const auto& c : coeffs_) {
      if (!detail::is_finite(c)) throw InvalidInput("polynomial has a non-finite coefficient");
    }
    if (coeffs_.back() == value_type(0)) {
      if (std::all_of(coeffs_.begin(), coeffs_.end(), [](const value_type& c) { return c == value_type(0); })) {
        coeffs_.assign(1, value_type(0));
      } else {
        throw InvalidInput("polynomial leading coefficient must be nonzero");
      }
    }
  }

  std::size_t degree() const noexcept { return coeffs_.size() - 1; }
  bool is_zero() const noexcept { return coeffs_.size() == 1 && coeffs_[0] == value_type(0); }
  bool is_monic() const noexcept { return coeffs_.back() == value_type(1); }
  const value_type& leading() const noexcept { return coeffs_.back(); }
  std::span<const value_type> coefficients() const noexcept { return coeffs_; }
  const value_type& operator[](std::size_t k) const { return coeffs_[k]; }

  value_type operator()(const value_type& z) const {
    value_type acc = coeffs_.back();
    for (std::size_t k = coeffs_.size() - 1; k-- > 0;) acc = acc * z + coeffs_[k];
    return acc;
  }

  /// Horner evaluation of p(z) and p'(z) together.
  std::pair<value_type, value_type> value_and_slope(const value_type& z) const {
    value_type p = coeffs_.back();
    value_type dp(0);
    for (std::size_t k = coeffs_.size() - 1; k-- > 0;) {
      dp = dp * z + p;
      p = p * z + coeffs_[k];
    }
    return {p, dp};
  }

  /// sum_k |a_k| max(1,|z|)^k: the magnitude against which |p(z)| is judged.
  Real residual_scale(const value_type& z) const {
    const Real r = std::max(Real(1), std::abs(z));
    Real acc = 0;
    for (std::size_t k = coeffs_.size(); k-- > 0;) acc = acc * r + std::abs(coeffs_[k]);
    return acc;
  }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  std::vector<value_type> coeffs_;
};

/// Monic polynomial prod_j (z - z_j), factors multiplied in input order.
template <std::floating_point Real>
Polynomial<Real> from_roots(const BasicRootConfiguration<Real>& config) {
  using C = std::complex<Real>;
  std::vector<C> c{C(1)};
  c.reserve(config.size() + 1);
  for (const auto& root : config) {
    c.push_back(c.back());
    for (std::size_t k = c.size() - 2; k > 0; --k) c[k] = c[k - 1] - root * c[k];
    c[0] = -root * c[0];
  }
  return Polynomial<Real>(std::move(c));
}

/// Term-by-term derivative. A constant yields the zero polynomial.
template <std::floating_point Real>
Polynomial<Real> derivative(const Polynomial<Real>& p) {
  using C = std::complex<Real>;
  if (p.degree() == 0) return Polynomial<Real>();
  std::vector<C> d(p.degree());
  for (std::size_t k = 1; k <= p.degree(); ++k) d[k - 1] = p[k] * static_cast<Real>(k);
  return Polynomial<Real>(std::move(d));
}

/// All of e_0..e_m via the running product of (1 + v_j t).
template <class T>
std::vector<T> elementary_symmetric_all(std::span<const T> values) {
  std::vector<T> e(values.size() + 1, T(0));
  e[0] = T(1);
  for (std::size_t j = 0; j < values.size(); ++j) {
    for (std::size_t k = j + 1; k > 0; --k) e[k] += values[j] * e[k - 1];
  }
  return e;
}

template <class T>
T elementary_symmetric(std::span<const T> values, std::size_t k) {
  if (k > values.size()) {
    throw InvalidInput("elementary symmetric index " + std::to_string(k) + " exceeds length " +
                       std::to_string(values.size()));
  }
  return elementary_symmetric_all(values)[k];
}

template <class T>
T elementary_symmetric(const std::vector<T>& values, std::size_t k) {
  return elementary_symmetric(std::span<const T>(values), k);
}

template <std::floating_point Real>
std::complex<Real> centroid(const BasicRootConfiguration<Real>& config) {
  std::complex<Real> s(0);
  for (const auto& z : config) s += z;
  return s / static_cast<Real>(config.size());
}

/// Translate so the zeros sum to zero.
template <std::floating_point Real>
BasicRootConfiguration<Real> recenter(const BasicRootConfiguration<Real>& config) {
  const auto c = centroid(config);
  std::vector<std::complex<Real>> out(config.begin(), config.end());
  for (auto& z : out) z -= c;
  return BasicRootConfiguration<Real>(std::move(out));
}

/// |sum z_j| / max(1, max|z_j|).
template <std::floating_point Real>
Real centroid_residual(const BasicRootConfiguration<Real>& config) {
  std::complex<Real> s(0);
  for (const auto& z : config) s += z;
  return std::abs(s) / config.scale();
}

template <std::floating_point Real>
bool is_centered(const BasicRootConfiguration<Real>& config, const Tolerances& tol = {}) {
  return centroid_residual(config) <= static_cast<Real>(tol.center);
}

/// Scale all zeros so that max|z_j| = 1. The all-zero configuration is returned unchanged.
template <std::floating_point Real>
BasicRootConfiguration<Real> normalize_modulus(const BasicRootConfiguration<Real>& config) {
  const Real m = config.max_modulus();
  if (m == 0) return config;
  std::vector<std::complex<Real>> out(config.begin(), config.end());
  for (auto& z : out) z /= m;
  return BasicRootConfiguration<Real>(std::move(out));
}

}  // namespace schoenberg
