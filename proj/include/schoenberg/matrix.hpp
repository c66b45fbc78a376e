#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "schoenberg/polynomial.hpp"
#include "schoenberg/rootfinding.hpp"
#include "schoenberg/types.hpp"

namespace schoenberg {

/// Dense square complex matrix, row-major.
template <std::floating_point Real>
class BasicMatrix {
 public:
  using value_type = std::complex<Real>;

  explicit BasicMatrix(std::size_t order) : n_(order), a_(order * order, value_type(0)) {}

  BasicMatrix(std::initializer_list<std::initializer_list<value_type>> rows) : n_(rows.size()), a_() {
    a_.reserve(n_ * n_);
    for (const auto& row : rows) {
      if (row.size() != n_) throw InvalidInput("matrix rows must have equal length to the row count");
      a_.insert(a_.end(), row.begin(), row.end());
    }
  }

  static BasicMatrix identity(std::size_t order) {
    BasicMatrix m(order);
    for (std::size_t i = 0; i < order; ++i) m(i, i) = value_type(1);
    return m;
  }

  std::size_t order() const noexcept { return n_; }
  value_type& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const value_type& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  BasicMatrix adjoint() const {
    BasicMatrix m(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
  }

  value_type trace() const {
    value_type t(0);
    for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
  }

  Real frobenius_norm() const {
    Real s = 0;
    for (const auto& x : a_) s += std::norm(x);
    return std::sqrt(s);
  }

  Real max_abs_entry() const {
    Real s = 0;
    for (const auto& x : a_) s = std::max(s, std::abs(x));
    return s;
  }

  friend BasicMatrix operator*(const BasicMatrix& x, const BasicMatrix& y) {
    if (x.n_ != y.n_) throw InvalidInput("matrix dimension mismatch in product");
    BasicMatrix r(x.n_);
    for (std::size_t i = 0; i < x.n_; ++i)
      for (std::size_t k = 0; k < x.n_; ++k) {
        const value_type xik = x(i, k);
        if (xik == value_type(0)) continue;
        for (std::size_t j = 0; j < x.n_; ++j) r(i, j) += xik * y(k, j);
      }
    return r;
  }

  friend BasicMatrix operator-(const BasicMatrix& x, const BasicMatrix& y) {
    if (x.n_ != y.n_) throw InvalidInput("matrix dimension mismatch in difference");
    BasicMatrix r = x;
    for (std::size_t i = 0; i < r.a_.size(); ++i) r.a_[i] -= y.a_[i];
    return r;
  }

  friend bool operator==(const BasicMatrix&, const BasicMatrix&) = default;

 private:
  std::size_t n_;
  std::vector<value_type> a_;
};

using ComplexMatrix = BasicMatrix<double>;

/// S = I - J/n, the orthogonal projection onto vectors with zero sum.
template <std::floating_point Real = double>
BasicMatrix<Real> build_S(std::size_t n) {
  if (n == 0) throw InvalidInput("S needs order >= 1");
  BasicMatrix<Real> s(n);
  const Real inv = Real(1) / static_cast<Real>(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s(i, j) = (i == j ? Real(1) : Real(0)) - inv;
  return s;
}

/// J, the all-ones matrix.
template <std::floating_point Real = double>
BasicMatrix<Real> build_J(std::size_t n) {
  BasicMatrix<Real> j(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) j(r, c) = Real(1);
  return j;
}

/// D = diag(z_1, ..., z_n).
template <std::floating_point Real>
BasicMatrix<Real> build_D(const BasicRootConfiguration<Real>& config) {
  BasicMatrix<Real> d(config.size());
  for (std::size_t i = 0; i < config.size(); ++i) d(i, i) = config[i];
  return d;
}

/// trace(F_1 F_2 ... F_k) by explicit left-to-right multiplication.
template <std::floating_point Real>
std::complex<Real> trace_word(std::span<const BasicMatrix<Real>> factors) {
  if (factors.empty()) throw InvalidInput("trace_word needs at least one factor");
  BasicMatrix<Real> acc = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) {
    if (factors[i].order() != acc.order()) throw InvalidInput("trace_word factors are not conformable");
    acc = acc * factors[i];
  }
  return acc.trace();
}

template <std::floating_point Real>
std::complex<Real> trace_word(const std::vector<BasicMatrix<Real>>& factors) {
  return trace_word(std::span<const BasicMatrix<Real>>(factors));
}

inline constexpr std::size_t max_char_poly_order = 32;

/// Monic characteristic polynomial det(zI - M) via Faddeev-LeVerrier.
template <std::floating_point Real>
Polynomial<Real> char_poly(const BasicMatrix<Real>& m) {
  using C = std::complex<Real>;
  const std::size_t n = m.order();
  if (n > max_char_poly_order) {
    throw UnsupportedSize("characteristic polynomial limited to order " + std::to_string(max_char_poly_order));
  }
  if (n == 0) throw InvalidInput("characteristic polynomial of an empty matrix");
  std::vector<C> c(n + 1, C(0));
  c[n] = C(1);
  BasicMatrix<Real> mk(n);  // M_0 = 0
  for (std::size_t k = 1; k <= n; ++k) {
    BasicMatrix<Real> next = m * mk;
    for (std::size_t i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
    mk = std::move(next);
    c[n - k] = -(m * mk).trace() / static_cast<Real>(k);
  }
  return Polynomial<Real>(std::move(c));
}

template <std::floating_point Real>
struct BasicSpectrumComparison {
  std::vector<std::complex<Real>> matrix_eigenvalues;
  std::vector<std::complex<Real>> expected;
  Real max_pair_distance = 0;
};

using SpectrumComparison = BasicSpectrumComparison<double>;

/// Eigenvalues of D(I - J/n) against {0} and the critical points.
template <std::floating_point Real>
BasicSpectrumComparison<Real> verify_lemma1(const BasicRootConfiguration<Real>& config,
                                            const RootSolverSettings& settings = {}) {
  const auto ds = build_D(config) * build_S<Real>(config.size());
  BasicSpectrumComparison<Real> out;
  out.matrix_eigenvalues = find_roots(char_poly(ds), settings);
  out.expected = critical_points(config, settings).points;
  out.expected.insert(out.expected.begin(), std::complex<Real>(0));
  out.max_pair_distance = match_multisets(out.matrix_eigenvalues, out.expected);
  return out;
}

/// ||M*M - MM*||_F <= tol * ||M||_F^2.
template <std::floating_point Real>
bool is_normal(const BasicMatrix<Real>& m, Real tol) {
  const auto ma = m.adjoint();
  const Real lhs = (ma * m - m * ma).frobenius_norm();
  const Real f = m.frobenius_norm();
  return lhs <= tol * f * f;
}

/// S D S, whose normality characterizes collinear zeros.
template <std::floating_point Real>
BasicMatrix<Real> compress_D(const BasicRootConfiguration<Real>& config) {
  const auto s = build_S<Real>(config.size());
  return s * build_D(config) * s;
}

/// True iff every (z_j - z_1)/(z_ref - z_1) is real to tol, where z_ref is the
/// zero farthest from z_1. Coincident zeros are trivially collinear.
template <std::floating_point Real>
bool are_collinear(const BasicRootConfiguration<Real>& config, Real tol = Real(1e-10)) {
  const auto anchor = config[0];
  std::size_t ref = 0;
  Real far = 0;
  for (std::size_t j = 1; j < config.size(); ++j) {
    const Real d = std::abs(config[j] - anchor);
    if (d > far) {
      far = d;
      ref = j;
    }
  }
  if (far == 0) return true;
  const auto dir = config[ref] - anchor;
  for (const auto& z : config) {
    if (std::abs(((z - anchor) / dir).imag()) > tol) return false;
  }
  return true;
}

}  // namespace schoenberg
