#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <vector>

#include "schoenberg/inequalities.hpp"
#include "schoenberg/polynomial.hpp"
#include "schoenberg/rootfinding.hpp"
#include "schoenberg/types.hpp"

namespace schoenberg {

inline constexpr double tol_disk = 1e-12;
/// |w_k - a| at or below this counts as w_k = a.
inline constexpr double exact_hit_threshold = 1e-11;

/// p(z) = (z - a) prod (z - z_j), in the frame where 0 <= a <= 1 and |z_j| <= 1.
template <std::floating_point Real>
struct BasicSendovInstance {
  Real a = 0;
  std::vector<std::complex<Real>> other_zeros;

  BasicSendovInstance() = default;
  BasicSendovInstance(Real a_, std::vector<std::complex<Real>> zeros) : a(a_), other_zeros(std::move(zeros)) {
    validate();
  }

  void validate() const {
    if (!(a >= 0 && a <= 1)) throw InvalidInput("Sendov instance needs 0 <= a <= 1");
    if (other_zeros.empty()) throw InvalidInput("Sendov instance needs at least one other zero");
    for (const auto& z : other_zeros) {
      if (!detail::is_finite(z) || std::abs(z) > 1 + static_cast<Real>(tol_disk)) {
        throw InvalidInput("Sendov instance zeros must lie in the closed unit disk");
      }
    }
  }

  std::size_t degree() const noexcept { return other_zeros.size() + 1; }

  /// {a, z_1, ..., z_{n-1}}.
  BasicRootConfiguration<Real> configuration() const {
    std::vector<std::complex<Real>> z;
    z.reserve(degree());
    z.emplace_back(a, Real(0));
    z.insert(z.end(), other_zeros.begin(), other_zeros.end());
    return BasicRootConfiguration<Real>(std::move(z));
  }

  /// Re sum z_j >= (n-2)/2 a.
  bool hypothesis_holds() const {
    Real s = 0;
    for (const auto& z : other_zeros) s += z.real();
    return s >= static_cast<Real>(degree() - 2) / 2 * a;
  }

  template <std::floating_point Other>
  BasicSendovInstance<Other> cast() const {
    BasicSendovInstance<Other> out;
    out.a = static_cast<Other>(a);
    for (const auto& z : other_zeros) out.other_zeros.emplace_back(static_cast<Other>(z.real()), static_cast<Other>(z.imag()));
    return out;
  }
};

using SendovInstance = BasicSendovInstance<double>;

/// Rotates an arbitrary (a, zeros) pair by -arg(a) so that a becomes real and
/// nonnegative; relative positions of zeros and critical points are unchanged.
inline SendovInstance normalize_sendov(Complex a, std::vector<Complex> zeros) {
  const double r = std::abs(a);
  if (r > 0) {
    const Complex turn = std::conj(a) / r;
    for (auto& z : zeros) z *= turn;
  }
  return SendovInstance(r, std::move(zeros));
}

/// ((1/m) sum x^p)^(1/p); p = -inf gives the minimum and p = +inf the maximum.
template <std::floating_point Real>
Real power_mean(std::span<const Real> values, Real p) {
  if (values.empty()) throw InvalidInput("power mean of an empty list");
  for (Real x : values) {
    if (!(x >= 0) || !std::isfinite(x)) throw DomainError("power mean needs finite nonnegative values");
  }
  if (p == -std::numeric_limits<Real>::infinity()) return *std::min_element(values.begin(), values.end());
  if (p == std::numeric_limits<Real>::infinity()) return *std::max_element(values.begin(), values.end());
  if (p == 0 || std::isnan(p)) throw DomainError("power mean exponent must be nonzero");
  if (p < 0 && std::any_of(values.begin(), values.end(), [](Real x) { return x == 0; })) {
    throw DomainError("power mean with exponent <= 0 needs positive values");
  }
  Real s = 0;
  for (Real x : values) s += std::pow(x, p);
  return std::pow(s / static_cast<Real>(values.size()), 1 / p);
}

template <std::floating_point Real>
Real power_mean(const std::vector<Real>& values, Real p) {
  return power_mean(std::span<const Real>(values), p);
}

struct PowerMeanReport {
  std::vector<double> exponents;  ///< includes -inf
  std::vector<double> values;     ///< M_p per exponent; empty when exact_hit
  bool condition_holds = false;   ///< Re sum z_j >= (n-2)/2 a
  bool exact_hit = false;         ///< some w_k = a
  double min_distance = 0;        ///< min_k |w_k - a|
  double c1_value = 0;            ///< sum |w_k - a|^-2 (infinite on exact hit)
  double c2_value = 0;            ///< sum |w_k - a|^2
  bool c1_holds = false;          ///< c1_value > n - 1
  bool c2_holds = false;          ///< c2_value < n - 1
  bool open_disk_hit = false;     ///< min_distance < 1
  std::vector<Complex> critical;

  /// The special-case theorem's conclusions, when its hypothesis applies.
  bool theorem_verified() const { return !condition_holds || exact_hit || (c1_holds && c2_holds && open_disk_hit); }
};

namespace detail {

template <std::floating_point Real>
std::vector<Real> distances_to(std::span<const std::complex<Real>> w, Real a) {
  std::vector<Real> d;
  d.reserve(w.size());
  for (const auto& x : w) d.push_back(std::abs(x - std::complex<Real>(a)));
  return d;
}

}  // namespace detail

inline const std::vector<double>& report_exponents() {
  static const std::vector<double> e{-std::numeric_limits<double>::infinity(), -2.0, -1.0, 1.0, 2.0};
  return e;
}

/// Evaluates the special-case hypothesis and the quantities (c1), (c2), the
/// power means of |w_k - a| and the open-disk conclusion.
template <std::floating_point Real>
PowerMeanReport check_special_case(const BasicSendovInstance<Real>& inst, const RootSolverSettings& settings = {}) {
  inst.validate();
  const auto w = critical_points(inst.configuration(), settings).points;
  const auto d = detail::distances_to<Real>(w, inst.a);
  const double m = static_cast<double>(w.size());

  PowerMeanReport out;
  out.exponents = report_exponents();
  out.condition_holds = inst.hypothesis_holds();
  out.critical = detail::to_double<Real>(w);
  out.min_distance = static_cast<double>(*std::min_element(d.begin(), d.end()));
  out.exact_hit = out.min_distance <= exact_hit_threshold;
  Real c2 = 0;
  for (Real x : d) c2 += x * x;
  out.c2_value = static_cast<double>(c2);
  if (out.exact_hit) {
    out.c1_value = std::numeric_limits<double>::infinity();
  } else {
    Real c1 = 0;
    for (Real x : d) c1 += 1 / (x * x);
    out.c1_value = static_cast<double>(c1);
    for (double p : out.exponents) out.values.push_back(static_cast<double>(power_mean<Real>(d, static_cast<Real>(p))));
  }
  out.c1_holds = out.c1_value > m;
  out.c2_holds = out.c2_value < m;
  out.open_disk_hit = out.min_distance < 1;
  return out;
}

/// C1 and C2 rendered as inequality reports lhs <= rhs; applicable only under
/// the hypothesis.
inline ReportPair sendov_reports(const PowerMeanReport& pm, double tol_eq) {
  const double m = static_cast<double>(pm.critical.size());
  auto c1 = make_report({InequalityKind::C1}, m, pm.c1_value, tol_eq, false, true);
  auto c2 = make_report({InequalityKind::C2}, pm.c2_value, m, tol_eq, false, true);
  c1.applicable = c2.applicable = pm.condition_holds;
  return {c1, c2};
}

struct ProbeResult {
  double value = 0;           ///< M_-2, or 0 on an exact hit
  bool exact_hit = false;
  bool reverified = false;    ///< value > 1 triggered a tighter recomputation
  double verified_value = 0;  ///< M_-2 from the tighter recomputation
  bool counterexample() const { return reverified && verified_value > 1 + counterexample_margin; }
};

template <std::floating_point Real>
Real m_minus2(const BasicSendovInstance<Real>& inst, const RootSolverSettings& settings, bool& hit) {
  const auto w = critical_points(inst.configuration(), settings).points;
  const auto d = detail::distances_to<Real>(w, inst.a);
  hit = *std::min_element(d.begin(), d.end()) <= static_cast<Real>(exact_hit_threshold);
  if (hit) return 0;
  return power_mean<Real>(d, Real(-2));
}

/// M_-2(|w_1 - a|, ..., |w_{n-1} - a|). Values above 1 are recomputed in
/// extended precision at tol_root / 100 before being trusted.
inline ProbeResult probe_m_minus2(const SendovInstance& inst, const RootSolverSettings& settings = {}) {
  inst.validate();
  ProbeResult out;
  out.value = m_minus2(inst, settings, out.exact_hit);
  out.verified_value = out.value;
  if (out.value > 1) {
    RootSolverSettings tight = settings;
    tight.tol_root /= 100;
    bool hit = false;
    out.verified_value = static_cast<double>(m_minus2(inst.cast<long double>(), tight, hit));
    out.reverified = true;
  }
  return out;
}

}  // namespace schoenberg
