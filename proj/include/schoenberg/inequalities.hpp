#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "schoenberg/matrix.hpp"
#include "schoenberg/polynomial.hpp"
#include "schoenberg/rootfinding.hpp"
#include "schoenberg/types.hpp"

namespace schoenberg {

enum class InequalityKind {
  S0,        // order 2, centered
  S,         // order 2, general form
  BS,        // order 4, centered
  KT,        // order 4, centered, tighter
  STAR,      // order 6, centered
  STARSTAR,  // order 6, centered, tighter
  BSEN,      // order 1
  ST1,       // order 1, centered
  EK,        // e_k of moduli
  LOGMAJ,    // weak log-majorization by moduli critical points
  CC1,       // e_k of moduli against e_k of moduli critical points
  LXZ,       // order r >= 2
  IMPRO,     // order r >= 2, tighter
  C1,        // sum |w - a|^-2 > n - 1
  C2,        // sum |w - a|^2 < n - 1
};

/// Inequality tag with its index (k) or order (r) where it has one.
struct InequalityId {
  InequalityKind kind = InequalityKind::S0;
  int k = 0;
  double r = 0;

  static InequalityId indexed(InequalityKind kind, int k) { return {kind, k, 0}; }
  static InequalityId ordered(InequalityKind kind, double r) { return {kind, 0, r}; }

  bool requires_centering() const {
    switch (kind) {
      case InequalityKind::S0:
      case InequalityKind::BS:
      case InequalityKind::KT:
      case InequalityKind::STAR:
      case InequalityKind::STARSTAR:
      case InequalityKind::ST1:
        return true;
      default:
        return false;
    }
  }

  std::string to_string() const {
    switch (kind) {
      case InequalityKind::S0: return "S0";
      case InequalityKind::S: return "S";
      case InequalityKind::BS: return "BS";
      case InequalityKind::KT: return "KT";
      case InequalityKind::STAR: return "STAR";
      case InequalityKind::STARSTAR: return "STARSTAR";
      case InequalityKind::BSEN: return "BSEN";
      case InequalityKind::ST1: return "ST1";
      case InequalityKind::EK: return "EK(" + std::to_string(k) + ")";
      case InequalityKind::LOGMAJ: return "LOGMAJ(" + std::to_string(k) + ")";
      case InequalityKind::CC1: return "CC1(" + std::to_string(k) + ")";
      case InequalityKind::LXZ: return "LXZ(" + format_order(r) + ")";
      case InequalityKind::IMPRO: return "IMPRO(" + format_order(r) + ")";
      case InequalityKind::C1: return "C1";
      case InequalityKind::C2: return "C2";
    }
    return "?";
  }

  /// Inverse of to_string.
  static std::optional<InequalityId> parse(const std::string& text) {
    static const std::pair<const char*, InequalityKind> plain[] = {
        {"S0", InequalityKind::S0},     {"S", InequalityKind::S},       {"BS", InequalityKind::BS},
        {"KT", InequalityKind::KT},     {"STAR", InequalityKind::STAR}, {"STARSTAR", InequalityKind::STARSTAR},
        {"BSEN", InequalityKind::BSEN}, {"ST1", InequalityKind::ST1},   {"C1", InequalityKind::C1},
        {"C2", InequalityKind::C2}};
    for (const auto& [name, kind] : plain)
      if (text == name) return InequalityId{kind, 0, 0};
    const auto open = text.find('(');
    if (open == std::string::npos || text.back() != ')') return std::nullopt;
    const std::string head = text.substr(0, open);
    const std::string arg = text.substr(open + 1, text.size() - open - 2);
    if (arg.empty()) return std::nullopt;
    try {
      std::size_t used = 0;
      if (head == "EK" || head == "LOGMAJ" || head == "CC1") {
        const int k = std::stoi(arg, &used);
        if (used != arg.size() || k < 1) return std::nullopt;
        const auto kind = head == "EK" ? InequalityKind::EK
                          : head == "LOGMAJ" ? InequalityKind::LOGMAJ
                                             : InequalityKind::CC1;
        return indexed(kind, k);
      }
      if (head == "LXZ" || head == "IMPRO") {
        const double r = std::stod(arg, &used);
        if (used != arg.size() || !(r >= 2)) return std::nullopt;
        return ordered(head == "LXZ" ? InequalityKind::LXZ : InequalityKind::IMPRO, r);
      }
    } catch (const std::exception&) {
      return std::nullopt;
    }
    return std::nullopt;
  }

  friend bool operator==(const InequalityId&, const InequalityId&) = default;

 private:
  static std::string format_order(double r) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", r);
    return buf;
  }
};

/// One evaluated inequality lhs <= rhs.
struct InequalityReport {
  InequalityId id;
  double lhs = 0;
  double rhs = 0;
  double slack = 0;  ///< rhs - lhs
  bool holds = true;
  bool equality = false;
  bool centered_required = false;
  bool centered_satisfied = true;
  /// Preconditions met (centering, or the Sendov hypothesis for C1/C2).
  bool applicable = true;
};

/// holds  <=> slack >= -tol_eq * max(1, |rhs|)
/// equality <=> |slack| <= tol_eq * max(1, |rhs|)
inline InequalityReport make_report(InequalityId id, double lhs, double rhs, double tol_eq, bool centered_required,
                                    bool centered_satisfied) {
  InequalityReport r;
  r.id = id;
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = rhs - lhs;
  const double band = tol_eq * std::max(1.0, std::abs(rhs));
  r.holds = r.slack >= -band;
  r.equality = std::abs(r.slack) <= band;
  r.centered_required = centered_required;
  r.centered_satisfied = centered_satisfied;
  r.applicable = !centered_required || centered_satisfied;
  return r;
}

/// Power sums of the zeros that appear in the closed forms.
template <std::floating_point Real>
struct ZeroMoments {
  using C = std::complex<Real>;
  std::size_t n = 0;
  Real abs1 = 0, abs2 = 0, abs4 = 0, abs6 = 0;
  C sum{0}, sum_sq{0}, sum_cube{0};
  C sum_z_abs2{0};   // sum z |z|^2
  C sum_sq_abs2{0};  // sum z^2 |z|^2

  explicit ZeroMoments(const BasicRootConfiguration<Real>& config) : n(config.size()) {
    for (const auto& z : config) {
      const Real m2 = std::norm(z);
      abs1 += std::abs(z);
      abs2 += m2;
      abs4 += m2 * m2;
      abs6 += m2 * m2 * m2;
      sum += z;
      sum_sq += z * z;
      sum_cube += z * z * z;
      sum_z_abs2 += z * m2;
      sum_sq_abs2 += z * z * m2;
    }
  }
};

namespace detail {

template <std::floating_point Real>
Real abs_power_sum(std::span<const std::complex<Real>> v, Real r) {
  Real s = 0;
  if (r == 2 || r == 4 || r == 6) {
    const int half = static_cast<int>(r) / 2;
    for (const auto& w : v) {
      const Real m2 = std::norm(w);
      Real t = 1;
      for (int i = 0; i < half; ++i) t *= m2;
      s += t;
    }
  } else {
    for (const auto& w : v) s += std::pow(std::abs(w), r);
  }
  return s;
}

template <std::floating_point Real>
std::vector<Real> moduli(std::span<const std::complex<Real>> v) {
  std::vector<Real> m;
  m.reserve(v.size());
  for (const auto& z : v) m.push_back(std::abs(z));
  return m;
}

template <std::floating_point Real>
void require_matching(const BasicRootConfiguration<Real>& config, const BasicCriticalSet<Real>& critical) {
  if (critical.size() + 1 != config.size()) {
    throw InvalidInput("critical set has " + std::to_string(critical.size()) + " points for " +
                       std::to_string(config.size()) + " zeros");
  }
}

}  // namespace detail

using ReportPair = std::pair<InequalityReport, InequalityReport>;

/// Order 2: (S0) sum|w|^2 <= (n-2)/n sum|z|^2 for centered zeros, and the
/// general form (S) with the extra |sum z|^2 / n^2 term.
template <std::floating_point Real>
ReportPair eval_order2(const BasicRootConfiguration<Real>& config, const BasicCriticalSet<Real>& critical,
                       const Tolerances& tol = {}) {
  detail::require_matching(config, critical);
  const ZeroMoments<Real> m(config);
  const Real n = static_cast<Real>(m.n);
  const bool centered = is_centered(config, tol);
  const Real lhs = detail::abs_power_sum<Real>(critical.points, 2);
  const Real base = (n - 2) / n * m.abs2;
  const Real general = base + std::norm(m.sum) / (n * n);
  return {make_report({InequalityKind::S0}, double(lhs), double(base), tol.eq, true, centered),
          make_report({InequalityKind::S}, double(lhs), double(general), tol.eq, false, true)};
}

/// Order 4: (BS) and the tighter (KT); both assume centered zeros.
template <std::floating_point Real>
ReportPair eval_order4(const BasicRootConfiguration<Real>& config, const BasicCriticalSet<Real>& critical,
                       const Tolerances& tol = {}) {
  detail::require_matching(config, critical);
  const ZeroMoments<Real> m(config);
  const Real n = static_cast<Real>(m.n);
  const bool centered = is_centered(config, tol);
  const Real lhs = detail::abs_power_sum<Real>(critical.points, 4);
  const Real head = (n - 4) / n * m.abs4;
  const Real bs = head + 2 / (n * n) * m.abs2 * m.abs2;
  const Real kt = head + (m.abs2 * m.abs2 + std::norm(m.sum_sq)) / (n * n);
  return {make_report({InequalityKind::BS}, double(lhs), double(bs), tol.eq, true, centered),
          make_report({InequalityKind::KT}, double(lhs), double(kt), tol.eq, true, centered)};
}

/// Closed form for tr((S D* S D)^3), centered zeros.
template <std::floating_point Real>
Real star_rhs(const ZeroMoments<Real>& m) {
  const Real n = static_cast<Real>(m.n);
  return (n - 6) / n * m.abs6 + 6 / (n * n) * m.abs4 * m.abs2 + 3 / (n * n) * std::norm(m.sum_z_abs2) -
         2 / (n * n * n) * m.abs2 * m.abs2 * m.abs2;
}

/// Closed form for tr((A*)^3 A^3) with A = S D S, centered zeros.
template <std::floating_point Real>
Real starstar_rhs(const ZeroMoments<Real>& m) {
  const Real n = static_cast<Real>(m.n);
  const Real n2 = n * n;
  return (n - 6) / n * m.abs6 + 2 / n2 * m.abs4 * m.abs2 + 4 / n2 * (m.sum_sq_abs2 * std::conj(m.sum_sq)).real() +
         2 / n2 * std::norm(m.sum_z_abs2) + std::norm(m.sum_cube) / n2 -
         2 / (n2 * n) * m.abs2 * std::norm(m.sum_sq);
}

/// Order 6: (STAR) and the tighter (STARSTAR); both assume centered zeros.
template <std::floating_point Real>
ReportPair eval_order6(const BasicRootConfiguration<Real>& config, const BasicCriticalSet<Real>& critical,
                       const Tolerances& tol = {}) {
  detail::require_matching(config, critical);
  const ZeroMoments<Real> m(config);
  const bool centered = is_centered(config, tol);
  const Real lhs = detail::abs_power_sum<Real>(critical.points, 6);
  return {make_report({InequalityKind::STAR}, double(lhs), double(star_rhs(m)), tol.eq, true, centered),
          make_report({InequalityKind::STARSTAR}, double(lhs), double(starstar_rhs(m)), tol.eq, true, centered)};
}

/// Order 1: (BSEN) sum|w| <= (n-1)/n sum|z| and, for centered zeros,
/// (ST1) sum|w| <= sqrt((n-2)/n) sum|z|.
template <std::floating_point Real>
ReportPair eval_order1(const BasicRootConfiguration<Real>& config, const BasicCriticalSet<Real>& critical,
                       const Tolerances& tol = {}) {
  detail::require_matching(config, critical);
  const ZeroMoments<Real> m(config);
  const Real n = static_cast<Real>(m.n);
  const bool centered = is_centered(config, tol);
  Real lhs = 0;
  for (const auto& w : critical) lhs += std::abs(w);
  return {make_report({InequalityKind::BSEN}, double(lhs), double((n - 1) / n * m.abs1), tol.eq, false, true),
          make_report({InequalityKind::ST1}, double(lhs), double(std::sqrt((n - 2) / n) * m.abs1), tol.eq, true,
                      centered)};
}

/// e_k(|w|) <= (n-k)/n e_k(|z|), 1 <= k <= n-1.
template <std::floating_point Real>
InequalityReport eval_symmetric(const BasicRootConfiguration<Real>& config, const BasicCriticalSet<Real>& critical,
                                int k, const Tolerances& tol = {}) {
  detail::require_matching(config, critical);
  const int n = static_cast<int>(config.size());
  if (k < 1 || k > n - 1) throw InvalidInput("EK index must lie in [1, n-1]");
  const auto wm = detail::moduli<Real>(critical.points);
  const auto zm = detail::moduli<Real>(config.zeros());
  const Real lhs = elementary_symmetric<Real>(wm, static_cast<std::size_t>(k));
  const Real rhs =
      static_cast<Real>(n - k) / static_cast<Real>(n) * elementary_symmetric<Real>(zm, static_cast<std::size_t>(k));
  return make_report(InequalityId::indexed(InequalityKind::EK, k), double(lhs), double(rhs), tol.eq, false, true);
}

/// Weak log-majorization: the product of the k largest |w| is at most the
/// product of the k largest moduli critical points xi. The second report
/// compares e_k(|w|) with e_k(xi).
template <std::floating_point Real>
ReportPair eval_logmaj(const BasicRootConfiguration<Real>& config, const BasicCriticalSet<Real>& critical,
                       std::span<const Real> xi, int k, const Tolerances& tol = {}) {
  detail::require_matching(config, critical);
  const int m = static_cast<int>(critical.size());
  if (k < 1 || k > m) throw InvalidInput("LOGMAJ index must lie in [1, n-1]");
  if (xi.size() != critical.size()) throw InvalidInput("moduli critical points have the wrong length");
  auto wm = detail::moduli<Real>(critical.points);
  std::sort(wm.begin(), wm.end(), std::greater<>());
  std::vector<Real> xs(xi.begin(), xi.end());
  std::sort(xs.begin(), xs.end(), std::greater<>());
  Real lp = 1, rp = 1;
  for (int j = 0; j < k; ++j) {
    lp *= wm[j];
    rp *= xs[j];
  }
  const auto kk = static_cast<std::size_t>(k);
  const Real le = elementary_symmetric<Real>(wm, kk);
  const Real re = elementary_symmetric<Real>(xs, kk);
  return {make_report(InequalityId::indexed(InequalityKind::LOGMAJ, k), double(lp), double(rp), tol.eq, false, true),
          make_report(InequalityId::indexed(InequalityKind::CC1, k), double(le), double(re), tol.eq, false, true)};
}

/// Order r >= 2: (LXZ) and the tighter (IMPRO).
template <std::floating_point Real>
ReportPair eval_general(const BasicRootConfiguration<Real>& config, const BasicCriticalSet<Real>& critical, double r,
                        const Tolerances& tol = {}) {
  detail::require_matching(config, critical);
  if (!(r >= 2) || !std::isfinite(r)) throw InvalidInput("order r must be a finite real >= 2");
  const ZeroMoments<Real> m(config);
  const Real n = static_cast<Real>(m.n);
  const Real rr = static_cast<Real>(r);
  const Real lhs = detail::abs_power_sum<Real>(critical.points, rr);
  const Real lead = std::pow(n - 1, rr - 2);
  const Real lxz =
      lead / std::pow(n, rr) * std::pow(std::abs(m.sum), rr) + lead * (n - 2) / std::pow(n, rr / 2) * std::pow(m.abs2, rr / 2);
  const Real impro = std::pow((n - 2) / n * m.abs2 + std::norm(m.sum) / (n * n), rr / 2);
  return {make_report(InequalityId::ordered(InequalityKind::LXZ, r), double(lhs), double(lxz), tol.eq, false, true),
          make_report(InequalityId::ordered(InequalityKind::IMPRO, r), double(lhs), double(impro), tol.eq, false,
                      true)};
}

namespace detail {

template <std::floating_point Real>
Real checked_real_trace(const std::complex<Real>& t, Real scale) {
  const Real s3 = scale * scale * scale;
  if (std::abs(t.imag()) > Real(1e-9) * s3 * s3) {
    throw NumericConsistencyError("trace has imaginary residual " + std::to_string(static_cast<double>(t.imag())));
  }
  return t.real();
}

}  // namespace detail

/// tr((S D* S D)^3) by explicit multiplication of the twelve-factor word.
template <std::floating_point Real>
Real rhs_star_oracle(const BasicRootConfiguration<Real>& config) {
  const auto s = build_S<Real>(config.size());
  const auto d = build_D(config);
  const auto da = d.adjoint();
  std::vector<BasicMatrix<Real>> word;
  for (int i = 0; i < 3; ++i) {
    word.push_back(s);
    word.push_back(da);
    word.push_back(s);
    word.push_back(d);
  }
  return detail::checked_real_trace(trace_word(word), config.scale());
}

/// tr((S D* S)^3 (S D S)^3) by explicit multiplication of the eighteen-factor word.
template <std::floating_point Real>
Real rhs_starstar_oracle(const BasicRootConfiguration<Real>& config) {
  const auto s = build_S<Real>(config.size());
  const auto d = build_D(config);
  const auto da = d.adjoint();
  std::vector<BasicMatrix<Real>> word;
  for (const auto* f : {&da, &da, &da, &d, &d, &d}) {
    word.push_back(s);
    word.push_back(*f);
    word.push_back(s);
  }
  return detail::checked_real_trace(trace_word(word), config.scale());
}

/// Which orders r are evaluated for LXZ/IMPRO, and the tolerances.
struct EvaluationOptions {
  std::vector<double> orders{2.0, 2.5, 3.0, 4.0, 6.0};
  Tolerances tol{};
};

/// Every inequality evaluated on one configuration, in a fixed order:
/// S0 S BS KT STAR STARSTAR BSEN ST1 EK(1..) LOGMAJ/CC1(1..) LXZ/IMPRO(r..).
template <std::floating_point Real>
std::vector<InequalityReport> evaluate_all(const BasicRootConfiguration<Real>& config,
                                           const BasicCriticalSet<Real>& critical, std::span<const Real> xi,
                                           const EvaluationOptions& options = {}) {
  const auto& tol = options.tol;
  std::vector<InequalityReport> out;
  auto push = [&](const ReportPair& p) {
    out.push_back(p.first);
    out.push_back(p.second);
  };
  push(eval_order2(config, critical, tol));
  push(eval_order4(config, critical, tol));
  push(eval_order6(config, critical, tol));
  push(eval_order1(config, critical, tol));
  const int m = static_cast<int>(critical.size());
  for (int k = 1; k <= m; ++k) out.push_back(eval_symmetric(config, critical, k, tol));
  for (int k = 1; k <= m; ++k) push(eval_logmaj(config, critical, xi, k, tol));
  for (double r : options.orders) push(eval_general(config, critical, r, tol));
  return out;
}

/// Computes critical points and moduli critical points, then evaluate_all.
template <std::floating_point Real>
std::vector<InequalityReport> analyze(const BasicRootConfiguration<Real>& config, const RootSolverSettings& settings,
                                      const EvaluationOptions& options = {}) {
  const auto critical = critical_points(config, settings);
  const auto xi = moduli_critical_points(config, settings);
  return evaluate_all<Real>(config, critical, xi, options);
}

}  // namespace schoenberg
