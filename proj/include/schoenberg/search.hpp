#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "schoenberg/inequalities.hpp"
#include "schoenberg/polynomial.hpp"
#include "schoenberg/rootfinding.hpp"
#include "schoenberg/sendov.hpp"
#include "schoenberg/types.hpp"

namespace schoenberg {

inline constexpr std::uint64_t default_seed = 20250101;

// ---------------------------------------------------------------------------
// Seeded streams

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Per-sample seed derived from the stream seed and the sample index.
inline std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index));
}

/// Small portable generator; the draws are identical on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t x = state_;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    const double u = 1.0 - uniform();  // (0, 1]
    const double v = uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
  }

  Complex in_disk() { return std::polar(std::sqrt(uniform()), 2.0 * std::numbers::pi * uniform()); }
  Complex on_circle() { return std::polar(1.0, 2.0 * std::numbers::pi * uniform()); }

 private:
  std::uint64_t state_;
};

// ---------------------------------------------------------------------------
// Ensembles

enum class EnsembleKind { UniformDisk, Gaussian, RootsOfUnityPerturbed, Collinear, SendovBoundary };

inline std::string to_string(EnsembleKind k) {
  switch (k) {
    case EnsembleKind::UniformDisk: return "uniform-disk";
    case EnsembleKind::Gaussian: return "gaussian";
    case EnsembleKind::RootsOfUnityPerturbed: return "roots-of-unity-perturbed";
    case EnsembleKind::Collinear: return "collinear";
    case EnsembleKind::SendovBoundary: return "sendov-boundary";
  }
  return "?";
}

inline std::optional<EnsembleKind> parse_ensemble_kind(const std::string& s) {
  for (auto k : {EnsembleKind::UniformDisk, EnsembleKind::Gaussian, EnsembleKind::RootsOfUnityPerturbed,
                 EnsembleKind::Collinear, EnsembleKind::SendovBoundary}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

struct Ensemble {
  EnsembleKind kind = EnsembleKind::UniformDisk;
  std::size_t n = 4;
  std::size_t count = 1;
  std::uint64_t seed = default_seed;
  bool recenter = false;
  /// Standard deviation of the perturbation for roots-of-unity-perturbed.
  double perturbation = 0.1;
  /// sendov-boundary only: draw instances satisfying Re sum z_j >= (n-2)/2 a.
  bool hypothesis = false;

  void validate() const {
    if (n < 2) throw InvalidInput("ensemble degree must be >= 2");
    if (count < 1) throw InvalidInput("ensemble count must be >= 1");
    if (!(perturbation >= 0)) throw InvalidInput("perturbation must be >= 0");
  }
};

struct Sample {
  std::uint64_t seed = 0;
  std::size_t index = 0;
  RootConfiguration config;
  std::optional<SendovInstance> sendov;
};

namespace detail {

inline SendovInstance draw_sendov(Rng& rng, std::size_t n, bool hypothesis) {
  std::vector<Complex> zeros(n - 1);
  for (auto& z : zeros) z = rng.uniform() < 0.5 ? rng.on_circle() : rng.in_disk();
  if (!hypothesis) return SendovInstance(rng.uniform(), std::move(zeros));
  double s = 0;
  for (const auto& z : zeros) s += z.real();
  if (s < 0) {
    for (auto& z : zeros) z = -std::conj(z);
    s = -s;
  }
  const double a_max = n == 2 ? 1.0 : std::min(1.0, 2.0 * s / static_cast<double>(n - 2));
  double a = rng.uniform() * a_max;
  SendovInstance inst(a, std::move(zeros));
  // Guard the boundary against round-off in the bound.
  while (!inst.hypothesis_holds() && inst.a > 0) inst.a = std::max(0.0, inst.a - 1e-15 - 1e-12 * inst.a);
  return inst;
}

}  // namespace detail

/// Deterministic sample at a given index.
inline Sample draw_sample(const Ensemble& e, std::size_t index) {
  e.validate();
  const std::uint64_t seed = sample_seed(e.seed, index);
  Rng rng(seed);
  const std::size_t n = e.n;
  std::vector<Complex> z(n);
  std::optional<SendovInstance> inst;
  switch (e.kind) {
    case EnsembleKind::UniformDisk:
      for (auto& x : z) x = rng.in_disk();
      break;
    case EnsembleKind::Gaussian:
      for (auto& x : z) x = Complex(rng.normal(), rng.normal()) * std::sqrt(0.5);
      break;
    case EnsembleKind::RootsOfUnityPerturbed:
      for (std::size_t k = 0; k < n; ++k) {
        z[k] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
        if (e.perturbation > 0) z[k] += e.perturbation * Complex(rng.normal(), rng.normal());
      }
      break;
    case EnsembleKind::Collinear: {
      const Complex base = rng.in_disk();
      const Complex dir = rng.on_circle();
      for (auto& x : z) x = base + rng.uniform(-1.0, 1.0) * dir;
      break;
    }
    case EnsembleKind::SendovBoundary:
      inst = detail::draw_sendov(rng, n, e.hypothesis);
      break;
  }
  if (inst) return {seed, index, inst->configuration(), inst};
  RootConfiguration config(std::move(z));
  if (e.recenter) config = recenter(config);
  return {seed, index, std::move(config), std::nullopt};
}

inline std::vector<Sample> sample(const Ensemble& e) {
  std::vector<Sample> out;
  out.reserve(e.count);
  for (std::size_t i = 0; i < e.count; ++i) out.push_back(draw_sample(e, i));
  return out;
}

/// Runs fn(i) for i in [0, count) on up to `threads` workers.
template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::mutex failure_mutex;
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i; !failed && (i = next.fetch_add(1)) < count;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          failed = true;
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

// ---------------------------------------------------------------------------
// Objectives

/// Either the ratio lhs/rhs of one inequality, or M_-2 on Sendov instances.
struct Objective {
  bool m_minus2 = false;
  InequalityId ratio{};

  static Objective ratio_of(InequalityId id) { return {false, id}; }
  static Objective sendov() { return {true, {}}; }

  bool requires_centering() const { return !m_minus2 && ratio.requires_centering(); }

  std::string to_string() const { return m_minus2 ? "M-2" : ratio.to_string() + "-ratio"; }

  /// Accepts "M-2", "<ID>" or "<ID>-ratio".
  static std::optional<Objective> parse(std::string s) {
    if (s == "M-2" || s == "M_-2" || s == "MM2") return sendov();
    const std::string suffix = "-ratio";
    if (s.size() > suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0) {
      s.resize(s.size() - suffix.size());
    }
    const auto id = InequalityId::parse(s);
    if (!id || id->kind == InequalityKind::C1 || id->kind == InequalityKind::C2) return std::nullopt;
    return ratio_of(*id);
  }
};

/// Evaluates a single inequality on a configuration.
template <std::floating_point Real>
InequalityReport evaluate_one(const BasicRootConfiguration<Real>& config, InequalityId id,
                              const RootSolverSettings& settings, const Tolerances& tol = {}) {
  const auto critical = critical_points(config, settings);
  const std::size_t m = critical.size();
  if ((id.kind == InequalityKind::EK || id.kind == InequalityKind::LOGMAJ || id.kind == InequalityKind::CC1) &&
      (id.k < 1 || static_cast<std::size_t>(id.k) > m)) {
    throw InvalidInput("inequality index " + std::to_string(id.k) + " out of range for n = " +
                       std::to_string(config.size()));
  }
  switch (id.kind) {
    case InequalityKind::S0: return eval_order2(config, critical, tol).first;
    case InequalityKind::S: return eval_order2(config, critical, tol).second;
    case InequalityKind::BS: return eval_order4(config, critical, tol).first;
    case InequalityKind::KT: return eval_order4(config, critical, tol).second;
    case InequalityKind::STAR: return eval_order6(config, critical, tol).first;
    case InequalityKind::STARSTAR: return eval_order6(config, critical, tol).second;
    case InequalityKind::BSEN: return eval_order1(config, critical, tol).first;
    case InequalityKind::ST1: return eval_order1(config, critical, tol).second;
    case InequalityKind::EK: return eval_symmetric(config, critical, id.k, tol);
    case InequalityKind::LOGMAJ:
    case InequalityKind::CC1: {
      const auto xi = moduli_critical_points(config, settings);
      const auto pair = eval_logmaj<Real>(config, critical, xi, id.k, tol);
      return id.kind == InequalityKind::LOGMAJ ? pair.first : pair.second;
    }
    case InequalityKind::LXZ: return eval_general(config, critical, id.r, tol).first;
    case InequalityKind::IMPRO: return eval_general(config, critical, id.r, tol).second;
    case InequalityKind::C1:
    case InequalityKind::C2: break;
  }
  throw InvalidInput("inequality " + id.to_string() + " is not a configuration inequality");
}

// ---------------------------------------------------------------------------
// Search

struct SearchSettings {
  int max_iterations = 5000;
  double step_tolerance = 1e-9;
  double initial_step = 0.05;
  int restarts = 4;
  RootSolverSettings roots{};
  EvaluationOptions eval{};
};

struct SearchRecord {
  std::string kind = "search";  ///< "sample", "search" or "counterexample"
  std::uint64_t seed = 0;
  std::vector<Complex> zeros;   ///< full configuration; zeros[0] = a when a is set
  std::optional<double> a;
  std::optional<std::string> objective;
  std::optional<double> objective_value;
  std::optional<double> start_value;
  std::optional<double> verified_value;
  int iterations = 0;
  std::vector<InequalityReport> reports;
};

/// A point visited by the search, already projected onto the constraint set.
struct SearchIterate {
  const RootConfiguration& config;
  std::optional<double> a;
  double value;
};

using SearchObserver = std::function<void(const SearchIterate&)>;

namespace detail {

/// Maps a real vector to a feasible configuration.
///   free:      2n coordinates, rescaled to max|z| = 1
///   centered:  2(n-1) coordinates, z_n = -sum, rescaled to max|z| = 1
///   sendov:    a followed by 2(n-1) coordinates, a clamped to [0,1], zeros
///              pulled back into the closed unit disk
class Parametrization {
 public:
  enum class Mode { Free, Centered, Sendov };

  Parametrization(Mode mode, std::size_t n) : mode_(mode), n_(n) {}

  std::size_t dimension() const {
    switch (mode_) {
      case Mode::Free: return 2 * n_;
      case Mode::Centered: return 2 * (n_ - 1);
      case Mode::Sendov: return 1 + 2 * (n_ - 1);
    }
    return 0;
  }

  std::vector<double> encode(const RootConfiguration& c, std::optional<double> a) const {
    std::vector<double> x;
    if (mode_ == Mode::Sendov) {
      x.push_back(a.value_or(0.0));
      for (std::size_t j = 1; j < c.size(); ++j) {
        x.push_back(c[j].real());
        x.push_back(c[j].imag());
      }
      return x;
    }
    const std::size_t take = mode_ == Mode::Free ? n_ : n_ - 1;
    for (std::size_t j = 0; j < take; ++j) {
      x.push_back(c[j].real());
      x.push_back(c[j].imag());
    }
    return x;
  }

  /// Projects x in place and returns the configuration with its a.
  std::pair<RootConfiguration, std::optional<double>> project(std::vector<double>& x) const {
    std::vector<Complex> z;
    z.reserve(n_);
    if (mode_ == Mode::Sendov) {
      x[0] = std::clamp(x[0], 0.0, 1.0);
      z.emplace_back(x[0], 0.0);
      for (std::size_t j = 0; j + 1 < n_; ++j) {
        Complex w(x[1 + 2 * j], x[2 + 2 * j]);
        if (std::abs(w) > 1) w /= std::abs(w);
        x[1 + 2 * j] = w.real();
        x[2 + 2 * j] = w.imag();
        z.push_back(w);
      }
      return {RootConfiguration(std::move(z)), x[0]};
    }
    const std::size_t take = mode_ == Mode::Free ? n_ : n_ - 1;
    Complex sum(0);
    for (std::size_t j = 0; j < take; ++j) {
      z.emplace_back(x[2 * j], x[2 * j + 1]);
      sum += z.back();
    }
    if (mode_ == Mode::Centered) z.push_back(-sum);
    double m = 0;
    for (const auto& w : z) m = std::max(m, std::abs(w));
    if (m > 0 && std::isfinite(m)) {
      for (auto& w : z) w /= m;
      if (mode_ == Mode::Centered) {
        // Re-derive the last zero so the sum is exactly balanced.
        Complex s(0);
        for (std::size_t j = 0; j + 1 < n_; ++j) s += z[j];
        z.back() = -s;
      }
      for (std::size_t j = 0; j < take; ++j) {
        x[2 * j] = z[j].real();
        x[2 * j + 1] = z[j].imag();
      }
    }
    return {RootConfiguration(std::move(z)), std::nullopt};
  }

 private:
  Mode mode_;
  std::size_t n_;
};

template <std::floating_point Real>
double objective_value(const Objective& obj, const BasicRootConfiguration<Real>& config, std::optional<double> a,
                       const RootSolverSettings& settings, const Tolerances& tol) {
  if (obj.m_minus2) {
    std::vector<std::complex<Real>> others(config.begin() + 1, config.end());
    BasicSendovInstance<Real> inst(static_cast<Real>(a.value_or(0.0)), std::move(others));
    bool hit = false;
    return static_cast<double>(m_minus2(inst, settings, hit));
  }
  const auto rep = evaluate_one(config, obj.ratio, settings, tol);
  if (!(rep.rhs > 1e-14) || !std::isfinite(rep.lhs)) return -std::numeric_limits<double>::infinity();
  return rep.lhs / rep.rhs;
}

}  // namespace detail

/// Full report set for a configuration, with C1/C2 appended for Sendov instances.
inline std::vector<InequalityReport> full_reports(const RootConfiguration& config, std::optional<double> a,
                                                  const RootSolverSettings& settings, const EvaluationOptions& eval) {
  auto reports = analyze(config, settings, eval);
  if (a) {
    std::vector<Complex> others(config.begin() + 1, config.end());
    const auto pm = check_special_case(SendovInstance(*a, std::move(others)), settings);
    const auto [c1, c2] = sendov_reports(pm, eval.tol.eq);
    reports.push_back(c1);
    reports.push_back(c2);
  }
  return reports;
}

/// Derivative-free Nelder-Mead ascent of an objective over feasible
/// configurations. Never returns a value below the start value.
///
/// Ratio objectives move the zeros (the last zero is slaved to the others
/// for centered inequalities); M_-2 moves a and the other zeros inside the unit
/// disk. A best value beyond 1 + counterexample_margin is recomputed in
/// extended precision; if it survives the record kind is "counterexample".
inline SearchRecord maximize(const Objective& objective, const RootConfiguration& start,
                             std::optional<double> start_a, const SearchSettings& settings,
                             const SearchObserver& observer = {}) {
  using Mode = detail::Parametrization::Mode;
  const std::size_t n = start.size();
  if (objective.m_minus2) {
    if (!start_a) throw InvalidInput("M-2 objective needs a Sendov start (a and other zeros)");
    std::vector<Complex> others(start.begin() + 1, start.end());
    (void)SendovInstance(*start_a, std::move(others));
  } else if (objective.requires_centering() && !is_centered(start, settings.eval.tol)) {
    throw InvalidInput("objective " + objective.to_string() + " requires a centered start");
  }
  const Mode mode = objective.m_minus2 ? Mode::Sendov : objective.requires_centering() ? Mode::Centered : Mode::Free;
  const detail::Parametrization param(mode, n);
  const std::size_t dim = param.dimension();

  int evaluations = 0;
  auto evaluate = [&](std::vector<double>& x) {
    auto [config, a] = param.project(x);
    ++evaluations;
    double v;
    try {
      v = detail::objective_value(objective, config, a, settings.roots, settings.eval.tol);
    } catch (const ConvergenceError&) {
      v = -std::numeric_limits<double>::infinity();
    } catch (const NumericConsistencyError&) {
      v = -std::numeric_limits<double>::infinity();
    }
    if (observer && std::isfinite(v)) observer({config, a, v});
    return v;
  };

  std::vector<double> x0 = param.encode(start, start_a);
  const double start_value = evaluate(x0);
  if (!std::isfinite(start_value)) {
    throw RejectedStart("objective " + objective.to_string() + " is undefined at the start configuration");
  }

  std::vector<double> best_x = x0;
  double best_f = start_value;
  int iterations = 0;
  double step = settings.initial_step;

  for (int round = 0; round <= settings.restarts && iterations < settings.max_iterations; ++round) {
    std::vector<std::vector<double>> simplex{best_x};
    std::vector<double> f{best_f};
    for (std::size_t i = 0; i < dim; ++i) {
      auto v = best_x;
      v[i] += step;
      f.push_back(evaluate(v));
      simplex.push_back(std::move(v));
    }
    const double round_start = best_f;
    std::vector<std::size_t> order(dim + 1);
    while (iterations < settings.max_iterations) {
      for (std::size_t i = 0; i <= dim; ++i) order[i] = i;
      std::stable_sort(order.begin(), order.end(), [&](std::size_t p, std::size_t q) { return f[p] > f[q]; });
      const auto& xb = simplex[order.front()];
      double diameter = 0;
      for (std::size_t i = 1; i <= dim; ++i)
        for (std::size_t c = 0; c < dim; ++c) diameter = std::max(diameter, std::abs(simplex[order[i]][c] - xb[c]));
      if (diameter < settings.step_tolerance) break;
      ++iterations;

      const std::size_t worst = order.back();
      const std::size_t second = order[dim - 1];
      std::vector<double> centroid(dim, 0.0);
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t c = 0; c < dim; ++c) centroid[c] += simplex[order[i]][c] / static_cast<double>(dim);
      auto along = [&](double t) {
        std::vector<double> v(dim);
        for (std::size_t c = 0; c < dim; ++c) v[c] = centroid[c] + t * (simplex[worst][c] - centroid[c]);
        return v;
      };
      auto xr = along(-1.0);
      const double fr = evaluate(xr);
      if (fr > f[order.front()]) {
        auto xe = along(-2.0);
        const double fe = evaluate(xe);
        if (fe > fr) {
          simplex[worst] = std::move(xe);
          f[worst] = fe;
        } else {
          simplex[worst] = std::move(xr);
          f[worst] = fr;
        }
        continue;
      }
      if (fr > f[second]) {
        simplex[worst] = std::move(xr);
        f[worst] = fr;
        continue;
      }
      const bool outside = fr > f[worst];
      auto xc = along(outside ? -0.5 : 0.5);
      const double fc = evaluate(xc);
      if (outside ? fc >= fr : fc > f[worst]) {
        simplex[worst] = std::move(xc);
        f[worst] = fc;
        continue;
      }
      const auto anchor = simplex[order.front()];
      for (std::size_t i = 1; i <= dim; ++i) {
        auto& v = simplex[order[i]];
        for (std::size_t c = 0; c < dim; ++c) v[c] = anchor[c] + 0.5 * (v[c] - anchor[c]);
        f[order[i]] = evaluate(v);
      }
    }
    for (std::size_t i = 0; i <= dim; ++i) {
      if (f[i] > best_f) {
        best_f = f[i];
        best_x = simplex[i];
      }
    }
    if (!(best_f > round_start) && round > 0) break;
    step *= 0.5;
  }

  auto [config, a] = param.project(best_x);
  SearchRecord rec;
  rec.seed = settings.roots.rng_seed;
  rec.zeros.assign(config.begin(), config.end());
  rec.a = a;
  rec.objective = objective.to_string();
  rec.start_value = start_value;
  rec.objective_value = best_f;
  rec.iterations = iterations;
  rec.reports = full_reports(config, a, settings.roots, settings.eval);
  if (best_f > 1 + counterexample_margin) {
    RootSolverSettings tight = settings.roots;
    tight.tol_root /= 100;
    double verified = -std::numeric_limits<double>::infinity();
    try {
      verified = detail::objective_value(objective, config.cast<long double>(), a, tight, settings.eval.tol);
    } catch (const Error&) {
    }
    rec.verified_value = verified;
    if (verified > 1 + counterexample_margin) rec.kind = "counterexample";
  }
  return rec;
}

}  // namespace schoenberg
