#pragma once

// Command implementations for the schoenberg CLI. Kept in a header so the
// test suites can drive the commands in-process.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "schoenberg/schoenberg.hpp"

namespace schoenberg::cli {

enum ExitCode : int { ok = 0, violation = 1, usage = 2 };

class UsageError : public Error {
 public:
  using Error::Error;
};

/// Parameters shared by every command, filled from flags and an optional
/// JSON configuration file.
struct RunConfig {
  std::uint64_t seed = default_seed;
  Tolerances tol{};
  std::string out_path;
  std::string format = "table";
  bool recenter = false;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  std::string config_path;

  std::vector<Complex> zeros;
  std::optional<double> a;
  std::optional<Ensemble> ensemble;

  RootSolverSettings roots() const {
    RootSolverSettings s;
    s.tol_root = tol.root;
    return s;
  }

  EvaluationOptions evaluation() const {
    EvaluationOptions e;
    e.tol = tol;
    return e;
  }

  void validate() const {
    if (!(tol.root > 0) || !(tol.eq > 0) || !(tol.center > 0)) throw UsageError("all tolerances must be > 0");
    if (format != "csv" && format != "jsonl" && format != "table") throw UsageError("unknown format " + format);
  }
};

inline Complex parse_zero_token(const std::string& tok) {
  const auto comma = tok.find(',');
  if (comma == std::string::npos) throw UsageError("zero token '" + tok + "' must be re,im");
  try {
    std::size_t u1 = 0, u2 = 0;
    const std::string re = tok.substr(0, comma), im = tok.substr(comma + 1);
    const double x = std::stod(re, &u1);
    const double y = std::stod(im, &u2);
    if (u1 != re.size() || u2 != im.size() || !std::isfinite(x) || !std::isfinite(y)) throw std::invalid_argument(tok);
    return {x, y};
  } catch (const std::exception&) {
    throw UsageError("malformed zero token '" + tok + "'");
  }
}

inline std::vector<Complex> parse_zero_list(const std::string& text) {
  std::istringstream in(text);
  std::vector<Complex> out;
  for (std::string tok; in >> tok;) out.push_back(parse_zero_token(tok));
  return out;
}

inline std::string format_zero(Complex z) {
  char buf[80];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g", z.real(), z.imag());
  return buf;
}

inline std::string format_zeros(std::span<const Complex> zs) {
  std::string s;
  for (const auto& z : zs) {
    if (!s.empty()) s += ' ';
    s += format_zero(z);
  }
  return s;
}

/// Loads {zeros, a, ensemble, tolerances, seed} from a JSON file.
inline void load_config_file(RunConfig& rc) {
  std::ifstream in(rc.config_path);
  if (!in) throw UsageError("cannot read configuration file " + rc.config_path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw UsageError(std::string("configuration file is not valid JSON: ") + e.what());
  }
  try {
    if (j.contains("zeros")) rc.zeros = zeros_from_json(j.at("zeros"));
    if (j.contains("a")) rc.a = j.at("a").get<double>();
    if (j.contains("seed")) rc.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("tolerances")) {
      const auto& t = j.at("tolerances");
      rc.tol.root = t.value("root", rc.tol.root);
      rc.tol.center = t.value("center", rc.tol.center);
      rc.tol.eq = t.value("eq", rc.tol.eq);
    }
    if (j.contains("ensemble")) {
      const auto& e = j.at("ensemble");
      Ensemble ens;
      const auto kind = parse_ensemble_kind(e.value("kind", std::string("uniform-disk")));
      if (!kind) throw UsageError("unknown ensemble kind in configuration file");
      ens.kind = *kind;
      ens.n = e.value("n", ens.n);
      ens.count = e.value("count", ens.count);
      ens.seed = e.value("seed", rc.seed);
      ens.recenter = e.value("recenter", false);
      ens.hypothesis = e.value("hypothesis", false);
      ens.perturbation = e.value("perturbation", ens.perturbation);
      rc.ensemble = ens;
    }
  } catch (const json::exception& e) {
    throw UsageError(std::string("bad configuration file field: ") + e.what());
  } catch (const InvalidInput& e) {
    throw UsageError(e.what());
  }
  if (!rc.zeros.empty() && rc.ensemble) throw UsageError("configuration gives both zeros and an ensemble");
}

inline void emit(const RunConfig& rc, const std::string& content, std::ostream& out) {
  if (rc.out_path.empty()) {
    out << content;
    return;
  }
  try {
    write_atomic(rc.out_path, content);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

// ---------------------------------------------------------------------------
// verify

struct VerifyResult {
  RootConfiguration config;
  std::vector<InequalityReport> reports;
  std::optional<PowerMeanReport> sendov;
  SpectrumComparison lemma1;
  bool sds_normal = false;
  bool collinear = false;
  double centroid_residual = 0;

  bool all_hold() const {
    for (const auto& r : reports)
      if (r.applicable && !r.holds) return false;
    return true;
  }
};

/// Every applicable inequality, the spectrum check and the normality test
/// on one configuration. With `a`, zeros are the other zeros of a Sendov instance.
inline VerifyResult verify_configuration(std::vector<Complex> zeros, std::optional<double> a, const RunConfig& rc) {
  std::optional<SendovInstance> inst;
  if (a) {
    inst = SendovInstance(*a, zeros);
    zeros.insert(zeros.begin(), Complex(*a, 0.0));
  }
  RootConfiguration config(std::move(zeros));
  if (rc.recenter && !a) config = recenter(config);
  const auto settings = rc.roots();
  VerifyResult res{config, full_reports(config, a, settings, rc.evaluation()), std::nullopt,
                   verify_lemma1(config, settings), false, false, centroid_residual(config)};
  if (inst) res.sendov = check_special_case(*inst, settings);
  res.sds_normal = is_normal(compress_D(config), 1e-10);
  res.collinear = are_collinear(config, 1e-10);
  return res;
}

inline std::string reports_csv(std::span<const InequalityReport> reports) {
  std::ostringstream os;
  os << "id,lhs,rhs,slack,holds,equality,applicable\n";
  char buf[200];
  for (const auto& r : reports) {
    std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%d,%d,%d\n", r.id.to_string().c_str(), r.lhs, r.rhs, r.slack,
                  r.holds, r.equality, r.applicable);
    os << buf;
  }
  return os.str();
}

inline std::string verify_table(const VerifyResult& v) {
  std::ostringstream os;
  char buf[200];
  os << "n = " << v.config.size() << "\nzeros: " << format_zeros(v.config.zeros()) << "\n";
  std::snprintf(buf, sizeof buf, "centroid residual: %.3e (%s)\n", v.centroid_residual,
                v.centroid_residual <= 1e-10 ? "centered" : "not centered");
  os << buf;
  std::snprintf(buf, sizeof buf, "%-12s %22s %22s %12s  %-5s %-8s %s\n", "inequality", "lhs", "rhs", "slack", "holds",
                "equality", "applicable");
  os << buf;
  for (const auto& r : v.reports) {
    std::snprintf(buf, sizeof buf, "%-12s %22.15g %22.15g %12.4e  %-5s %-8s %s\n", r.id.to_string().c_str(), r.lhs,
                  r.rhs, r.slack, r.holds ? "yes" : "NO", r.equality ? "yes" : "-", r.applicable ? "yes" : "no");
    os << buf;
  }
  std::snprintf(buf, sizeof buf, "spectrum of D(I-J/n) vs {0} + critical points: max pair distance %.3e\n",
                v.lemma1.max_pair_distance);
  os << buf;
  os << "SDS normal: " << (v.sds_normal ? "yes" : "no") << "   zeros collinear: " << (v.collinear ? "yes" : "no")
     << "\n";
  if (v.sendov) {
    const auto& s = *v.sendov;
    os << "Sendov hypothesis Re sum z_j >= (n-2)a/2: " << (s.condition_holds ? "holds" : "fails") << "\n";
    if (s.exact_hit) {
      os << "a critical point coincides with a\n";
    } else {
      for (std::size_t i = 0; i < s.exponents.size(); ++i) {
        std::snprintf(buf, sizeof buf, "  M_%g = %.15g\n", s.exponents[i], s.values[i]);
        os << buf;
      }
    }
    std::snprintf(buf, sizeof buf, "  min |w - a| = %.15g\n", s.min_distance);
    os << buf;
  }
  os << (v.all_hold() ? "all applicable inequalities hold\n" : "VIOLATION: an applicable inequality fails\n");
  return os.str();
}

inline SearchRecord verify_record(const VerifyResult& v, std::uint64_t seed, std::optional<double> a) {
  SearchRecord rec;
  rec.kind = "verify";
  rec.seed = seed;
  rec.zeros.assign(v.config.begin(), v.config.end());
  rec.a = a;
  rec.reports = v.reports;
  return rec;
}

inline int cmd_verify(const RunConfig& rc, std::ostream& out) {
  if (rc.ensemble) throw UsageError("verify takes zeros, not an ensemble");
  if (rc.zeros.size() + (rc.a ? 1 : 0) < 2) throw UsageError("verify needs at least 2 zeros");
  if (rc.a && rc.recenter) throw UsageError("--recenter does not apply to Sendov instances");
  VerifyResult v = [&] {
    try {
      return verify_configuration(rc.zeros, rc.a, rc);
    } catch (const InvalidInput& e) {
      throw UsageError(e.what());
    }
  }();
  std::string content;
  if (rc.format == "table") content = verify_table(v);
  else if (rc.format == "csv") content = reports_csv(v.reports);
  else content = to_json(verify_record(v, rc.seed, rc.a)).dump() + "\n";
  emit(rc, content, out);
  if (!rc.out_path.empty() && rc.format == "table") out << content;
  return v.all_hold() ? ok : violation;
}

// ---------------------------------------------------------------------------
// oracle

struct OracleOutcome {
  double star_deviation = 0;
  double starstar_deviation = 0;
  double spectrum_distance = 0;
  std::vector<Complex> worst_trace_config;
  std::vector<Complex> worst_spectrum_config;
};

inline constexpr double oracle_trace_tolerance = 1e-10;
inline constexpr double oracle_spectrum_tolerance = 1e-7;

/// Random centered configuration with max|z| = 1.
inline RootConfiguration centered_unit_sample(std::size_t n, std::uint64_t seed, std::size_t index) {
  Ensemble e;
  e.kind = EnsembleKind::UniformDisk;
  e.n = n;
  e.seed = seed;
  e.recenter = true;
  return normalize_modulus(draw_sample(e, index).config);
}

inline OracleOutcome run_oracle(std::size_t n, std::size_t samples, std::uint64_t seed, const RootSolverSettings& s) {
  OracleOutcome o;
  for (std::size_t i = 0; i < samples; ++i) {
    const auto config = centered_unit_sample(n, seed, i);
    const ZeroMoments<double> m(config);
    const double d1 = std::abs(star_rhs(m) - rhs_star_oracle(config));
    const double d2 = std::abs(starstar_rhs(m) - rhs_starstar_oracle(config));
    if (std::max(d1, d2) > std::max(o.star_deviation, o.starstar_deviation) || o.worst_trace_config.empty()) {
      o.worst_trace_config.assign(config.begin(), config.end());
    }
    o.star_deviation = std::max(o.star_deviation, d1);
    o.starstar_deviation = std::max(o.starstar_deviation, d2);
    const double sd = verify_lemma1(config, s).max_pair_distance;
    if (sd > o.spectrum_distance || o.worst_spectrum_config.empty()) {
      o.worst_spectrum_config.assign(config.begin(), config.end());
    }
    o.spectrum_distance = std::max(o.spectrum_distance, sd);
  }
  return o;
}

inline int cmd_oracle(const RunConfig& rc, std::size_t n, std::size_t samples, std::ostream& out) {
  if (n < 2 || n > 10) throw UsageError("oracle supports 2 <= n <= 10");
  if (samples < 1) throw UsageError("oracle needs at least one sample");
  const auto o = run_oracle(n, samples, rc.seed, rc.roots());
  const bool pass = o.star_deviation <= oracle_trace_tolerance && o.starstar_deviation <= oracle_trace_tolerance &&
                    o.spectrum_distance <= oracle_spectrum_tolerance;
  std::ostringstream os;
  char buf[200];
  std::snprintf(buf, sizeof buf, "n = %zu, samples = %zu, seed = %llu\n", n, samples,
                static_cast<unsigned long long>(rc.seed));
  os << buf;
  std::snprintf(buf, sizeof buf, "max |STAR closed form - trace|      = %.3e (limit %.0e)\n", o.star_deviation,
                oracle_trace_tolerance);
  os << buf;
  std::snprintf(buf, sizeof buf, "max |STARSTAR closed form - trace|  = %.3e (limit %.0e)\n", o.starstar_deviation,
                oracle_trace_tolerance);
  os << buf;
  std::snprintf(buf, sizeof buf, "max spectrum pairing distance       = %.3e (limit %.0e)\n", o.spectrum_distance,
                oracle_spectrum_tolerance);
  os << buf;
  if (!pass) {
    os << "worst trace configuration: " << format_zeros(o.worst_trace_config) << "\n";
    os << "worst spectrum configuration: " << format_zeros(o.worst_spectrum_config) << "\n";
  }
  os << (pass ? "PASS\n" : "FAIL\n");
  emit(rc, os.str(), out);
  if (!rc.out_path.empty()) out << os.str();
  return pass ? ok : violation;
}

// ---------------------------------------------------------------------------
// sweep

/// One JSONL record per sample of the ensemble, evaluated in parallel and
/// emitted in index order.
inline std::vector<SearchRecord> sweep_records(const Ensemble& ens, const RunConfig& rc) {
  std::vector<std::optional<SearchRecord>> slots(ens.count);
  const auto settings = rc.roots();
  const auto eval = rc.evaluation();
  parallel_for(ens.count, rc.threads, [&](std::size_t i) {
    const Sample s = draw_sample(ens, i);
    SearchRecord rec;
    rec.kind = "sample";
    rec.seed = s.seed;
    rec.zeros.assign(s.config.begin(), s.config.end());
    if (s.sendov) {
      rec.a = s.sendov->a;
      const auto probe = probe_m_minus2(*s.sendov, settings);
      rec.objective = "M-2";
      rec.objective_value = probe.value;
      if (probe.reverified) rec.verified_value = probe.verified_value;
    }
    rec.reports = full_reports(s.config, rec.a, settings, eval);
    slots[i] = std::move(rec);
  });
  std::vector<SearchRecord> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

inline std::string jsonl(std::span<const SearchRecord> records) {
  std::string s;
  for (const auto& r : records) {
    s += to_json(r).dump();
    s += '\n';
  }
  return s;
}

inline int cmd_sweep(const RunConfig& rc, Ensemble ens, const std::string& summary_path, std::ostream& out) {
  try {
    ens.validate();
  } catch (const InvalidInput& e) {
    throw UsageError(e.what());
  }
  const auto records = sweep_records(ens, rc);
  Summary summary;
  for (const auto& r : records) summary.add(r.zeros.size(), r.reports);

  if (!rc.out_path.empty()) {
    try {
      write_atomic(rc.out_path, jsonl(records));
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }
  std::ostringstream csv;
  summary.write_csv(csv);
  if (!summary_path.empty()) {
    try {
      write_atomic(summary_path, csv.str());
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }
  if (rc.format == "csv") out << csv.str();
  else if (rc.format == "jsonl" && rc.out_path.empty()) out << jsonl(records);
  else summary.write_table(out);
  return summary.total_violations() == 0 ? ok : violation;
}

// ---------------------------------------------------------------------------
// search

struct SearchOptions {
  std::string objective;
  std::size_t n = 4;
  std::size_t starts = 10;
  std::optional<EnsembleKind> start_kind;
  bool no_center = false;
  SearchSettings settings{};
};

inline std::vector<SearchRecord> search_records(const Objective& obj, const SearchOptions& so, const RunConfig& rc,
                                                std::size_t& rejected) {
  Ensemble ens;
  ens.n = so.n;
  ens.count = so.starts;
  ens.seed = rc.seed;
  ens.kind = so.start_kind.value_or(obj.m_minus2 ? EnsembleKind::SendovBoundary : EnsembleKind::UniformDisk);
  ens.recenter = obj.requires_centering();
  if (obj.m_minus2 && ens.kind != EnsembleKind::SendovBoundary) {
    throw UsageError("M-2 searches start from the sendov-boundary ensemble");
  }
  if (!obj.m_minus2 && ens.kind == EnsembleKind::SendovBoundary) {
    throw UsageError("ratio searches cannot start from the sendov-boundary ensemble");
  }
  ens.validate();
  SearchSettings settings = so.settings;
  settings.roots = rc.roots();
  settings.eval = rc.evaluation();

  std::vector<std::optional<SearchRecord>> slots(so.starts);
  parallel_for(so.starts, rc.threads, [&](std::size_t i) {
    const Sample s = draw_sample(ens, i);
    try {
      auto rec = maximize(obj, s.config, s.sendov ? std::optional<double>(s.sendov->a) : std::nullopt, settings);
      rec.seed = s.seed;
      slots[i] = std::move(rec);
    } catch (const RejectedStart&) {
    }
  });
  std::vector<SearchRecord> out;
  rejected = 0;
  for (auto& s : slots) {
    if (s) out.push_back(std::move(*s));
    else ++rejected;
  }
  return out;
}

inline int cmd_search(const RunConfig& rc, const SearchOptions& so, std::ostream& out) {
  const auto obj = Objective::parse(so.objective);
  if (!obj) throw UsageError("unknown objective " + so.objective);
  if (obj->requires_centering() && so.no_center) {
    throw UsageError("objective " + obj->to_string() + " requires centered configurations");
  }
  if (so.n < 2) throw UsageError("search needs n >= 2");
  if (so.starts < 1) throw UsageError("search needs at least one start");
  if (!obj->m_minus2 && (obj->ratio.kind == InequalityKind::EK || obj->ratio.kind == InequalityKind::LOGMAJ ||
                         obj->ratio.kind == InequalityKind::CC1) &&
      static_cast<std::size_t>(obj->ratio.k) > so.n - 1) {
    throw UsageError("objective index exceeds n - 1");
  }
  std::size_t rejected = 0;
  const auto records = search_records(*obj, so, rc, rejected);
  if (records.empty()) throw UsageError("objective is undefined at every start");

  bool counterexample = false;
  const SearchRecord* best = &records.front();
  for (const auto& r : records) {
    counterexample = counterexample || r.kind == "counterexample";
    if (*r.objective_value > *best->objective_value) best = &r;
  }
  if (!rc.out_path.empty()) {
    try {
      write_atomic(rc.out_path, jsonl(records));
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }
  if (rc.format == "jsonl" && rc.out_path.empty()) {
    out << jsonl(records);
  } else {
    char buf[200];
    std::snprintf(buf, sizeof buf, "objective %s, n = %zu, starts = %zu (rejected %zu)\n", obj->to_string().c_str(),
                  so.n, so.starts, rejected);
    out << buf;
    std::snprintf(buf, sizeof buf, "best value %.15g after %d iterations (start %.15g)\n", *best->objective_value,
                  best->iterations, *best->start_value);
    out << buf;
    out << "best configuration: " << format_zeros(best->zeros) << "\n";
    if (best->a) out << "a = " << *best->a << "\n";
    out << (counterexample ? "COUNTEREXAMPLE recorded (verified in extended precision)\n" : "no counterexample\n");
  }
  return counterexample ? violation : ok;
}

// ---------------------------------------------------------------------------
// report

inline int cmd_report(const RunConfig& rc, const std::vector<std::string>& inputs, std::ostream& out) {
  if (inputs.empty()) throw UsageError("report needs at least one JSONL input");
  Summary summary;
  std::size_t records = 0, counterexamples = 0;
  std::map<std::string, double> best;
  for (const auto& path : inputs) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read " + path);
    std::size_t line_no = 0;
    for (std::string line; std::getline(in, line);) {
      ++line_no;
      if (line.empty()) continue;
      SearchRecord rec;
      try {
        rec = record_from_json(json::parse(line));
      } catch (const std::exception& e) {
        throw UsageError(path + ":" + std::to_string(line_no) + ": " + e.what());
      }
      ++records;
      if (rec.kind == "counterexample") ++counterexamples;
      if (rec.objective && rec.objective_value) {
        auto [it, fresh] = best.emplace(*rec.objective, *rec.objective_value);
        if (!fresh) it->second = std::max(it->second, *rec.objective_value);
      }
      summary.add(rec.zeros.size(), rec.reports);
    }
  }
  std::ostringstream os;
  if (rc.format == "csv") {
    summary.write_csv(os);
  } else {
    os << records << " records, " << counterexamples << " counterexample records\n";
    for (const auto& [name, value] : best) {
      char buf[120];
      std::snprintf(buf, sizeof buf, "best %s = %.15g\n", name.c_str(), value);
      os << buf;
    }
    summary.write_table(os);
  }
  emit(rc, os.str(), out);
  return summary.total_violations() == 0 && counterexamples == 0 ? ok : violation;
}

// ---------------------------------------------------------------------------
// entry point

namespace detail {

inline bool looks_like_zero_token(const std::string& s) {
  static const std::regex pattern(R"(^[+-]?[0-9.]+([eE][+-]?[0-9]+)?,[+-]?[0-9.]+([eE][+-]?[0-9]+)?$)");
  return std::regex_match(s, pattern);
}

inline void add_common(CLI::App* cmd, RunConfig& rc) {
  cmd->add_option("--seed", rc.seed, "random seed (default fixed)");
  cmd->add_option("--tol-root", rc.tol.root, "root residual tolerance");
  cmd->add_option("--tol-eq", rc.tol.eq, "equality flag tolerance");
  cmd->add_option("--tol-center", rc.tol.center, "centroid tolerance");
  cmd->add_option("--out", rc.out_path, "output path");
  cmd->add_option("--format", rc.format, "csv, jsonl or table");
  cmd->add_flag("--recenter", rc.recenter, "translate zeros so their centroid is 0");
  cmd->add_option("--threads", rc.threads, "worker threads");
  cmd->add_option("--config", rc.config_path, "JSON configuration file");
}

}  // namespace detail

/// Runs one CLI invocation. Exit codes: 0 all checks passed, 1 mathematical
/// violation or counterexample, 2 usage or numeric-infrastructure error.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  // Zero tokens such as "-1,0" would be taken for flags; lift them out first.
  std::vector<Complex> inline_zeros;
  std::vector<std::string> rest;
  try {
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--zeros" && i + 1 < args.size()) {
        for (const auto& z : parse_zero_list(args[++i])) inline_zeros.push_back(z);
      } else if (i > 0 && detail::looks_like_zero_token(args[i])) {
        inline_zeros.push_back(parse_zero_token(args[i]));
      } else {
        rest.push_back(args[i]);
      }
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return usage;
  }

  CLI::App app{"Schoenberg-type inequality toolkit"};
  app.require_subcommand(1);
  RunConfig rc;

  auto* verify = app.add_subcommand("verify", "check every inequality on one configuration");
  detail::add_common(verify, rc);
  std::optional<double> a_flag;
  verify->add_option("--a", a_flag, "Sendov zero a in [0,1]; zeros are then the other zeros");

  auto* oracle = app.add_subcommand("oracle", "closed forms vs brute-force traces and spectra");
  detail::add_common(oracle, rc);
  std::size_t oracle_n = 0, oracle_samples = 1000;
  oracle->add_option("--n", oracle_n, "degree, 2..10")->required();
  oracle->add_option("--samples", oracle_samples, "random centered configurations");

  auto* sweep = app.add_subcommand("sweep", "evaluate all inequalities over an ensemble");
  detail::add_common(sweep, rc);
  std::string kind_name;
  Ensemble ens;
  std::string summary_path;
  std::optional<std::size_t> sweep_n, sweep_count;
  bool hypothesis = false;
  sweep->add_option("--ensemble", kind_name, "uniform-disk, gaussian, roots-of-unity-perturbed, collinear, sendov-boundary");
  sweep->add_option("--n", sweep_n, "degree");
  sweep->add_option("--count", sweep_count, "number of samples");
  sweep->add_option("--perturbation", ens.perturbation, "roots-of-unity perturbation scale");
  sweep->add_flag("--hypothesis", hypothesis, "sendov-boundary: only instances satisfying the special-case condition");
  sweep->add_option("--summary", summary_path, "CSV summary path");

  auto* search = app.add_subcommand("search", "local search maximizing a ratio or M-2");
  detail::add_common(search, rc);
  SearchOptions so;
  std::string start_kind;
  search->add_option("--objective", so.objective, "inequality id (e.g. KT, ST1, EK(2)) or M-2")->required();
  search->add_option("--n", so.n, "degree");
  search->add_option("--starts", so.starts, "number of random starts");
  search->add_option("--ensemble", start_kind, "ensemble for the starts");
  search->add_option("--max-iterations", so.settings.max_iterations, "iteration cap per start");
  search->add_option("--restarts", so.settings.restarts, "simplex restarts per start");
  search->add_flag("--no-center", so.no_center, "do not recenter starts");

  auto* report = app.add_subcommand("report", "summarize JSONL records");
  detail::add_common(report, rc);
  std::vector<std::string> inputs;
  report->add_option("inputs", inputs, "JSONL files")->required();

  std::vector<const char*> argv;
  for (const auto& s : rest) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return usage;
  }

  try {
    if (!rc.config_path.empty()) load_config_file(rc);
    if (!inline_zeros.empty()) {
      if (rc.ensemble) throw UsageError("inline zeros and an ensemble are mutually exclusive");
      rc.zeros = inline_zeros;
    }
    if (a_flag) rc.a = a_flag;
    rc.validate();

    if (app.got_subcommand(verify)) return cmd_verify(rc, out);
    if (!inline_zeros.empty()) throw UsageError("zeros are only accepted by verify");
    if (app.got_subcommand(oracle)) return cmd_oracle(rc, oracle_n, oracle_samples, out);
    if (app.got_subcommand(sweep)) {
      if (!rc.zeros.empty()) throw UsageError("sweep takes an ensemble, not zeros");
      Ensemble e = rc.ensemble.value_or(Ensemble{});
      if (!rc.ensemble) e.seed = rc.seed;
      if (!kind_name.empty()) {
        const auto k = parse_ensemble_kind(kind_name);
        if (!k) throw UsageError("unknown ensemble " + kind_name);
        e.kind = *k;
      } else if (!rc.ensemble) {
        throw UsageError("sweep needs --ensemble or a configuration file ensemble");
      }
      if (sweep_n) e.n = *sweep_n;
      if (sweep_count) e.count = *sweep_count;
      if (rc.recenter) e.recenter = true;
      if (hypothesis) e.hypothesis = true;
      if (sweep->count("--perturbation")) e.perturbation = ens.perturbation;
      return cmd_sweep(rc, e, summary_path, out);
    }
    if (app.got_subcommand(search)) {
      if (!start_kind.empty()) {
        so.start_kind = parse_ensemble_kind(start_kind);
        if (!so.start_kind) throw UsageError("unknown ensemble " + start_kind);
      }
      return cmd_search(rc, so, out);
    }
    if (app.got_subcommand(report)) return cmd_report(rc, inputs, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return usage;
  } catch (const ConvergenceError& e) {
    err << "numeric error: " << e.what() << " (residual " << e.residual() << ")\n";
    return usage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return usage;
  }
  return usage;
}

}  // namespace schoenberg::cli
