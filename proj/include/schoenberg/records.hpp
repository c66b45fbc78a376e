#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "schoenberg/inequalities.hpp"
#include "schoenberg/search.hpp"
#include "schoenberg/types.hpp"

namespace schoenberg {

using nlohmann::json;

namespace detail {

inline json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

/// null encodes a non-finite value (only +inf occurs, as C1 on an exact hit).
inline double read_number(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

}  // namespace detail

inline json to_json(const InequalityReport& r) {
  return json{{"id", r.id.to_string()},         {"lhs", detail::number(r.lhs)},
              {"rhs", detail::number(r.rhs)},   {"slack", detail::number(r.slack)},
              {"holds", r.holds},               {"equality", r.equality},
              {"applicable", r.applicable}};
}

inline InequalityReport report_from_json(const json& j) {
  InequalityReport r;
  const auto id = InequalityId::parse(j.at("id").get<std::string>());
  if (!id) throw InvalidInput("unknown inequality id " + j.at("id").get<std::string>());
  r.id = *id;
  r.lhs = detail::read_number(j.at("lhs"));
  r.rhs = detail::read_number(j.at("rhs"));
  r.slack = detail::read_number(j.at("slack"));
  r.holds = j.at("holds").get<bool>();
  r.equality = j.at("equality").get<bool>();
  r.applicable = j.value("applicable", true);
  r.centered_required = r.id.requires_centering();
  r.centered_satisfied = !r.centered_required || r.applicable;
  return r;
}

inline json zeros_to_json(std::span<const Complex> zeros) {
  json arr = json::array();
  for (const auto& z : zeros) arr.push_back(json::array({z.real(), z.imag()}));
  return arr;
}

inline std::vector<Complex> zeros_from_json(const json& j) {
  if (!j.is_array()) throw InvalidInput("zeros must be an array of [re, im] pairs");
  std::vector<Complex> out;
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      throw InvalidInput("each zero must be a [re, im] pair of numbers");
    }
    out.emplace_back(p[0].get<double>(), p[1].get<double>());
  }
  return out;
}

/// JSONL record: {kind, seed, n, zeros, a?, reports, objective?, objective_value?, ...}.
inline json to_json(const SearchRecord& rec) {
  json j{{"kind", rec.kind}, {"seed", rec.seed}, {"n", rec.zeros.size()}, {"zeros", zeros_to_json(rec.zeros)}};
  if (rec.a) j["a"] = *rec.a;
  json reports = json::array();
  for (const auto& r : rec.reports) reports.push_back(to_json(r));
  j["reports"] = std::move(reports);
  if (rec.objective) j["objective"] = *rec.objective;
  if (rec.objective_value) j["objective_value"] = detail::number(*rec.objective_value);
  if (rec.start_value) j["start_value"] = detail::number(*rec.start_value);
  if (rec.verified_value) j["verified_value"] = detail::number(*rec.verified_value);
  if (rec.kind != "sample") j["iterations"] = rec.iterations;
  return j;
}

inline SearchRecord record_from_json(const json& j) {
  SearchRecord rec;
  rec.kind = j.at("kind").get<std::string>();
  rec.seed = j.at("seed").get<std::uint64_t>();
  rec.zeros = zeros_from_json(j.at("zeros"));
  if (j.contains("a")) rec.a = j.at("a").get<double>();
  for (const auto& r : j.at("reports")) rec.reports.push_back(report_from_json(r));
  if (j.contains("objective")) rec.objective = j.at("objective").get<std::string>();
  if (j.contains("objective_value")) rec.objective_value = detail::read_number(j.at("objective_value"));
  if (j.contains("start_value")) rec.start_value = detail::read_number(j.at("start_value"));
  if (j.contains("verified_value")) rec.verified_value = detail::read_number(j.at("verified_value"));
  rec.iterations = j.value("iterations", 0);
  return rec;
}

/// One CSV summary row per (inequality id, n).
struct SummaryRow {
  std::string id;
  std::size_t n = 0;
  std::size_t samples = 0;
  std::size_t violations = 0;
  double min_slack = std::numeric_limits<double>::infinity();
  std::size_t equality_count = 0;
};

/// Aggregates applicable reports. Rows keep first-seen order within each n.
class Summary {
 public:
  void add(std::size_t n, std::span<const InequalityReport> reports) {
    for (const auto& r : reports) {
      if (!r.applicable) continue;
      const auto key = std::make_pair(n, r.id.to_string());
      auto it = index_.find(key);
      if (it == index_.end()) {
        it = index_.emplace(key, rows_.size()).first;
        rows_.push_back(SummaryRow{key.second, n});
      }
      auto& row = rows_[it->second];
      ++row.samples;
      if (!r.holds) ++row.violations;
      if (r.equality) ++row.equality_count;
      row.min_slack = std::min(row.min_slack, r.slack);
    }
  }

  std::vector<SummaryRow> rows() const {
    auto out = rows_;
    std::stable_sort(out.begin(), out.end(), [](const SummaryRow& a, const SummaryRow& b) { return a.n < b.n; });
    return out;
  }

  std::size_t total_violations() const {
    std::size_t v = 0;
    for (const auto& r : rows_) v += r.violations;
    return v;
  }

  const SummaryRow* find(const std::string& id, std::size_t n) const {
    const auto it = index_.find({n, id});
    return it == index_.end() ? nullptr : &rows_[it->second];
  }

  void write_csv(std::ostream& os) const {
    os << "inequality_id,n,samples,violations,min_slack,equality_count\n";
    char buf[64];
    for (const auto& r : rows()) {
      std::snprintf(buf, sizeof buf, "%.17g", r.min_slack);
      os << r.id << ',' << r.n << ',' << r.samples << ',' << r.violations << ',' << buf << ',' << r.equality_count
         << '\n';
    }
  }

  void write_table(std::ostream& os) const {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-14s %4s %8s %10s %14s %9s\n", "inequality", "n", "samples", "violations",
                  "min_slack", "equality");
    os << buf;
    for (const auto& r : rows()) {
      std::snprintf(buf, sizeof buf, "%-14s %4zu %8zu %10zu %14.6e %9zu\n", r.id.c_str(), r.n, r.samples,
                    r.violations, r.min_slack, r.equality_count);
      os << buf;
    }
  }

 private:
  std::vector<SummaryRow> rows_;
  std::map<std::pair<std::size_t, std::string>, std::size_t> index_;
};

/// Writes `content` to a sibling temporary file and renames it over `path`.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error("cannot rename onto " + path.string());
  }
}

}  // namespace schoenberg
