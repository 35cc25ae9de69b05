#pragma once

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "twobody/opcalc.hpp"

namespace twobody {

using json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kReportSchema = 1;

struct ReportEntry {
  std::string suite;
  std::string id;
  json inputs = json::object();
  double residual = 0;
  double tol = 0;
  bool pass = true;
  bool finding = false;  // findings are data, they never affect the exit code
  std::string note;
};

/// Machine-readable verification report: deterministic given (config, seed);
/// overall pass means every non-finding entry passes.
struct Report {
  std::string suite;
  json config = json::object();

  std::vector<ReportEntry> entries;

  void check(const std::string& id, double residual, double tol, json inputs = json::object()) {
    ReportEntry e;
    e.suite = suite;
    e.id = id;
    e.inputs = std::move(inputs);
    e.residual = residual;
    e.tol = tol;
    e.pass = residual <= tol;
    entries.push_back(std::move(e));
  }
  /// Pass iff `ok`; residual recorded for context.
  void check_flag(const std::string& id, bool ok, double residual, json inputs = json::object()) {
    ReportEntry e;
    e.suite = suite;
    e.id = id;
    e.inputs = std::move(inputs);
    e.residual = residual;
    e.tol = 0;
    e.pass = ok;
    entries.push_back(std::move(e));
  }
  void finding(const std::string& id, double residual, const std::string& note,
               json inputs = json::object()) {
    ReportEntry e;
    e.suite = suite;
    e.id = id;
    e.inputs = std::move(inputs);
    e.residual = residual;
    e.tol = 0;
    e.pass = true;
    e.finding = true;
    e.note = note;
    entries.push_back(std::move(e));
  }

  void merge(const Report& sub) {
    for (const auto& e : sub.entries) entries.push_back(e);
  }
  void sort_entries() {
    std::stable_sort(entries.begin(), entries.end(), [](const ReportEntry& a, const ReportEntry& b) {
      return std::tie(a.suite, a.id) < std::tie(b.suite, b.id);
    });
  }

  int count(bool pass, bool finding) const {
    int n = 0;
    for (const auto& e : entries)
      if (e.finding == finding && e.pass == pass) ++n;
    return n;
  }
  int findings_count() const {
    int n = 0;
    for (const auto& e : entries) n += e.finding ? 1 : 0;
    return n;
  }
  bool overall_pass() const {
    for (const auto& e : entries)
      if (!e.finding && !e.pass) return false;
    return true;
  }

  json to_json(bool with_timestamp = true) const {
    json j;
    j["schema"] = kReportSchema;
    j["version"] = kVersion;
    j["suite"] = suite;
    j["config"] = config;
    j["entries"] = json::array();
    for (const auto& e : entries) {
      json je;
      je["suite"] = e.suite;
      je["id"] = e.id;
      je["inputs"] = e.inputs;
      je["residual"] = e.residual;
      je["tol"] = e.tol;
      je["pass"] = e.pass;
      je["kind"] = e.finding ? "finding" : "check";
      if (!e.note.empty()) je["note"] = e.note;
      j["entries"].push_back(std::move(je));
    }
    j["summary"] = {{"checks", static_cast<int>(entries.size()) - findings_count()},
                    {"passed", count(true, false)},
                    {"failed", count(false, false)},
                    {"findings", findings_count()},
                    {"overall_pass", overall_pass()}};
    if (with_timestamp) {
      char buf[32];
      const std::time_t now = std::time(nullptr);
      std::tm tm{};
      gmtime_r(&now, &tm);
      std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
      j["timestamp"] = buf;
    }
    return j;
  }

  /// Human-readable table, one line per entry.
  std::string table() const {
    std::ostringstream os;
    os << "suite " << suite << "  (" << kVersion << ")\n";
    for (const auto& e : entries) {
      char line[256];
      std::snprintf(line, sizeof line, "  [%s] %-46s residual %10.3e  tol %8.1e  %s\n",
                    e.finding ? "finding" : (e.pass ? "  pass " : "* FAIL "), e.id.c_str(),
                    e.residual, e.tol, e.note.empty() ? "" : e.note.c_str());
      os << line;
    }
    os << (overall_pass() ? "overall: PASS" : "overall: FAIL") << "  (" << count(true, false)
       << " passed, " << count(false, false) << " failed, " << findings_count() << " findings)\n";
    return os.str();
  }
};

/// Matrix dump format: array-of-arrays of [re, im] pairs, row-major.
inline json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline ComplexMatrix matrix_from_json(const json& rows) {
  const int n = static_cast<int>(rows.size());
  ComplexMatrix m(n, rows.empty() ? 0 : static_cast<int>(rows[0].size()));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m.cols(); ++j)
      m(i, j) = cplx(rows[i][j][0].get<double>(), rows[i][j][1].get<double>());
  return m;
}

/// Residual reports serialize as {relation, point, order, residual, tol, pass}.
inline json residual_report_to_json(const ResidualReport& r) {
  json j;
  j["relation"] = r.relation;
  j["tol"] = r.tol;
  j["max_residual"] = r.max_residual;
  j["pass"] = r.pass;
  j["entries"] = json::array();
  for (const auto& e : r.entries) {
    j["entries"].push_back({{"relation", e.relation},
                            {"point", {e.p[0], e.p[1], e.p[2], e.p[3], e.p[4], e.p[5]}},
                            {"t", e.t},
                            {"order", e.order},
                            {"residual", e.residual},
                            {"tol", e.tol},
                            {"pass", e.pass}});
  }
  return j;
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << text;
}

inline void write_csv(const std::string& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  for (size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << "\n";
  char buf[32];
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", row[i]);
      os << (i ? "," : "") << buf;
    }
    os << "\n";
  }
}

}  // namespace twobody
