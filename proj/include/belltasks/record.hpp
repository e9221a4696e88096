#pragma once

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "belltasks/error.hpp"
#include "belltasks/rational.hpp"
#include "belltasks/task.hpp"

namespace belltasks {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;
inline constexpr double kStatusTol = 1e-6;
inline constexpr double kOrderingSlack = 1e-5;

enum class RunStatus { advantage, no_advantage, inconclusive, export_only };

inline std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::advantage: return "advantage";
    case RunStatus::no_advantage: return "no-advantage";
    case RunStatus::inconclusive: return "inconclusive";
    case RunStatus::export_only: return "export-only";
  }
  return "unknown";
}

inline RunStatus parse_run_status(const std::string& s) {
  for (auto v : {RunStatus::advantage, RunStatus::no_advantage, RunStatus::inconclusive, RunStatus::export_only})
    if (to_string(v) == s) return v;
  throw Error(ErrorKind::parse_error, "unknown status '" + s + "'");
}

/// Percent gain 100 (Q - C) / (C - R).
inline double advantage(double random, double classical, double quantum) {
  if (!(classical > random)) {
    throw Error(ErrorKind::undefined_advantage, "advantage needs C > R (C - R = " +
                                                    std::to_string(classical - random) + ")");
  }
  return 100.0 * (quantum - classical) / (classical - random);
}

inline double advantage(const Rational& random, const Rational& classical, double quantum) {
  if (classical <= random) return advantage(0.0, 0.0, quantum);
  return 100.0 * (quantum - to_double(classical)) / to_double(classical - random);
}

/// Integer shown in the table columns. Halves round up; the value is first snapped to
/// 1e-9 so that 12.4999999999 from an exact 1/8 ratio still shows as 13.
inline long display_advantage(double pct) { return std::lround(std::round(pct * 1e9) / 1e9); }

/// Advantage when the see-saw beats C; no advantage when NPA does not exceed C;
/// inconclusive in between; export-only when no bound was computed.
inline RunStatus classify(const Rational& classical, std::optional<double> seesaw, std::optional<double> npa) {
  const double c = to_double(classical);
  if (seesaw && *seesaw > c + kStatusTol) return RunStatus::advantage;
  if (!npa) return RunStatus::export_only;
  if (*npa <= c + kStatusTol) return RunStatus::no_advantage;
  return RunStatus::inconclusive;
}

struct Timings {
  double classical = 0.0;
  double seesaw = 0.0;
  double npa = 0.0;

  friend bool operator==(const Timings&, const Timings&) = default;
};

struct ResultRecord {
  std::string graph;
  TaskSpec spec;
  Rational random = 0;
  Rational classical = 0;
  bool classical_lower_bound = false;  // heuristic value; exact search exceeded its budget
  std::optional<double> seesaw;
  std::optional<double> npa;
  std::string npa_level;  // "1", "1+ab", "2"; empty when no bound was requested
  bool npa_certified = false;
  std::optional<double> advantage_pct;
  RunStatus status = RunStatus::export_only;
  std::vector<std::string> violations;
  Timings timings;
  std::uint64_t seed = 1;
  int restarts = 0;
  int dimension = 0;
  std::string version = kVersion;

  friend bool operator==(const ResultRecord&, const ResultRecord&) = default;
};

/// Pairs of R <= C <= Q_seesaw <= NPA that fail by more than the slack.
inline std::vector<std::string> ordering_violations(const ResultRecord& r) {
  std::vector<std::string> out;
  auto check = [&](const char* lo_name, double lo, const char* hi_name, double hi) {
    if (lo > hi + kOrderingSlack) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "%s=%.9g exceeds %s=%.9g", lo_name, lo, hi_name, hi);
      out.emplace_back(buf);
    }
  };
  const double rv = to_double(r.random), cv = to_double(r.classical);
  check("R", rv, "C", cv);
  if (r.seesaw && !r.classical_lower_bound) check("C", cv, "seesaw", *r.seesaw);
  if (r.npa) {
    check("C", cv, "npa", *r.npa);
    if (r.seesaw) check("seesaw", *r.seesaw, "npa", *r.npa);
  }
  return out;
}

/// Fills advantage, status and violations from the measured values.
inline void finalize(ResultRecord& r) {
  r.status = classify(r.classical, r.seesaw, r.npa);
  r.advantage_pct.reset();
  if (r.classical > r.random) {
    const std::optional<double> q = r.npa ? r.npa : r.seesaw;
    if (q) r.advantage_pct = advantage(r.random, r.classical, *q);
  }
  r.violations = ordering_violations(r);
}

namespace detail {

inline nlohmann::json rational_json(const Rational& q) {
  return {{"fraction", to_fraction_string(q)}, {"decimal", std::round(to_double(q) * 1e6) / 1e6}};
}

template <class T>
nlohmann::json optional_json(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

template <class T>
std::optional<T> optional_from(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<T>();
}

inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> cells(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cells.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cells.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.emplace_back();
    } else if (c != '\r') {
      cells.back() += c;
    }
  }
  if (quoted) throw Error(ErrorKind::parse_error, "unterminated quote in CSV line");
  return cells;
}

}  // namespace detail

inline nlohmann::json to_json(const ResultRecord& r) {
  using nlohmann::json;
  json j;
  j["schema"] = kSchemaVersion;
  j["version"] = r.version;
  j["graph"] = r.graph;
  j["task"] = {{"kind", to_string(r.spec.kind)},
               {"agents", r.spec.agents},
               {"steps", r.spec.steps},
               {"start", to_string(r.spec.start)},
               {"symmetric", r.spec.symmetric_only}};
  j["R"] = detail::rational_json(r.random);
  j["C"] = detail::rational_json(r.classical);
  j["C"]["lower_bound"] = r.classical_lower_bound;
  j["seesaw"] = detail::optional_json(r.seesaw);
  j["npa"] = {{"value", detail::optional_json(r.npa)}, {"level", r.npa_level}, {"certified", r.npa_certified}};
  j["advantage_pct"] = detail::optional_json(r.advantage_pct);
  j["status"] = to_string(r.status);
  j["violations"] = r.violations;
  j["timings"] = {{"classical", r.timings.classical}, {"seesaw", r.timings.seesaw}, {"npa", r.timings.npa}};
  j["seed"] = r.seed;
  j["restarts"] = r.restarts;
  j["dimension"] = r.dimension;
  return j;
}

inline ResultRecord record_from_json(const nlohmann::json& j) {
  try {
    if (j.at("schema").get<int>() != kSchemaVersion) {
      throw Error(ErrorKind::parse_error, "unsupported schema " + j.at("schema").dump());
    }
    ResultRecord r;
    r.version = j.at("version").get<std::string>();
    r.graph = j.at("graph").get<std::string>();
    const auto& t = j.at("task");
    r.spec.kind = parse_task_kind(t.at("kind").get<std::string>());
    r.spec.agents = t.at("agents").get<int>();
    r.spec.steps = t.at("steps").get<int>();
    r.spec.start = parse_start_rule(t.at("start").get<std::string>());
    r.spec.symmetric_only = t.at("symmetric").get<bool>();
    r.random = parse_rational(j.at("R").at("fraction").get<std::string>());
    r.classical = parse_rational(j.at("C").at("fraction").get<std::string>());
    r.classical_lower_bound = j.at("C").at("lower_bound").get<bool>();
    r.seesaw = detail::optional_from<double>(j.at("seesaw"));
    r.npa = detail::optional_from<double>(j.at("npa").at("value"));
    r.npa_level = j.at("npa").at("level").get<std::string>();
    r.npa_certified = j.at("npa").at("certified").get<bool>();
    r.advantage_pct = detail::optional_from<double>(j.at("advantage_pct"));
    r.status = parse_run_status(j.at("status").get<std::string>());
    r.violations = j.at("violations").get<std::vector<std::string>>();
    r.timings.classical = j.at("timings").at("classical").get<double>();
    r.timings.seesaw = j.at("timings").at("seesaw").get<double>();
    r.timings.npa = j.at("timings").at("npa").get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.restarts = j.at("restarts").get<int>();
    r.dimension = j.at("dimension").get<int>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse_error, std::string("result record: ") + e.what());
  }
}

inline const std::string& csv_header() {
  static const std::string h = "graph,task,agents,start,symmetric,R,C,seesaw,npa,level,advantage_pct,status";
  return h;
}

inline std::string to_csv_row(const ResultRecord& r) {
  auto opt = [](const std::optional<double>& v) { return v ? detail::format_g17(*v) : std::string(); };
  std::string row = detail::csv_escape(r.graph);
  row += "," + to_string(r.spec.kind);
  row += "," + std::to_string(r.spec.agents);
  row += "," + to_string(r.spec.start);
  row += std::string(",") + (r.spec.symmetric_only ? "true" : "false");
  row += "," + to_fraction_string(r.random);
  row += "," + to_fraction_string(r.classical);
  row += "," + opt(r.seesaw);
  row += "," + opt(r.npa);
  row += "," + r.npa_level;
  row += "," + opt(r.advantage_pct);
  row += "," + to_string(r.status);
  return row;
}

/// Parses one data row. Only the CSV columns are restored; everything else keeps its default.
inline ResultRecord record_from_csv_row(const std::string& line) {
  const auto cells = detail::csv_split(line);
  if (cells.size() != 12) {
    throw Error(ErrorKind::parse_error, "CSV row has " + std::to_string(cells.size()) + " fields, expected 12");
  }
  auto opt = [](const std::string& s) -> std::optional<double> {
    if (s.empty()) return std::nullopt;
    try {
      return std::stod(s);
    } catch (const std::exception&) {
      throw Error(ErrorKind::parse_error, "bad number '" + s + "' in CSV row");
    }
  };
  ResultRecord r;
  r.graph = cells[0];
  r.spec.kind = parse_task_kind(cells[1]);
  try {
    r.spec.agents = std::stoi(cells[2]);
  } catch (const std::exception&) {
    throw Error(ErrorKind::parse_error, "bad agent count '" + cells[2] + "' in CSV row");
  }
  r.spec.start = parse_start_rule(cells[3]);
  if (cells[4] != "true" && cells[4] != "false") throw Error(ErrorKind::parse_error, "bad symmetric flag '" + cells[4] + "'");
  r.spec.symmetric_only = cells[4] == "true";
  r.random = parse_rational(cells[5]);
  r.classical = parse_rational(cells[6]);
  r.seesaw = opt(cells[7]);
  r.npa = opt(cells[8]);
  r.npa_level = cells[9];
  r.advantage_pct = opt(cells[10]);
  r.status = parse_run_status(cells[11]);
  return r;
}

/// Equality over the fields a CSV row carries.
inline bool same_csv_fields(const ResultRecord& a, const ResultRecord& b) {
  return a.graph == b.graph && a.spec.kind == b.spec.kind && a.spec.agents == b.spec.agents &&
         a.spec.start == b.spec.start && a.spec.symmetric_only == b.spec.symmetric_only && a.random == b.random &&
         a.classical == b.classical && a.seesaw == b.seesaw && a.npa == b.npa && a.npa_level == b.npa_level &&
         a.advantage_pct == b.advantage_pct && a.status == b.status;
}

/// Human-readable block for --format table.
inline std::string to_table(const ResultRecord& r) {
  std::ostringstream out;
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return std::string(buf);
  };
  out << "graph      " << r.graph << "\n";
  out << "task       " << to_string(r.spec.kind) << ", " << r.spec.agents << " agents, start " << to_string(r.spec.start)
      << ", steps " << r.spec.steps << (r.spec.symmetric_only ? ", symmetric" : "") << "\n";
  out << "R          " << to_fraction_string(r.random) << " (" << num(to_double(r.random)) << ")\n";
  out << "C          " << to_fraction_string(r.classical) << " (" << num(to_double(r.classical)) << ")"
      << (r.classical_lower_bound ? " lower bound" : "") << "\n";
  out << "seesaw     " << (r.seesaw ? num(*r.seesaw) : "-") << "\n";
  out << "NPA " << (r.npa_level.empty() ? "   " : r.npa_level) << std::string(r.npa_level.size() < 4 ? 4 - r.npa_level.size() : 0, ' ')
      << "   " << (r.npa ? num(*r.npa) : "-") << (r.npa && !r.npa_certified ? " (uncertified)" : "") << "\n";
  if (r.advantage_pct) {
    std::snprintf(buf, sizeof buf, "%.4f%% (%ld)", *r.advantage_pct, display_advantage(*r.advantage_pct));
    out << "advantage  " << buf << "\n";
  } else {
    out << "advantage  -\n";
  }
  out << "status     " << to_string(r.status) << "\n";
  for (const auto& v : r.violations) out << "VIOLATION  " << v << "\n";
  return out.str();
}

}  // namespace belltasks
