#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <mutex>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "belltasks/classical.hpp"
#include "belltasks/error.hpp"
#include "belltasks/graph.hpp"
#include "belltasks/reference_tables.hpp"
#include "belltasks/task.hpp"

namespace belltasks {

enum class Provenance { explicit_definition, figure_derived };

inline std::string to_string(Provenance p) {
  return p == Provenance::explicit_definition ? "explicit-definition" : "figure-derived";
}

struct CatalogEntry {
  std::string name;
  std::vector<std::string> aliases;
  Graph graph;
  Provenance provenance = Provenance::explicit_definition;
};

/// Lower case, with ' ', '_' and '-' treated alike.
inline std::string normalize_name(const std::string& name) {
  std::string out;
  for (char ch : name) {
    char c = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (c == ' ' || c == '_') c = '-';
    if (c == '-' && (out.empty() || out.back() == '-')) continue;
    out.push_back(c);
  }
  while (!out.empty() && out.back() == '-') out.pop_back();
  return out;
}

namespace detail {

inline Graph named(const std::string& name, int n, std::vector<Edge> edges) { return Graph(name, n, edges); }

inline Graph loops_everywhere(const Graph& g, const std::string& name) { return with_all_loops(g, name); }

inline const std::map<int, std::vector<std::string>>& cycle_aliases() {
  static const std::map<int, std::vector<std::string>> m = {
      {3, {"triangle"}},  {4, {"square"}},  {5, {"pentagon"}},           {6, {"hexagon"}},
      {7, {"heptagon"}},  {8, {"octagon"}}, {9, {"ennagon", "nonagon"}}, {10, {"decagon"}},
  };
  return m;
}

// Edge lists of the figure-only graphs, found by exhaustive search over small graphs
// against every random/classical table entry of that graph.
inline std::vector<CatalogEntry> fixed_entries() {
  std::vector<CatalogEntry> out;
  auto add = [&](std::string name, std::vector<std::string> aliases, Graph g, Provenance p) {
    out.push_back({std::move(name), std::move(aliases), std::move(g), p});
  };
  const auto E = Provenance::explicit_definition;
  const auto F = Provenance::figure_derived;

  Graph k4 = make_complete(4);
  add("tetrahedron", {"tetraedron", "k4"}, Graph("tetrahedron", 4, k4.edges()), E);
  Graph q3 = make_hypercube(3);
  add("cube", {"q3"}, Graph("cube", 8, q3.edges()), E);

  add("double triangle", {"diamond"}, named("double triangle", 4, {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}}), F);
  add("square curly", {}, loops_everywhere(make_cycle(4), "square curly"), F);
  add("pentagon curly", {}, loops_everywhere(make_cycle(5), "pentagon curly"), F);

  const std::vector<Edge> spike = {{0, 1}, {0, 3}, {0, 4}, {1, 2}, {1, 4}, {2, 3}};
  add("spike", {}, named("spike", 5, spike), F);
  add("spike curly", {}, loops_everywhere(named("spike", 5, spike), "spike curly"), F);

  const std::vector<Edge> arrow = {{0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}, {2, 3}};
  add("arrow", {}, named("arrow", 5, arrow), F);
  add("arrow curly", {}, loops_everywhere(named("arrow", 5, arrow), "arrow curly"), F);

  add("clamp", {}, named("clamp", 6, {{0, 3}, {0, 4}, {0, 5}, {1, 2}, {1, 4}, {1, 5}, {2, 3}}), F);
  add("hat", {},
      named("hat", 6, {{0, 2}, {0, 3}, {0, 4}, {0, 5}, {1, 2}, {1, 3}, {1, 4}, {1, 5}, {2, 3}, {2, 5}, {3, 4}}), F);
  add("house", {},
      named("house", 6, {{0, 1}, {0, 2}, {0, 4}, {0, 5}, {1, 2}, {1, 3}, {1, 5}, {2, 3}, {2, 4}, {3, 4}}), F);
  // Square bipyramid: a 4-cycle plus two apexes joined to all of it.
  add("pyramid double", {"double pyramid"},
      named("pyramid double", 6,
            {{0, 1}, {1, 2}, {2, 3}, {0, 3}, {0, 4}, {1, 4}, {2, 4}, {3, 4}, {0, 5}, {1, 5}, {2, 5}, {3, 5}}),
      F);
  add("caltrop", {},
      named("caltrop", 6, {{0, 1}, {0, 2}, {0, 4}, {0, 5}, {1, 2}, {1, 3}, {1, 5}, {2, 3}, {2, 4}}), F);
  return out;
}

inline std::optional<CatalogEntry> parametric_entry(const std::string& key) {
  static const std::regex gon(R"((\d+)-gon)"), line(R"((\d+)-line(-curly)?)");
  std::smatch m;
  auto parse_n = [](const std::string& s) {
    if (s.size() > 4) throw Error(ErrorKind::invalid_parameter, "vertex count too large: " + s);
    return std::stoi(s);
  };
  if (std::regex_match(key, m, gon)) {
    const int n = parse_n(m[1]);
    Graph g = make_cycle(n);
    std::vector<std::string> aliases;
    if (auto it = cycle_aliases().find(n); it != cycle_aliases().end()) aliases = it->second;
    return CatalogEntry{g.name(), aliases, g, Provenance::explicit_definition};
  }
  if (std::regex_match(key, m, line)) {
    Graph g = make_path(parse_n(m[1]), m[2].matched);
    return CatalogEntry{g.name(), {}, g, Provenance::explicit_definition};
  }
  for (const auto& [n, names] : cycle_aliases()) {
    if (std::find(names.begin(), names.end(), key) != names.end()) return parametric_entry(std::to_string(n) + "-gon");
  }
  return std::nullopt;
}

}  // namespace detail

inline const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> entries = detail::fixed_entries();
  return entries;
}

inline bool entry_has_name(const CatalogEntry& e, const std::string& name) {
  const std::string key = normalize_name(name);
  if (normalize_name(e.name) == key) return true;
  return std::any_of(e.aliases.begin(), e.aliases.end(), [&](const auto& a) { return normalize_name(a) == key; });
}

/// Reference (task, printed random value, printed classical value) for one table row.
struct CatalogReference {
  int table = 0;
  TaskSpec spec;
  PrintedValue random;
  PrintedValue classical;
  std::string misprint;
  std::string note;
};

/// Table rows naming this entry.
inline std::vector<CatalogReference> references_for(const CatalogEntry& entry) {
  std::vector<CatalogReference> out;
  for (const auto& row : reference_rows()) {
    const std::string key = normalize_name(row.graph);
    bool same = entry_has_name(entry, row.graph);
    if (!same) {
      if (auto p = detail::parametric_entry(key)) same = p->name == entry.name;
    }
    if (same) out.push_back({row.table, table_task(row.table), row.random, row.classical, row.misprint, row.note});
  }
  return out;
}

struct ReferenceCheck {
  int table = 0;
  TaskSpec spec;
  char column = 'R';  // 'R' random, 'C' classical
  std::string printed;
  Rational computed;
  bool match = false;
  bool misprint = false;  // known misprint: reported, never counted as a failure
  double deviation = 0.0;
};

struct VerificationReport {
  std::string entry;
  std::vector<ReferenceCheck> checks;

  bool ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.match || c.misprint; });
  }
  bool pinned() const { return !checks.empty(); }
};

/// Recomputes random and classical values of every reference and compares them.
inline VerificationReport verify_catalog_entry(const CatalogEntry& entry, const std::vector<CatalogReference>& refs) {
  VerificationReport report;
  report.entry = entry.name;
  for (const auto& ref : refs) {
    const BellGame game = build_game(entry.graph, ref.spec);
    auto check = [&](char column, const PrintedValue& printed, const Rational& computed) {
      ReferenceCheck c;
      c.table = ref.table;
      c.spec = ref.spec;
      c.column = column;
      c.printed = printed.text;
      c.computed = computed;
      c.match = printed.matches(computed);
      c.misprint = ref.misprint.find(column) != std::string::npos;
      c.deviation = std::abs(to_double(computed) - printed.value());
      report.checks.push_back(std::move(c));
    };
    check('R', ref.random, random_value(game));
    check('C', ref.classical, classical_optimum(game, ref.spec.symmetric_only).value);
  }
  return report;
}

inline VerificationReport verify_catalog_entry(const CatalogEntry& entry) {
  return verify_catalog_entry(entry, references_for(entry));
}

/// Cached verification of the fixed entries (thread-safe).
inline const VerificationReport& catalog_verification(const CatalogEntry& entry) {
  static std::mutex mutex;
  static std::map<std::string, VerificationReport> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(entry.name);
  if (it == cache.end()) it = cache.emplace(entry.name, verify_catalog_entry(entry)).first;
  return it->second;
}

inline std::string catalog_status(const CatalogEntry& entry) {
  if (entry.provenance == Provenance::explicit_definition) return to_string(entry.provenance);
  const auto& report = catalog_verification(entry);
  std::string state = !report.pinned() ? "unpinned" : (report.ok() ? "verified" : "FAILED verification");
  return to_string(entry.provenance) + ", " + state;
}

inline std::string available_graph_names() {
  std::string out;
  for (const auto& e : catalog_entries()) out += (out.empty() ? "" : ", ") + e.name;
  out += ", N-gon (triangle..decagon), N-line, N-line curly";
  return out;
}

/// Looks up a catalog name or alias (case-insensitive). Figure-derived entries whose
/// verification fails are refused unless `allow_unverified` is set.
inline CatalogEntry catalog_lookup(const std::string& name, bool allow_unverified = false) {
  const std::string key = normalize_name(name);
  for (const auto& e : catalog_entries()) {
    if (!entry_has_name(e, key)) continue;
    if (e.provenance == Provenance::figure_derived && !allow_unverified) {
      const auto& report = catalog_verification(e);
      if (!report.ok()) {
        throw Error(ErrorKind::unverified_entry, "'" + e.name + "' does not reproduce its table values; "
                                                 "pass --allow-unverified to use it anyway");
      }
    }
    return e;
  }
  if (auto p = detail::parametric_entry(key)) return *p;
  throw Error(ErrorKind::not_found, "unknown graph '" + name + "'; available: " + available_graph_names());
}

}  // namespace belltasks
