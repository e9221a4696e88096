// Acceptance checks, one PASS/FAIL line per criterion. Exit status is nonzero if any fails.
// Optional arguments select criteria by number: `acceptance 4 7`.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "belltasks/catalog.hpp"
#include "belltasks/classical.hpp"
#include "belltasks/npa.hpp"
#include "belltasks/record.hpp"
#include "belltasks/run.hpp"
#include "belltasks/seesaw.hpp"

using namespace belltasks;

namespace {

struct Outcome {
  bool ok = true;
  std::vector<std::string> notes;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes.push_back("FAILED " + what);
    }
  }
  void info(const std::string& what) { notes.push_back(what); }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

TaskSpec spec_of(TaskKind kind, StartRule start, bool symmetric = false) {
  TaskSpec s;
  s.kind = kind;
  s.start = start;
  s.symmetric_only = symmetric;
  return s;
}

BellGame game_for(const std::string& graph, const TaskSpec& spec) { return build_game(catalog_lookup(graph).graph, spec); }

std::filesystem::path export_dir() {
  auto dir = std::filesystem::temp_directory_path() / "belltasks-acceptance";
  std::filesystem::create_directories(dir);
  return dir;
}

// An SDPA-compatible solver configured through the environment, if any.
std::optional<std::string> configured_solver() {
  const char* cmd = std::getenv("BELLTASKS_SDPA_COMMAND");
  if (!cmd || !*cmd) return std::nullopt;
  return std::string(cmd);
}

// 1. Explicit-definition rows of tables I-III.
Outcome exact_rows() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  int rows = 0;
  double worst = 0;
  for (int table = 1; table <= 3; ++table) {
    for (const auto& row : reference_table(table)) {
      const auto entry = catalog_lookup(row.graph);
      if (entry.provenance != Provenance::explicit_definition) continue;
      if (row.misprinted('R') || row.misprinted('C')) continue;
      const TaskSpec spec = table_task(table);
      const BellGame game = build_game(entry.graph, spec);
      const Rational r = random_value(game);
      const Rational c = classical_optimum(game, spec.symmetric_only).value;
      for (auto [printed, value] : {std::pair{row.random, r}, std::pair{row.classical, c}}) {
        o.expect(printed.matches(value), fmt("table %d %s: printed %s, computed %s", table, row.graph.c_str(),
                                             printed.text.c_str(), to_fraction_string(value).c_str()));
        if (!printed.is_fraction()) {
          const double dev = std::abs(to_double(value) - printed.value());
          worst = std::max(worst, dev);
          o.expect(dev <= 5e-6, fmt("table %d %s: decimal deviation %.2e", table, row.graph.c_str(), dev));
        }
      }
      ++rows;
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.info(fmt("%d rows, max decimal deviation %.2e, %.2f s", rows, worst, secs));
  o.expect(rows >= 20, "expected at least 20 explicit rows");
  o.expect(secs < 10.0, "runtime above 10 s");
  return o;
}

// 2. Figure-derived catalog entries against every table entry naming them.
Outcome figure_entries() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<std::string> required = {"clamp", "hat", "house", "caltrop", "spike", "arrow"};
  for (const auto& name : required) {
    const auto entry = catalog_lookup(name, true);
    o.expect(entry.provenance == Provenance::figure_derived, name + " is figure-derived");
  }
  int checks = 0, misprints = 0;
  for (const auto& entry : catalog_entries()) {
    if (entry.provenance != Provenance::figure_derived) continue;
    const auto report = verify_catalog_entry(entry);
    for (const auto& c : report.checks) {
      ++checks;
      if (c.misprint && !c.match) {
        ++misprints;
        o.info(fmt("known misprint: %s table %d column %c printed %s, computed %s", entry.name.c_str(), c.table,
                   c.column, c.printed.c_str(), to_fraction_string(c.computed).c_str()));
      }
      o.expect(c.match || c.misprint, fmt("%s table %d column %c: printed %s, computed %s", entry.name.c_str(),
                                          c.table, c.column, c.printed.c_str(), to_fraction_string(c.computed).c_str()));
    }
    o.info(entry.name + ": " + catalog_status(entry));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.info(fmt("%d checks, %d known misprints, %.2f s", checks, misprints, secs));
  o.expect(secs < 60.0, "runtime above 60 s");
  return o;
}

// 3. Level 1+ab bounds solved in-process.
Outcome level_one_ab() {
  Outcome o;
  struct Case {
    std::string graph;
    TaskSpec spec;
    double expected;
  };
  const TaskSpec t1 = table_task(1), t3 = table_task(3), t4 = table_task(4);
  const std::vector<Case> cases = {
      {"triangle", t1, 7.0 / 12.0}, {"pentagon", t1, 0.38090}, {"hexagon", t1, 0.29167},
      {"heptagon", t1, 0.27864},    {"9-gon", t1, 0.21887},    {"10-gon", t1, 0.19045},
      {"triangle", t3, 1.0 / 2},    {"pentagon", t3, 1.0 / 4}, {"hexagon", t3, 1.0 / 5},
      {"heptagon", t3, 1.0 / 6},    {"9-gon", t3, 1.0 / 8},    {"10-gon", t3, 1.0 / 9},
      {"11-gon", t3, 1.0 / 10},     {"13-gon", t3, 1.0 / 12},  {"pentagon", t4, 4.67361},
      {"hexagon", t4, 5.0},
  };
  for (const auto& c : cases) {
    const auto t0 = std::chrono::steady_clock::now();
    const BellGame game = game_for(c.graph, c.spec);
    const auto program = build_relaxation(game, NpaLevel::one_ab, game.party_symmetric());
    const std::string label = c.graph + " " + to_string(c.spec.kind) + " " + to_string(c.spec.start) +
                              (c.spec.symmetric_only ? " symmetric" : "");
    if (!fits_embedded(program.sdp)) {
      const auto file = export_dir() / (normalize_name(c.graph) + "_1pab.dat-s");
      detail::write_text(file, export_sdpa(program.sdp));
      o.expect(game.n >= 13, label + " exceeds the embedded guard");
      o.info(label + ": export-only, wrote " + file.string());
      continue;
    }
    const auto bound = bound_from_solution(program.relaxation, solve_embedded(program.sdp));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.expect(bound.certified, label + " certified");
    o.expect(std::abs(bound.value - c.expected) <= 1e-4,
             fmt("%s: %.6f vs %.6f", label.c_str(), bound.value, c.expected));
    o.info(fmt("%s: %.6f (%.1f s)", label.c_str(), bound.value, secs));
  }
  return o;
}

// 4. Level-2 rows: exports, optional external solve, structural checks.
Outcome level_two() {
  Outcome o;
  struct Case {
    std::string graph;
    int table;
    double expected;
  };
  const std::vector<Case> cases = {{"tetrahedron", 1, 0.64506}, {"square curly", 1, 0.64506}, {"tetrahedron", 2, 8.0 / 15}};
  const auto external = configured_solver();
  for (const auto& c : cases) {
    const BellGame game = game_for(c.graph, table_task(c.table));
    const auto program = build_relaxation(game, NpaLevel::two, game.party_symmetric());
    const std::string stem = fmt("table%d_%s_2", c.table, normalize_name(c.graph).c_str());
    const auto file = export_dir() / (stem + ".dat-s");
    const std::string text = export_sdpa(program.sdp);
    detail::write_text(file, text);
    o.expect(std::filesystem::file_size(file) == text.size(), stem + " export written");
    o.expect(export_sdpa(parse_sdpa(text)) == text, stem + " export re-parses byte-identically");
    const std::string label = fmt("%s table %d", c.graph.c_str(), c.table);
    if (external) {
      const auto bound = bound_from_solution(program.relaxation, solve_external(program.sdp, *external, export_dir(), stem));
      o.expect(std::abs(bound.value - c.expected) <= 1e-4, fmt("%s external: %.6f vs %.6f", label.c_str(), bound.value, c.expected));
      o.info(fmt("%s: external %.6f", label.c_str(), bound.value));
    }
    if (fits_embedded(program.sdp)) {
      const double v = npa_bound(game, NpaLevel::two, game.party_symmetric()).value;
      o.expect(std::abs(v - c.expected) <= 1e-4, fmt("%s embedded: %.6f vs %.6f", label.c_str(), v, c.expected));
      o.info(fmt("%s: embedded %.6f", label.c_str(), v));
    }
  }
  if (!external) o.info("BELLTASKS_SDPA_COMMAND not set; external check skipped, structural checks only");

  // Structural checks.
  const BellGame c5 = build_game(make_cycle(5), TaskSpec{});
  o.expect(generating_set(c5, NpaLevel::one).size() == 11u, "level 1 monomial count");
  o.expect(generating_set(c5, NpaLevel::one_ab).size() == 36u, "level 1+ab monomial count");
  o.expect(generating_set(c5, NpaLevel::two).size() == 76u, "level 2 monomial count");
  const Letter a0{0, 0, 0}, a1{0, 1, 0}, b0{1, 0, 0};
  o.expect(canonicalize({b0, a0})->word == Word{a0, b0}, "parties commute");
  o.expect(canonicalize({a0, a0})->word == Word{a0}, "projectors are idempotent");
  o.expect(!canonicalize({a0, Letter{0, 0, 1}}).has_value(), "orthogonal outcomes vanish");
  o.expect(canonicalize({a1, a0})->word == Word{a1, a0}, "same-party inputs do not commute");
  const auto guard_ok = [] {
    try {
      build_relaxation(build_game(make_complete(12), spec_of(TaskKind::domination, StartRule::any)), NpaLevel::two);
      return false;
    } catch (const Error& e) {
      return e.kind() == ErrorKind::too_large;
    }
  }();
  o.expect(guard_ok, "level 2 guard refuses K12 domination");
  return o;
}

// 5. See-saw reaches the bounds with 100 restarts at d = n.
Outcome seesaw_attainment(std::vector<bool>& monotone) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  struct Case {
    std::string graph;
    TaskSpec spec;
    double tol;
  };
  const std::vector<Case> cases = {
      {"triangle", table_task(1), 1e-3},
      {"pentagon", table_task(1), 1e-3},
      {"hexagon", table_task(1), 1e-3},
      {"pentagon", table_task(4), 1e-3},
      {"triangle", table_task(3), 1e-4},
  };
  for (const auto& c : cases) {
    const auto t1 = std::chrono::steady_clock::now();
    const BellGame game = game_for(c.graph, c.spec);
    SeesawConfig cfg;
    cfg.restarts = 100;
    cfg.seed = 1;
    cfg.symmetric = c.spec.symmetric_only;
    const auto res = optimize(game, cfg);
    const double npa = npa_bound(game, NpaLevel::one_ab, game.party_symmetric()).value;
    const std::string label = c.graph + " " + to_string(c.spec.kind) + " " + to_string(c.spec.start) +
                              (c.spec.symmetric_only ? " symmetric" : "");
    o.expect(res.realization.d == game.n, label + " uses d = n");
    o.expect(npa - res.value <= c.tol, fmt("%s: see-saw %.6f, npa %.6f", label.c_str(), res.value, npa));
    o.expect(res.value <= npa + 1e-5, label + " see-saw above the bound");
    monotone.push_back(res.monotone);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t1).count();
    o.info(fmt("%s: see-saw %.6f, npa %.6f, gap %.1e (%.1f s)", label.c_str(), res.value, npa, npa - res.value, secs));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.expect(secs < 1800, "runtime above 30 min");
  return o;
}

// 6. Rows without advantage.
Outcome no_advantage_rows() {
  Outcome o;
  struct Case {
    std::string graph;
    TaskSpec spec;
  };
  const std::vector<Case> cases = {
      {"square curly", spec_of(TaskKind::domination, StartRule::any)},
      {"square curly", spec_of(TaskKind::domination, StartRule::distinct)},
      {"square curly", spec_of(TaskKind::domination, StartRule::distinct, true)},
      {"4-gon", spec_of(TaskKind::rendezvous, StartRule::any)},
      {"4-gon", spec_of(TaskKind::rendezvous, StartRule::distinct)},
      {"4-gon", spec_of(TaskKind::rendezvous, StartRule::distinct, true)},
      {"8-gon", spec_of(TaskKind::rendezvous, StartRule::any)},
      {"12-gon", spec_of(TaskKind::rendezvous, StartRule::any)},
  };
  for (const auto& c : cases) {
    EvalOptions opt;
    opt.graph = c.graph;
    opt.task = to_string(c.spec.kind);
    opt.start = to_string(c.spec.start);
    opt.symmetric = c.spec.symmetric_only;
    opt.restarts = 5;
    opt.skip_seesaw = catalog_lookup(c.graph).graph.n() > 8;
    const ResultRecord rec = run_eval(opt);
    const std::string label = c.graph + " " + opt.task + " " + opt.start + (opt.symmetric ? " symmetric" : "");
    o.expect(rec.status == RunStatus::no_advantage, label + ": status " + to_string(rec.status));
    o.expect(rec.npa && *rec.npa <= to_double(rec.classical) + kStatusTol, label + ": npa above C");
    o.expect(rec.violations.empty(), label + ": ordering violation");
    o.info(fmt("%s: C %s, npa %.9f, %s", label.c_str(), to_fraction_string(rec.classical).c_str(), rec.npa.value_or(-1),
               to_string(rec.status).c_str()));
  }
  return o;
}

// 7. Property suites.
Outcome properties(const std::vector<bool>& monotone_runs) {
  Outcome o;

  // Ordering on every catalog game.
  int games = 0, violations = 0, level_one = 0;
  for (const auto& entry : catalog_entries()) {
    for (auto kind : {TaskKind::rendezvous, TaskKind::domination}) {
      for (auto start : {StartRule::any, StartRule::distinct}) {
        const TaskSpec spec = spec_of(kind, start);
        const BellGame game = build_game(entry.graph, spec);
        ResultRecord rec;
        rec.graph = entry.name;
        rec.spec = spec;
        rec.random = random_value(game);
        rec.classical = classical_or_lower_bound(game, false, rec.classical_lower_bound).value;
        // Level 1 stands in where 1+ab is slow (dense Schur matrix in m); it is still an upper bound.
        auto program = build_relaxation(game, NpaLevel::one_ab, game.party_symmetric());
        if (program.sdp.m > 2500) {
          program = build_relaxation(game, NpaLevel::one, game.party_symmetric());
          ++level_one;
        }
        rec.npa = bound_from_solution(program.relaxation, solve_embedded(program.sdp)).value;
        SeesawConfig cfg;
        cfg.restarts = 3;
        cfg.d = 2;
        const auto res = optimize(game, cfg);
        rec.seesaw = res.value;
        if (!res.monotone) o.expect(false, entry.name + " see-saw not monotone");
        finalize(rec);
        ++games;
        // A low see-saw value from few restarts is a search shortfall, not an ordering error.
        for (const auto& v : rec.violations) {
          if (v.rfind("C=", 0) == 0 && v.find("seesaw") != std::string::npos) continue;
          ++violations;
          o.expect(false, entry.name + " " + to_string(kind) + " " + to_string(start) + ": " + v);
        }
        o.expect(rec.random <= rec.classical, entry.name + " R <= C");
      }
    }
  }
  o.info(fmt("ordering: %d catalog games (%d bounded at level 1), %d violations", games, level_one, violations));

  // Symmetrization and derandomization over random strategies.
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> weight(0, 6);
  auto random_strategy = [&](const BellGame& game) {
    StochasticStrategy s;
    for (int x = 0; x < game.n; ++x) {
      std::vector<int> w(game.outcome_count(x));
      int total = 0;
      for (auto& v : w) total += (v = weight(rng));
      if (total == 0) w[0] = total = 1;
      auto& row = s.p.emplace_back();
      for (int v : w) row.push_back(Rational(v, total));
    }
    return s;
  };
  int strategies = 0;
  for (const Graph& g : {make_cycle(3), make_cycle(5), make_path(5, true), catalog_lookup("tetrahedron").graph}) {
    const BellGame game = build_game(g, TaskSpec{});
    for (int k = 0; k < 1000; ++k) {
      const Strategies s{random_strategy(game), random_strategy(game)};
      const Strategies t = symmetrize(game, s);
      if (!is_symmetric_strategies(t) || evaluate(game, t) < evaluate(game, s)) o.expect(false, g.name() + " symmetrize");
      const auto d = StochasticStrategy::from(game, derandomize(game, t[0]));
      if (evaluate(game, {d, d}) < evaluate(game, t)) o.expect(false, g.name() + " derandomize");
      ++strategies;
    }
  }
  o.info(fmt("monotonicity: %d random strategy pairs", strategies));

  // See-saw ascent.
  for (bool m : monotone_runs) o.expect(m, "see-saw trace decreased");
  for (const Graph& g : {make_cycle(4), make_path(4, true)}) {
    for (auto kind : {TaskKind::rendezvous, TaskKind::domination}) {
      SeesawConfig cfg;
      cfg.restarts = 10;
      o.expect(optimize(build_game(g, spec_of(kind, StartRule::distinct)), cfg).monotone, g.name() + " ascent");
    }
  }

  // Moment matrix canonicalization.
  const BellGame c5 = build_game(make_cycle(5), TaskSpec{});
  const auto program = build_relaxation(c5, NpaLevel::two);
  const auto& ids = program.relaxation.entry_ids;
  bool symmetric_ids = ids[0][0] == 0;
  for (std::size_t u = 0; u < ids.size(); ++u)
    for (std::size_t v = 0; v < ids.size(); ++v) symmetric_ids = symmetric_ids && ids[u][v] == ids[v][u];
  o.expect(symmetric_ids, "moment matrix entries symmetric");
  for (std::size_t u = 1; u < ids.size(); ++u) {
    const auto& w = program.relaxation.monomials[u].word;
    if (w.size() == 1) o.expect(ids[u][u] == ids[0][u], "letter diagonal equals its moment");
    o.expect(adjoint(adjoint(w)) == w, "adjoint is an involution");
  }

  // SDPA byte determinism.
  const std::string a = export_sdpa(build_relaxation(c5, NpaLevel::two, true).sdp);
  const std::string b = export_sdpa(build_relaxation(c5, NpaLevel::two, true).sdp);
  o.expect(a == b, "export deterministic");
  o.expect(export_sdpa(parse_sdpa(a)) == a, "export round trip");

  // Advantage recomputation on the table IV hexagon row.
  for (const auto& row : reference_table(4)) {
    if (row.graph != "hexagon") continue;
    for (const auto& l : detail::reproduce_row(row, {}, SolverChoice::embedded)) {
      if (l.quantity == "advantage-row") {
        o.expect(l.status == "inconsistent", "hexagon printed row flagged");
        o.expect(l.computed && display_advantage(*l.computed) != 13, "hexagon printed row does not give 13");
        o.info(fmt("table IV hexagon: printed row gives %.1f%%, printed %s", l.computed.value_or(0), l.printed.c_str()));
      }
      if (l.quantity == "C") o.expect(l.status == "misprint", "hexagon C reported as misprint");
    }
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  struct Criterion {
    int id;
    std::string name;
    std::function<Outcome()> run;
  };
  std::vector<bool> monotone;
  const std::vector<Criterion> criteria = {
      {1, "exact classical and random values, explicit graphs", exact_rows},
      {2, "figure-derived catalog entries", figure_entries},
      {3, "NPA level 1+ab in-process", level_one_ab},
      {4, "NPA level 2 exports and structure", level_two},
      {5, "see-saw attainment", [&] { return seesaw_attainment(monotone); }},
      {6, "no-advantage rows", no_advantage_rows},
      {7, "property suites", [&] { return properties(monotone); }},
  };
  int failed = 0;
  std::vector<std::string> summary;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.notes.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (const auto& n : o.notes) std::printf("  [%d] %s\n", c.id, n.c_str());
    const std::string line = fmt("%s criterion %d: %s (%.1f s)", o.ok ? "PASS" : "FAIL", c.id, c.name.c_str(), secs);
    std::printf("%s\n", line.c_str());
    std::fflush(stdout);
    summary.push_back(line);
    failed += o.ok ? 0 : 1;
  }
  std::printf("\n");
  for (const auto& s : summary) std::printf("%s\n", s.c_str());
  return failed == 0 ? 0 : 1;
}
