#pragma once

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <unistd.h>

#include "belltasks/catalog.hpp"
#include "belltasks/classical.hpp"
#include "belltasks/npa.hpp"
#include "belltasks/record.hpp"
#include "belltasks/reference_tables.hpp"
#include "belltasks/sdp.hpp"
#include "belltasks/seesaw.hpp"

namespace belltasks {

enum class SolverChoice { embedded, external };

inline SolverChoice parse_solver(const std::string& s) {
  if (s == "embedded") return SolverChoice::embedded;
  if (s == "external") return SolverChoice::external;
  throw Error(ErrorKind::invalid_parameter, "unknown solver '" + s + "' (expected embedded|external)");
}

/// BELLTASKS_SOLVER, when set, wins over the flag.
inline SolverChoice effective_solver(const std::string& flag) {
  if (const char* env = std::getenv("BELLTASKS_SOLVER"); env && *env) return parse_solver(env);
  return parse_solver(flag);
}

inline std::string external_solver_command() {
  if (const char* env = std::getenv("BELLTASKS_SDPA_COMMAND"); env && *env) return env;
  return "sdpa";
}

struct EvalOptions {
  std::string graph;
  std::string task = "rendezvous";
  int agents = 2;
  std::string start = "any";
  int steps = 1;
  bool symmetric = false;
  std::string npa_level = "1+ab";
  int seesaw_dim = 0;
  int restarts = 100;
  std::uint64_t seed = 1;
  std::string export_sdpa;  // path of the .dat-s file; empty for none
  bool export_only = false;
  std::string solver = "embedded";
  int jobs = 0;
  bool allow_unverified = false;
  bool skip_seesaw = false;
  bool skip_npa = false;
};

/// Catalog name, or a path to a graph file.
inline Graph resolve_graph(const std::string& name, bool allow_unverified) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(name, ec)) {
    std::ifstream in(name);
    if (!in) throw Error(ErrorKind::not_found, "cannot open graph file " + name);
    return parse_graph(in, std::filesystem::path(name).stem().string()).graph;
  }
  return catalog_lookup(name, allow_unverified).graph;
}

inline TaskSpec task_from(const EvalOptions& o) {
  TaskSpec spec;
  spec.kind = parse_task_kind(o.task);
  if (o.agents != 2 && o.agents != 3) throw Error(ErrorKind::invalid_parameter, "--agents must be 2 or 3");
  spec.agents = o.agents;
  spec.start = parse_start_rule(o.start);
  spec.steps = o.steps;
  spec.symmetric_only = o.symmetric;
  spec.validate();
  return spec;
}

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    f << text;
    if (!f) throw Error(ErrorKind::invalid_parameter, "cannot write " + path.string());
  }
  std::filesystem::rename(tmp, path);
}

inline NpaBound solve_program(const NpaProgram& program, SolverChoice solver, const std::filesystem::path& workdir,
                              const std::string& stem) {
  if (program.sdp.m == 0) {
    NpaBound b;
    b.value = b.primal = program.relaxation.constant;
    b.certified = true;
    b.status = SdpStatus::optimal;
    return b;
  }
  if (solver == SolverChoice::external) {
    return bound_from_solution(program.relaxation, solve_external(program.sdp, external_solver_command(), workdir, stem));
  }
  return bound_from_solution(program.relaxation, solve_embedded(program.sdp));
}

}  // namespace detail

/// Exact optimum, or the best-response value flagged as a lower bound when the search is too large.
inline ClassicalOptimum classical_or_lower_bound(const BellGame& game, bool symmetric, bool& lower_bound) {
  lower_bound = false;
  try {
    return classical_optimum(game, symmetric);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::too_large) throw;
  }
  lower_bound = true;
  auto trace = best_response_improve(game, Strategies(game.r, StochasticStrategy::uniform(game)));
  ClassicalOptimum out;
  out.value = trace.values.back();
  return out;
}

/// One evaluation: R and C always, NPA and see-saw unless export-only.
inline ResultRecord run_eval(const EvalOptions& o) {
  const TaskSpec spec = task_from(o);
  const NpaLevel level = parse_npa_level(o.npa_level);
  const SolverChoice solver = effective_solver(o.solver);
  const Graph graph = resolve_graph(o.graph, o.allow_unverified);
  const BellGame game = build_game(graph, spec);

  ResultRecord rec;
  rec.graph = graph.name();
  rec.spec = spec;
  rec.seed = o.seed;

  auto t0 = std::chrono::steady_clock::now();
  rec.random = random_value(game);
  rec.classical = classical_or_lower_bound(game, spec.symmetric_only, rec.classical_lower_bound).value;
  rec.timings.classical = detail::seconds_since(t0);

  const bool want_npa = !o.skip_npa;
  if (want_npa) {
    rec.npa_level = to_string(level);
    t0 = std::chrono::steady_clock::now();
    const auto program = build_relaxation(game, level, game.party_symmetric());
    if (!o.export_sdpa.empty()) detail::write_text(o.export_sdpa, export_sdpa(program.sdp));
    if (!o.export_only) {
      const auto workdir = std::filesystem::temp_directory_path() / ("belltasks-" + std::to_string(::getpid()));
      const auto bound = detail::solve_program(program, solver, workdir, "eval");
      rec.npa = bound.value;
      rec.npa_certified = bound.certified;
    }
    rec.timings.npa = detail::seconds_since(t0);
  }

  if (!o.export_only && !o.skip_seesaw) {
    SeesawConfig cfg;
    cfg.d = o.seesaw_dim;
    cfg.restarts = o.restarts;
    cfg.seed = o.seed;
    cfg.symmetric = spec.symmetric_only;
    cfg.jobs = o.jobs;
    t0 = std::chrono::steady_clock::now();
    const auto res = optimize(game, cfg);
    rec.timings.seesaw = detail::seconds_since(t0);
    rec.seesaw = res.value;
    rec.restarts = res.restarts;
    rec.dimension = res.realization.d;
  }
  finalize(rec);
  return rec;
}

/// 0 on success, 2 when the record is inconclusive.
inline int exit_code_for(const ResultRecord& r) { return r.status == RunStatus::inconclusive ? 2 : 0; }

// ---------------------------------------------------------------------------
// Table reproduction

struct ReproduceOptions {
  std::string solver = "embedded";
  int jobs = 1;
  std::string export_dir;  // .dat-s files of rows not solved in-process; empty disables
  double npa_tol = 1e-4;
};

/// One line of the long-form comparison CSV.
struct ComparisonLine {
  int table = 0;
  std::string graph;
  std::string quantity;  // R, C, NPA, advantage, advantage-row
  std::string printed;
  std::optional<double> computed;
  std::optional<double> abs_diff;
  std::string status;  // match, mismatch, misprint, export-only, inconsistent
  std::string note;
};

struct ReproduceSummary {
  std::vector<ComparisonLine> lines;
  int matches = 0;
  int mismatches = 0;
  int misprints = 0;
  int export_only = 0;
  int inconsistent = 0;
  double max_decimal_deviation = 0.0;  // over R/C entries printed as long decimals
};

namespace detail {

inline std::string file_stem(int table, const std::string& graph, NpaLevel level) {
  std::string s = "table" + std::to_string(table) + "_" + normalize_name(graph) + "_" + to_string(level);
  for (char& c : s)
    if (c == '+') c = 'p';
  return s;
}

inline std::vector<ComparisonLine> reproduce_row(const ReferenceRow& row, const ReproduceOptions& opt,
                                                 SolverChoice solver) {
  std::vector<ComparisonLine> out;
  const CatalogEntry entry = catalog_lookup(row.graph);
  const TaskSpec spec = table_task(row.table);
  const BellGame game = build_game(entry.graph, spec);

  auto line = [&](std::string quantity, const PrintedValue& printed, std::optional<double> computed) {
    ComparisonLine l;
    l.table = row.table;
    l.graph = row.graph;
    l.quantity = std::move(quantity);
    l.printed = printed.text;
    l.computed = computed;
    if (computed) l.abs_diff = std::abs(*computed - printed.value());
    return l;
  };

  const Rational r = random_value(game);
  const Rational c = classical_optimum(game, spec.symmetric_only).value;
  for (auto [column, printed, value] : {std::tuple{'R', row.random, r}, std::tuple{'C', row.classical, c}}) {
    auto l = line(std::string(1, column), printed, to_double(value));
    l.status = printed.matches(value) ? "match" : (row.misprinted(column) ? "misprint" : "mismatch");
    if (l.status == "misprint") l.note = row.note;
    if (!printed.matches(value) || !printed.is_fraction()) l.note += (l.note.empty() ? "" : "; ") + to_fraction_string(value);
    out.push_back(std::move(l));
  }

  const NpaLevel level = row.npa_level_two ? NpaLevel::two : NpaLevel::one_ab;
  std::optional<double> q;
  std::string npa_note;
  try {
    const auto program = build_relaxation(game, level, game.party_symmetric());
    const bool in_process = solver == SolverChoice::external || fits_embedded(program.sdp);
    const std::string stem = file_stem(row.table, row.graph, level);
    if (!opt.export_dir.empty() && !(in_process && solver == SolverChoice::embedded)) {
      write_text(std::filesystem::path(opt.export_dir) / (stem + ".dat-s"), export_sdpa(program.sdp));
    }
    if (in_process) {
      const auto workdir = opt.export_dir.empty() ? std::filesystem::temp_directory_path() / "belltasks-reproduce"
                                                  : std::filesystem::path(opt.export_dir);
      q = solve_program(program, solver, workdir, stem).value;
    } else {
      npa_note = "level " + to_string(level) + ": dimension " + std::to_string(program.sdp.total_dimension()) +
                 ", " + std::to_string(program.sdp.m) + " variables exceed the embedded guard";
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::too_large) throw;
    npa_note = e.what();
  }

  auto l = line("NPA", row.npa, q);
  l.note = npa_note;
  if (!q) {
    l.status = "export-only";
  } else if (row.npa.matches(*q, opt.npa_tol)) {
    l.status = "match";
  } else {
    l.status = row.misprinted('N') ? "misprint" : "mismatch";
    if (l.status == "misprint") l.note = row.note;
  }
  out.push_back(std::move(l));

  // Advantage recomputed from exact R, C and the computed bound.
  auto adv = line("advantage", row.advantage, std::nullopt);
  if (!q) {
    adv.status = "export-only";
  } else if (c > r) {
    const double pct = advantage(r, c, *q);
    adv.computed = pct;
    adv.abs_diff = std::abs(pct - row.advantage.value());
    const bool ok = display_advantage(pct) == display_advantage(row.advantage.value()) || *adv.abs_diff < 1.0;
    adv.status = ok ? "match" : (row.misprint.empty() ? "mismatch" : "misprint");
  } else {
    adv.status = "mismatch";
    adv.note = "C <= R, advantage undefined";
  }
  out.push_back(std::move(adv));

  // Advantage recomputed from the printed row itself; flags rows that are not self-consistent.
  auto own = line("advantage-row", row.advantage, std::nullopt);
  const double pr = row.random.value(), pc = row.classical.value(), pq = row.npa.value();
  if (pc > pr) {
    const double pct = advantage(pr, pc, pq);
    own.computed = pct;
    own.abs_diff = std::abs(pct - row.advantage.value());
    own.status = *own.abs_diff < 1.0 ? "match" : "inconsistent";
    if (own.status == "inconsistent") {
      char buf[160];
      std::snprintf(buf, sizeof buf, "printed row gives %.1f%%, printed advantage is %s", pct, row.advantage.text.c_str());
      own.note = buf;
    }
  } else {
    own.status = "inconsistent";
  }
  out.push_back(std::move(own));
  return out;
}

}  // namespace detail

/// Recomputes every row of one table. Rows run on up to `jobs` threads; output order follows the table.
inline ReproduceSummary reproduce(int table, const ReproduceOptions& opt = {},
                                  const std::function<void(const std::vector<ComparisonLine>&)>& on_row = {}) {
  const auto rows = reference_table(table);
  const SolverChoice solver = effective_solver(opt.solver);
  std::vector<std::vector<ComparisonLine>> results(rows.size());
  std::vector<std::string> errors(rows.size());
  std::atomic<std::size_t> next{0};
  std::mutex report;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < rows.size();) {
      try {
        results[i] = detail::reproduce_row(rows[i], opt, solver);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
      if (on_row) {
        std::lock_guard<std::mutex> lock(report);
        on_row(results[i]);
      }
    }
  };
  const int jobs = std::max(1, std::min<int>(opt.jobs, static_cast<int>(rows.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  ReproduceSummary s;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!errors[i].empty()) {
      ComparisonLine l;
      l.table = table;
      l.graph = rows[i].graph;
      l.quantity = "row";
      l.status = "mismatch";
      l.note = errors[i];
      results[i] = {l};
    }
    for (auto& l : results[i]) {
      if (l.status == "match") ++s.matches;
      if (l.status == "mismatch") ++s.mismatches;
      if (l.status == "misprint") ++s.misprints;
      if (l.status == "export-only") ++s.export_only;
      if (l.status == "inconsistent") ++s.inconsistent;
      if ((l.quantity == "R" || l.quantity == "C") && l.status == "match" && l.abs_diff) {
        s.max_decimal_deviation = std::max(s.max_decimal_deviation, *l.abs_diff);
      }
      s.lines.push_back(std::move(l));
    }
  }
  return s;
}

inline std::string reproduce_csv(const ReproduceSummary& s) {
  std::string out = "table,graph,quantity,printed,computed,abs_diff,status,note\n";
  auto opt = [](const std::optional<double>& v) { return v ? detail::format_g17(*v) : std::string(); };
  for (const auto& l : s.lines) {
    out += std::to_string(l.table) + "," + detail::csv_escape(l.graph) + "," + l.quantity + "," +
           detail::csv_escape(l.printed) + "," + opt(l.computed) + "," + opt(l.abs_diff) + "," + l.status + "," +
           detail::csv_escape(l.note) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Catalog listing

inline std::string list_graphs() {
  std::ostringstream out;
  for (const auto& e : catalog_entries()) {
    out << e.name << " (" << catalog_status(e) << ") n=" << e.graph.n() << " edges=" << e.graph.edges().size();
    if (!e.aliases.empty()) {
      out << " aliases:";
      for (const auto& a : e.aliases) out << " " << a;
    }
    out << "\n";
  }
  out << "N-gon (explicit-definition) cycle on N vertices; triangle..decagon, ennagon/nonagon accepted\n";
  out << "N-line (explicit-definition) path on N vertices\n";
  out << "N-line curly (explicit-definition) path with loops at both endpoints\n";
  return out.str();
}

}  // namespace belltasks
