// belltasks: command-line front end for the rendezvous/domination Bell games.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "belltasks/run.hpp"

namespace {

using namespace belltasks;

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  detail::write_text(path, text);
}

std::string format_record(const ResultRecord& r, const std::string& format) {
  if (format == "json") return to_json(r).dump(2) + "\n";
  if (format == "csv") return csv_header() + "\n" + to_csv_row(r) + "\n";
  return to_table(r);
}

int cmd_verify_catalog() {
  bool all_ok = true;
  for (const auto& e : catalog_entries()) {
    const auto report = verify_catalog_entry(e);
    std::cout << e.name << ": " << catalog_status(e) << " (" << report.checks.size() << " checks)\n";
    for (const auto& c : report.checks) {
      if (c.match && !c.misprint) continue;
      std::cout << "  table " << c.table << " " << c.column << " printed " << c.printed << " computed "
                << to_fraction_string(c.computed) << (c.misprint ? " [known misprint]" : " [MISMATCH]") << "\n";
    }
    if (!report.ok()) all_ok = false;
  }
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum and classical values of rendezvous and domination games on graphs"};
  app.require_subcommand(1);

  EvalOptions eval;
  std::string eval_out, eval_format = "json";
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate R, C, see-saw and NPA for one task");
  eval_cmd->add_option("--graph", eval.graph, "Catalog name or graph file")->required();
  eval_cmd->add_option("--task", eval.task, "rendezvous|domination")
      ->check(CLI::IsMember({"rendezvous", "domination"}));
  eval_cmd->add_option("--agents", eval.agents, "Number of agents (2 or 3)")->check(CLI::IsMember({2, 3}));
  eval_cmd->add_option("--start", eval.start, "any|distinct")->check(CLI::IsMember({"any", "distinct"}));
  eval_cmd->add_option("--steps", eval.steps, "Moves per agent")->check(CLI::PositiveNumber);
  eval_cmd->add_flag("--symmetric", eval.symmetric, "Restrict to symmetric strategies");
  eval_cmd->add_option("--npa-level", eval.npa_level, "1|1+ab|2")->check(CLI::IsMember({"1", "1+ab", "2"}));
  eval_cmd->add_option("--seesaw-dim", eval.seesaw_dim, "Local dimension (default: vertex count)")
      ->check(CLI::NonNegativeNumber);
  eval_cmd->add_option("--restarts", eval.restarts, "See-saw restarts")->check(CLI::PositiveNumber);
  eval_cmd->add_option("--seed", eval.seed, "RNG seed");
  eval_cmd->add_option("--export-sdpa", eval.export_sdpa, "Write the NPA relaxation as SDPA sparse text");
  eval_cmd->add_flag("--export-sdpa-only,--export-only", eval.export_only, "Export only; skip NPA and see-saw solves");
  eval_cmd->add_option("--solver", eval.solver, "embedded|external (BELLTASKS_SOLVER overrides)")
      ->check(CLI::IsMember({"embedded", "external"}));
  eval_cmd->add_option("--out", eval_out, "Output file (default stdout)");
  eval_cmd->add_option("--format", eval_format, "json|csv|table")->check(CLI::IsMember({"json", "csv", "table"}));
  eval_cmd->add_option("--jobs", eval.jobs, "See-saw worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
  eval_cmd->add_flag("--allow-unverified", eval.allow_unverified, "Use catalog entries that failed verification");
  eval_cmd->add_flag("--no-seesaw", eval.skip_seesaw, "Skip the see-saw search");
  eval_cmd->add_flag("--no-npa", eval.skip_npa, "Skip the NPA bound");

  int table = 0;
  std::string repro_out;
  ReproduceOptions repro;
  auto* repro_cmd = app.add_subcommand("reproduce", "Recompute a reference table and compare");
  repro_cmd->add_option("table,--table", table, "Table id 1..5")->required()->check(CLI::Range(1, 5));
  repro_cmd->add_option("--out", repro_out, "Comparison CSV (default stdout)");
  repro_cmd->add_option("--solver", repro.solver, "embedded|external")->check(CLI::IsMember({"embedded", "external"}));
  repro_cmd->add_option("--jobs", repro.jobs, "Rows in parallel")->check(CLI::PositiveNumber);
  repro_cmd->add_option("--export-dir", repro.export_dir, "Directory for .dat-s files of unsolved rows");

  auto* list_cmd = app.add_subcommand("list-graphs", "List catalog graphs with provenance");

  EvalOptions dump;
  auto* dump_cmd = app.add_subcommand("dump-game", "Print the game coefficients as JSON");
  dump_cmd->add_option("--graph", dump.graph, "Catalog name or graph file")->required();
  dump_cmd->add_option("--task", dump.task, "rendezvous|domination")->check(CLI::IsMember({"rendezvous", "domination"}));
  dump_cmd->add_option("--agents", dump.agents, "Number of agents")->check(CLI::IsMember({2, 3}));
  dump_cmd->add_option("--start", dump.start, "any|distinct")->check(CLI::IsMember({"any", "distinct"}));
  dump_cmd->add_option("--steps", dump.steps, "Moves per agent")->check(CLI::PositiveNumber);
  dump_cmd->add_flag("--allow-unverified", dump.allow_unverified, "Use unverified catalog entries");

  auto* verify_cmd = app.add_subcommand("verify-catalog", "Check figure-derived graphs against the tables");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*eval_cmd) {
      const auto rec = run_eval(eval);
      emit(format_record(rec, eval_format), eval_out);
      if (!eval_out.empty() && eval_format != "table") std::cerr << to_table(rec);
      for (const auto& v : rec.violations) std::cerr << "warning: ordering violated: " << v << "\n";
      return exit_code_for(rec);
    }
    if (*repro_cmd) {
      const auto summary = reproduce(table, repro, [](const std::vector<ComparisonLine>& lines) {
        if (!lines.empty()) std::cerr << "done: " << lines.front().graph << "\n";
      });
      emit(reproduce_csv(summary), repro_out);
      std::fprintf(stderr,
                   "table %d: %d match, %d mismatch, %d misprint, %d export-only, %d inconsistent rows; "
                   "max decimal deviation %.2g\n",
                   table, summary.matches, summary.mismatches, summary.misprints, summary.export_only,
                   summary.inconsistent, summary.max_decimal_deviation);
      return summary.mismatches == 0 ? 0 : 1;
    }
    if (*list_cmd) {
      std::cout << list_graphs();
      return 0;
    }
    if (*dump_cmd) {
      const auto game = build_game(resolve_graph(dump.graph, dump.allow_unverified), task_from(dump));
      std::cout << game_to_json(game).dump(2) << "\n";
      return 0;
    }
    if (*verify_cmd) return cmd_verify_catalog();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
