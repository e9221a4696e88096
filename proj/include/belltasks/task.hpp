#pragma once

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "belltasks/error.hpp"
#include "belltasks/graph.hpp"
#include "belltasks/rational.hpp"

namespace belltasks {

enum class TaskKind { rendezvous, domination };
enum class StartRule { any, distinct };

inline std::string to_string(TaskKind k) { return k == TaskKind::rendezvous ? "rendezvous" : "domination"; }
inline std::string to_string(StartRule s) { return s == StartRule::any ? "any" : "distinct"; }

inline TaskKind parse_task_kind(const std::string& s) {
  if (s == "rendezvous") return TaskKind::rendezvous;
  if (s == "domination") return TaskKind::domination;
  throw Error(ErrorKind::invalid_parameter, "unknown task '" + s + "' (expected rendezvous|domination)");
}

inline StartRule parse_start_rule(const std::string& s) {
  if (s == "any") return StartRule::any;
  if (s == "distinct") return StartRule::distinct;
  throw Error(ErrorKind::invalid_parameter, "unknown start rule '" + s + "' (expected any|distinct)");
}

struct TaskSpec {
  TaskKind kind = TaskKind::rendezvous;
  int agents = 2;
  int steps = 1;
  StartRule start = StartRule::any;
  bool symmetric_only = false;

  void validate() const {
    if (agents < 2) throw Error(ErrorKind::invalid_parameter, "need at least 2 agents");
    if (steps < 1) throw Error(ErrorKind::invalid_parameter, "need at least 1 step");
  }

  friend bool operator==(const TaskSpec&, const TaskSpec&) = default;
};

/// Mixed-radix helper: index <-> digit tuple, most significant digit first.
inline std::size_t ipow(std::size_t base, int exp) {
  std::size_t out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

inline std::vector<int> decode_tuple(std::size_t index, int length, int radix) {
  std::vector<int> out(length);
  for (int i = length - 1; i >= 0; --i) {
    out[i] = static_cast<int>(index % radix);
    index /= radix;
  }
  return out;
}

inline std::size_t encode_tuple(const std::vector<int>& digits, int radix) {
  std::size_t index = 0;
  for (int d : digits) index = index * radix + d;
  return index;
}

/// An r-party game: every party receives a vertex as input and answers with one of
/// the outcomes allowed for that vertex. Coefficients are stored per input tuple,
/// indexed by the mixed-radix position of the outcome tuple.
struct BellGame {
  int r = 2;
  int n = 0;  // inputs per party (vertices)
  std::vector<std::vector<Vertex>> outcomes;      // outcomes[x]: allowed answers for input x
  std::vector<Rational> prior;                    // size n^r
  std::vector<std::vector<Rational>> coefficients;  // [input index][outcome-tuple index]
  Rational min_value = 0;
  Rational max_value = 0;
  TaskSpec spec;  // the task the game was built from (meaningful when built by build_game)

  std::size_t input_count() const { return ipow(n, r); }
  std::vector<int> inputs_of(std::size_t input_index) const { return decode_tuple(input_index, r, n); }

  int outcome_count(Vertex x) const { return static_cast<int>(outcomes[x].size()); }

  std::size_t outcome_tuple_count(const std::vector<int>& xs) const {
    std::size_t c = 1;
    for (int x : xs) c *= outcomes[x].size();
    return c;
  }

  /// Outcome positions (indices into outcomes[x_i]) of an outcome tuple.
  std::vector<int> outcome_positions(const std::vector<int>& xs, std::size_t index) const {
    std::vector<int> pos(r);
    for (int i = r - 1; i >= 0; --i) {
      const auto k = outcomes[xs[i]].size();
      pos[i] = static_cast<int>(index % k);
      index /= k;
    }
    return pos;
  }

  std::size_t outcome_index(const std::vector<int>& xs, const std::vector<int>& pos) const {
    std::size_t idx = 0;
    for (int i = 0; i < r; ++i) idx = idx * outcomes[xs[i]].size() + pos[i];
    return idx;
  }

  /// Position of vertex a in outcomes[x], or -1.
  int position_of(Vertex x, Vertex a) const {
    const auto& o = outcomes[x];
    auto it = std::lower_bound(o.begin(), o.end(), a);
    return (it != o.end() && *it == a) ? static_cast<int>(it - o.begin()) : -1;
  }

  int max_outcomes() const {
    int k = 0;
    for (const auto& o : outcomes) k = std::max(k, static_cast<int>(o.size()));
    return k;
  }

  /// True when swapping parties (with their inputs and outcomes) leaves coefficients unchanged.
  bool party_symmetric() const {
    for (std::size_t xi = 0; xi < input_count(); ++xi) {
      auto xs = inputs_of(xi);
      for (std::size_t ai = 0; ai < coefficients[xi].size(); ++ai) {
        auto pos = outcome_positions(xs, ai);
        for (int i = 0; i + 1 < r; ++i) {
          auto ys = xs;
          auto qs = pos;
          std::swap(ys[i], ys[i + 1]);
          std::swap(qs[i], qs[i + 1]);
          if (coefficients[encode_tuple(ys, n)][outcome_index(ys, qs)] != coefficients[xi][ai]) return false;
        }
      }
    }
    return true;
  }
};

/// Score of a final configuration: 1/0 for rendezvous, dominated-vertex count for domination.
inline Rational score(TaskKind kind, const Graph& g, const std::vector<Vertex>& positions) {
  if (kind == TaskKind::rendezvous) {
    return std::all_of(positions.begin(), positions.end(), [&](Vertex v) { return v == positions.front(); }) ? 1 : 0;
  }
  std::vector<char> dominated(g.n(), 0);
  for (Vertex p : positions)
    for (Vertex v : g.closed_neighborhood(p)) dominated[v] = 1;
  return std::accumulate(dominated.begin(), dominated.end(), 0);
}

/// Start distribution over input tuples (index layout as BellGame::prior).
inline std::vector<Rational> start_prior(const TaskSpec& spec, int n) {
  spec.validate();
  const int r = spec.agents;
  const std::size_t total = ipow(n, r);
  std::vector<Rational> prior(total, 0);
  if (spec.start == StartRule::any) {
    const Rational w(1, static_cast<long long>(total));
    std::fill(prior.begin(), prior.end(), w);
    return prior;
  }
  if (n < r) {
    throw Error(ErrorKind::infeasible_prior, "distinct starts need n >= r (n=" + std::to_string(n) +
                                                 ", r=" + std::to_string(r) + ")");
  }
  long long count = 1;
  for (int i = 0; i < r; ++i) count *= (n - i);
  const Rational w(1, count);
  for (std::size_t idx = 0; idx < total; ++idx) {
    auto xs = decode_tuple(idx, r, n);
    std::sort(xs.begin(), xs.end());
    if (std::adjacent_find(xs.begin(), xs.end()) == xs.end()) prior[idx] = w;
  }
  return prior;
}

/// Task -> game: movement on the h-step walk power, scoring on g itself.
inline BellGame build_game(const Graph& g, const TaskSpec& spec) {
  spec.validate();
  const Graph moves = walk_power(g, spec.steps);
  BellGame game;
  game.r = spec.agents;
  game.n = g.n();
  game.spec = spec;
  for (int x = 0; x < g.n(); ++x) game.outcomes.push_back(moves.allowed_moves(x));
  game.prior = start_prior(spec, g.n());

  bool first = true;
  game.coefficients.resize(game.input_count());
  for (std::size_t xi = 0; xi < game.input_count(); ++xi) {
    const auto xs = game.inputs_of(xi);
    const auto count = game.outcome_tuple_count(xs);
    auto& row = game.coefficients[xi];
    row.assign(count, 0);
    std::vector<Vertex> pos(game.r);
    for (std::size_t ai = 0; ai < count; ++ai) {
      const auto p = game.outcome_positions(xs, ai);
      for (int i = 0; i < game.r; ++i) pos[i] = game.outcomes[xs[i]][p[i]];
      const Rational s = score(spec.kind, g, pos);
      if (first || s < game.min_value) game.min_value = s;
      if (first || s > game.max_value) game.max_value = s;
      first = false;
      if (game.prior[xi] != 0) row[ai] = game.prior[xi] * s;
    }
  }
  return game;
}

/// Same game over the global alphabet 0..n-1: forbidden answers are kept but scored zero.
inline BellGame with_global_alphabet(const BellGame& game) {
  BellGame out = game;
  std::vector<Vertex> all(game.n);
  std::iota(all.begin(), all.end(), 0);
  out.outcomes.assign(game.n, all);
  for (std::size_t xi = 0; xi < game.input_count(); ++xi) {
    const auto xs = game.inputs_of(xi);
    auto& row = out.coefficients[xi];
    row.assign(out.outcome_tuple_count(xs), 0);
    for (std::size_t ai = 0; ai < game.coefficients[xi].size(); ++ai) {
      const auto p = game.outcome_positions(xs, ai);
      std::vector<int> q(game.r);
      for (int i = 0; i < game.r; ++i) q[i] = game.outcomes[xs[i]][p[i]];
      row[out.outcome_index(xs, q)] = game.coefficients[xi][ai];
    }
  }
  out.min_value = std::min(out.min_value, Rational(0));
  return out;
}

/// Joint conditional distribution: behavior[input index][outcome-tuple index].
using Behavior = std::vector<std::vector<double>>;

/// Expected score of a joint behavior (success probability for rendezvous).
inline double game_value(const BellGame& game, const Behavior& behavior) {
  if (behavior.size() != game.input_count()) {
    throw Error(ErrorKind::invalid_behavior, "behavior has wrong number of input tuples");
  }
  double total = 0.0;
  for (std::size_t xi = 0; xi < game.input_count(); ++xi) {
    const auto& row = behavior[xi];
    if (row.size() != game.coefficients[xi].size()) {
      throw Error(ErrorKind::invalid_behavior, "behavior row has wrong outcome count");
    }
    double sum = 0.0;
    for (std::size_t ai = 0; ai < row.size(); ++ai) {
      if (row[ai] < -1e-12) throw Error(ErrorKind::invalid_behavior, "negative probability");
      sum += row[ai];
      if (game.coefficients[xi][ai] != 0) total += to_double(game.coefficients[xi][ai]) * row[ai];
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw Error(ErrorKind::invalid_behavior, "behavior not normalized for input tuple " + std::to_string(xi));
    }
  }
  return total;
}

/// Product behavior of independent local strategies p[i][x][pos].
inline Behavior product_behavior(const BellGame& game, const std::vector<std::vector<std::vector<double>>>& local) {
  Behavior b(game.input_count());
  for (std::size_t xi = 0; xi < game.input_count(); ++xi) {
    const auto xs = game.inputs_of(xi);
    b[xi].resize(game.outcome_tuple_count(xs));
    for (std::size_t ai = 0; ai < b[xi].size(); ++ai) {
      const auto pos = game.outcome_positions(xs, ai);
      double p = 1.0;
      for (int i = 0; i < game.r; ++i) p *= local[i][xs[i]][pos[i]];
      b[xi][ai] = p;
    }
  }
  return b;
}

inline nlohmann::json game_to_json(const BellGame& game) {
  using nlohmann::json;
  auto num_den = [](const Rational& q, json& row) {
    row["numerator"] = boost::multiprecision::numerator(q).str();
    row["denominator"] = boost::multiprecision::denominator(q).str();
  };
  json j;
  j["r"] = game.r;
  j["n"] = game.n;
  j["outcomes"] = game.outcomes;
  j["prior"] = json::array();
  j["coefficients"] = json::array();
  for (std::size_t xi = 0; xi < game.input_count(); ++xi) {
    const auto xs = game.inputs_of(xi);
    if (game.prior[xi] != 0) {
      json row;
      row["inputs"] = xs;
      num_den(game.prior[xi], row);
      j["prior"].push_back(row);
    }
    for (std::size_t ai = 0; ai < game.coefficients[xi].size(); ++ai) {
      if (game.coefficients[xi][ai] == 0) continue;
      const auto pos = game.outcome_positions(xs, ai);
      std::vector<Vertex> as(game.r);
      for (int i = 0; i < game.r; ++i) as[i] = game.outcomes[xs[i]][pos[i]];
      json row;
      row["inputs"] = xs;
      row["outcomes"] = as;
      num_den(game.coefficients[xi][ai], row);
      j["coefficients"].push_back(row);
    }
  }
  return j;
}

}  // namespace belltasks
