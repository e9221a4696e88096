#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "belltasks/error.hpp"
#include "belltasks/rational.hpp"
#include "belltasks/task.hpp"

namespace belltasks {

/// One chosen vertex per input vertex.
struct DeterministicStrategy {
  std::vector<Vertex> move;

  friend bool operator==(const DeterministicStrategy&, const DeterministicStrategy&) = default;
};

/// p[x][j] is the probability of answering outcomes[x][j] on input x.
struct StochasticStrategy {
  std::vector<std::vector<Rational>> p;

  static StochasticStrategy uniform(const BellGame& game) {
    StochasticStrategy s;
    for (int x = 0; x < game.n; ++x) s.p.emplace_back(game.outcome_count(x), Rational(1, game.outcome_count(x)));
    return s;
  }

  static StochasticStrategy from(const BellGame& game, const DeterministicStrategy& d) {
    if (static_cast<int>(d.move.size()) != game.n) {
      throw Error(ErrorKind::strategy_mismatch, "strategy covers " + std::to_string(d.move.size()) +
                                                    " inputs, game has " + std::to_string(game.n));
    }
    StochasticStrategy s;
    for (int x = 0; x < game.n; ++x) {
      const int pos = game.position_of(x, d.move[x]);
      if (pos < 0) {
        throw Error(ErrorKind::strategy_mismatch, "move " + std::to_string(x) + "->" + std::to_string(d.move[x]) +
                                                      " is not allowed");
      }
      s.p.emplace_back(game.outcome_count(x), Rational(0));
      s.p.back()[pos] = 1;
    }
    return s;
  }

  bool is_deterministic() const {
    return std::all_of(p.begin(), p.end(), [](const auto& row) {
      return std::all_of(row.begin(), row.end(), [](const Rational& q) { return q == 0 || q == 1; });
    });
  }

  /// Defined only for deterministic strategies.
  DeterministicStrategy to_deterministic(const BellGame& game) const {
    DeterministicStrategy d;
    for (int x = 0; x < game.n; ++x) {
      auto it = std::find(p[x].begin(), p[x].end(), Rational(1));
      if (it == p[x].end()) throw Error(ErrorKind::strategy_mismatch, "strategy is not deterministic");
      d.move.push_back(game.outcomes[x][it - p[x].begin()]);
    }
    return d;
  }

  /// Probability of ending at vertex a when the start is uniform: (1/n) sum_x p(a|x).
  Rational marginal(const BellGame& game, Vertex a) const {
    Rational sum = 0;
    for (int x = 0; x < game.n; ++x)
      if (int pos = game.position_of(x, a); pos >= 0) sum += p[x][pos];
    return sum / game.n;
  }

  friend bool operator==(const StochasticStrategy&, const StochasticStrategy&) = default;
};

using Strategies = std::vector<StochasticStrategy>;

inline void validate_strategy(const BellGame& game, const StochasticStrategy& s) {
  if (static_cast<int>(s.p.size()) != game.n) throw Error(ErrorKind::strategy_mismatch, "wrong number of inputs");
  for (int x = 0; x < game.n; ++x) {
    if (static_cast<int>(s.p[x].size()) != game.outcome_count(x)) {
      throw Error(ErrorKind::strategy_mismatch, "wrong outcome count at input " + std::to_string(x));
    }
    Rational sum = 0;
    for (const auto& q : s.p[x]) {
      if (q < 0) throw Error(ErrorKind::strategy_mismatch, "negative probability at input " + std::to_string(x));
      sum += q;
    }
    if (sum != 1) throw Error(ErrorKind::strategy_mismatch, "probabilities at input " + std::to_string(x) + " do not sum to 1");
  }
}

/// Exact expected score of independent local strategies (one per agent).
inline Rational evaluate(const BellGame& game, const Strategies& strategies) {
  if (static_cast<int>(strategies.size()) != game.r) {
    throw Error(ErrorKind::strategy_mismatch, "need one strategy per agent");
  }
  for (const auto& s : strategies) validate_strategy(game, s);
  Rational total = 0;
  for (std::size_t xi = 0; xi < game.input_count(); ++xi) {
    if (game.prior[xi] == 0 && std::all_of(game.coefficients[xi].begin(), game.coefficients[xi].end(),
                                           [](const Rational& c) { return c == 0; })) {
      continue;
    }
    const auto xs = game.inputs_of(xi);
    for (std::size_t ai = 0; ai < game.coefficients[xi].size(); ++ai) {
      const Rational& c = game.coefficients[xi][ai];
      if (c == 0) continue;
      const auto pos = game.outcome_positions(xs, ai);
      Rational w = c;
      for (int i = 0; i < game.r && w != 0; ++i) w *= strategies[i].p[xs[i]][pos[i]];
      total += w;
    }
  }
  return total;
}

/// sum_a prod_i p_i(a): the success probability of rendezvous with uniform independent starts.
inline Rational rendezvous_closed_form(const BellGame& game, const Strategies& strategies) {
  Rational total = 0;
  for (Vertex a = 0; a < game.n; ++a) {
    Rational prod = 1;
    for (const auto& s : strategies) prod *= s.marginal(game, a);
    total += prod;
  }
  return total;
}

inline Rational random_value(const BellGame& game) {
  return evaluate(game, Strategies(game.r, StochasticStrategy::uniform(game)));
}

struct ClassicalOptimum {
  Rational value;
  std::vector<DeterministicStrategy> strategies;
  bool symmetric_search = false;
  std::uint64_t nodes = 0;  // search nodes visited
};

inline constexpr std::uint64_t kDefaultClassicalBudget = 1'000'000'000ULL;

namespace detail {

/// Coefficients scaled to a common denominator, as 64-bit integers.
struct IntegerGame {
  std::vector<std::vector<std::int64_t>> w;
  Rational scale;  // true coefficient = w / scale

  explicit IntegerGame(const BellGame& game) {
    BigInt den = 1;
    for (const auto& row : game.coefficients)
      for (const auto& c : row) den = lcm(den, boost::multiprecision::denominator(c));
    scale = Rational(den);
    w.resize(game.coefficients.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
      for (const auto& c : game.coefficients[i]) {
        w[i].push_back(to_int64_checked(boost::multiprecision::numerator(c) * (den / boost::multiprecision::denominator(c))));
      }
    }
  }
};

/// Depth-first search over deterministic strategies with an optimistic completion bound.
/// Enumerated agents choose an outcome position per input (-1 = undecided); in symmetric
/// mode one choice vector is shared by all agents, otherwise the last agent best-responds.
class OptimumSearch {
 public:
  OptimumSearch(const BellGame& game, bool symmetric)
      : game_(game), ints_(game), symmetric_(symmetric), free_agents_(symmetric ? 1 : game.r - 1) {
    choice_.assign(free_agents_, std::vector<int>(game.n, -1));
    for (std::size_t xi = 0; xi < game.input_count(); ++xi) {
      inputs_.push_back(game.inputs_of(xi));
      auto& rows = positions_.emplace_back();
      for (std::size_t ai = 0; ai < game.coefficients[xi].size(); ++ai) rows.push_back(game.outcome_positions(inputs_.back(), ai));
    }
  }

  ClassicalOptimum run() {
    best_ = std::numeric_limits<std::int64_t>::min();
    dfs(0);
    ClassicalOptimum out;
    out.value = Rational(best_) / ints_.scale;
    out.symmetric_search = symmetric_;
    out.nodes = nodes_;
    if (symmetric_) {
      out.strategies.assign(game_.r, to_strategy(best_choice_[0]));
    } else {
      for (const auto& c : best_choice_) out.strategies.push_back(to_strategy(c));
      out.strategies.push_back(to_strategy(best_response(best_choice_)));
    }
    return out;
  }

 private:
  DeterministicStrategy to_strategy(const std::vector<int>& c) const {
    DeterministicStrategy d;
    for (int x = 0; x < game_.n; ++x) d.move.push_back(game_.outcomes[x][c[x]]);
    return d;
  }

  int agent_choice(const std::vector<std::vector<int>>& c, int agent, int x) const {
    return c[symmetric_ ? 0 : agent][x];
  }

  // Max over outcome tuples consistent with current choices, for the enumerated parties;
  // the last party (best responder, when not symmetric) is fixed to `last_pos` if >= 0.
  std::int64_t best_entry(std::size_t xi, int last_pos) const {
    const auto& xs = inputs_[xi];
    const auto& row = ints_.w[xi];
    std::int64_t best = std::numeric_limits<std::int64_t>::min();
    for (std::size_t ai = 0; ai < row.size(); ++ai) {
      const auto& pos = positions_[xi][ai];
      bool ok = true;
      for (int i = 0; i < game_.r && ok; ++i) {
        if (!symmetric_ && i == game_.r - 1) {
          ok = last_pos < 0 || pos[i] == last_pos;
        } else {
          const int c = agent_choice(choice_, i, xs[i]);
          ok = c < 0 || pos[i] == c;
        }
      }
      if (ok) best = std::max(best, row[ai]);
    }
    return best;
  }

  // Upper bound (exact value at a leaf) of the current partial assignment.
  std::int64_t bound() const {
    std::int64_t total = 0;
    if (symmetric_) {
      for (std::size_t xi = 0; xi < inputs_.size(); ++xi) total += best_entry(xi, -1);
      return total;
    }
    // Group input tuples by the best responder's input.
    const int last = game_.r - 1;
    std::vector<std::vector<std::int64_t>> gain(game_.n);
    for (int y = 0; y < game_.n; ++y) gain[y].assign(game_.outcome_count(y), 0);
    for (std::size_t xi = 0; xi < inputs_.size(); ++xi) {
      const int y = inputs_[xi][last];
      for (int b = 0; b < game_.outcome_count(y); ++b) gain[y][b] += best_entry(xi, b);
    }
    for (int y = 0; y < game_.n; ++y) total += *std::max_element(gain[y].begin(), gain[y].end());
    return total;
  }

  std::vector<int> best_response(const std::vector<std::vector<int>>& c) {
    const auto saved = choice_;
    choice_ = c;
    const int last = game_.r - 1;
    std::vector<int> out(game_.n, 0);
    for (int y = 0; y < game_.n; ++y) {
      std::int64_t best = std::numeric_limits<std::int64_t>::min();
      for (int b = 0; b < game_.outcome_count(y); ++b) {
        std::int64_t g = 0;
        for (std::size_t xi = 0; xi < inputs_.size(); ++xi)
          if (inputs_[xi][last] == y) g += best_entry(xi, b);
        if (g > best) {
          best = g;
          out[y] = b;
        }
      }
    }
    choice_ = saved;
    return out;
  }

  void dfs(int depth) {
    ++nodes_;
    const int total_depth = free_agents_ * game_.n;
    const std::int64_t b = bound();
    if (depth == total_depth) {
      if (b > best_) {
        best_ = b;
        best_choice_ = choice_;
      }
      return;
    }
    if (b <= best_) return;
    const int agent = depth / game_.n;
    const int x = depth % game_.n;
    for (int pos = 0; pos < game_.outcome_count(x); ++pos) {
      choice_[agent][x] = pos;
      dfs(depth + 1);
    }
    choice_[agent][x] = -1;
  }

  const BellGame& game_;
  IntegerGame ints_;
  bool symmetric_;
  int free_agents_;
  std::vector<std::vector<int>> inputs_;
  std::vector<std::vector<std::vector<int>>> positions_;
  std::vector<std::vector<int>> choice_;
  std::vector<std::vector<int>> best_choice_;
  std::int64_t best_ = 0;
  std::uint64_t nodes_ = 0;
};

}  // namespace detail

/// True when the game is rendezvous with uniform independent starts, the setting
/// in which symmetric deterministic strategies are provably optimal.
inline bool symmetric_reduction_applies(const BellGame& game) {
  return game.spec.kind == TaskKind::rendezvous && game.spec.start == StartRule::any;
}

/// Exact optimum over deterministic strategy tuples, with a witness.
inline ClassicalOptimum classical_optimum(const BellGame& game, bool symmetric_only,
                                          std::uint64_t budget = kDefaultClassicalBudget) {
  const bool symmetric = symmetric_only || symmetric_reduction_applies(game);
  const int free_agents = symmetric ? 1 : game.r - 1;
  long double space = 1;
  for (int a = 0; a < free_agents; ++a)
    for (int x = 0; x < game.n; ++x) space *= game.outcome_count(x);
  if (space > static_cast<long double>(budget)) {
    throw Error(ErrorKind::too_large,
                "classical search space ~" + std::to_string(static_cast<double>(space)) + " exceeds budget " +
                    std::to_string(budget) + "; try --symmetric or the best-response heuristic (lower bound only)");
  }
  return detail::OptimumSearch(game, symmetric).run();
}

inline bool is_symmetric_strategies(const Strategies& s) {
  return std::all_of(s.begin(), s.end(), [&](const StochasticStrategy& t) { return t == s.front(); });
}

/// r copies of the member strategy with the largest sum_a p_i(a)^r.
inline Strategies symmetrize(const BellGame& game, const Strategies& strategies) {
  if (!symmetric_reduction_applies(game)) {
    throw Error(ErrorKind::unsupported_prior, "symmetrize needs rendezvous with any-start prior");
  }
  std::size_t best_index = 0;
  Rational best = -1;
  for (std::size_t i = 0; i < strategies.size(); ++i) {
    Rational v = 0;
    for (Vertex a = 0; a < game.n; ++a) {
      Rational m = strategies[i].marginal(game, a), pw = 1;
      for (int k = 0; k < game.r; ++k) pw *= m;
      v += pw;
    }
    if (v > best) {
      best = v;
      best_index = i;
    }
  }
  return Strategies(game.r, strategies[best_index]);
}

/// Moves mass between two supported answers of one input towards the answer with the
/// larger marginal, until the strategy is deterministic.
inline DeterministicStrategy derandomize(const BellGame& game, StochasticStrategy s) {
  if (!symmetric_reduction_applies(game)) {
    throw Error(ErrorKind::unsupported_prior, "derandomize needs rendezvous with any-start prior");
  }
  validate_strategy(game, s);
  for (;;) {
    int x0 = -1;
    for (int x = 0; x < game.n && x0 < 0; ++x) {
      if (std::count_if(s.p[x].begin(), s.p[x].end(), [](const Rational& q) { return q > 0; }) >= 2) x0 = x;
    }
    if (x0 < 0) break;
    int keep = -1, drop = -1;
    Rational keep_marginal = -1;
    for (int j = 0; j < game.outcome_count(x0); ++j) {
      if (s.p[x0][j] <= 0) continue;
      Rational m = s.marginal(game, game.outcomes[x0][j]);
      if (m > keep_marginal) {
        keep_marginal = m;
        keep = j;
      }
    }
    for (int j = 0; j < game.outcome_count(x0) && drop < 0; ++j)
      if (j != keep && s.p[x0][j] > 0) drop = j;
    s.p[x0][keep] += s.p[x0][drop];
    s.p[x0][drop] = 0;
  }
  return s.to_deterministic(game);
}

/// Per-input best response of one agent to the others' strategies; ties go to the lowest vertex.
inline StochasticStrategy best_response(const BellGame& game, const Strategies& strategies, int agent) {
  std::vector<std::vector<Rational>> gain(game.n);
  for (int x = 0; x < game.n; ++x) gain[x].assign(game.outcome_count(x), 0);
  for (std::size_t xi = 0; xi < game.input_count(); ++xi) {
    const auto xs = game.inputs_of(xi);
    for (std::size_t ai = 0; ai < game.coefficients[xi].size(); ++ai) {
      const Rational& c = game.coefficients[xi][ai];
      if (c == 0) continue;
      const auto pos = game.outcome_positions(xs, ai);
      Rational w = c;
      for (int j = 0; j < game.r && w != 0; ++j)
        if (j != agent) w *= strategies[j].p[xs[j]][pos[j]];
      gain[xs[agent]][pos[agent]] += w;
    }
  }
  StochasticStrategy out;
  for (int x = 0; x < game.n; ++x) {
    const auto best = std::max_element(gain[x].begin(), gain[x].end()) - gain[x].begin();
    out.p.emplace_back(game.outcome_count(x), Rational(0));
    out.p.back()[best] = 1;
  }
  return out;
}

struct ImprovementTrace {
  Strategies strategies;
  std::vector<Rational> values;  // value after each accepted replacement, starting with the initial value
};

/// Round-robin deterministic best responses until a full round changes nothing.
inline ImprovementTrace best_response_improve(const BellGame& game, Strategies init) {
  ImprovementTrace t;
  t.strategies = std::move(init);
  Rational current = evaluate(game, t.strategies);
  t.values.push_back(current);
  for (bool changed = true; changed;) {
    changed = false;
    for (int i = 0; i < game.r; ++i) {
      auto candidate = t.strategies;
      candidate[i] = best_response(game, t.strategies, i);
      const Rational v = evaluate(game, candidate);
      if (v > current || !t.strategies[i].is_deterministic()) {
        changed = true;
        t.strategies = std::move(candidate);
        current = v;
        t.values.push_back(current);
      }
    }
  }
  return t;
}

inline nlohmann::json strategy_to_json(const BellGame& game, const StochasticStrategy& s) {
  nlohmann::json rows = nlohmann::json::array();
  if (s.is_deterministic()) {
    const auto d = s.to_deterministic(game);
    for (int x = 0; x < game.n; ++x) rows.push_back({x, d.move[x]});
    return rows;
  }
  for (int x = 0; x < game.n; ++x)
    for (int j = 0; j < game.outcome_count(x); ++j)
      if (s.p[x][j] != 0) rows.push_back({{"input", x}, {"output", game.outcomes[x][j]}, {"p", to_fraction_string(s.p[x][j])}});
  return rows;
}

}  // namespace belltasks
