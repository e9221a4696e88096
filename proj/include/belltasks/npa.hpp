#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "belltasks/error.hpp"
#include "belltasks/rational.hpp"
#include "belltasks/sdp.hpp"
#include "belltasks/task.hpp"

namespace belltasks {

/// Projector for answer `outcome` (position in outcomes[input]) of `party` on `input`.
/// The last answer of every input never appears as a letter: it is 1 minus the others.
struct Letter {
  int party = 0;
  int input = 0;
  int outcome = 0;

  friend auto operator<=>(const Letter&, const Letter&) = default;
};

using Word = std::vector<Letter>;

/// A word in canonical form: letters grouped by party (parties commute), no letter
/// directly repeated (projectors are idempotent), no orthogonal neighbours.
struct Monomial {
  Word word;

  bool empty() const { return word.empty(); }
  friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

enum class NpaLevel { one, one_ab, two };

inline std::string to_string(NpaLevel l) {
  switch (l) {
    case NpaLevel::one: return "1";
    case NpaLevel::one_ab: return "1+ab";
    case NpaLevel::two: return "2";
  }
  return "?";
}

inline NpaLevel parse_npa_level(const std::string& s) {
  if (s == "1") return NpaLevel::one;
  if (s == "1+ab" || s == "almost-quantum") return NpaLevel::one_ab;
  if (s == "2") return NpaLevel::two;
  throw Error(ErrorKind::invalid_parameter, "unknown NPA level '" + s + "' (expected 1, 1+ab, 2)");
}

/// Returns nullopt when the word is zero (two orthogonal projectors meet).
inline std::optional<Monomial> canonicalize(Word word) {
  std::stable_sort(word.begin(), word.end(), [](const Letter& a, const Letter& b) { return a.party < b.party; });
  Word out;
  out.reserve(word.size());
  for (const Letter& l : word) {
    if (!out.empty() && out.back().party == l.party && out.back().input == l.input) {
      if (out.back().outcome == l.outcome) continue;
      return std::nullopt;
    }
    out.push_back(l);
  }
  return Monomial{std::move(out)};
}

/// Reverses every party's sub-word: the canonical form of the adjoint.
inline Word adjoint(const Word& w) {
  Word out = w;
  auto begin = out.begin();
  while (begin != out.end()) {
    auto end = std::find_if(begin, out.end(), [&](const Letter& l) { return l.party != begin->party; });
    std::reverse(begin, end);
    begin = end;
  }
  return out;
}

namespace detail {

/// Key under which a moment is stored. Moments are real, so a word and its adjoint share a
/// variable; with `party_symmetric` all relabelings of the parties share one as well.
inline Word moment_key(const Word& w, int parties, bool party_symmetric) {
  Word best = std::min(w, adjoint(w));
  if (!party_symmetric) return best;
  std::vector<int> perm(parties);
  for (int i = 0; i < parties; ++i) perm[i] = i;
  while (std::next_permutation(perm.begin(), perm.end())) {
    Word relabeled = w;
    for (auto& l : relabeled) l.party = perm[l.party];
    auto m = canonicalize(relabeled);
    best = std::min({best, m->word, adjoint(m->word)});
  }
  return best;
}

}  // namespace detail

inline std::vector<Letter> party_letters(const BellGame& game, int party) {
  std::vector<Letter> out;
  for (int x = 0; x < game.n; ++x)
    for (int a = 0; a + 1 < game.outcome_count(x); ++a) out.push_back({party, x, a});
  return out;
}

/// Monomials indexing the moment matrix at the requested level.
inline std::vector<Monomial> generating_set(const BellGame& game, NpaLevel level) {
  std::vector<std::vector<Letter>> letters;
  for (int i = 0; i < game.r; ++i) letters.push_back(party_letters(game, i));
  std::vector<Monomial> out{Monomial{}};
  for (const auto& party : letters)
    for (const auto& l : party) out.push_back(Monomial{{l}});

  if (level == NpaLevel::one_ab) {
    // Products with at most one letter per party, from at least two parties.
    std::vector<Word> partial{Word{}};
    for (int i = 0; i < game.r; ++i) {
      std::vector<Word> next;
      for (const auto& w : partial) {
        next.push_back(w);
        for (const auto& l : letters[i]) {
          Word e = w;
          e.push_back(l);
          next.push_back(std::move(e));
        }
      }
      partial = std::move(next);
    }
    for (auto& w : partial)
      if (w.size() >= 2) out.push_back(Monomial{std::move(w)});
  } else if (level == NpaLevel::two) {
    std::vector<Letter> all;
    for (const auto& party : letters) all.insert(all.end(), party.begin(), party.end());
    std::vector<Monomial> seen(out.begin(), out.end());
    std::sort(seen.begin(), seen.end());
    for (const auto& a : all) {
      for (const auto& b : all) {
        auto m = canonicalize({a, b});
        if (!m || m->word.size() != 2) continue;
        auto it = std::lower_bound(seen.begin(), seen.end(), *m);
        if (it != seen.end() && *it == *m) continue;
        seen.insert(it, *m);
        out.push_back(*m);
      }
    }
  }
  return out;
}

/// Moment matrix over a generating set with entries identified by canonical form.
struct MomentRelaxation {
  NpaLevel level = NpaLevel::one_ab;
  bool party_symmetric = false;
  std::vector<Monomial> monomials;
  std::map<Word, int> variable_ids;        // moment key -> id; id 0 is the empty word
  std::vector<std::vector<int>> entry_ids;  // [u][v] -> id, or -1 for a zero entry
  std::vector<double> objective;            // coefficient per id (id 0 folded into constant)
  double constant = 0.0;

  int variable_count() const { return static_cast<int>(variable_ids.size()); }

  /// Moment matrix for a vector of SDP variables (ids 1..m map to x[0..m-1]).
  Eigen::MatrixXd moment_matrix(const std::vector<double>& x) const {
    const auto n = static_cast<Eigen::Index>(monomials.size());
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index u = 0; u < n; ++u)
      for (Eigen::Index v = 0; v < n; ++v) {
        const int id = entry_ids[u][v];
        if (id == 0) g(u, v) = 1.0;
        else if (id > 0) g(u, v) = x[id - 1];
      }
    return g;
  }
};

struct NpaProgram {
  MomentRelaxation relaxation;
  SdpProblem sdp;
};

inline constexpr int kLevelTwoLetterLimit = 40;

inline NpaProgram build_relaxation(const BellGame& game, NpaLevel level, bool party_symmetric = false) {
  if (party_symmetric && !game.party_symmetric()) {
    throw Error(ErrorKind::invalid_parameter, "party-symmetric relaxation needs a party-symmetric game");
  }
  const auto letters = party_letters(game, 0).size();
  if (level == NpaLevel::two && letters > static_cast<std::size_t>(kLevelTwoLetterLimit)) {
    throw Error(ErrorKind::too_large, "level 2 with " + std::to_string(letters) + " letters per party exceeds " +
                                          std::to_string(kLevelTwoLetterLimit) + "; use export-only mode");
  }
  NpaProgram out;
  auto& rel = out.relaxation;
  rel.level = level;
  rel.party_symmetric = party_symmetric;
  rel.monomials = generating_set(game, level);
  rel.variable_ids[Word{}] = 0;

  auto id_of = [&](const Word& key) {
    auto [it, inserted] = rel.variable_ids.try_emplace(key, static_cast<int>(rel.variable_ids.size()));
    return it->second;
  };

  const std::size_t n = rel.monomials.size();
  rel.entry_ids.assign(n, std::vector<int>(n, -1));
  for (std::size_t u = 0; u < n; ++u) {
    const Word left = adjoint(rel.monomials[u].word);
    for (std::size_t v = u; v < n; ++v) {
      Word w = left;
      w.insert(w.end(), rel.monomials[v].word.begin(), rel.monomials[v].word.end());
      auto m = canonicalize(std::move(w));
      const int id = m ? id_of(detail::moment_key(m->word, game.r, party_symmetric)) : -1;
      rel.entry_ids[u][v] = rel.entry_ids[v][u] = id;
    }
  }

  // Objective: expand every eliminated answer through completeness, 1 - sum of the others.
  rel.objective.assign(rel.variable_ids.size(), 0.0);
  for (std::size_t xi = 0; xi < game.input_count(); ++xi) {
    const auto xs = game.inputs_of(xi);
    for (std::size_t ai = 0; ai < game.coefficients[xi].size(); ++ai) {
      const Rational& c = game.coefficients[xi][ai];
      if (c == 0) continue;
      const auto pos = game.outcome_positions(xs, ai);
      std::vector<std::pair<double, Word>> terms{{to_double(c), Word{}}};
      for (int i = 0; i < game.r; ++i) {
        const int k = game.outcome_count(xs[i]);
        std::vector<std::pair<double, Word>> next;
        for (auto& [coef, w] : terms) {
          if (pos[i] + 1 < k) {
            Word e = w;
            e.push_back({i, xs[i], pos[i]});
            next.emplace_back(coef, std::move(e));
          } else {
            next.emplace_back(coef, w);
            for (int a = 0; a + 1 < k; ++a) {
              Word e = w;
              e.push_back({i, xs[i], a});
              next.emplace_back(-coef, std::move(e));
            }
          }
        }
        terms = std::move(next);
      }
      for (const auto& [coef, w] : terms) {
        const Word key = detail::moment_key(canonicalize(w)->word, game.r, party_symmetric);
        auto it = rel.variable_ids.find(key);
        if (it == rel.variable_ids.end()) {
          throw Error(ErrorKind::invalid_parameter, "level " + to_string(level) + " does not contain the " +
                                                        std::to_string(game.r) + "-party correlators; use a higher level");
        }
        rel.objective[it->second] += coef;
      }
    }
  }
  rel.constant = rel.objective[0];

  auto& sdp = out.sdp;
  sdp.m = rel.variable_count() - 1;
  sdp.block_sizes = {static_cast<int>(n)};
  sdp.c.assign(rel.objective.begin() + 1, rel.objective.end());
  sdp.matrices.assign(sdp.m + 1, {});
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u; v < n; ++v)
      if (const int id = rel.entry_ids[u][v]; id >= 0) {
        sdp.matrices[id].push_back({0, static_cast<int>(u), static_cast<int>(v), 1.0});
      }
  return out;
}

struct NpaBound {
  double value = 0.0;      // upper bound on the quantum value
  double primal = 0.0;     // value of the moment assignment found
  double gap = 0.0;
  bool certified = false;  // value comes from the dual side
  SdpStatus status = SdpStatus::failed;
};

inline NpaBound bound_from_solution(const MomentRelaxation& rel, const SdpSolution& sol) {
  if (sol.status == SdpStatus::infeasible || sol.status == SdpStatus::unbounded || sol.status == SdpStatus::failed) {
    throw Error(ErrorKind::solver_failure, "NPA relaxation solve ended with status " + to_string(sol.status) +
                                               (sol.diagnostics.empty() ? "" : " (" + sol.diagnostics + ")"));
  }
  NpaBound b;
  b.status = sol.status;
  b.primal = sol.primal + rel.constant;
  b.gap = sol.gap;
  b.certified = sol.status == SdpStatus::optimal;
  b.value = (b.certified ? sol.dual : sol.primal) + rel.constant;
  return b;
}

/// Builds and solves in-process.
inline NpaBound npa_bound(const BellGame& game, NpaLevel level, bool party_symmetric = false, double tol = 1e-8) {
  const auto program = build_relaxation(game, level, party_symmetric);
  if (program.sdp.m == 0) {
    NpaBound b;
    b.value = b.primal = program.relaxation.constant;
    b.certified = true;
    b.status = SdpStatus::optimal;
    return b;
  }
  SdpOptions opt;
  opt.tol = tol;
  return bound_from_solution(program.relaxation, solve_embedded(program.sdp, opt));
}

}  // namespace belltasks
