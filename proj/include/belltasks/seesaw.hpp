#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <mutex>
#include <numeric>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "belltasks/error.hpp"
#include "belltasks/sdp.hpp"
#include "belltasks/task.hpp"

namespace belltasks {

using Operator = Eigen::MatrixXd;
using Measurement = std::vector<Operator>;  // one operator per outcome position

/// Shared pure state plus local measurements: measurements[party][input][outcome position].
/// Everything is real; for two-party games real strategies reach the same optimum.
struct QuantumRealization {
  int r = 2;
  int d = 1;
  Eigen::VectorXd state;  // dimension d^r, party 0 is the most significant index
  std::vector<std::vector<Measurement>> measurements;
  double value = 0.0;

  Eigen::Index dimension() const { return state.size(); }

  /// Throws invalid_parameter when the realization does not fit the game or is not a valid
  /// state-plus-POVM family.
  void validate(const BellGame& game) const {
    auto fail = [](const std::string& what) { throw Error(ErrorKind::invalid_parameter, "realization: " + what); };
    if (r != game.r) fail("party count differs from the game");
    if (static_cast<Eigen::Index>(ipow(d, r)) != state.size()) fail("state dimension is not d^r");
    if (std::abs(state.norm() - 1.0) > 1e-10) fail("state is not normalized");
    if (static_cast<int>(measurements.size()) != r) fail("need measurements for every party");
    for (const auto& party : measurements) {
      if (static_cast<int>(party.size()) != game.n) fail("need a measurement for every input");
      for (int x = 0; x < game.n; ++x) {
        if (static_cast<int>(party[x].size()) != game.outcome_count(x)) fail("outcome count mismatch");
        Operator sum = Operator::Zero(d, d);
        for (const auto& m : party[x]) {
          if (m.rows() != d || m.cols() != d) fail("operator has wrong size");
          if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-9) fail("operator is not symmetric");
          const double lmin = Eigen::SelfAdjointEigenSolver<Operator>(m, Eigen::EigenvaluesOnly).eigenvalues()(0);
          if (lmin < -1e-10) fail("operator is not positive semidefinite");
          sum += m;
        }
        if ((sum - Operator::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-9) fail("POVM does not sum to identity");
      }
    }
  }
};

namespace detail {

/// Game coefficients as doubles, laid out like BellGame::coefficients.
struct DenseGame {
  const BellGame* game = nullptr;
  std::vector<std::vector<double>> c;
  std::vector<std::vector<int>> inputs;

  explicit DenseGame(const BellGame& g) : game(&g) {
    for (std::size_t xi = 0; xi < g.input_count(); ++xi) {
      inputs.push_back(g.inputs_of(xi));
      auto& row = c.emplace_back();
      for (const auto& q : g.coefficients[xi]) row.push_back(to_double(q));
    }
  }
};

/// Applies `m` to tensor factor `party` of a vector on (C^d)^{(x)r}.
inline Eigen::VectorXd apply_local(const Eigen::VectorXd& psi, int party, const Operator& m, int r, int d) {
  const Eigen::Index left = static_cast<Eigen::Index>(ipow(d, party));
  const Eigen::Index right = static_cast<Eigen::Index>(ipow(d, r - 1 - party));
  Eigen::VectorXd out = Eigen::VectorXd::Zero(psi.size());
  for (Eigen::Index l = 0; l < left; ++l)
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        const double w = m(a, b);
        if (w == 0.0) continue;
        out.segment((l * d + a) * right, right) += w * psi.segment((l * d + b) * right, right);
      }
  return out;
}

inline Operator kron(const Operator& a, const Operator& b) {
  Operator out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// psi reshaped to a d x d^{r-1} matrix with `party` as the row index.
inline Operator unfold(const Eigen::VectorXd& psi, int party, int r, int d) {
  const Eigen::Index rest = psi.size() / d;
  Operator out(d, rest);
  const Eigen::Index right = static_cast<Eigen::Index>(ipow(d, r - 1 - party));
  for (Eigen::Index idx = 0; idx < psi.size(); ++idx) {
    const Eigen::Index lo = idx % right;
    const Eigen::Index a = (idx / right) % d;
    const Eigen::Index hi = idx / (right * d);
    out(a, hi * right + lo) = psi(idx);
  }
  return out;
}

/// Deterministic choice inside a (near-)degenerate top eigenspace: the basis vector whose
/// absolute values are lexicographically largest, signed so its first nonzero entry is positive.
inline Eigen::VectorXd pick_top_vector(const Eigen::SelfAdjointEigenSolver<Operator>& es) {
  const auto& vals = es.eigenvalues();
  const Eigen::Index top = vals.size() - 1;
  const double cut = vals(top) - 1e-10 * std::max(1.0, std::abs(vals(top)));
  auto key_less = [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      if (std::abs(std::abs(a(i)) - std::abs(b(i))) > 1e-12) return std::abs(a(i)) < std::abs(b(i));
    }
    return false;
  };
  Eigen::VectorXd best = es.eigenvectors().col(top);
  for (Eigen::Index k = top - 1; k >= 0 && vals(k) >= cut; --k) {
    Eigen::VectorXd v = es.eigenvectors().col(k);
    if (key_less(best, v)) best = v;
  }
  for (Eigen::Index i = 0; i < best.size(); ++i) {
    if (std::abs(best(i)) > 1e-12) {
      if (best(i) < 0) best = -best;
      break;
    }
  }
  return best.normalized();
}

}  // namespace detail

/// Joint behavior P(outcomes | inputs) of a realization, indexed like BellGame::coefficients.
inline Behavior born_behavior(const BellGame& game, const QuantumRealization& q) {
  Behavior b(game.input_count());
  for (std::size_t xi = 0; xi < game.input_count(); ++xi) {
    const auto xs = game.inputs_of(xi);
    b[xi].resize(game.outcome_tuple_count(xs));
    for (std::size_t ai = 0; ai < b[xi].size(); ++ai) {
      const auto pos = game.outcome_positions(xs, ai);
      Eigen::VectorXd v = q.state;
      for (int i = 0; i < game.r; ++i) v = detail::apply_local(v, i, q.measurements[i][xs[i]][pos[i]], q.r, q.d);
      b[xi][ai] = std::max(0.0, q.state.dot(v));
    }
    // Clean rounding so the behavior passes game_value's normalization check.
    const double sum = std::accumulate(b[xi].begin(), b[xi].end(), 0.0);
    if (sum > 0) for (auto& p : b[xi]) p /= sum;
  }
  return b;
}

struct BornResult {
  double value = 0.0;
  Behavior behavior;
};

/// Expected score of the realization, recomputed from scratch.
inline BornResult born_value(const BellGame& game, const QuantumRealization& q) {
  q.validate(game);
  BornResult out;
  out.behavior = born_behavior(game, q);
  out.value = game_value(game, out.behavior);
  return out;
}

/// Bell operator sum_{x,a} c(x,a) (x)_i M_i(a_i|x_i).
inline Operator bell_operator(const detail::DenseGame& dg, const QuantumRealization& q) {
  const BellGame& game = *dg.game;
  const int r = game.r, n = game.n, d = q.d;
  const auto dim = static_cast<Eigen::Index>(ipow(d, r));
  Operator bell = Operator::Zero(dim, dim);
  const std::size_t prefixes = ipow(n, r - 1);
  for (std::size_t p = 0; p < prefixes; ++p) {
    const std::size_t first = p * n;  // input index of (prefix, y = 0)
    const auto& xs0 = dg.inputs[first];
    std::size_t prefix_outcomes = 1;
    for (int i = 0; i + 1 < r; ++i) prefix_outcomes *= game.outcomes[xs0[i]].size();
    for (std::size_t po = 0; po < prefix_outcomes; ++po) {
      Operator last = Operator::Zero(d, d);
      bool any = false;
      for (int y = 0; y < n; ++y) {
        const int k = game.outcome_count(y);
        const auto& row = dg.c[first + y];
        for (int b = 0; b < k; ++b) {
          const double w = row[po * k + b];
          if (w == 0.0) continue;
          last += w * q.measurements[r - 1][y][b];
          any = true;
        }
      }
      if (!any) continue;
      // Prefix outcome positions, last prefix party fastest.
      std::vector<int> pos(r - 1);
      std::size_t rest = po;
      for (int i = r - 2; i >= 0; --i) {
        const auto k = game.outcomes[xs0[i]].size();
        pos[i] = static_cast<int>(rest % k);
        rest /= k;
      }
      Operator prefix = Operator::Identity(1, 1);
      for (int i = 0; i + 1 < r; ++i) prefix = detail::kron(prefix, q.measurements[i][xs0[i]][pos[i]]);
      bell += detail::kron(prefix, last);
    }
  }
  return 0.5 * (bell + bell.transpose());
}

/// F[x][a] with value = sum_{x,a} Tr(F[x][a] M_party(a|x)), other parties held fixed.
inline std::vector<std::vector<Operator>> reduced_operators(const detail::DenseGame& dg, const QuantumRealization& q,
                                                            int party) {
  const BellGame& game = *dg.game;
  const int r = game.r, d = q.d;
  const auto rest_dim = static_cast<Eigen::Index>(ipow(d, r - 1));
  std::vector<std::vector<Operator>> k_ops(game.n);
  for (int x = 0; x < game.n; ++x) k_ops[x].assign(game.outcome_count(x), Operator::Zero(rest_dim, rest_dim));
  for (std::size_t xi = 0; xi < game.input_count(); ++xi) {
    const auto& xs = dg.inputs[xi];
    const auto& row = dg.c[xi];
    for (std::size_t ai = 0; ai < row.size(); ++ai) {
      if (row[ai] == 0.0) continue;
      const auto pos = game.outcome_positions(xs, ai);
      Operator k = Operator::Identity(1, 1);
      for (int j = 0; j < r; ++j)
        if (j != party) k = detail::kron(k, q.measurements[j][xs[j]][pos[j]]);
      k_ops[xs[party]][pos[party]] += row[ai] * k;
    }
  }
  const Operator psi = detail::unfold(q.state, party, r, d);
  std::vector<std::vector<Operator>> f(game.n);
  for (int x = 0; x < game.n; ++x)
    for (const auto& k : k_ops[x]) {
      Operator m = psi * k * psi.transpose();
      f[x].push_back(0.5 * (m + m.transpose()));
    }
  return f;
}

/// POVM maximizing sum_a Tr(F_a M_a). Closed form for one or two outcomes, an SDP otherwise.
/// Returns false (and leaves `out` empty) when the SDP fails.
inline bool optimal_measurement(const std::vector<Operator>& f, int d, Measurement& out) {
  out.clear();
  const int k = static_cast<int>(f.size());
  if (k == 1) {
    out.push_back(Operator::Identity(d, d));
    return true;
  }
  if (k == 2) {
    Eigen::SelfAdjointEigenSolver<Operator> es(f[0] - f[1]);
    Operator p = Operator::Zero(d, d);
    for (int i = 0; i < d; ++i)
      if (es.eigenvalues()(i) > 0) p += es.eigenvectors().col(i) * es.eigenvectors().col(i).transpose();
    out.push_back(p);
    out.push_back(Operator::Identity(d, d) - p);
    return true;
  }
  // maximize sum_{a<k-1} Tr((F_a - F_{k-1}) M_a) with M_a >= 0, I - sum M_a >= 0.
  double scale = 0.0;
  for (int a = 0; a + 1 < k; ++a) scale = std::max(scale, (f[a] - f[k - 1]).cwiseAbs().maxCoeff());
  if (scale == 0.0) scale = 1.0;
  SdpProblem p;
  const int tri = d * (d + 1) / 2;
  p.m = (k - 1) * tri;
  p.block_sizes.assign(k, d);
  p.c.resize(p.m);
  p.matrices.assign(p.m + 1, {});
  for (int i = 0; i < d; ++i) p.matrices[0].push_back({k - 1, i, i, 1.0});
  int var = 0;
  for (int a = 0; a + 1 < k; ++a) {
    const Operator g = (f[a] - f[k - 1]) / scale;
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j, ++var) {
        p.c[var] = (i == j ? 1.0 : 2.0) * g(i, j);
        p.matrices[var + 1].push_back({a, i, j, 1.0});
        p.matrices[var + 1].push_back({k - 1, i, j, -1.0});
      }
  }
  SdpOptions opt;
  opt.tol = 1e-9;
  opt.feasibility_tol = 1e-9;
  const SdpSolution sol = solve_embedded(p, opt);
  if (sol.status != SdpStatus::optimal && sol.status != SdpStatus::near_optimal) {
#ifdef BELLTASKS_DEBUG_POVM
    std::fprintf(stderr, "povm sdp: %s %s it=%d gap=%g\n", to_string(sol.status).c_str(), sol.diagnostics.c_str(), sol.iterations, sol.gap);
#endif
    return false;
  }
  // Clip to the PSD cone, then renormalize so the family sums to the identity exactly.
  Measurement raw;
  var = 0;
  Operator last = Operator::Identity(d, d);
  for (int a = 0; a + 1 < k; ++a) {
    Operator m(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j, ++var) m(i, j) = m(j, i) = sol.x[var];
    raw.push_back(m);
    last -= m;
  }
  raw.push_back(last);
  Operator total = Operator::Zero(d, d);
  for (auto& m : raw) {
    Eigen::SelfAdjointEigenSolver<Operator> es(m);
    const Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
    m = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
    total += m;
  }
  Eigen::SelfAdjointEigenSolver<Operator> es(total);
  if (es.eigenvalues()(0) <= 1e-12) return false;
  const Operator inv_sqrt = es.operatorInverseSqrt();
  for (auto& m : raw) {
    Operator s = inv_sqrt * m * inv_sqrt;
    m = 0.5 * (s + s.transpose());
  }
  out = std::move(raw);
  return true;
}

/// Expectation of the Bell operator in the current state.
inline double realization_value(const detail::DenseGame& dg, const QuantumRealization& q) {
  return q.state.dot(bell_operator(dg, q) * q.state);
}

/// Replaces the state by the top eigenvector of the Bell operator.
inline void update_state(const detail::DenseGame& dg, QuantumRealization& q) {
  Eigen::SelfAdjointEigenSolver<Operator> es(bell_operator(dg, q));
  q.state = detail::pick_top_vector(es);
  q.value = es.eigenvalues()(es.eigenvalues().size() - 1);
}

inline QuantumRealization update_state(const BellGame& game, QuantumRealization q) {
  const detail::DenseGame dg(game);
  update_state(dg, q);
  return q;
}

/// Optimizes one party's measurements input by input with everything else fixed.
/// Returns the number of inputs whose SDP failed (those keep their previous operators).
inline int update_measurements(const detail::DenseGame& dg, QuantumRealization& q, int party) {
  const auto f = reduced_operators(dg, q, party);
  int stalls = 0;
  double before = 0.0, after = 0.0;
  std::vector<Measurement> next(f.size());
  for (std::size_t x = 0; x < f.size(); ++x) {
    for (std::size_t a = 0; a < f[x].size(); ++a) before += (f[x][a] * q.measurements[party][x][a]).trace();
    if (!optimal_measurement(f[x], q.d, next[x])) {
      next[x] = q.measurements[party][x];
      ++stalls;
    }
    for (std::size_t a = 0; a < f[x].size(); ++a) after += (f[x][a] * next[x][a]).trace();
  }
  // Accept only non-decreasing updates (numerical SDP optima can land a hair below).
  if (after >= before) {
    q.measurements[party] = std::move(next);
    q.value = after;
  } else {
    q.value = before;
  }
  return stalls;
}

inline QuantumRealization update_measurements(const BellGame& game, QuantumRealization q, int party) {
  const detail::DenseGame dg(game);
  update_measurements(dg, q, party);
  return q;
}

/// Embeds deterministic classical strategies as diagonal projectors (d = 1 suffices).
inline QuantumRealization embed_deterministic(const BellGame& game, const std::vector<std::vector<int>>& positions,
                                              int d = 1) {
  QuantumRealization q;
  q.r = game.r;
  q.d = d;
  q.state = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ipow(d, game.r)));
  q.state(0) = 1.0;
  for (int i = 0; i < game.r; ++i) {
    auto& party = q.measurements.emplace_back();
    for (int x = 0; x < game.n; ++x) {
      Measurement m(game.outcome_count(x), Operator::Zero(d, d));
      m[positions[i][x]] = Operator::Identity(d, d);
      party.push_back(std::move(m));
    }
  }
  q.value = born_value(game, q).value;
  return q;
}

/// Every outcome of input x gets identity / k.
inline QuantumRealization uniform_realization(const BellGame& game, int d) {
  QuantumRealization q;
  q.r = game.r;
  q.d = d;
  q.state = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ipow(d, game.r)));
  q.state(0) = 1.0;
  for (int i = 0; i < game.r; ++i) {
    auto& party = q.measurements.emplace_back();
    for (int x = 0; x < game.n; ++x) {
      const int k = game.outcome_count(x);
      party.emplace_back(k, Operator::Identity(d, d) / k);
    }
  }
  return q;
}

namespace detail {

inline Operator random_orthogonal(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Operator g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = normal(rng);
  Eigen::HouseholderQR<Operator> qr(g);
  Operator q = qr.householderQ() * Operator::Identity(d, d);
  // Fix column signs so the distribution is Haar.
  for (int j = 0; j < d; ++j)
    if (qr.matrixQR()(j, j) < 0) q.col(j) = -q.col(j);
  return q;
}

/// Rotated random partition of an orthonormal basis into k projectors.
inline Measurement random_projective(int d, int k, std::mt19937_64& rng) {
  const Operator q = random_orthogonal(d, rng);
  std::uniform_int_distribution<int> pick(0, k - 1);
  Measurement m(k, Operator::Zero(d, d));
  for (int j = 0; j < d; ++j) m[pick(rng)] += q.col(j) * q.col(j).transpose();
  return m;
}

}  // namespace detail

inline QuantumRealization random_realization(const BellGame& game, int d, std::mt19937_64& rng, bool shared = false) {
  QuantumRealization q;
  q.r = game.r;
  q.d = d;
  for (int i = 0; i < game.r; ++i) {
    if (shared && i > 0) {
      q.measurements.push_back(q.measurements.front());
      continue;
    }
    auto& party = q.measurements.emplace_back();
    for (int x = 0; x < game.n; ++x) party.push_back(detail::random_projective(d, game.outcome_count(x), rng));
  }
  std::normal_distribution<double> normal;
  q.state = Eigen::VectorXd(static_cast<Eigen::Index>(ipow(d, game.r)));
  for (Eigen::Index i = 0; i < q.state.size(); ++i) q.state(i) = normal(rng);
  q.state.normalize();
  return q;
}

/// Projects a density matrix to its top eigenvector (a pure state). Returns true when the
/// input was not already pure, so the caller can warn.
inline bool set_state_from_density(QuantumRealization& q, const Operator& rho) {
  Eigen::SelfAdjointEigenSolver<Operator> es(0.5 * (rho + rho.transpose()));
  q.state = detail::pick_top_vector(es);
  const auto& ev = es.eigenvalues();
  return ev(ev.size() - 1) < ev.sum() - 1e-9;
}

struct SeesawConfig {
  int d = 0;  // local dimension; 0 means the vertex count
  int restarts = 100;
  double tol = 1e-9;
  int max_iters = 500;
  std::uint64_t seed = 1;
  bool symmetric = false;
  int jobs = 0;  // worker threads; 0 means hardware concurrency

  void validate() const {
    if (d < 0) throw Error(ErrorKind::invalid_parameter, "see-saw dimension must be >= 1");
    if (restarts < 1) throw Error(ErrorKind::invalid_parameter, "see-saw needs at least one restart");
    if (max_iters < 1) throw Error(ErrorKind::invalid_parameter, "see-saw needs at least one iteration");
    if (!(tol >= 0)) throw Error(ErrorKind::invalid_parameter, "see-saw tolerance must be >= 0");
  }
};

struct SeesawRun {
  double value = -std::numeric_limits<double>::infinity();
  QuantumRealization realization;
  std::vector<double> trace;  // value after every accepted step
  int iterations = 0;
  int stalls = 0;
  bool monotone = true;
};

struct SeesawResult {
  double value = -std::numeric_limits<double>::infinity();
  QuantumRealization realization;
  int best_restart = -1;
  int restarts = 0;
  int stalls = 0;
  bool monotone = true;                 // every restart's trace was non-decreasing
  std::vector<double> best_trace;
  std::vector<double> restart_values;   // final value of each restart
  double marginal_distance = 0.0;       // max |p_i(a|x) - p_0(a|x)| over parties
};

namespace detail {

inline void record(SeesawRun& run, double v) {
  if (!run.trace.empty() && v < run.trace.back() - 1e-10) run.monotone = false;
  run.trace.push_back(v);
}

/// Orthonormal basis of the fully symmetric (sign = +1) or antisymmetric (-1) subspace.
inline Operator exchange_subspace(int r, int d, int sign) {
  const Eigen::Index dim = static_cast<Eigen::Index>(ipow(d, r));
  std::vector<int> perm(r);
  std::iota(perm.begin(), perm.end(), 0);
  Operator p = Operator::Zero(dim, dim);
  int count = 0;
  do {
    int inversions = 0;
    for (int i = 0; i < r; ++i)
      for (int j = i + 1; j < r; ++j) inversions += perm[i] > perm[j];
    const double s = (sign < 0 && inversions % 2) ? -1.0 : 1.0;
    for (Eigen::Index idx = 0; idx < dim; ++idx) {
      auto digits = decode_tuple(static_cast<std::size_t>(idx), r, d);
      std::vector<int> moved(r);
      for (int i = 0; i < r; ++i) moved[perm[i]] = digits[i];
      p(static_cast<Eigen::Index>(encode_tuple(moved, d)), idx) += s;
    }
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  p /= count;
  Eigen::SelfAdjointEigenSolver<Operator> es(p);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < dim; ++i)
    if (es.eigenvalues()(i) > 0.5) keep.push_back(i);
  Operator basis(dim, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) basis.col(static_cast<Eigen::Index>(j)) = es.eigenvectors().col(keep[j]);
  return basis;
}

/// Best exchange-invariant pure state: top eigenvector within the symmetric or the
/// antisymmetric subspace (both give a swap-invariant density matrix).
inline void update_state_exchange(const DenseGame& dg, QuantumRealization& q, const std::vector<Operator>& bases) {
  const Operator bell = bell_operator(dg, q);
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& v : bases) {
    if (v.cols() == 0) continue;
    Eigen::SelfAdjointEigenSolver<Operator> es(v.transpose() * bell * v);
    const double top = es.eigenvalues()(es.eigenvalues().size() - 1);
    if (top > best + 1e-12) {
      best = top;
      q.state = (v * pick_top_vector(es)).normalized();
    }
  }
  q.value = best;
}

inline SeesawRun run_unrestricted(const DenseGame& dg, int d, const SeesawConfig& cfg, std::mt19937_64& rng) {
  SeesawRun run;
  QuantumRealization q = random_realization(*dg.game, d, rng);
  update_state(dg, q);
  record(run, q.value);
  for (run.iterations = 0; run.iterations < cfg.max_iters; ++run.iterations) {
    const double start = q.value;
    for (int party = 0; party < q.r; ++party) {
      run.stalls += update_measurements(dg, q, party);
      record(run, q.value);
    }
    update_state(dg, q);
    record(run, q.value);
    if (q.value - start < cfg.tol) break;
  }
  run.value = q.value;
  run.realization = std::move(q);
  return run;
}

inline SeesawRun run_symmetric(const DenseGame& dg, int d, const SeesawConfig& cfg, std::mt19937_64& rng,
                               const std::vector<Operator>& bases) {
  const BellGame& game = *dg.game;
  SeesawRun run;
  QuantumRealization q = random_realization(game, d, rng, true);
  update_state_exchange(dg, q, bases);
  record(run, q.value);
  for (run.iterations = 0; run.iterations < cfg.max_iters; ++run.iterations) {
    const double start = q.value;
    // Free single-party optimum, then a damped shared step accepted only if it helps.
    const auto f = reduced_operators(dg, q, 0);
    std::vector<Measurement> target(game.n);
    for (int x = 0; x < game.n; ++x) {
      if (!optimal_measurement(f[x], d, target[x])) {
        target[x] = q.measurements[0][x];
        ++run.stalls;
      }
    }
    bool accepted = false;
    for (double t = 1.0; t > 1e-6 && !accepted; t *= 0.5) {
      QuantumRealization trial = q;
      for (int x = 0; x < game.n; ++x)
        for (std::size_t a = 0; a < target[x].size(); ++a)
          trial.measurements[0][x][a] = (1 - t) * q.measurements[0][x][a] + t * target[x][a];
      for (int i = 1; i < q.r; ++i) trial.measurements[i] = trial.measurements[0];
      const double v = realization_value(dg, trial);
      if (v > q.value) {
        trial.value = v;
        q = std::move(trial);
        accepted = true;
      }
    }
    if (accepted) record(run, q.value);
    const Eigen::VectorXd old_state = q.state;
    const double old_value = q.value;
    update_state_exchange(dg, q, bases);
    if (q.value < old_value) {
      q.state = old_state;
      q.value = old_value;
    }
    record(run, q.value);
    if (q.value - start < cfg.tol) break;
  }
  run.value = q.value;
  run.realization = std::move(q);
  return run;
}

inline double marginal_distance(const BellGame& game, const QuantumRealization& q) {
  double worst = 0.0;
  for (int x = 0; x < game.n; ++x)
    for (int a = 0; a < game.outcome_count(x); ++a) {
      const double p0 = q.state.dot(apply_local(q.state, 0, q.measurements[0][x][a], q.r, q.d));
      for (int i = 1; i < q.r; ++i) {
        const double pi = q.state.dot(apply_local(q.state, i, q.measurements[i][x][a], q.r, q.d));
        worst = std::max(worst, std::abs(pi - p0));
      }
    }
  return worst;
}

}  // namespace detail

/// Best see-saw value over independent restarts. Each restart draws from its own
/// generator seeded by (seed, restart index), so results do not depend on thread count.
inline SeesawResult optimize(const BellGame& game, SeesawConfig cfg) {
  cfg.validate();
  if (cfg.symmetric && !game.party_symmetric()) {
    throw Error(ErrorKind::invalid_parameter, "symmetric see-saw needs a party-symmetric game");
  }
  const int d = cfg.d > 0 ? cfg.d : game.n;
  const detail::DenseGame dg(game);
  std::vector<Operator> bases;
  if (cfg.symmetric) bases = {detail::exchange_subspace(game.r, d, +1), detail::exchange_subspace(game.r, d, -1)};

  std::vector<SeesawRun> runs(cfg.restarts);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int k; (k = next.fetch_add(1)) < cfg.restarts;) {
      std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                        static_cast<std::uint32_t>(k)};
      std::mt19937_64 rng(seq);
      runs[k] = cfg.symmetric ? detail::run_symmetric(dg, d, cfg, rng, bases) : detail::run_unrestricted(dg, d, cfg, rng);
    }
  };
  int jobs = cfg.jobs > 0 ? cfg.jobs : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  jobs = std::min(jobs, cfg.restarts);
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  SeesawResult out;
  out.restarts = cfg.restarts;
  for (int k = 0; k < cfg.restarts; ++k) {
    out.stalls += runs[k].stalls;
    out.monotone = out.monotone && runs[k].monotone;
    out.restart_values.push_back(runs[k].value);
    if (runs[k].value > out.value) {
      out.value = runs[k].value;
      out.best_restart = k;
    }
  }
  out.realization = std::move(runs[out.best_restart].realization);
  out.best_trace = std::move(runs[out.best_restart].trace);
  out.marginal_distance = detail::marginal_distance(game, out.realization);
  return out;
}

inline SeesawResult symmetric_optimize(const BellGame& game, SeesawConfig cfg) {
  cfg.symmetric = true;
  return optimize(game, cfg);
}

inline nlohmann::json realization_to_json(const BellGame& game, const QuantumRealization& q) {
  using nlohmann::json;
  auto complex_entries = [](const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) rows.push_back({m(i, j), 0.0});
    return rows;
  };
  json j;
  j["d"] = q.d;
  j["r"] = q.r;
  j["state"] = complex_entries(q.state);
  j["measurements"] = json::array();
  for (int i = 0; i < q.r; ++i)
    for (int x = 0; x < game.n; ++x)
      for (int a = 0; a < game.outcome_count(x); ++a)
        j["measurements"].push_back({{"party", i}, {"input", x}, {"outcome", game.outcomes[x][a]},
                                     {"entries", complex_entries(q.measurements[i][x][a])}});
  const auto born = born_value(game, q);
  j["value"] = born.value;
  j["behavior"] = born.behavior;
  return j;
}

}  // namespace belltasks
