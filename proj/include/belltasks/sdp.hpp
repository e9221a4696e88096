#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "belltasks/error.hpp"

namespace belltasks {

/// One nonzero of a symmetric block matrix, upper triangle (i <= j), 0-based.
struct SdpEntry {
  int block = 0;
  int i = 0;
  int j = 0;
  double value = 0.0;

  friend bool operator==(const SdpEntry&, const SdpEntry&) = default;
};

/// maximize c.x  subject to  F(x) = F0 + sum_k x_k F_k  PSD  (block diagonal).
/// A negative block size declares a diagonal block of that dimension.
struct SdpProblem {
  int m = 0;
  std::vector<int> block_sizes;
  std::vector<double> c;                        // size m
  std::vector<std::vector<SdpEntry>> matrices;  // matrices[0] = F0, matrices[k] = F_k

  int total_dimension() const {
    int d = 0;
    for (int b : block_sizes) d += std::abs(b);
    return d;
  }

  void validate() const {
    if (m < 0 || static_cast<int>(c.size()) != m || static_cast<int>(matrices.size()) != m + 1) {
      throw Error(ErrorKind::invalid_parameter, "SDP has inconsistent variable count");
    }
    for (const auto& mat : matrices) {
      for (const auto& e : mat) {
        if (e.block < 0 || e.block >= static_cast<int>(block_sizes.size())) {
          throw Error(ErrorKind::invalid_parameter, "SDP entry references missing block");
        }
        const int dim = std::abs(block_sizes[e.block]);
        if (e.i < 0 || e.j < e.i || e.j >= dim) throw Error(ErrorKind::invalid_parameter, "SDP entry outside its block");
        if (block_sizes[e.block] < 0 && e.i != e.j) {
          throw Error(ErrorKind::invalid_parameter, "off-diagonal entry in diagonal block");
        }
      }
    }
  }

  /// Sorts entries and merges duplicates so that equal problems compare equal.
  void normalize() {
    for (auto& mat : matrices) {
      std::sort(mat.begin(), mat.end(), [](const SdpEntry& a, const SdpEntry& b) {
        return std::tie(a.block, a.i, a.j) < std::tie(b.block, b.i, b.j);
      });
      std::vector<SdpEntry> merged;
      for (const auto& e : mat) {
        if (!merged.empty() && merged.back().block == e.block && merged.back().i == e.i && merged.back().j == e.j) {
          merged.back().value += e.value;
        } else {
          merged.push_back(e);
        }
      }
      std::erase_if(merged, [](const SdpEntry& e) { return e.value == 0.0; });
      mat = std::move(merged);
    }
  }

  friend bool operator==(const SdpProblem&, const SdpProblem&) = default;
};

enum class SdpStatus { optimal, near_optimal, infeasible, unbounded, failed };

inline std::string to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::optimal: return "optimal";
    case SdpStatus::near_optimal: return "near-optimal";
    case SdpStatus::infeasible: return "infeasible";
    case SdpStatus::unbounded: return "unbounded";
    case SdpStatus::failed: return "failed";
  }
  return "failed";
}

struct SdpSolution {
  SdpStatus status = SdpStatus::failed;
  std::vector<double> x;
  double primal = 0.0;  // c.x, a lower bound on the optimum
  double dual = 0.0;    // Tr(F0 Z), an upper bound on the optimum
  double gap = 0.0;     // dual - primal
  int iterations = 0;
  std::string solver;
  std::string diagnostics;
  std::vector<Eigen::MatrixXd> slack;  // F(x) per block, when available
};

struct SdpOptions {
  double tol = 1e-8;
  double feasibility_tol = 1e-7;
  int max_iterations = 200;
  double step_fraction = 0.98;
  int max_dimension = 1500;
  int max_variables = 6000;
};

namespace detail {

using Blocks = std::vector<Eigen::MatrixXd>;

inline double inner(const Blocks& a, const Blocks& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k].cwiseProduct(b[k]).sum();
  return s;
}

inline double frobenius(const Blocks& a) { return std::sqrt(inner(a, a)); }

/// Largest alpha (possibly infinite) keeping X + alpha dX positive semidefinite.
inline double max_step(const Blocks& x, const Blocks& dx) {
  double alpha = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < x.size(); ++k) {
    Eigen::LLT<Eigen::MatrixXd> llt(x[k]);
    if (llt.info() != Eigen::Success) return 0.0;
    Eigen::MatrixXd w = llt.matrixL().solve(dx[k]);
    w = llt.matrixL().solve(w.transpose()).transpose();
    w = 0.5 * (w + w.transpose());
    const double lmin = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(w, Eigen::EigenvaluesOnly).eigenvalues()(0);
    if (lmin < 0) alpha = std::min(alpha, -1.0 / lmin);
  }
  return alpha;
}

/// Primal-dual path following on  min C.X, A_k.X = b_k, X PSD  /  max b.y, C - sum y_k A_k = S PSD
/// with C = F0, A_k = -F_k, b = c. HKM search direction with Mehrotra predictor-corrector.
class InteriorPoint {
 public:
  InteriorPoint(const SdpProblem& p, const SdpOptions& opt) : p_(p), opt_(opt) {
    for (int b : p.block_sizes) dims_.push_back(std::abs(b));
    // Full (both triangles) entry lists of A_k = -F_k, grouped by block.
    a_.resize(p.m);
    for (int k = 0; k < p.m; ++k) {
      for (const auto& e : p.matrices[k + 1]) {
        a_[k].push_back({e.block, e.i, e.j, -e.value});
        if (e.i != e.j) a_[k].push_back({e.block, e.j, e.i, -e.value});
      }
    }
    c_ = zeros();
    for (const auto& e : p.matrices[0]) {
      c_[e.block](e.i, e.j) = e.value;
      c_[e.block](e.j, e.i) = e.value;
    }
    b_ = Eigen::Map<const Eigen::VectorXd>(p.c.data(), p.m);
  }

  SdpSolution solve() {
    SdpSolution sol;
    sol.solver = "embedded-ipm";
    const int n_total = std::max(1, p_.total_dimension());
    double a_norm_max = 0.0, ratio = 0.0;
    for (int k = 0; k < p_.m; ++k) {
      double nk = 0;
      for (const auto& e : a_[k]) nk += e.value * e.value;
      nk = std::sqrt(nk);
      a_norm_max = std::max(a_norm_max, nk);
      ratio = std::max(ratio, (1.0 + std::abs(b_(k))) / (1.0 + nk));
    }
    const double c_norm = frobenius(c_);
    const double xi = std::max({10.0, std::sqrt(static_cast<double>(n_total)), n_total * ratio});
    const double eta = std::max({10.0, std::sqrt(static_cast<double>(n_total)), a_norm_max, c_norm});
    Blocks x = identity(xi), s = identity(eta);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(p_.m);
    const double b_norm = b_.norm();

    double rel_gap = 1.0, pinf = 1.0, dinf = 1.0;
    int it = 0;
    for (; it < opt_.max_iterations; ++it) {
      const Eigen::VectorXd rp = b_ - apply_a(x);
      Blocks rd = c_;
      sub_assign(rd, s, 1.0);
      add_adjoint(rd, y, -1.0);
      const double pobj = inner(c_, x), dobj = b_.dot(y);
      rel_gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
      pinf = rp.norm() / (1.0 + b_norm);
      dinf = frobenius(rd) / (1.0 + c_norm);
      if (rel_gap < opt_.tol && pinf < opt_.feasibility_tol && dinf < opt_.feasibility_tol) break;
      if (std::abs(dobj) > 1e12 && dinf < opt_.feasibility_tol) {
        return finish(sol, x, y, it, SdpStatus::unbounded, "dual objective diverges");
      }
      if (std::abs(pobj) > 1e12 && pinf < opt_.feasibility_tol) {
        return finish(sol, x, y, it, SdpStatus::infeasible, "primal objective diverges");
      }

      // Numerical breakdown close to the optimum still yields a usable near-optimal point.
      auto breakdown = [&](const std::string& why) {
        const bool close = rel_gap < 1e-6 && pinf < 1e-6 && dinf < 1e-6;
        return finish(sol, x, y, it, close ? SdpStatus::near_optimal : SdpStatus::failed, why);
      };
      const double mu = inner(x, s) / n_total;
      Blocks sinv(s.size());
      for (std::size_t k = 0; k < s.size(); ++k) {
        Eigen::LLT<Eigen::MatrixXd> llt(s[k]);
        if (llt.info() != Eigen::Success) return breakdown("slack lost definiteness");
        sinv[k] = llt.solve(Eigen::MatrixXd::Identity(dims_[k], dims_[k]));
        sinv[k] = 0.5 * (sinv[k] + sinv[k].transpose());
      }
      Eigen::MatrixXd schur = schur_complement(x, sinv);
      Eigen::LLT<Eigen::MatrixXd> llt(schur);
      std::optional<Eigen::LDLT<Eigen::MatrixXd>> ldlt;
      if (llt.info() != Eigen::Success) {
        ldlt.emplace(schur);
        if (ldlt->info() != Eigen::Success) return breakdown("Schur factorization failed");
      }
      auto schur_solve = [&](const Eigen::VectorXd& rhs) -> Eigen::VectorXd {
        return ldlt ? Eigen::VectorXd(ldlt->solve(rhs)) : Eigen::VectorXd(llt.solve(rhs));
      };

      // X Rd S^-1, shared by predictor and corrector.
      Blocks x_rd_sinv(x.size());
      for (std::size_t k = 0; k < x.size(); ++k) x_rd_sinv[k] = x[k] * rd[k] * sinv[k];

      auto direction = [&](const Blocks& kterm, Blocks& dx, Eigen::VectorXd& dy, Blocks& ds) {
        Blocks t(x.size());
        for (std::size_t k = 0; k < x.size(); ++k) t[k] = kterm[k] - x_rd_sinv[k];
        dy = schur_solve(rp - apply_a(t));
        ds = rd;
        add_adjoint(ds, dy, -1.0);
        dx.resize(x.size());
        for (std::size_t k = 0; k < x.size(); ++k) {
          Eigen::MatrixXd d = kterm[k] - x[k] * ds[k] * sinv[k];
          dx[k] = 0.5 * (d + d.transpose());
        }
      };

      Blocks kterm(x.size());
      for (std::size_t k = 0; k < x.size(); ++k) kterm[k] = -x[k];
      Blocks dxp, dsp;
      Eigen::VectorXd dyp;
      direction(kterm, dxp, dyp, dsp);
      const double ap = std::min(1.0, max_step(x, dxp));
      const double ad = std::min(1.0, max_step(s, dsp));
      Blocks xa = x, sa = s;
      add_assign(xa, dxp, ap);
      add_assign(sa, dsp, ad);
      const double mu_aff = inner(xa, sa) / n_total;
      const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);

      for (std::size_t k = 0; k < x.size(); ++k) {
        kterm[k] = sigma * mu * sinv[k] - x[k] - dxp[k] * dsp[k] * sinv[k];
      }
      Blocks dx, ds;
      Eigen::VectorXd dy;
      direction(kterm, dx, dy, ds);
      const double alpha_p = std::min(1.0, opt_.step_fraction * max_step(x, dx));
      const double alpha_d = std::min(1.0, opt_.step_fraction * max_step(s, ds));
      if (!(alpha_p > 1e-14) && !(alpha_d > 1e-14)) {
        return finish(sol, x, y, it, rel_gap < 1e-5 ? SdpStatus::near_optimal : SdpStatus::failed, "step length collapsed");
      }
      add_assign(x, dx, alpha_p);
      add_assign(s, ds, alpha_d);
      y += alpha_d * dy;
    }
    if (rel_gap < opt_.tol && pinf < opt_.feasibility_tol && dinf < opt_.feasibility_tol) {
      return finish(sol, x, y, it, SdpStatus::optimal, "");
    }
    return finish(sol, x, y, it, rel_gap < 1e-5 ? SdpStatus::near_optimal : SdpStatus::failed,
                  "iteration limit: gap " + std::to_string(rel_gap));
  }

 private:
  Blocks zeros() const {
    Blocks out;
    for (int d : dims_) out.push_back(Eigen::MatrixXd::Zero(d, d));
    return out;
  }

  Blocks identity(double scale) const {
    Blocks out;
    for (int d : dims_) out.push_back(scale * Eigen::MatrixXd::Identity(d, d));
    return out;
  }

  static void add_assign(Blocks& a, const Blocks& b, double t) {
    for (std::size_t k = 0; k < a.size(); ++k) a[k] += t * b[k];
  }

  static void sub_assign(Blocks& a, const Blocks& b, double t) { add_assign(a, b, -t); }

  Eigen::VectorXd apply_a(const Blocks& w) const {
    Eigen::VectorXd out(p_.m);
    for (int k = 0; k < p_.m; ++k) {
      double s = 0.0;
      for (const auto& e : a_[k]) s += e.value * w[e.block](e.i, e.j);
      out(k) = s;
    }
    return out;
  }

  void add_adjoint(Blocks& target, const Eigen::VectorXd& y, double t) const {
    for (int k = 0; k < p_.m; ++k) {
      if (y(k) == 0.0) continue;
      for (const auto& e : a_[k]) target[e.block](e.i, e.j) += t * y(k) * e.value;
    }
  }

  // M_kl = Tr(A_k X A_l S^-1) = sum over entries (s,t) of A_l of A_l(s,t) (S^-1 A_k X)(t,s).
  Eigen::MatrixXd schur_complement(const Blocks& x, const Blocks& sinv) const {
    const int m = p_.m;
    Eigen::MatrixXd schur(m, m);
    std::vector<Eigen::MatrixXd> g(dims_.size());
    std::vector<std::vector<int>> rows(dims_.size());
    for (int k = 0; k < m; ++k) {
      for (std::size_t b = 0; b < dims_.size(); ++b) rows[b].clear();
      for (const auto& e : a_[k]) rows[e.block].push_back(e.i);
      for (std::size_t b = 0; b < dims_.size(); ++b) {
        auto& r = rows[b];
        std::sort(r.begin(), r.end());
        r.erase(std::unique(r.begin(), r.end()), r.end());
        if (r.empty()) continue;
        // (A_k X) restricted to its nonzero rows, then S^-1 times it.
        Eigen::MatrixXd akx = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(r.size()), dims_[b]);
        for (const auto& e : a_[k]) {
          if (e.block != static_cast<int>(b)) continue;
          const auto row = std::lower_bound(r.begin(), r.end(), e.i) - r.begin();
          akx.row(row) += e.value * x[b].row(e.j);
        }
        Eigen::MatrixXd sub(dims_[b], static_cast<Eigen::Index>(r.size()));
        for (std::size_t q = 0; q < r.size(); ++q) sub.col(q) = sinv[b].col(r[q]);
        g[b].noalias() = sub * akx;
      }
      for (int l = k; l < m; ++l) {
        double v = 0.0;
        for (const auto& e : a_[l]) {
          if (rows[e.block].empty()) continue;
          v += e.value * g[e.block](e.j, e.i);
        }
        schur(k, l) = v;
        schur(l, k) = v;
      }
    }
    return schur;
  }

  SdpSolution& finish(SdpSolution& sol, const Blocks& x, const Eigen::VectorXd& y, int it, SdpStatus status,
                      std::string why) {
    sol.status = status;
    sol.iterations = it;
    sol.x.assign(y.data(), y.data() + y.size());
    sol.primal = b_.dot(y);
    sol.dual = inner(c_, x);
    sol.gap = sol.dual - sol.primal;
    sol.diagnostics = std::move(why);
    sol.slack = c_;
    add_adjoint(sol.slack, y, -1.0);
    return sol;
  }

  const SdpProblem& p_;
  SdpOptions opt_;
  std::vector<int> dims_;
  std::vector<std::vector<SdpEntry>> a_;
  Blocks c_;
  Eigen::VectorXd b_;
};

}  // namespace detail

/// True when the problem is within the embedded solver's size limits.
inline bool fits_embedded(const SdpProblem& p, const SdpOptions& opt = {}) {
  return p.total_dimension() <= opt.max_dimension && p.m <= opt.max_variables;
}

/// Embedded interior-point solve; deterministic for identical input.
inline SdpSolution solve_embedded(const SdpProblem& p, const SdpOptions& opt = {}) {
  p.validate();
  if (p.total_dimension() > opt.max_dimension) {
    throw Error(ErrorKind::too_large, "SDP dimension " + std::to_string(p.total_dimension()) + " exceeds embedded limit " +
                                          std::to_string(opt.max_dimension) + "; use --export-sdpa and an external solver");
  }
  if (p.m > opt.max_variables) {
    throw Error(ErrorKind::too_large, "SDP has " + std::to_string(p.m) + " variables, embedded limit is " +
                                          std::to_string(opt.max_variables) + "; use --export-sdpa and an external solver");
  }
  return detail::InteriorPoint(p, opt).solve();
}

inline SdpSolution solve_embedded(const SdpProblem& p, double tol) {
  SdpOptions opt;
  opt.tol = tol;
  return solve_embedded(p, opt);
}

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

}  // namespace detail

/// SDPA sparse text (.dat-s). SDPA minimizes c'.x subject to sum F_k x_k - F0' PSD, so the
/// maximization is written with c' = -c and F0' = -F0.
inline std::string export_sdpa(const SdpProblem& problem) {
  SdpProblem p = problem;
  p.validate();
  p.normalize();
  std::string out;
  out += std::to_string(p.m) + "\n";
  out += std::to_string(p.block_sizes.size()) + "\n";
  for (std::size_t b = 0; b < p.block_sizes.size(); ++b) {
    if (b) out += " ";
    out += std::to_string(p.block_sizes[b]);
  }
  out += "\n";
  for (int k = 0; k < p.m; ++k) {
    if (k) out += " ";
    out += detail::format_double(p.c[k] == 0.0 ? 0.0 : -p.c[k]);
  }
  out += "\n";
  for (int k = 0; k <= p.m; ++k) {
    for (const auto& e : p.matrices[k]) {
      const double v = k == 0 ? -e.value : e.value;
      out += std::to_string(k) + " " + std::to_string(e.block + 1) + " " + std::to_string(e.i + 1) + " " +
             std::to_string(e.j + 1) + " " + detail::format_double(v) + "\n";
    }
  }
  return out;
}

/// Inverse of export_sdpa. Accepts the usual SDPA punctuation ({ } ( ) ,) and '"'/'*' comment lines.
inline SdpProblem parse_sdpa(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& what) -> Error {
    return Error(ErrorKind::parse_error, "line " + std::to_string(line_no) + ": " + what);
  };
  auto next_line = [&](std::string& out) {
    while (std::getline(in, out)) {
      ++line_no;
      auto first = out.find_first_not_of(" \t\r");
      if (first == std::string::npos || out[first] == '"' || out[first] == '*') continue;
      for (char& ch : out)
        if (ch == '{' || ch == '}' || ch == '(' || ch == ')' || ch == ',') ch = ' ';
      return true;
    }
    return false;
  };
  SdpProblem p;
  int nblocks = 0;
  if (!next_line(line) || !(std::istringstream(line) >> p.m) || p.m < 0) throw fail("expected variable count");
  if (!next_line(line) || !(std::istringstream(line) >> nblocks) || nblocks < 1) throw fail("expected block count");
  if (!next_line(line)) throw fail("expected block sizes");
  {
    std::istringstream row(line);
    for (int b = 0, s = 0; b < nblocks; ++b) {
      if (!(row >> s) || s == 0) throw fail("bad block size");
      p.block_sizes.push_back(s);
    }
  }
  p.c.assign(p.m, 0.0);
  {
    int read = 0;
    while (read < p.m) {
      if (!next_line(line)) throw fail("objective vector truncated");
      std::istringstream row(line);
      double v;
      while (read < p.m && row >> v) p.c[read++] = v == 0.0 ? 0.0 : -v;
    }
  }
  p.matrices.assign(p.m + 1, {});
  while (next_line(line)) {
    std::istringstream row(line);
    int k, b, i, j;
    double v;
    if (!(row >> k >> b >> i >> j >> v)) throw fail("expected 'matno block i j value'");
    if (k < 0 || k > p.m || b < 1 || b > nblocks || i < 1 || j < 1) throw fail("entry index out of range");
    if (i > j) std::swap(i, j);
    p.matrices[k].push_back({b - 1, i - 1, j - 1, k == 0 ? -v : v});
  }
  p.validate();
  p.normalize();
  return p;
}

/// Reads an SDPA result file. Only objValPrimal/objValDual are required; phase.value and
/// xVec are used when present. Values are mapped back to the maximization convention.
inline SdpSolution import_sdpa_solution(const std::string& text, double tol = 1e-6) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool have_p = false, have_d = false;
  double obj_p = 0, obj_d = 0;
  std::string phase;
  SdpSolution sol;
  sol.solver = "sdpa-file";
  auto value_after = [&](const std::string& l) {
    const auto eq = l.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::parse_error, "line " + std::to_string(line_no) + ": missing '='");
    return l.substr(eq + 1);
  };
  auto parse_number = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      double v = std::stod(s, &used);
      return v;
    } catch (const std::exception&) {
      throw Error(ErrorKind::parse_error, "line " + std::to_string(line_no) + ": bad number '" + s + "'");
    }
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.rfind("objValPrimal", 0) == 0) {
      obj_p = parse_number(value_after(line));
      have_p = true;
    } else if (line.rfind("objValDual", 0) == 0) {
      obj_d = parse_number(value_after(line));
      have_d = true;
    } else if (line.rfind("phase.value", 0) == 0) {
      std::istringstream(value_after(line)) >> phase;
    } else if (line.rfind("xVec", 0) == 0) {
      std::string body;
      if (!std::getline(in, body)) throw Error(ErrorKind::parse_error, "line " + std::to_string(line_no) + ": xVec truncated");
      ++line_no;
      for (char& ch : body)
        if (ch == '{' || ch == '}' || ch == ',') ch = ' ';
      std::istringstream row(body);
      double v;
      while (row >> v) sol.x.push_back(v);
    }
  }
  if (line_no == 0) throw Error(ErrorKind::parse_error, "line 0: empty solution file");
  if (!have_p || !have_d) {
    throw Error(ErrorKind::parse_error, "line " + std::to_string(line_no) + ": objValPrimal/objValDual not found");
  }
  sol.primal = -obj_p;
  sol.dual = -obj_d;
  sol.gap = sol.dual - sol.primal;
  const double rel = std::abs(sol.gap) / (1.0 + std::abs(sol.primal) + std::abs(sol.dual));
  if (phase == "pINF" || phase == "pINF_dFEAS") {
    sol.status = SdpStatus::infeasible;
  } else if (phase == "dINF" || phase == "pFEAS_dINF") {
    sol.status = SdpStatus::unbounded;
  } else if (phase == "pdINF" || phase == "noINFO") {
    sol.status = SdpStatus::failed;
  } else {
    sol.status = rel <= tol ? SdpStatus::optimal : SdpStatus::near_optimal;
  }
  sol.diagnostics = phase;
  return sol;
}

/// Writes `stem`.dat-s into `workdir`, runs `command <in> <out>` and reads the result back.
inline SdpSolution solve_external(const SdpProblem& p, const std::string& command,
                                  const std::filesystem::path& workdir, const std::string& stem = "problem") {
  std::filesystem::create_directories(workdir);
  const auto in = workdir / (stem + ".dat-s");
  const auto out = workdir / (stem + ".out");
  {
    std::ofstream f(in, std::ios::binary);
    f << export_sdpa(p);
    if (!f) throw Error(ErrorKind::solver_failure, "cannot write " + in.string());
  }
  std::filesystem::remove(out);
  const std::string cmd = command + " \"" + in.string() + "\" \"" + out.string() + "\" > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  std::ifstream f(out);
  if (rc != 0 || !f) {
    throw Error(ErrorKind::solver_failure, "external solver '" + command + "' failed (exit " + std::to_string(rc) +
                                               "); set BELLTASKS_SDPA_COMMAND or use --solver embedded");
  }
  std::stringstream text;
  text << f.rdbuf();
  SdpSolution sol = import_sdpa_solution(text.str());
  sol.solver = command;
  return sol;
}

}  // namespace belltasks
