// Copyright 2026 The vcsplab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Exact rational linear programming.
//
// solve_lp runs a two-phase bounded-variable primal simplex with Bland's
// rule on a dense tableau. Every outcome carries a certificate expressed in
// terms of the caller's program (rows and bounds), and every certificate is
// re-verified by exact substitution before it is returned:
//
//   Optimal     primal x and row multipliers y with reduced costs
//               d = c - A^T y; the dual bound y.b + sum d_j * (bound of x_j)
//               equals c.x.
//   Infeasible  row multipliers y whose combination (A^T y) x <= y.b holds for
//               every feasible x, yet min over the bound box of (A^T y) x
//               exceeds y.b.
//   Unbounded   feasible x plus a ray r that keeps every row and bound
//               satisfied while c.r < 0.

#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "vcsplab/errors.hpp"
#include "vcsplab/rational.hpp"

namespace vcsplab {

enum class Relation { LessEq, Equal, GreaterEq };

struct LpRow {
  std::vector<Rational> coeffs;
  Relation relation = Relation::Equal;
  Rational rhs = 0;
};

/// minimize objective . x subject to rows and per-variable bounds.
/// Variables default to x >= 0 with no upper bound.
struct LinearProgram {
  std::size_t num_vars = 0;
  std::vector<Rational> objective;
  std::vector<LpRow> rows;
  std::vector<std::optional<Rational>> lower;
  std::vector<std::optional<Rational>> upper;

  LinearProgram() = default;
  explicit LinearProgram(std::size_t n)
      : num_vars(n), objective(n), lower(n, Rational(0)), upper(n) {}

  void add_row(std::vector<Rational> coeffs, Relation rel, Rational rhs) {
    if (coeffs.size() != num_vars) throw std::invalid_argument("row length differs from variable count");
    rows.push_back(LpRow{std::move(coeffs), rel, std::move(rhs)});
  }

  void set_bounds(std::size_t j, std::optional<Rational> lo, std::optional<Rational> hi) {
    lower.at(j) = std::move(lo);
    upper.at(j) = std::move(hi);
  }

  void validate() const {
    if (objective.size() != num_vars && !objective.empty())
      throw std::invalid_argument("objective length differs from variable count");
    if (lower.size() != num_vars || upper.size() != num_vars)
      throw std::invalid_argument("bounds length differs from variable count");
    for (const auto& r : rows)
      if (r.coeffs.size() != num_vars) throw std::invalid_argument("row length differs from variable count");
    for (std::size_t j = 0; j < num_vars; ++j)
      if (lower[j] && upper[j] && *lower[j] > *upper[j])
        throw std::invalid_argument("variable " + std::to_string(j) + " has lower bound above upper bound");
  }

  const Rational& cost(std::size_t j) const {
    static const Rational zero(0);
    return objective.empty() ? zero : objective[j];
  }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "?";
}

struct LpOutcome {
  LpStatus status = LpStatus::Infeasible;
  Rational value = 0;                // Optimal
  std::vector<Rational> primal;      // Optimal, Unbounded (a feasible point)
  std::vector<Rational> dual;        // Optimal: one multiplier per row
  std::vector<Rational> farkas;      // Infeasible: one multiplier per row
  std::vector<Rational> ray;         // Unbounded
  std::size_t pivots = 0;
};

// ---------------------------------------------------------------------------
// Certificate checks. Each returns an empty string when the certificate is
// valid and a description of the first failure otherwise.

namespace detail {

inline Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (sgn(a[i]) != 0 && sgn(b[i]) != 0) s += a[i] * b[i];
  return s;
}

inline bool relation_holds(const Rational& lhs, Relation rel, const Rational& rhs) {
  switch (rel) {
    case Relation::LessEq: return lhs <= rhs;
    case Relation::Equal: return lhs == rhs;
    case Relation::GreaterEq: return lhs >= rhs;
  }
  return false;
}

// A multiplier y on a row is admissible for combining into "<=" form when
// y >= 0 on <= rows and y <= 0 on >= rows.
inline bool farkas_sign_ok(Relation rel, const Rational& y) {
  if (rel == Relation::LessEq) return sgn(y) >= 0;
  if (rel == Relation::GreaterEq) return sgn(y) <= 0;
  return true;
}

}  // namespace detail

inline std::string check_feasible(const LinearProgram& p, const std::vector<Rational>& x) {
  if (x.size() != p.num_vars) return "point has wrong dimension";
  for (std::size_t j = 0; j < p.num_vars; ++j) {
    if (p.lower[j] && x[j] < *p.lower[j]) return "x" + std::to_string(j) + " below lower bound";
    if (p.upper[j] && x[j] > *p.upper[j]) return "x" + std::to_string(j) + " above upper bound";
  }
  for (std::size_t i = 0; i < p.rows.size(); ++i)
    if (!detail::relation_holds(detail::dot(p.rows[i].coeffs, x), p.rows[i].relation, p.rows[i].rhs))
      return "row " + std::to_string(i) + " violated";
  return {};
}

inline std::string check_certificate(const LinearProgram& p, const LpOutcome& o) {
  using detail::dot;
  const std::size_t n = p.num_vars, m = p.rows.size();
  switch (o.status) {
    case LpStatus::Optimal: {
      if (auto e = check_feasible(p, o.primal); !e.empty()) return "primal: " + e;
      Rational cx = 0;
      for (std::size_t j = 0; j < n; ++j) cx += p.cost(j) * o.primal[j];
      if (cx != o.value) return "reported value differs from c.x";
      if (o.dual.size() != m) return "dual has wrong dimension";
      Rational bound = 0;
      for (std::size_t i = 0; i < m; ++i) {
        // Minimization: <= rows need y <= 0, >= rows need y >= 0.
        if (p.rows[i].relation == Relation::LessEq && sgn(o.dual[i]) > 0) return "dual sign on <= row";
        if (p.rows[i].relation == Relation::GreaterEq && sgn(o.dual[i]) < 0) return "dual sign on >= row";
        bound += o.dual[i] * p.rows[i].rhs;
      }
      for (std::size_t j = 0; j < n; ++j) {
        Rational dj = p.cost(j);
        for (std::size_t i = 0; i < m; ++i)
          if (sgn(o.dual[i]) != 0) dj -= o.dual[i] * p.rows[i].coeffs[j];
        if (sgn(dj) > 0) {
          if (!p.lower[j]) return "positive reduced cost on variable without lower bound";
          bound += dj * *p.lower[j];
        } else if (sgn(dj) < 0) {
          if (!p.upper[j]) return "negative reduced cost on variable without upper bound";
          bound += dj * *p.upper[j];
        }
      }
      if (bound != o.value) return "dual bound " + to_string(bound) + " differs from value " + to_string(o.value);
      return {};
    }
    case LpStatus::Infeasible: {
      if (o.farkas.size() != m) return "farkas vector has wrong dimension";
      Rational yb = 0;
      for (std::size_t i = 0; i < m; ++i) {
        if (!detail::farkas_sign_ok(p.rows[i].relation, o.farkas[i])) return "farkas sign";
        yb += o.farkas[i] * p.rows[i].rhs;
      }
      Rational box_min = 0;
      for (std::size_t j = 0; j < n; ++j) {
        Rational dj = 0;
        for (std::size_t i = 0; i < m; ++i)
          if (sgn(o.farkas[i]) != 0) dj += o.farkas[i] * p.rows[i].coeffs[j];
        if (sgn(dj) > 0) {
          if (!p.lower[j]) return "farkas combination unbounded below";
          box_min += dj * *p.lower[j];
        } else if (sgn(dj) < 0) {
          if (!p.upper[j]) return "farkas combination unbounded below";
          box_min += dj * *p.upper[j];
        }
      }
      if (!(box_min > yb)) return "farkas combination shows no violation";
      return {};
    }
    case LpStatus::Unbounded: {
      if (auto e = check_feasible(p, o.primal); !e.empty()) return "point: " + e;
      if (o.ray.size() != n) return "ray has wrong dimension";
      Rational cr = 0;
      for (std::size_t j = 0; j < n; ++j) {
        cr += p.cost(j) * o.ray[j];
        if (sgn(o.ray[j]) > 0 && p.upper[j]) return "ray leaves upper bound";
        if (sgn(o.ray[j]) < 0 && p.lower[j]) return "ray leaves lower bound";
      }
      if (!(sgn(cr) < 0)) return "ray does not improve the objective";
      for (std::size_t i = 0; i < m; ++i)
        if (!detail::relation_holds(dot(p.rows[i].coeffs, o.ray), p.rows[i].relation, Rational(0)))
          return "ray violates row " + std::to_string(i);
      return {};
    }
  }
  return "unknown status";
}

// ---------------------------------------------------------------------------

namespace detail {

// Internal standard form: min c.x, A x = b (b >= 0), 0 <= x <= ub.
class BoundedSimplex {
 public:
  enum class Result { Optimal, Unbounded };

  std::size_t rows = 0, cols = 0;
  std::vector<std::vector<Rational>> tab;  // B^-1 A
  std::vector<Rational> xb;                // values of basic variables
  std::vector<std::size_t> basis;          // column basic in each row
  std::vector<long> pos;                   // row of a basic column, -1 otherwise
  std::vector<bool> at_upper;
  std::vector<std::optional<Rational>> ub;
  std::vector<bool> can_enter;
  std::vector<Rational> cost, red;  // costs and reduced costs
  std::size_t pivots = 0;
  std::size_t unbounded_col = 0;

  void reset_costs(std::vector<Rational> c) {
    cost = std::move(c);
    red = cost;
    for (std::size_t i = 0; i < rows; ++i) {
      const Rational& cb = cost[basis[i]];
      if (sgn(cb) == 0) continue;
      for (std::size_t j = 0; j < cols; ++j)
        if (sgn(tab[i][j]) != 0) red[j] -= cb * tab[i][j];
    }
  }

  Rational objective() const {
    Rational v = 0;
    for (std::size_t i = 0; i < rows; ++i) v += cost[basis[i]] * xb[i];
    for (std::size_t j = 0; j < cols; ++j)
      if (pos[j] < 0 && at_upper[j]) v += cost[j] * *ub[j];
    return v;
  }

  Rational value_of(std::size_t j) const {
    if (pos[j] >= 0) return xb[static_cast<std::size_t>(pos[j])];
    return at_upper[j] ? *ub[j] : Rational(0);
  }

  Result run() {
    for (;;) {
      std::size_t q = cols;
      for (std::size_t j = 0; j < cols; ++j) {
        if (pos[j] >= 0 || !can_enter[j]) continue;
        const int s = sgn(red[j]);
        if (!at_upper[j] && s < 0 && (!ub[j] || sgn(*ub[j]) > 0)) { q = j; break; }
        if (at_upper[j] && s > 0) { q = j; break; }
      }
      if (q == cols) return Result::Optimal;
      const int dir = at_upper[q] ? -1 : 1;

      // Ratio test; ties go to the smallest basic column index.
      std::optional<Rational> best;
      std::size_t leave = rows;
      Rational limit;
      for (std::size_t i = 0; i < rows; ++i) {
        const int s = sgn(tab[i][q]) * dir;
        if (s == 0) continue;
        if (s > 0) {
          limit = xb[i] / tab[i][q];
          if (dir < 0) limit = -limit;
        } else {
          const auto& u = ub[basis[i]];
          if (!u) continue;
          limit = (*u - xb[i]) / tab[i][q];
          if (dir > 0) limit = -limit;
        }
        if (!best || limit < *best || (limit == *best && basis[i] < basis[leave])) {
          best = limit;
          leave = i;
        }
      }

      if (ub[q] && (!best || *ub[q] <= *best)) {
        // Bound flip: the entering variable reaches its opposite bound first.
        const Rational step = *ub[q];
        for (std::size_t i = 0; i < rows; ++i)
          if (sgn(tab[i][q]) != 0) {
            if (dir > 0) xb[i] -= step * tab[i][q];
            else xb[i] += step * tab[i][q];
          }
        at_upper[q] = !at_upper[q];
        ++pivots;
        continue;
      }
      if (!best) {
        unbounded_col = q;
        return Result::Unbounded;
      }

      const Rational theta = *best;
      for (std::size_t i = 0; i < rows; ++i)
        if (sgn(tab[i][q]) != 0) {
          if (dir > 0) xb[i] -= theta * tab[i][q];
          else xb[i] += theta * tab[i][q];
        }
      const std::size_t out = basis[leave];
      const int s_out = sgn(tab[leave][q]) * dir;
      Rational entering_value = dir > 0 ? theta : *ub[q] - theta;
      pivot(leave, q);
      xb[leave] = std::move(entering_value);
      pos[out] = -1;
      at_upper[out] = s_out < 0;  // increased to its upper bound
      at_upper[q] = false;
    }
  }

  void pivot(std::size_t r, std::size_t q) {
    ++pivots;
    auto& prow = tab[r];
    const Rational piv = prow[q];
    std::vector<std::size_t> nz;
    for (std::size_t j = 0; j < cols; ++j)
      if (sgn(prow[j]) != 0) {
        prow[j] /= piv;
        nz.push_back(j);
      }
    Rational f;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || sgn(tab[i][q]) == 0) continue;
      f = tab[i][q];
      auto& row = tab[i];
      for (std::size_t j : nz) row[j] -= f * prow[j];
    }
    if (sgn(red[q]) != 0) {
      f = red[q];
      for (std::size_t j : nz) red[j] -= f * prow[j];
    }
    basis[r] = q;
    pos[q] = static_cast<long>(r);
  }
};

}  // namespace detail

inline LpOutcome solve_lp(const LinearProgram& program) {
  program.validate();
  const std::size_t n = program.num_vars, m = program.rows.size();

  // Column substitution: x = lower + x', x = upper - x', or x = x+ - x-.
  enum class Sub { Shift, Negate, Split };
  std::vector<Sub> sub(n);
  std::vector<std::size_t> col_of(n);
  std::vector<std::optional<Rational>> ub;
  std::vector<Rational> c_int;
  Rational c_const = 0;
  for (std::size_t j = 0; j < n; ++j) {
    col_of[j] = ub.size();
    const Rational& cj = program.cost(j);
    if (program.lower[j]) {
      sub[j] = Sub::Shift;
      ub.push_back(program.upper[j] ? std::optional<Rational>(*program.upper[j] - *program.lower[j]) : std::nullopt);
      c_int.push_back(cj);
      c_const += cj * *program.lower[j];
    } else if (program.upper[j]) {
      sub[j] = Sub::Negate;
      ub.emplace_back();
      c_int.push_back(-cj);
      c_const += cj * *program.upper[j];
    } else {
      sub[j] = Sub::Split;
      ub.emplace_back();
      ub.emplace_back();
      c_int.push_back(cj);
      c_int.push_back(-cj);
    }
  }
  const std::size_t n_struct = ub.size();

  std::vector<int> row_sign(m, 1);
  std::vector<std::vector<Rational>> a_int(m, std::vector<Rational>(n_struct));
  std::vector<Rational> b_int(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& row = program.rows[i];
    Rational rhs = row.rhs;
    for (std::size_t j = 0; j < n; ++j) {
      const Rational& a = row.coeffs[j];
      if (sgn(a) == 0) continue;
      switch (sub[j]) {
        case Sub::Shift:
          a_int[i][col_of[j]] = a;
          rhs -= a * *program.lower[j];
          break;
        case Sub::Negate:
          a_int[i][col_of[j]] = -a;
          rhs -= a * *program.upper[j];
          break;
        case Sub::Split:
          a_int[i][col_of[j]] = a;
          a_int[i][col_of[j] + 1] = -a;
          break;
      }
    }
    b_int[i] = rhs;
    if (sgn(rhs) < 0) row_sign[i] = -1;
  }

  // Slack columns follow structurals, artificials follow slacks.
  std::vector<long> slack_col(m, -1);
  std::size_t cols = n_struct;
  for (std::size_t i = 0; i < m; ++i)
    if (program.rows[i].relation != Relation::Equal) slack_col[i] = static_cast<long>(cols++);
  std::vector<long> art_col(m, -1);
  std::vector<std::size_t> init_col(m);
  const std::size_t first_art = cols;
  for (std::size_t i = 0; i < m; ++i) {
    const int slack_coef = program.rows[i].relation == Relation::LessEq ? 1 : -1;
    if (slack_col[i] >= 0 && slack_coef * row_sign[i] > 0) {
      init_col[i] = static_cast<std::size_t>(slack_col[i]);
    } else {
      art_col[i] = static_cast<long>(cols);
      init_col[i] = cols++;
    }
  }

  detail::BoundedSimplex s;
  s.rows = m;
  s.cols = cols;
  s.tab.assign(m, std::vector<Rational>(cols));
  s.xb.resize(m);
  s.basis.resize(m);
  s.pos.assign(cols, -1);
  s.at_upper.assign(cols, false);
  s.ub = ub;
  s.ub.resize(cols);
  s.can_enter.assign(cols, true);
  for (std::size_t i = 0; i < m; ++i) {
    const int sg = row_sign[i];
    for (std::size_t j = 0; j < n_struct; ++j)
      if (sgn(a_int[i][j]) != 0) s.tab[i][j] = sg > 0 ? a_int[i][j] : Rational(-a_int[i][j]);
    if (slack_col[i] >= 0)
      s.tab[i][static_cast<std::size_t>(slack_col[i])] =
          (program.rows[i].relation == Relation::LessEq ? 1 : -1) * sg;
    if (art_col[i] >= 0) s.tab[i][static_cast<std::size_t>(art_col[i])] = 1;
    s.xb[i] = sg > 0 ? b_int[i] : Rational(-b_int[i]);
    s.basis[i] = init_col[i];
    s.pos[init_col[i]] = static_cast<long>(i);
  }

  LpOutcome out;
  auto row_multipliers = [&](int orientation) {
    std::vector<Rational> y(m);
    for (std::size_t i = 0; i < m; ++i) {
      Rational yi = s.cost[init_col[i]] - s.red[init_col[i]];
      y[i] = orientation * row_sign[i] > 0 ? yi : Rational(-yi);
    }
    return y;
  };
  auto to_original = [&](auto&& internal_value) {
    std::vector<Rational> x(n);
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t c = col_of[j];
      switch (sub[j]) {
        case Sub::Shift: x[j] = internal_value(c); break;
        case Sub::Negate: x[j] = -internal_value(c); break;
        case Sub::Split: x[j] = internal_value(c) - internal_value(c + 1); break;
      }
    }
    return x;
  };
  auto original_point = [&]() {
    auto x = to_original([&](std::size_t c) { return s.value_of(c); });
    for (std::size_t j = 0; j < n; ++j) {
      if (sub[j] == Sub::Shift) x[j] += *program.lower[j];
      if (sub[j] == Sub::Negate) x[j] += *program.upper[j];
    }
    return x;
  };

  if (first_art < cols) {
    std::vector<Rational> c1(cols);
    for (std::size_t j = first_art; j < cols; ++j) c1[j] = 1;
    s.reset_costs(std::move(c1));
    s.run();
    if (sgn(s.objective()) > 0) {
      out.status = LpStatus::Infeasible;
      out.farkas = row_multipliers(-1);
      out.pivots = s.pivots;
      if (auto err = check_certificate(program, out); !err.empty())
        throw VerificationFailure("infeasibility certificate rejected: " + err);
      return out;
    }
    for (std::size_t j = first_art; j < cols; ++j) {
      s.ub[j] = Rational(0);
      s.can_enter[j] = false;
    }
  }

  std::vector<Rational> c2(cols);
  std::copy(c_int.begin(), c_int.end(), c2.begin());
  s.reset_costs(std::move(c2));
  const auto result = s.run();
  out.pivots = s.pivots;
  out.primal = original_point();
  if (result == detail::BoundedSimplex::Result::Unbounded) {
    const std::size_t q = s.unbounded_col;
    std::vector<Rational> dir(cols);
    dir[q] = 1;
    for (std::size_t i = 0; i < m; ++i)
      if (sgn(s.tab[i][q]) != 0) dir[s.basis[i]] = -s.tab[i][q];
    out.status = LpStatus::Unbounded;
    out.ray = to_original([&](std::size_t c) { return dir[c]; });
  } else {
    out.status = LpStatus::Optimal;
    out.value = s.objective() + c_const;
    out.dual = row_multipliers(1);
  }
  if (auto err = check_certificate(program, out); !err.empty())
    throw VerificationFailure(std::string(to_string(out.status)) + " certificate rejected: " + err);
  return out;
}

// ---------------------------------------------------------------------------
// Row generation for programs with many rows that are cheap to enumerate.
//
// `separate` receives the optimal point of the current restriction and
// returns rows it violates (empty when the point is feasible for the full
// system). Duals of the final restriction are duals of the full program with
// zeros on rows never generated. The restricted programs must stay bounded.

struct LazySolve {
  LinearProgram program;  // the final restriction
  LpOutcome outcome;
  std::size_t rounds = 0;
};

using RowSeparator = std::function<std::vector<LpRow>(const std::vector<Rational>&)>;

inline LazySolve solve_lp_lazy(LinearProgram base, const RowSeparator& separate,
                               std::size_t max_rounds = 100000) {
  LazySolve ls{std::move(base), {}, 0};
  for (;;) {
    ls.outcome = solve_lp(ls.program);
    ++ls.rounds;
    if (ls.outcome.status == LpStatus::Infeasible) return ls;
    if (ls.outcome.status == LpStatus::Unbounded)
      throw std::logic_error("row generation needs bounded restrictions");
    auto cuts = separate(ls.outcome.primal);
    if (cuts.empty()) return ls;
    if (ls.rounds >= max_rounds) throw std::runtime_error("row generation did not converge");
    for (auto& r : cuts) ls.program.add_row(std::move(r.coeffs), r.relation, std::move(r.rhs));
  }
}

// ---------------------------------------------------------------------------
// Motzkin-style alternative over y >= 0:
//   either  A y > 0 (every row), B y >= 0
//   or      z1 >= 0 nonzero, z2 >= 0 with A^T z1 + B^T z2 <= 0.

using Matrix = std::vector<std::vector<Rational>>;

struct AlternativeSystem {
  std::size_t num_vars = 0;
  Matrix strict;  // A
  Matrix weak;    // B
};

struct StrictSolution {
  std::vector<Rational> y;
};

struct DualCertificate {
  std::vector<Rational> z_strict;  // z1, normalized to sum 1
  std::vector<Rational> z_weak;    // z2
};

using AlternativeResult = std::variant<StrictSolution, DualCertificate>;

inline std::string check_strict_solution(const AlternativeSystem& sys, const StrictSolution& s) {
  if (s.y.size() != sys.num_vars) return "y has wrong dimension";
  for (const auto& v : s.y)
    if (sgn(v) < 0) return "y has a negative entry";
  for (const auto& row : sys.strict)
    if (!(sgn(detail::dot(row, s.y)) > 0)) return "strict row not positive";
  for (const auto& row : sys.weak)
    if (sgn(detail::dot(row, s.y)) < 0) return "weak row negative";
  return {};
}

inline std::string check_dual_certificate(const AlternativeSystem& sys, const DualCertificate& c) {
  if (c.z_strict.size() != sys.strict.size() || c.z_weak.size() != sys.weak.size())
    return "certificate has wrong dimension";
  bool nonzero = false;
  for (const auto& v : c.z_strict) {
    if (sgn(v) < 0) return "z1 has a negative entry";
    if (sgn(v) > 0) nonzero = true;
  }
  if (!nonzero) return "z1 is zero";
  for (const auto& v : c.z_weak)
    if (sgn(v) < 0) return "z2 has a negative entry";
  for (std::size_t j = 0; j < sys.num_vars; ++j) {
    Rational s = 0;
    for (std::size_t i = 0; i < sys.strict.size(); ++i)
      if (sgn(c.z_strict[i]) != 0) s += c.z_strict[i] * sys.strict[i][j];
    for (std::size_t i = 0; i < sys.weak.size(); ++i)
      if (sgn(c.z_weak[i]) != 0) s += c.z_weak[i] * sys.weak[i][j];
    if (sgn(s) > 0) return "combination positive in column " + std::to_string(j);
  }
  return {};
}

// Maximizes t subject to A y >= t, B y >= 0, sum y <= 1, t <= 1, y >= 0.
// The first branch holds iff the optimum is positive; otherwise the row
// duals of the A and B blocks are the certificate. Rows of B enter lazily,
// most violated first, so large weak blocks stay cheap.
inline AlternativeResult motzkin_alternative(const AlternativeSystem& sys, std::size_t rows_per_round = 64) {
  if (sys.strict.empty()) throw std::invalid_argument("alternative system needs a strict block");
  for (const auto& r : sys.strict)
    if (r.size() != sys.num_vars) throw std::invalid_argument("strict row length mismatch");
  for (const auto& r : sys.weak)
    if (r.size() != sys.num_vars) throw std::invalid_argument("weak row length mismatch");

  const std::size_t n = sys.num_vars;
  const std::size_t t = n;
  LinearProgram lp(n + 1);
  lp.objective[t] = -1;
  lp.set_bounds(t, std::nullopt, Rational(1));
  std::vector<Rational> norm(n + 1, Rational(1));
  norm[t] = 0;
  lp.add_row(std::move(norm), Relation::LessEq, 1);
  for (const auto& r : sys.strict) {
    std::vector<Rational> row(r);
    row.push_back(-1);
    lp.add_row(std::move(row), Relation::GreaterEq, 0);
  }

  std::vector<std::size_t> generated;  // weak row index of each appended LP row
  std::vector<bool> present(sys.weak.size(), false);
  auto separate = [&](const std::vector<Rational>& x) {
    std::vector<std::pair<Rational, std::size_t>> violated;
    for (std::size_t i = 0; i < sys.weak.size(); ++i) {
      if (present[i]) continue;
      Rational s = 0;
      for (std::size_t j = 0; j < n; ++j)
        if (sgn(x[j]) != 0 && sgn(sys.weak[i][j]) != 0) s += sys.weak[i][j] * x[j];
      if (sgn(s) < 0) violated.emplace_back(s, i);
    }
    std::stable_sort(violated.begin(), violated.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    if (violated.size() > rows_per_round) violated.resize(rows_per_round);
    std::vector<LpRow> cuts;
    for (const auto& [s, i] : violated) {
      std::vector<Rational> row(sys.weak[i]);
      row.push_back(0);
      cuts.push_back(LpRow{std::move(row), Relation::GreaterEq, 0});
      generated.push_back(i);
      present[i] = true;
    }
    return cuts;
  };
  const LazySolve ls = solve_lp_lazy(std::move(lp), separate);
  const LpOutcome& o = ls.outcome;
  if (o.status != LpStatus::Optimal) throw std::logic_error("alternative program must have an optimum");

  if (sgn(o.primal[t]) > 0) {
    StrictSolution s{std::vector<Rational>(o.primal.begin(), o.primal.begin() + static_cast<std::ptrdiff_t>(n))};
    if (auto e = check_strict_solution(sys, s); !e.empty()) throw VerificationFailure("alternative: " + e);
    return s;
  }
  DualCertificate c;
  const std::size_t first_strict = 1, first_weak = 1 + sys.strict.size();
  c.z_strict.assign(o.dual.begin() + static_cast<std::ptrdiff_t>(first_strict),
                    o.dual.begin() + static_cast<std::ptrdiff_t>(first_weak));
  c.z_weak.assign(sys.weak.size(), Rational(0));
  for (std::size_t g = 0; g < generated.size(); ++g) c.z_weak[generated[g]] = o.dual[first_weak + g];
  if (auto e = check_dual_certificate(sys, c); !e.empty()) throw VerificationFailure("alternative: " + e);
  return c;
}

// ---------------------------------------------------------------------------
// Plain-text dump in the CPLEX LP layout with exact "p/q" coefficients.

inline std::string to_lp_text(const LinearProgram& p) {
  std::ostringstream os;
  auto term = [&](const Rational& a, std::size_t j, bool& first) {
    if (sgn(a) == 0) return;
    if (sgn(a) < 0) os << (first ? "- " : " - ");
    else if (!first) os << " + ";
    Rational mag = abs(a);
    if (mag != 1) os << to_string(mag) << ' ';
    os << 'x' << j;
    first = false;
  };
  os << "Minimize\n obj: ";
  bool first = true;
  for (std::size_t j = 0; j < p.num_vars; ++j) term(p.cost(j), j, first);
  if (first) os << "0";
  os << "\nSubject To\n";
  for (std::size_t i = 0; i < p.rows.size(); ++i) {
    os << " c" << i << ": ";
    first = true;
    for (std::size_t j = 0; j < p.num_vars; ++j) term(p.rows[i].coeffs[j], j, first);
    if (first) os << "0 x0";
    switch (p.rows[i].relation) {
      case Relation::LessEq: os << " <= "; break;
      case Relation::Equal: os << " = "; break;
      case Relation::GreaterEq: os << " >= "; break;
    }
    os << to_string(p.rows[i].rhs) << '\n';
  }
  os << "Bounds\n";
  for (std::size_t j = 0; j < p.num_vars; ++j) {
    const auto& lo = p.lower[j];
    const auto& hi = p.upper[j];
    os << ' ';
    if (lo) os << to_string(*lo) << " <= ";
    else os << "-inf <= ";
    os << 'x' << j;
    if (hi) os << " <= " << to_string(*hi);
    os << '\n';
  }
  os << "End\n";
  return os.str();
}

}  // namespace vcsplab
