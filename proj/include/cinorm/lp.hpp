#pragma once
// Exact rational linear programming: a dense two-phase simplex with
// Bland's anti-cycling rule. Returns primal and dual solutions together
// and refuses to return an "optimal" answer that fails an exact internal
// strong-duality and feasibility audit.
//
// Determinism: entering variable = lowest-index column with a negative
// reduced cost; leaving row = lowest ratio, ties broken by lowest basic
// variable index. Identical programs therefore produce identical pivot
// sequences and identical output.
//
// Dual vector convention: one multiplier per constraint, in input order.
// For a Minimize program, y_i >= 0 on >= rows, y_i <= 0 on <= rows, free on
// equalities; for Maximize the signs flip. For a program whose variables
// all carry the default bounds (x >= 0, no upper bound), the optimal value
// equals sum_i dual[i] * rhs[i] exactly.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace cinorm {

enum class Sense { Minimize, Maximize };
enum class Rel { LessEq, Equal, GreaterEq };
enum class LPStatus { Optimal, Infeasible, Unbounded };

struct Constraint {
  std::vector<Rat> coef;
  Rel rel = Rel::LessEq;
  Rat rhs = 0;
};

struct VariableBounds {
  std::optional<Rat> lower = Rat(0);  // default: nonnegative
  std::optional<Rat> upper;           // default: unbounded above
};

struct LinearProgram {
  std::size_t num_vars = 0;
  Sense sense = Sense::Minimize;
  std::vector<Rat> objective;          // length num_vars
  std::vector<Constraint> constraints;
  std::vector<VariableBounds> bounds;  // empty means all-default

  Constraint& add_constraint(std::vector<Rat> coef, Rel rel, Rat rhs) {
    constraints.push_back(Constraint{std::move(coef), rel, std::move(rhs)});
    return constraints.back();
  }
};

struct LPSolution {
  LPStatus status = LPStatus::Optimal;
  Rat value;                // objective in the original sense
  std::vector<Rat> primal;  // per original variable
  std::vector<Rat> dual;    // per original constraint
};

inline constexpr std::size_t kDefaultLPCellCap = std::size_t{1} << 26;

namespace detail {

// Standard-form simplex working data: min c.x st rows (as equalities with
// slack/surplus), x >= 0, every row owning an artificial column that is
// never allowed to enter the basis (it provides the phase-1 start and the
// dual multiplier readout).
struct Tableau {
  std::size_t rows = 0, cols = 0;      // cols excludes the rhs column
  std::size_t art_begin = 0;           // first artificial column
  std::vector<std::vector<Rat>> a;     // rows x cols
  std::vector<Rat> rhs;                // per row, kept >= 0
  std::vector<Rat> obj;                // reduced-cost row (length cols)
  Rat obj_shift = 0;                   // value = -obj_shift at any point
  std::vector<std::size_t> basis;      // basic column per row

  void pivot(std::size_t prow, std::size_t pcol) {
    std::vector<Rat>& pr = a[prow];
    const Rat pv = pr[pcol];
    if (pv == 0) throw std::logic_error("pivot on zero element");
    if (pv != 1) {
      for (Rat& v : pr)
        if (v != 0) v /= pv;
      rhs[prow] /= pv;
      pr[pcol] = 1;
    }
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == prow) continue;
      const Rat f = a[r][pcol];
      if (f == 0) continue;
      std::vector<Rat>& row = a[r];
      for (std::size_t c = 0; c < cols; ++c)
        if (pr[c] != 0) row[c] -= f * pr[c];
      row[pcol] = 0;
      rhs[r] -= f * rhs[prow];
    }
    const Rat fo = obj[pcol];
    if (fo != 0) {
      for (std::size_t c = 0; c < cols; ++c)
        if (pr[c] != 0) obj[c] -= fo * pr[c];
      obj[pcol] = 0;
      obj_shift -= fo * rhs[prow];
    }
    basis[prow] = pcol;
  }

  // Bland loop; returns false when the current objective is unbounded.
  bool iterate() {
    for (;;) {
      std::size_t enter = cols;
      for (std::size_t c = 0; c < art_begin; ++c)
        if (obj[c] < 0) {
          enter = c;
          break;
        }
      if (enter == cols) return true;  // optimal
      std::size_t leave = rows;
      Rat best_ratio;
      for (std::size_t r = 0; r < rows; ++r) {
        if (a[r][enter] <= 0) continue;
        Rat ratio = rhs[r] / a[r][enter];
        if (leave == rows || ratio < best_ratio ||
            (ratio == best_ratio && basis[r] < basis[leave])) {
          leave = r;
          best_ratio = ratio;
        }
      }
      if (leave == rows) return false;  // unbounded
      pivot(leave, enter);
    }
  }
};

}  // namespace detail

// Solves the program exactly. Throws ValidationError on malformed input and
// CapacityError when the tableau would exceed cell_cap cells.
inline LPSolution solve(const LinearProgram& input, std::size_t cell_cap = kDefaultLPCellCap) {
  // Work on a canonicalized copy: the exact pivoting and audits lean on
  // GMP equality, which is only reliable for canonical rationals.
  LinearProgram lp = input;
  auto canon = [](Rat& v) {
    if (v.get_den() == 0) throw ValidationError("zero denominator in program data");
    v.canonicalize();
  };
  for (Rat& c : lp.objective) canon(c);
  for (Constraint& c : lp.constraints) {
    for (Rat& v : c.coef) canon(v);
    canon(c.rhs);
  }
  for (VariableBounds& b : lp.bounds) {
    if (b.lower) canon(*b.lower);
    if (b.upper) canon(*b.upper);
  }

  const std::size_t n = lp.num_vars;
  if (lp.objective.size() != n) throw ValidationError("objective length mismatch");
  for (const Constraint& c : lp.constraints)
    if (c.coef.size() != n) throw ValidationError("constraint coefficient length mismatch");
  if (!lp.bounds.empty() && lp.bounds.size() != n)
    throw ValidationError("bounds list length mismatch");

  static const VariableBounds kDefault{};
  auto bound_of = [&](std::size_t j) -> const VariableBounds& {
    return lp.bounds.empty() ? kDefault : lp.bounds[j];
  };

  // Internal form: minimize. Map each variable to nonnegative columns.
  const bool maximize = lp.sense == Sense::Maximize;

  struct VarMap {
    std::size_t col;      // primary column
    std::size_t neg_col;  // second column for free variables, else npos
    Rat shift;            // x = shift + sign*(x~)
    int sign;             // +1 or -1
  };
  constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::vector<VarMap> vmap(n);
  std::size_t ncols_struct = 0;
  std::vector<std::pair<std::size_t, Rat>> upper_rows;  // (column, bound) extra rows
  for (std::size_t j = 0; j < n; ++j) {
    const VariableBounds& b = bound_of(j);
    if (b.lower && b.upper && *b.upper < *b.lower)
      return LPSolution{LPStatus::Infeasible, 0, {}, {}};
    if (b.lower) {
      vmap[j] = {ncols_struct++, npos, *b.lower, +1};
      if (b.upper) upper_rows.emplace_back(vmap[j].col, *b.upper - *b.lower);
    } else if (b.upper) {
      vmap[j] = {ncols_struct++, npos, *b.upper, -1};
    } else {
      vmap[j] = {ncols_struct, ncols_struct + 1, 0, +1};
      ncols_struct += 2;
    }
  }

  const std::size_t user_rows = lp.constraints.size();
  const std::size_t nrows = user_rows + upper_rows.size();
  // Columns: structural + one slack/surplus per inequality row + one
  // artificial per row.
  std::size_t slack_count = 0;
  for (const Constraint& c : lp.constraints)
    if (c.rel != Rel::Equal) ++slack_count;
  slack_count += upper_rows.size();
  const std::size_t ncols = ncols_struct + slack_count + nrows;
  if (nrows > 0 && ncols > cell_cap / (nrows + 1))
    throw CapacityError("LP tableau of " + std::to_string(nrows) + "x" +
                        std::to_string(ncols) + " exceeds the cell cap of " +
                        std::to_string(cell_cap));

  detail::Tableau t;
  t.rows = nrows;
  t.cols = ncols;
  t.art_begin = ncols_struct + slack_count;
  t.a.assign(nrows, std::vector<Rat>(ncols, Rat(0)));
  t.rhs.assign(nrows, Rat(0));
  t.basis.assign(nrows, 0);

  // Objective in internal columns (constant part tracked separately).
  std::vector<Rat> cost(ncols, Rat(0));
  Rat cost_const = 0;
  for (std::size_t j = 0; j < n; ++j) {
    Rat cj = lp.objective[j];
    if (maximize) cj = -cj;
    cost_const += cj * vmap[j].shift;
    cost[vmap[j].col] += cj * vmap[j].sign;
    if (vmap[j].neg_col != npos) cost[vmap[j].neg_col] -= cj;
  }

  auto fill_row = [&](std::size_t r, const std::vector<Rat>& coef, Rel rel, const Rat& rhs_in) {
    Rat rhs = rhs_in;
    for (std::size_t j = 0; j < n; ++j) {
      const Rat& aij = coef[j];
      if (aij == 0) continue;
      rhs -= aij * vmap[j].shift;
      t.a[r][vmap[j].col] += aij * vmap[j].sign;
      if (vmap[j].neg_col != npos) t.a[r][vmap[j].neg_col] -= aij;
    }
    bool flip = rhs < 0;
    if (flip) {
      for (std::size_t c = 0; c < ncols_struct; ++c)
        if (t.a[r][c] != 0) t.a[r][c] = -t.a[r][c];
      rhs = -rhs;
      if (rel == Rel::LessEq)
        rel = Rel::GreaterEq;
      else if (rel == Rel::GreaterEq)
        rel = Rel::LessEq;
    }
    t.rhs[r] = rhs;
    return std::make_pair(rel, flip);
  };

  std::vector<int> row_flip(nrows, 0);
  std::size_t next_slack = ncols_struct;
  std::vector<bool> art_basic(nrows, false);
  for (std::size_t r = 0; r < nrows; ++r) {
    Rel rel;
    bool flip;
    if (r < user_rows) {
      const Constraint& c = lp.constraints[r];
      std::tie(rel, flip) = fill_row(r, c.coef, c.rel, c.rhs);
    } else {
      const auto& [col, ub] = upper_rows[r - user_rows];
      t.a[r][col] = 1;
      t.rhs[r] = ub;  // ub >= 0 since upper >= lower was checked
      rel = Rel::LessEq;
      flip = false;
    }
    row_flip[r] = flip ? -1 : 1;
    const std::size_t art = t.art_begin + r;
    t.a[r][art] = 1;
    if (rel == Rel::LessEq) {
      t.a[r][next_slack] = 1;
      t.basis[r] = next_slack++;
    } else if (rel == Rel::GreaterEq) {
      t.a[r][next_slack] = -1;
      ++next_slack;
      t.basis[r] = art;
      art_basic[r] = true;
    } else {
      t.basis[r] = art;
      art_basic[r] = true;
    }
  }

  // Phase 1: minimize the sum of the initially-basic artificials. When all
  // of them already sit at zero the basis is feasible as-is and the pivot
  // loop can be skipped entirely.
  bool positive_artificial = false;
  bool any_artificial = false;
  for (std::size_t r = 0; r < nrows; ++r)
    if (art_basic[r]) {
      any_artificial = true;
      if (t.rhs[r] > 0) positive_artificial = true;
    }
  t.obj.assign(ncols, Rat(0));
  t.obj_shift = 0;
  if (positive_artificial) {
    for (std::size_t r = 0; r < nrows; ++r)
      if (art_basic[r]) {
        // reduced cost of the cost-1 basic artificial: subtract its row
        for (std::size_t c = 0; c < ncols; ++c) t.obj[c] -= t.a[r][c];
        t.obj[t.basis[r]] = 0;
        t.obj_shift -= t.rhs[r];
      }
    if (!t.iterate()) throw std::logic_error("phase 1 unbounded");
    if (-t.obj_shift != 0) return LPSolution{LPStatus::Infeasible, 0, {}, {}};
  }
  if (any_artificial) {
    // Drive still-basic artificials (now all at value zero) out of the
    // basis with degenerate pivots; rows with no nonzero non-artificial
    // coefficient are redundant and stay inert.
    for (std::size_t r = 0; r < nrows; ++r) {
      if (t.basis[r] < t.art_begin) continue;
      for (std::size_t c = 0; c < t.art_begin; ++c)
        if (t.a[r][c] != 0) {
          t.pivot(r, c);
          break;
        }
    }
  }

  // Phase 2: reduced costs of the real objective under the current basis.
  t.obj = cost;
  t.obj_shift = 0;
  for (std::size_t r = 0; r < nrows; ++r) {
    const Rat f = t.obj[t.basis[r]];
    if (f == 0) continue;
    for (std::size_t c = 0; c < ncols; ++c)
      if (t.a[r][c] != 0) t.obj[c] -= f * t.a[r][c];
    t.obj[t.basis[r]] = 0;
    t.obj_shift -= f * t.rhs[r];
  }
  if (!t.iterate()) return LPSolution{LPStatus::Unbounded, 0, {}, {}};

  // Extract the primal point.
  std::vector<Rat> xt(ncols, Rat(0));
  for (std::size_t r = 0; r < nrows; ++r) xt[t.basis[r]] = t.rhs[r];
  std::vector<Rat> primal(n);
  for (std::size_t j = 0; j < n; ++j) {
    Rat v = xt[vmap[j].col];
    if (vmap[j].neg_col != npos) v -= xt[vmap[j].neg_col];
    primal[j] = vmap[j].shift + Rat(vmap[j].sign) * v;
  }

  const Rat internal_value = -t.obj_shift + cost_const;
  Rat value = maximize ? Rat(-internal_value) : internal_value;

  // Dual multipliers from the artificial columns' reduced costs, undoing
  // the row sign flips and the overall sense negation.
  std::vector<Rat> dual(user_rows);
  for (std::size_t r = 0; r < user_rows; ++r) {
    Rat y = Rat(-t.obj[t.art_begin + r]) * row_flip[r];
    dual[r] = maximize ? Rat(-y) : y;
  }

  // Audit 1: primal feasibility against the original program.
  for (std::size_t j = 0; j < n; ++j) {
    const VariableBounds& b = bound_of(j);
    if (b.lower && primal[j] < *b.lower) throw std::logic_error("primal below lower bound");
    if (b.upper && primal[j] > *b.upper) throw std::logic_error("primal above upper bound");
  }
  for (const Constraint& c : lp.constraints) {
    Rat lhs = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (c.coef[j] != 0) lhs += c.coef[j] * primal[j];
    const bool ok = c.rel == Rel::LessEq    ? lhs <= c.rhs
                    : c.rel == Rel::GreaterEq ? lhs >= c.rhs
                                              : lhs == c.rhs;
    if (!ok) throw std::logic_error("primal infeasibility after optimal solve");
  }
  // Audit 2: objective value against the original data.
  Rat check_value = 0;
  for (std::size_t j = 0; j < n; ++j)
    if (lp.objective[j] != 0) check_value += lp.objective[j] * primal[j];
  if (check_value != value) throw std::logic_error("objective mismatch after solve");

  // Audit 3: strong duality on the transformed system. Recompute the
  // transformed rhs per row and compare sum_i y_i b_i with the optimum.
  {
    Rat ydotb = 0;
    for (std::size_t r = 0; r < nrows; ++r) {
      Rat y = -t.obj[t.art_begin + r];
      Rat b;
      if (r < user_rows) {
        const Constraint& c = lp.constraints[r];
        b = c.rhs;
        for (std::size_t j = 0; j < n; ++j)
          if (c.coef[j] != 0) b -= c.coef[j] * vmap[j].shift;
        if (row_flip[r] < 0) b = -b;
      } else {
        b = upper_rows[r - user_rows].second;
      }
      ydotb += y * b;
    }
    if (ydotb != internal_value - cost_const)
      throw std::logic_error("strong duality violated after solve");
  }

  return LPSolution{LPStatus::Optimal, std::move(value), std::move(primal), std::move(dual)};
}

}  // namespace cinorm
