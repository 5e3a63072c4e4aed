#pragma once
// Approximate polynomial degree over {-1,+1}^m, exactly. alpha_d(f) is the
// best multiplicative margin achievable by a degree-d sign-representation of
// f, deg_alpha / deg_inf are the induced degree thresholds, and
// dual_polynomial extracts the LP-dual witness: a normalized function
// orthogonal to every low-degree character that correlates well with f.
//
// Inner products are plain sums over the hypercube, <u, w> = sum_x u(x)w(x).
// alpha and the returned alpha_d value use nullopt for "infinite".

#include <cstdint>
#include <optional>
#include <vector>

#include "boolfun.hpp"
#include "errors.hpp"
#include "lp.hpp"
#include "rational.hpp"
#include "tensor_io.hpp"

namespace cinorm {

inline constexpr std::size_t kDefaultApproxArityCap = 6;

// Characters chi_S with |S| <= degree_bound over `arity` variables, columns
// in canonical order (ascending degree, then ascending mask) so dual
// witnesses are reproducible. entries[x][j] = chi_{monomials[j]}(x).
struct MonomialMatrix {
  std::size_t arity = 0;
  std::size_t degree_bound = 0;
  std::vector<std::uint32_t> monomials;
  std::vector<std::vector<std::int8_t>> entries;

  MonomialMatrix(std::size_t m, std::size_t d,
                 std::size_t arity_cap = kDefaultApproxArityCap) {
    if (m > arity_cap)
      throw CapacityError("arity " + std::to_string(m) + " exceeds the cap of " +
                          std::to_string(arity_cap));
    if (d > m) throw ValidationError("degree bound exceeds arity");
    arity = m;
    degree_bound = d;
    const std::uint32_t points = std::uint32_t{1} << m;
    for (std::size_t deg = 0; deg <= d; ++deg)
      for (std::uint32_t s = 0; s < points; ++s)
        if (static_cast<std::size_t>(std::popcount(s)) == deg) monomials.push_back(s);
    entries.assign(points, std::vector<std::int8_t>(monomials.size()));
    for (std::uint32_t x = 0; x < points; ++x)
      for (std::size_t j = 0; j < monomials.size(); ++j)
        entries[x][j] = static_cast<std::int8_t>(character(monomials[j], x));
  }

  std::size_t columns() const { return monomials.size(); }
};

// True iff some polynomial of degree <= d sign-represents f with margin 1,
// i.e. f(x) p(x) >= 1 everywhere. Pure feasibility program, no objective.
inline bool sign_representable(const BooleanFunction& f, std::size_t d,
                               std::size_t arity_cap = kDefaultApproxArityCap) {
  const MonomialMatrix w(f.arity, d, arity_cap);
  const std::size_t cols = w.columns();
  const std::size_t points = f.table.size();

  LinearProgram lp;
  lp.num_vars = cols;
  lp.sense = Sense::Minimize;
  lp.objective.assign(cols, Rat(0));
  lp.bounds.assign(cols, VariableBounds{std::nullopt, std::nullopt});
  for (std::size_t x = 0; x < points; ++x) {
    std::vector<Rat> row(cols);
    for (std::size_t j = 0; j < cols; ++j) row[j] = int(f.table[x]) * int(w.entries[x][j]);
    lp.add_constraint(std::move(row), Rel::GreaterEq, 1);
  }
  const LPSolution sol = solve(lp);
  if (sol.status == LPStatus::Unbounded)
    throw std::logic_error("feasibility program cannot be unbounded");
  return sol.status == LPStatus::Optimal;
}

// alpha_d(f) = min { max_x |p(x)| : deg p <= d, f(x) p(x) >= 1 everywhere },
// or nullopt when no degree-d polynomial sign-represents f.
inline std::optional<Rat> alpha_d(const BooleanFunction& f, std::size_t d,
                                  std::size_t arity_cap = kDefaultApproxArityCap) {
  const MonomialMatrix w(f.arity, d, arity_cap);
  const std::size_t cols = w.columns();
  const std::size_t points = f.table.size();

  // Variables: the cols coefficients y (free) then the margin bound a.
  // Since f is a sign function, |p(x)| = f(x) p(x) on the feasible set.
  LinearProgram lp;
  lp.num_vars = cols + 1;
  lp.sense = Sense::Minimize;
  lp.objective.assign(cols + 1, Rat(0));
  lp.objective[cols] = 1;
  lp.bounds.assign(cols + 1, VariableBounds{std::nullopt, std::nullopt});
  lp.bounds[cols] = VariableBounds{Rat(0), std::nullopt};
  for (std::size_t x = 0; x < points; ++x) {
    std::vector<Rat> lo(cols + 1, Rat(0)), hi(cols + 1, Rat(0));
    for (std::size_t j = 0; j < cols; ++j) {
      lo[j] = int(f.table[x]) * int(w.entries[x][j]);
      hi[j] = lo[j];
    }
    hi[cols] = -1;
    lp.add_constraint(std::move(lo), Rel::GreaterEq, 1);
    lp.add_constraint(std::move(hi), Rel::LessEq, 0);
  }

  const LPSolution sol = solve(lp);
  if (sol.status == LPStatus::Infeasible) return std::nullopt;
  if (sol.status != LPStatus::Optimal)
    throw std::logic_error("alpha_d program cannot be unbounded");

  // Rebuild p from the solution and re-check the sandwich it claims.
  for (std::size_t x = 0; x < points; ++x) {
    Rat p = 0;
    for (std::size_t j = 0; j < cols; ++j) p += sol.primal[j] * int(w.entries[x][j]);
    const Rat fp = int(f.table[x]) * p;
    if (fp < 1 || fp > sol.value) throw std::logic_error("alpha_d witness violates its margin");
  }
  return sol.value;
}

inline void check_alpha_at_least_one(const std::optional<Rat>& alpha) {
  if (alpha && *alpha < 1) throw ValidationError("alpha must be at least 1");
}

// Least d with alpha_d(f) <= alpha; for alpha = nullopt (infinite), least d
// at which f is sign-representable at all.
inline std::size_t deg_alpha(const BooleanFunction& f, const std::optional<Rat>& alpha,
                             std::size_t arity_cap = kDefaultApproxArityCap) {
  check_alpha_at_least_one(alpha);
  for (std::size_t d = 0; d <= f.arity; ++d) {
    if (!alpha) {
      if (sign_representable(f, d, arity_cap)) return d;
    } else {
      const auto v = alpha_d(f, d, arity_cap);
      if (v && *v <= *alpha) return d;
    }
  }
  // The characters up to full degree span every function, so d = m always
  // represents f exactly with margin 1.
  throw std::logic_error("full-degree representation must exist");
}

// A normalized witness that no low-degree polynomial approximates f well:
// sum_x |values[x]| = 1 and <values, chi_T> = 0 for every |T| <=
// vanishing_degree, while <values, f> = correlation stays large.
struct DualPolynomial {
  std::size_t arity = 0;
  std::vector<Rat> values;
  std::size_t vanishing_degree = 0;
  Rat correlation = 0;
};

struct DualPolynomialReport {
  bool norm_ok = false;          // sum_x |v(x)| == 1
  bool vanishing_ok = false;     // <v, chi_T> == 0 for all |T| <= vanishing_degree
  bool correlation_ok = false;   // finite alpha: <v,f> >= (alpha-1)/(alpha+1);
                                 // infinite alpha: v(x) f(x) >= 0 at every point
  bool stored_correlation_ok = false;  // stored correlation matches <v, f>
  Rat correlation = 0;                 // recomputed <v, f>

  bool ok() const { return norm_ok && vanishing_ok && correlation_ok && stored_correlation_ok; }
};

// Extracts a dual polynomial for f at the largest degree whose approximation
// is certifiably worse than alpha: d' = deg_alpha(f) - 1. The witness comes
// from maximizing <v, f> over the exact vanishing + normalization polytope.
inline DualPolynomial dual_polynomial(const BooleanFunction& f, const std::optional<Rat>& alpha,
                                      std::size_t arity_cap = kDefaultApproxArityCap) {
  check_alpha_at_least_one(alpha);
  bool constant = true;
  for (std::size_t x = 1; x < f.table.size() && constant; ++x)
    constant = f.table[x] == f.table[0];
  if (constant) throw ValidationError("constant functions admit no dual polynomial");

  const std::size_t d = deg_alpha(f, alpha, arity_cap);
  const std::size_t dprime = d - 1;  // d >= 1: degree 0 never sign-represents non-constant f
  const MonomialMatrix w(f.arity, dprime, arity_cap);
  const std::size_t points = f.table.size();
  const std::size_t cols = w.columns();

  // Variables v+ then v-, both >= 0; v = v+ - v-. At any optimal vertex the
  // two halves have disjoint support (their columns are negatives of each
  // other), so the normalization row pins the l1 norm of v to exactly 1.
  LinearProgram lp;
  lp.num_vars = 2 * points;
  lp.sense = Sense::Maximize;
  lp.objective.assign(2 * points, Rat(0));
  for (std::size_t x = 0; x < points; ++x) {
    lp.objective[x] = int(f.table[x]);
    lp.objective[points + x] = -int(f.table[x]);
  }
  for (std::size_t j = 0; j < cols; ++j) {
    std::vector<Rat> row(2 * points);
    for (std::size_t x = 0; x < points; ++x) {
      row[x] = int(w.entries[x][j]);
      row[points + x] = -int(w.entries[x][j]);
    }
    lp.add_constraint(std::move(row), Rel::Equal, 0);
  }
  lp.add_constraint(std::vector<Rat>(2 * points, Rat(1)), Rel::Equal, 1);

  const LPSolution sol = solve(lp);
  if (sol.status != LPStatus::Optimal)
    throw std::logic_error("dual polynomial program must have an optimum");

  DualPolynomial out;
  out.arity = f.arity;
  out.values.resize(points);
  for (std::size_t x = 0; x < points; ++x) out.values[x] = sol.primal[x] - sol.primal[points + x];
  out.vanishing_degree = dprime;
  out.correlation = sol.value;

  Rat norm = 0;
  for (const Rat& v : out.values) norm += abs(v);
  if (norm != 1) throw std::logic_error("dual polynomial witness is not normalized");
  for (std::size_t j = 0; j < cols; ++j) {
    Rat dot = 0;
    for (std::size_t x = 0; x < points; ++x) dot += out.values[x] * int(w.entries[x][j]);
    if (dot != 0) throw std::logic_error("dual polynomial witness has a low-degree leak");
  }
  Rat corr = 0;
  for (std::size_t x = 0; x < points; ++x) corr += out.values[x] * int(f.table[x]);
  if (corr != out.correlation) throw std::logic_error("dual polynomial correlation mismatch");

  // Value-level strong duality against the primal margin at degree d':
  // correlation c and margin a0 satisfy a0 = (1+c)/(1-c), i.e. c =
  // (a0-1)/(a0+1); an unrepresentable degree yields c = 1 exactly.
  const auto a0 = alpha_d(f, dprime, arity_cap);
  if (a0) {
    if (out.correlation != (*a0 - 1) / (*a0 + 1))
      throw std::logic_error("dual polynomial correlation disagrees with the primal margin");
  } else if (out.correlation != 1) {
    throw std::logic_error("dual polynomial of an unrepresentable degree must correlate fully");
  }
  return out;
}

// Checks the three dual-polynomial properties exactly without mutating
// anything; alpha must match the value the witness was extracted for.
inline DualPolynomialReport verify_dual_polynomial(const DualPolynomial& v,
                                                   const BooleanFunction& f,
                                                   const std::optional<Rat>& alpha) {
  check_alpha_at_least_one(alpha);
  if (v.arity != f.arity) throw DimensionError("dual polynomial arity mismatch");
  if (v.values.size() != f.table.size())
    throw DimensionError("dual polynomial table length mismatch");
  if (v.vanishing_degree > v.arity)
    throw ValidationError("vanishing degree exceeds arity");

  std::vector<Rat> vals = v.values;
  for (Rat& r : vals) {
    if (r.get_den() == 0) throw ValidationError("zero denominator in dual polynomial value");
    r.canonicalize();
  }
  const std::size_t points = vals.size();

  DualPolynomialReport rep;
  Rat norm = 0;
  for (const Rat& r : vals) norm += abs(r);
  rep.norm_ok = norm == 1;

  rep.vanishing_ok = true;
  const std::uint32_t masks = std::uint32_t{1} << v.arity;
  for (std::uint32_t s = 0; s < masks && rep.vanishing_ok; ++s) {
    if (static_cast<std::size_t>(std::popcount(s)) > v.vanishing_degree) continue;
    Rat dot = 0;
    for (std::size_t x = 0; x < points; ++x) dot += vals[x] * character(s, static_cast<std::uint32_t>(x));
    rep.vanishing_ok = dot == 0;
  }

  Rat corr = 0;
  for (std::size_t x = 0; x < points; ++x) corr += vals[x] * int(f.table[x]);
  rep.correlation = corr;
  rep.stored_correlation_ok = corr == v.correlation;

  if (alpha) {
    rep.correlation_ok = corr >= (*alpha - 1) / (*alpha + 1);
  } else {
    rep.correlation_ok = true;
    for (std::size_t x = 0; x < points && rep.correlation_ok; ++x)
      rep.correlation_ok = vals[x] * int(f.table[x]) >= 0;
  }
  return rep;
}

inline Json dual_polynomial_to_json(const DualPolynomial& v) {
  Json j;
  j["arity"] = v.arity;
  Json vals = Json::array();
  for (const Rat& r : v.values) vals.push_back(rational_to_json(r));
  j["values"] = std::move(vals);
  j["vanishing_degree"] = v.vanishing_degree;
  j["correlation"] = rational_to_json(v.correlation);
  return j;
}

inline DualPolynomial dual_polynomial_from_json(const Json& j,
                                                std::size_t arity_cap = kDefaultApproxArityCap) {
  if (!j.is_object()) throw ValidationError("dual polynomial JSON must be an object");
  for (const char* key : {"arity", "values", "vanishing_degree", "correlation"})
    if (!j.contains(key))
      throw ValidationError(std::string("dual polynomial JSON missing field '") + key + "'");
  if (!j["arity"].is_number_unsigned()) throw ValidationError("arity must be a nonnegative integer");
  DualPolynomial v;
  v.arity = j["arity"].get<std::size_t>();
  if (v.arity > arity_cap)
    throw CapacityError("arity " + std::to_string(v.arity) + " exceeds the cap of " +
                        std::to_string(arity_cap));
  if (!j["values"].is_array() || j["values"].size() != (std::size_t{1} << v.arity))
    throw ValidationError("values must be an array of length 2^arity");
  for (const Json& e : j["values"]) v.values.push_back(rational_from_json(e));
  if (!j["vanishing_degree"].is_number_unsigned())
    throw ValidationError("vanishing_degree must be a nonnegative integer");
  v.vanishing_degree = j["vanishing_degree"].get<std::size_t>();
  if (v.vanishing_degree > v.arity) throw ValidationError("vanishing degree exceeds arity");
  v.correlation = rational_from_json(j["correlation"]);
  return v;
}

}  // namespace cinorm
