#pragma once
// The cylinder-intersection norm mu, its +-1 variant, the approximate
// norms mu^alpha and mu^infinity (primal and dual linear programs), and
// discrepancy, all exact over an enumerated basis.
//
// alpha is passed as std::optional<Rat>: a rational >= 1, or nullopt for
// the infinity case (which drops the upper constraint rows entirely).

#include <optional>
#include <utility>
#include <vector>

#include "cylinders.hpp"
#include "errors.hpp"
#include "lp.hpp"
#include "rational.hpp"
#include "tensor.hpp"

namespace cinorm {

enum class NormMethod { Primal, Dual };

struct WeightedBasisElement {
  Rat weight;
  std::size_t basis_index;
};

struct NormResult {
  Rat value;
  std::vector<WeightedBasisElement> decomposition;  // primal side, when available
  std::optional<RationalTensor> witness;            // dual witness Q, when available
  NormMethod method = NormMethod::Primal;
};

inline RationalTensor reconstruct(const CylinderBasis& basis,
                                  const std::vector<WeightedBasisElement>& decomposition) {
  RationalTensor sum = RationalTensor::zero(basis.shape);
  for (const auto& term : decomposition)
    sum = sum + scaled(basis.elements.at(term.basis_index), term.weight);
  return sum;
}

namespace detail {

// Minimum of sum |w_i| over exact decompositions target = sum w_i E_i,
// where E is an arbitrary spanning-or-not list of tensors. Infeasible
// targets are a logic error for our bases (cells are basis elements), so
// infeasibility propagates as an exception.
inline NormResult abs_decomposition_norm(const std::vector<RationalTensor>& elements,
                                         const RationalTensor& target,
                                         std::size_t cell_cap = kDefaultLPCellCap) {
  const std::size_t n = elements.size();
  const std::size_t cells = target.size();
  LinearProgram lp;
  lp.num_vars = 2 * n;  // positive and negative parts of each weight
  lp.objective.assign(2 * n, Rat(1));
  for (std::size_t x = 0; x < cells; ++x) {
    std::vector<Rat> row(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      row[i] = elements[i][x];
      row[n + i] = -elements[i][x];
    }
    lp.add_constraint(std::move(row), Rel::Equal, target[x]);
  }
  LPSolution sol = solve(lp, cell_cap);
  if (sol.status != LPStatus::Optimal)
    throw std::logic_error("norm decomposition program must be feasible and bounded");

  NormResult result;
  result.value = sol.value;
  result.method = NormMethod::Primal;
  for (std::size_t i = 0; i < n; ++i) {
    Rat w = sol.primal[i] - sol.primal[n + i];
    if (w != 0) result.decomposition.push_back({std::move(w), i});
  }
  std::vector<Rat> q(cells);
  for (std::size_t x = 0; x < cells; ++x) q[x] = sol.dual[x];
  result.witness = RationalTensor(target.shape(), std::move(q));

  // Exactness audit: the decomposition re-sums to the target, its weight
  // total equals the optimum, and the dual witness is normalized against
  // the elements with matching inner product.
  RationalTensor resum = RationalTensor::zero(target.shape());
  Rat total = 0;
  for (const auto& term : result.decomposition) {
    resum = resum + scaled(elements[term.basis_index], term.weight);
    total += abs(term.weight);
  }
  if (resum != target || total != result.value)
    throw std::logic_error("norm decomposition failed its audit");
  for (const RationalTensor& e : elements) {
    Rat corr = inner_product(e, *result.witness);
    if (corr > 1 || corr < -1) throw std::logic_error("dual witness normalization violated");
  }
  if (inner_product(target, *result.witness) != result.value)
    throw std::logic_error("dual witness value mismatch");
  return result;
}

}  // namespace detail

// mu(B): minimum total |weight| expressing B over characteristic tensors of
// cylinder intersections. Returns the optimal decomposition and the dual
// witness Q (max <B,Q> subject to |<X_i,Q>| <= 1).
inline NormResult mu(const RationalTensor& b, const CylinderBasis& basis,
                     std::size_t cell_cap = kDefaultLPCellCap) {
  if (b.shape() != basis.shape) throw DimensionError("tensor shape does not match basis shape");
  return detail::abs_decomposition_norm(basis.elements, b, cell_cap);
}

inline NormResult mu(const RationalTensor& b) { return mu(b, enumerate_basis(b.shape())); }

// mu over the +-1-valued variants 2*chi(Z) - J of the same intersections.
inline NormResult mu_pm(const RationalTensor& b, const CylinderBasis& basis,
                        std::size_t cell_cap = kDefaultLPCellCap) {
  if (b.shape() != basis.shape) throw DimensionError("tensor shape does not match basis shape");
  const RationalTensor j = RationalTensor::ones(basis.shape);
  std::vector<RationalTensor> pm;
  pm.reserve(basis.elements.size());
  for (const RationalTensor& e : basis.elements) pm.push_back(scaled(e, 2) - j);
  return detail::abs_decomposition_norm(pm, b, cell_cap);
}

inline NormResult mu_pm(const RationalTensor& b) { return mu_pm(b, enumerate_basis(b.shape())); }

namespace detail {
inline void check_alpha(const std::optional<Rat>& alpha) {
  if (alpha && *alpha < 1) throw ValidationError("alpha must be at least 1");
}
}  // namespace detail

// Primal program for mu^alpha(A): minimize the decomposition weight of B
// subject to 1 <= A o B (everywhere), and A o B <= alpha when alpha is
// finite.
inline NormResult mu_alpha_primal(const SignTensor& a, const std::optional<Rat>& alpha,
                                  const CylinderBasis& basis,
                                  std::size_t cell_cap = kDefaultLPCellCap) {
  detail::check_alpha(alpha);
  if (a.shape() != basis.shape) throw DimensionError("tensor shape does not match basis shape");
  const std::size_t n = basis.elements.size();
  const std::size_t cells = a.size();

  LinearProgram lp;
  lp.num_vars = 2 * n;
  lp.objective.assign(2 * n, Rat(1));
  for (std::size_t x = 0; x < cells; ++x) {
    std::vector<Rat> row(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      Rat v = Rat(int(a[x])) * basis.elements[i][x];
      row[i] = v;
      row[n + i] = -v;
    }
    lp.add_constraint(row, Rel::GreaterEq, Rat(1));
    if (alpha) lp.add_constraint(std::move(row), Rel::LessEq, *alpha);
  }
  LPSolution sol = solve(lp, cell_cap);
  if (sol.status == LPStatus::Infeasible)
    throw std::logic_error("mu^alpha primal cannot be infeasible: A itself is a candidate");
  if (sol.status != LPStatus::Optimal) throw std::logic_error("mu^alpha primal unbounded");

  NormResult result;
  result.value = sol.value;
  result.method = NormMethod::Primal;
  for (std::size_t i = 0; i < n; ++i) {
    Rat w = sol.primal[i] - sol.primal[n + i];
    if (w != 0) result.decomposition.push_back({std::move(w), i});
  }
  // Audit: the reconstructed B satisfies the sandwich exactly.
  RationalTensor bsum = reconstruct(basis, result.decomposition);
  for (std::size_t x = 0; x < cells; ++x) {
    Rat prod = Rat(int(a[x])) * bsum[x];
    if (prod < 1 || (alpha && prod > *alpha))
      throw std::logic_error("mu^alpha primal witness violates its sandwich");
  }
  return result;
}

// Dual program for mu^alpha(A): over tensors Q with |<X_i,Q>| <= 1 for
// every basis element, maximize ((1+alpha)<A,Q> + (1-alpha)|Q|_1)/2, or
// <A,Q> over A o Q >= 0 when alpha is infinite. Parameterized as
// Q = A o (u+ - u-) with u+, u- >= 0 cellwise (u- absent for infinity).
inline NormResult mu_alpha_dual(const SignTensor& a, const std::optional<Rat>& alpha,
                                const CylinderBasis& basis,
                                std::size_t cell_cap = kDefaultLPCellCap) {
  detail::check_alpha(alpha);
  if (a.shape() != basis.shape) throw DimensionError("tensor shape does not match basis shape");
  const std::size_t n = basis.elements.size();
  const std::size_t cells = a.size();
  const bool finite = alpha.has_value();

  LinearProgram lp;
  lp.sense = Sense::Maximize;
  lp.num_vars = finite ? 2 * cells : cells;
  lp.objective.assign(lp.num_vars, Rat(1));
  if (finite)
    for (std::size_t x = 0; x < cells; ++x) lp.objective[cells + x] = -*alpha;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Rat> row(lp.num_vars);
    for (std::size_t x = 0; x < cells; ++x) {
      Rat v = basis.elements[i][x] * Rat(int(a[x]));
      row[x] = v;
      if (finite) row[cells + x] = -v;
    }
    lp.add_constraint(row, Rel::LessEq, Rat(1));
    lp.add_constraint(std::move(row), Rel::GreaterEq, Rat(-1));
  }
  LPSolution sol = solve(lp, cell_cap);
  if (sol.status != LPStatus::Optimal)
    throw std::logic_error("mu^alpha dual must be feasible and bounded");

  std::vector<Rat> q(cells);
  for (std::size_t x = 0; x < cells; ++x) {
    Rat u = sol.primal[x];
    if (finite) u -= sol.primal[cells + x];
    q[x] = Rat(int(a[x])) * u;
  }
  NormResult result;
  result.value = sol.value;
  result.method = NormMethod::Dual;
  result.witness = RationalTensor(a.shape(), std::move(q));

  // Audit: witness normalization, and the dual objective rebuilt from Q
  // matches the solver's optimum.
  const RationalTensor& qt = *result.witness;
  for (const RationalTensor& e : basis.elements) {
    Rat corr = inner_product(e, qt);
    if (corr > 1 || corr < -1) throw std::logic_error("mu^alpha dual witness not normalized");
  }
  Rat aq = 0;
  for (std::size_t x = 0; x < cells; ++x) aq += Rat(int(a[x])) * qt[x];
  if (finite) {
    Rat rebuilt = ((1 + *alpha) * aq + (1 - *alpha) * l1_norm(qt)) / 2;
    if (rebuilt != result.value)
      throw std::logic_error("mu^alpha dual objective mismatch against its witness");
  } else {
    if (aq != result.value) throw std::logic_error("mu^infinity dual value mismatch");
    for (std::size_t x = 0; x < cells; ++x)
      if (Rat(int(a[x])) * qt[x] < 0)
        throw std::logic_error("mu^infinity dual witness violates A o Q >= 0");
  }
  return result;
}

// disc_P(A) = mu*(A o P) for a probability tensor P.
inline Rat disc_p(const SignTensor& a, const RationalTensor& p,
                  std::uint64_t search_cap = kDefaultSearchCap) {
  if (a.shape() != p.shape()) throw DimensionError("distribution shape mismatch");
  for (std::size_t x = 0; x < p.size(); ++x)
    if (p[x] < 0) throw ValidationError("distribution entries must be nonnegative");
  if (l1_norm(p) != 1) throw ValidationError("distribution must sum to 1");
  return mu_star(hadamard_product(a.to_rational(), p), search_cap).value;
}

struct DiscResult {
  Rat value;
  RationalTensor distribution;
};

// disc(A) = min over distributions P of max over basis elements of
// |<A o P, X_i>|, as one linear program; the optimum is re-verified against
// an independent mu* search at the optimal P.
inline DiscResult disc(const SignTensor& a, const CylinderBasis& basis,
                       std::size_t cell_cap = kDefaultLPCellCap,
                       std::uint64_t search_cap = kDefaultSearchCap) {
  if (a.shape() != basis.shape) throw DimensionError("tensor shape does not match basis shape");
  const std::size_t n = basis.elements.size();
  const std::size_t cells = a.size();

  LinearProgram lp;
  lp.num_vars = cells + 1;  // P then t
  lp.objective.assign(cells + 1, Rat(0));
  lp.objective[cells] = 1;
  {
    std::vector<Rat> row(cells + 1, Rat(1));
    row[cells] = 0;
    lp.add_constraint(std::move(row), Rel::Equal, Rat(1));
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Rat> row(cells + 1);
    for (std::size_t x = 0; x < cells; ++x) row[x] = basis.elements[i][x] * Rat(int(a[x]));
    row[cells] = -1;
    lp.add_constraint(row, Rel::LessEq, Rat(0));
    row[cells] = 1;
    lp.add_constraint(std::move(row), Rel::GreaterEq, Rat(0));
  }
  LPSolution sol = solve(lp, cell_cap);
  if (sol.status != LPStatus::Optimal)
    throw std::logic_error("discrepancy program must be feasible and bounded");

  std::vector<Rat> pe(sol.primal.begin(), sol.primal.begin() + cells);
  RationalTensor p(a.shape(), std::move(pe));
  // Audit: P is a distribution and the optimum is exactly the best
  // correlation at P, recomputed by enumeration.
  Rat mass = 0;
  for (std::size_t x = 0; x < cells; ++x) {
    if (p[x] < 0) throw std::logic_error("discrepancy distribution went negative");
    mass += p[x];
  }
  if (mass != 1) throw std::logic_error("discrepancy distribution mass is off");
  Rat best = mu_star(hadamard_product(a.to_rational(), p), search_cap).value;
  if (best != sol.value) throw std::logic_error("discrepancy value mismatch against mu*");
  return DiscResult{sol.value, std::move(p)};
}

inline DiscResult disc(const SignTensor& a) { return disc(a, enumerate_basis(a.shape())); }

}  // namespace cinorm
