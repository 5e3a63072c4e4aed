#include <catch2/catch_amalgamated.hpp>
#include <cinorm/approxdeg.hpp>

using namespace cinorm;

namespace {

// The margin/correlation duality partner of alpha_d: the best correlation
// with f achievable by a normalized function vanishing on all characters of
// degree <= d. Built directly here so library claims are checked against an
// independently assembled program.
Rat best_vanishing_correlation(const BooleanFunction& f, std::size_t d) {
  const MonomialMatrix w(f.arity, d);
  const std::size_t points = f.table.size();
  LinearProgram lp;
  lp.num_vars = 2 * points;
  lp.sense = Sense::Maximize;
  lp.objective.assign(2 * points, Rat(0));
  for (std::size_t x = 0; x < points; ++x) {
    lp.objective[x] = int(f.table[x]);
    lp.objective[points + x] = -int(f.table[x]);
  }
  for (std::size_t j = 0; j < w.columns(); ++j) {
    std::vector<Rat> row(2 * points);
    for (std::size_t x = 0; x < points; ++x) {
      row[x] = int(w.entries[x][j]);
      row[points + x] = -int(w.entries[x][j]);
    }
    lp.add_constraint(std::move(row), Rel::Equal, 0);
  }
  lp.add_constraint(std::vector<Rat>(2 * points, Rat(1)), Rel::Equal, 1);
  const LPSolution sol = solve(lp);
  REQUIRE(sol.status == LPStatus::Optimal);
  return sol.value;
}

BooleanFunction function_from_bits(std::size_t m, std::uint32_t bits) {
  std::vector<std::int8_t> t(std::size_t{1} << m);
  for (std::size_t x = 0; x < t.size(); ++x) t[x] = (bits >> x) & 1 ? -1 : 1;
  return BooleanFunction(m, std::move(t));
}

}  // namespace

TEST_CASE("monomial matrix layout") {
  MonomialMatrix w(3, 2);
  REQUIRE(w.columns() == 7);  // 1 + 3 + 3
  REQUIRE(w.monomials == std::vector<std::uint32_t>{0, 1, 2, 4, 3, 5, 6});
  for (std::size_t x = 0; x < 8; ++x) REQUIRE(w.entries[x][0] == 1);  // chi_empty
  // Column for S = {0}: sign of the first variable, -1 when bit 0 of x is set.
  for (std::size_t x = 0; x < 8; ++x) REQUIRE(w.entries[x][1] == ((x & 1) ? -1 : 1));

  for (std::size_t m = 1; m <= 4; ++m)
    for (std::size_t d = 0; d <= m; ++d) {
      Int expect = 0;
      for (std::size_t i = 0; i <= d; ++i) expect += binomial(m, i);
      REQUIRE(Int(static_cast<long>(MonomialMatrix(m, d).columns())) == expect);
    }

  REQUIRE_THROWS_AS(MonomialMatrix(7, 1), CapacityError);
  REQUIRE_THROWS_AS(MonomialMatrix(3, 4), ValidationError);
}

TEST_CASE("alpha_d landmarks") {
  const auto or2 = builtin_function("OR", 2);

  // Full degree always represents exactly.
  for (std::uint32_t bits = 0; bits < 16; ++bits) {
    const auto v = alpha_d(function_from_bits(2, bits), 2);
    REQUIRE(v.has_value());
    REQUIRE(*v == 1);
  }

  // No constant sign-represents a non-constant function.
  REQUIRE_FALSE(alpha_d(or2, 0).has_value());
  // Constants are exactly representable at degree 0.
  REQUIRE(*alpha_d(function_from_bits(2, 0), 0) == 1);

  // Degree-1 margin for OR_2: p = x1 + x2 - 1 is optimal with max |p| = 3.
  const auto a1 = alpha_d(or2, 1);
  REQUIRE(a1.has_value());
  REQUIRE(*a1 == 3);
}

TEST_CASE("degree thresholds") {
  for (std::size_t m = 1; m <= 4; ++m)
    REQUIRE(deg_alpha(builtin_function("OR", m), std::nullopt) == 1);

  const auto or1 = builtin_function("OR", 1);
  for (const auto& a : {Rat(1), Rat(3, 2), Rat(7)}) REQUIRE(deg_alpha(or1, a) == 1);
  REQUIRE(deg_alpha(or1, std::nullopt) == 1);

  // At alpha = 1 the approximation must be exact, so the threshold is the
  // Fourier degree.
  for (const char* name : {"OR", "XOR", "MAJ"}) {
    const std::size_t m = name[0] == 'M' ? 3 : 2;
    const auto f = builtin_function(name, m);
    REQUIRE(deg_alpha(f, Rat(1)) == fourier_transform(to_real(f)).degree());
  }
  REQUIRE(deg_alpha(builtin_function("OR", 3), Rat(1)) == 3);

  // 6 deg_3(OR_m)^2 >= m.
  for (std::size_t m = 1; m <= 4; ++m) {
    const std::size_t d = deg_alpha(builtin_function("OR", m), Rat(3));
    REQUIRE(6 * d * d >= m);
  }

  // Nonincreasing in alpha, with the infinite threshold below every finite one.
  for (const char* name : {"OR", "MAJ", "XOR"}) {
    const auto f = builtin_function(name, 3);
    const std::size_t d1 = deg_alpha(f, Rat(1));
    const std::size_t d2 = deg_alpha(f, Rat(2));
    const std::size_t d5 = deg_alpha(f, Rat(5));
    const std::size_t di = deg_alpha(f, std::nullopt);
    REQUIRE(d1 >= d2);
    REQUIRE(d2 >= d5);
    REQUIRE(d5 >= di);
  }

  REQUIRE_THROWS_AS(deg_alpha(or1, Rat(1, 2)), ValidationError);
}

TEST_CASE("bracketing at the threshold") {
  const std::vector<std::pair<BooleanFunction, Rat>> cases = {
      {builtin_function("OR", 3), Rat(3)},
      {builtin_function("MAJ", 3), Rat(3)},
      {builtin_function("OR", 2), Rat(2)},
      {builtin_function("XOR", 2), Rat(5, 2)},
  };
  for (const auto& [f, a] : cases) {
    const std::size_t d = deg_alpha(f, a);
    const auto at = alpha_d(f, d);
    REQUIRE(at.has_value());
    REQUIRE(*at <= a);
    if (d > 0) {
      const auto below = alpha_d(f, d - 1);
      REQUIRE((!below.has_value() || *below > a));
    }
  }
}

TEST_CASE("margin and correlation are dual on every 3-bit function") {
  for (std::uint32_t bits = 0; bits < 256; ++bits) {
    const auto f = function_from_bits(3, bits);
    for (std::size_t d = 0; d <= 3; ++d) {
      const Rat c = best_vanishing_correlation(f, d);
      const auto a = alpha_d(f, d);
      if (a) {
        REQUIRE(c < 1);
        REQUIRE(*a == (1 + c) / (1 - c));
      } else {
        REQUIRE(c == 1);
      }
    }
  }
}

TEST_CASE("dual polynomial extraction") {
  for (std::size_t m = 1; m <= 4; ++m) {
    const auto f = builtin_function("OR", m);
    for (const auto& a : {std::optional<Rat>(2), std::optional<Rat>(3), std::optional<Rat>()}) {
      const DualPolynomial v = dual_polynomial(f, a);
      REQUIRE(v.vanishing_degree == deg_alpha(f, a) - 1);
      const auto rep = verify_dual_polynomial(v, f, a);
      REQUIRE(rep.ok());
      if (!a) REQUIRE(v.correlation == 1);
    }
  }

  // XOR_2 at infinite alpha: the unique witness is chi_{1,2}/4.
  const auto xor2 = builtin_function("XOR", 2);
  const DualPolynomial vx = dual_polynomial(xor2, std::nullopt);
  REQUIRE(vx.vanishing_degree == 1);
  REQUIRE(vx.correlation == 1);
  const std::vector<Rat> expect = {Rat(1, 4), Rat(-1, 4), Rat(-1, 4), Rat(1, 4)};
  REQUIRE(vx.values == expect);

  REQUIRE_THROWS_AS(dual_polynomial(function_from_bits(2, 0), Rat(3)), ValidationError);
  REQUIRE_THROWS_AS(dual_polynomial(builtin_function("OR", 2), Rat(1, 3)), ValidationError);
}

TEST_CASE("verification of hand-built witnesses") {
  const auto or2 = builtin_function("OR", 2);

  // +1/2 at the all-false point, -1/2 at the all-true point.
  DualPolynomial hand{2, {Rat(1, 2), 0, 0, Rat(-1, 2)}, 0, 1};
  REQUIRE(verify_dual_polynomial(hand, or2, std::nullopt).ok());
  REQUIRE(verify_dual_polynomial(hand, or2, Rat(3)).ok());

  DualPolynomial doubled{2, {Rat(1), 0, 0, Rat(-1)}, 0, 2};
  const auto rep2 = verify_dual_polynomial(doubled, or2, std::nullopt);
  REQUIRE_FALSE(rep2.norm_ok);
  REQUIRE_FALSE(rep2.ok());

  // Nonzero degree-1 Fourier mass fails a vanishing-degree-1 claim.
  DualPolynomial leaky{2, {Rat(1, 2), Rat(-1, 2), 0, 0}, 1, 1};
  const auto rep3 = verify_dual_polynomial(leaky, or2, std::nullopt);
  REQUIRE_FALSE(rep3.vanishing_ok);

  // Correlation 1/2 meets the alpha = 3 floor exactly but misses alpha = 5.
  DualPolynomial weak{2, {Rat(1, 4), Rat(-1, 4), Rat(-1, 4), Rat(1, 4)}, 0, Rat(1, 2)};
  REQUIRE(verify_dual_polynomial(weak, or2, Rat(3)).ok());
  const auto rep4 = verify_dual_polynomial(weak, or2, Rat(5));
  REQUIRE(rep4.correlation == Rat(1, 2));
  REQUIRE_FALSE(rep4.correlation_ok);

  // Stale stored correlation is flagged.
  DualPolynomial stale{2, {Rat(1, 2), 0, 0, Rat(-1, 2)}, 0, Rat(1, 2)};
  REQUIRE_FALSE(verify_dual_polynomial(stale, or2, std::nullopt).stored_correlation_ok);

  REQUIRE_THROWS_AS(verify_dual_polynomial(hand, builtin_function("OR", 3), std::nullopt),
                    DimensionError);
}

TEST_CASE("dual polynomial JSON round trip") {
  const DualPolynomial v = dual_polynomial(builtin_function("OR", 3), Rat(3));
  const Json j = dual_polynomial_to_json(v);
  const DualPolynomial back = dual_polynomial_from_json(j);
  REQUIRE(back.arity == v.arity);
  REQUIRE(back.values == v.values);
  REQUIRE(back.vanishing_degree == v.vanishing_degree);
  REQUIRE(back.correlation == v.correlation);

  Json bad = j;
  bad.erase("values");
  REQUIRE_THROWS_AS(dual_polynomial_from_json(bad), ValidationError);
  Json wrong = j;
  wrong["vanishing_degree"] = 9;
  REQUIRE_THROWS_AS(dual_polynomial_from_json(wrong), ValidationError);
}
