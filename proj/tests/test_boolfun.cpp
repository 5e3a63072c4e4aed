#include <catch2/catch_amalgamated.hpp>

#include "cinorm/boolfun.hpp"
#include "cinorm/tensor_io.hpp"

using namespace cinorm;

TEST_CASE("builtin truth tables") {
  BooleanFunction or2 = make_or(2);
  REQUIRE(or2.table == std::vector<std::int8_t>{1, -1, -1, -1});
  BooleanFunction and2 = make_and(2);
  REQUIRE(and2.table == std::vector<std::int8_t>{1, 1, 1, -1});
  BooleanFunction xor2 = make_xor(2);
  REQUIRE(xor2.table == std::vector<std::int8_t>{1, -1, -1, 1});
  BooleanFunction maj3 = make_majority(3);
  REQUIRE(maj3.table == std::vector<std::int8_t>{1, 1, 1, -1, 1, -1, -1, -1});

  REQUIRE(builtin_function("OR", 2).table == or2.table);
  REQUIRE_THROWS_AS(builtin_function("NOPE", 2), ValidationError);
  REQUIRE_THROWS_AS(builtin_function("DISJ", 2), ValidationError);
  REQUIRE_THROWS_AS(make_or(kMaxArity + 1), CapacityError);
}

TEST_CASE("disjointness truth table") {
  // k=2 players, 1-bit sets: disjoint (-1) unless both bits are set.
  BooleanFunction d = make_disjointness(2, 1);
  REQUIRE(d.arity == 2);
  REQUIRE(d.table == std::vector<std::int8_t>{-1, -1, -1, 1});

  // k=2, n=2: intersection iff the players share a set bit.
  BooleanFunction d22 = make_disjointness(2, 2);
  REQUIRE(d22.arity == 4);
  for (std::size_t x = 0; x < 4; ++x)
    for (std::size_t y = 0; y < 4; ++y) {
      const std::size_t idx = x | (y << 2);
      REQUIRE(d22.table[idx] == ((x & y) ? 1 : -1));
    }

  // k=3: all three sets must share an element.
  BooleanFunction d31 = make_disjointness(3, 1);
  for (std::size_t i = 0; i < 8; ++i) REQUIRE(d31.table[i] == (i == 7 ? 1 : -1));
}

TEST_CASE("characters multiply coordinates") {
  // chi_{1}(x) flips with bit 0, chi_{1,2} with the parity of bits 0 and 1.
  REQUIRE(character(0b01, 0b00) == 1);
  REQUIRE(character(0b01, 0b01) == -1);
  REQUIRE(character(0b11, 0b01) == -1);
  REQUIRE(character(0b11, 0b11) == 1);
  REQUIRE(character(0, 0b1011) == 1);
}

TEST_CASE("fourier transform of OR_2") {
  FourierSpectrum s = fourier_transform(to_real(make_or(2)));
  REQUIRE(s.coefficients[0b00] == Rat(-1, 2));
  REQUIRE(s.coefficients[0b01] == Rat(1, 2));
  REQUIRE(s.coefficients[0b10] == Rat(1, 2));
  REQUIRE(s.coefficients[0b11] == Rat(1, 2));
  REQUIRE(s.degree() == 2);
}

TEST_CASE("fourier basics") {
  // XOR_m is exactly the top character.
  FourierSpectrum sx = fourier_transform(to_real(make_xor(3)));
  for (std::size_t mask = 0; mask < 8; ++mask)
    REQUIRE(sx.coefficients[mask] == (mask == 7 ? 1 : 0));
  REQUIRE(sx.degree() == 3);

  // Majority of three: (x1 + x2 + x3 - x1 x2 x3) / 2.
  FourierSpectrum sm = fourier_transform(to_real(make_majority(3)));
  REQUIRE(sm.coefficients[0b001] == Rat(1, 2));
  REQUIRE(sm.coefficients[0b010] == Rat(1, 2));
  REQUIRE(sm.coefficients[0b100] == Rat(1, 2));
  REQUIRE(sm.coefficients[0b111] == Rat(-1, 2));
  REQUIRE(sm.coefficients[0b011] == 0);
  REQUIRE(sm.coefficients[0b000] == 0);

  // Round trip on an arbitrary rational table.
  RealFunction f(2, {Rat(1, 3), Rat(-2), Rat(7, 5), Rat(0)});
  RealFunction back = inverse_fourier(fourier_transform(f));
  REQUIRE(back.table == f.table);

  REQUIRE(l1_of_function(f) == Rat(1, 3) + 2 + Rat(7, 5));
  REQUIRE(function_inner(f, f) == Rat(1, 9) + 4 + Rat(49, 25));

  // Parseval: sum of squared coefficients equals the mean square.
  FourierSpectrum sf = fourier_transform(f);
  Rat lhs = 0;
  for (const Rat& c : sf.coefficients) lhs += c * c;
  REQUIRE(lhs == function_inner(f, f) / 4);
}

TEST_CASE("function json round trip") {
  BooleanFunction f = make_or(3);
  Json j = function_to_json(f);
  BooleanFunction g = function_from_json(j);
  REQUIRE(g.arity == 3);
  REQUIRE(g.table == f.table);

  Json byname = {{"name", "DISJ"}, {"m", 2}, {"k", 2}};
  REQUIRE(function_from_json(byname).table == make_disjointness(2, 2).table);

  Json tablist = {{"m", 1}, {"table", {"1", "-1"}}};
  REQUIRE(function_from_json(tablist).table == std::vector<std::int8_t>{1, -1});

  Json bad = {{"m", 2}, {"table", "+-"}};
  REQUIRE_THROWS_AS(function_from_json(bad), ValidationError);
  Json bad2 = {{"m", 1}, {"table", {"1", "2"}}};
  REQUIRE_THROWS_AS(function_from_json(bad2), ValidationError);
}
