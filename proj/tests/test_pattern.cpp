#include <catch2/catch_amalgamated.hpp>
#include <cinorm/pattern.hpp>

using namespace cinorm;

namespace {

PatternSpec or_spec(std::size_t k, std::size_t m, std::size_t M) {
  return PatternSpec(k, m, M, to_real(make_or(m)));
}

}  // namespace

TEST_CASE("pattern shape and size formula") {
  REQUIRE(pattern_shape(or_spec(2, 1, 2)) == Shape({4, 2}));
  REQUIRE(pattern_shape(or_spec(3, 1, 2)) == Shape({16, 2, 2}));
  REQUIRE(pattern_shape(or_spec(2, 2, 2)) == Shape({16, 4}));
  REQUIRE(pattern_shape(or_spec(2, 2, 3)) == Shape({64, 9}));
  REQUIRE(pattern_shape(or_spec(2, 1, 2)).size() == 8);

  REQUIRE_THROWS_AS(PatternSpec(1, 1, 2, to_real(make_or(1))), ValidationError);
  REQUIRE_THROWS_AS(PatternSpec(2, 1, 0, to_real(make_or(1))), ValidationError);
  REQUIRE_THROWS_AS(PatternSpec(2, 2, 2, to_real(make_or(1))), DimensionError);
  REQUIRE_THROWS_AS(pattern_shape(or_spec(2, 21, 2)), CapacityError);
  REQUIRE_THROWS_AS(pattern_shape(PatternSpec(4, 1, 32, to_real(make_or(1)))), CapacityError);
}

TEST_CASE("two-player selection matrix") {
  // k=2, m=1, M=2, phi=OR_1: A[x, y] is just bit y of x, as a sign.
  const RationalTensor a = build_pattern_tensor(or_spec(2, 1, 2));
  REQUIRE(a.shape() == Shape({4, 2}));
  for (std::size_t x = 0; x < 4; ++x)
    for (std::size_t y = 0; y < 2; ++y)
      REQUIRE(a.at({x, y}) == (((x >> y) & 1) ? -1 : 1));
}

TEST_CASE("three-player block decode") {
  // k=3, m=1, M=2: x is one 2x2 cube, row-major with y1 slowest.
  const RationalTensor a = build_pattern_tensor(or_spec(3, 1, 2));
  REQUIRE(a.shape() == Shape({16, 2, 2}));
  for (std::size_t x = 0; x < 16; ++x)
    for (std::size_t y1 = 0; y1 < 2; ++y1)
      for (std::size_t y2 = 0; y2 < 2; ++y2)
        REQUIRE(a.at({x, y1, y2}) == (((x >> (2 * y1 + y2)) & 1) ? -1 : 1));
}

TEST_CASE("two-block spot entries") {
  // k=2, m=2, M=2: block i occupies bits [2i, 2i+2), cell = digit i of y.
  const RationalTensor a = build_pattern_tensor(or_spec(2, 2, 2));
  REQUIRE(a.shape() == Shape({16, 4}));
  for (std::size_t x = 0; x < 16; ++x)
    for (std::size_t y = 0; y < 4; ++y) {
      const bool u0 = (x >> (0 + (y % 2))) & 1;
      const bool u1 = (x >> (2 + (y / 2))) & 1;
      REQUIRE(a.at({x, y}) == ((u0 || u1) ? -1 : 1));
    }
}

TEST_CASE("sign patterns and scale defaults") {
  const PatternSpec s = or_spec(2, 2, 2);
  REQUIRE(pattern_scale(s) == 1);
  REQUIRE_NOTHROW(SignTensor::from_rational(build_pattern_tensor(s)));

  // A real-valued phi defaults to c = 2^m / size and inherits its l1 norm.
  const RealFunction witness(2, {Rat(1, 2), 0, 0, Rat(-1, 2)});
  for (std::size_t k : {std::size_t{2}, std::size_t{3}}) {
    const PatternSpec d(k, 2, 2, witness);
    const Shape shape = pattern_shape(d);
    REQUIRE(pattern_scale(d) == Rat(4) / Rat(static_cast<unsigned long>(shape.size())));
    const RationalTensor a = build_pattern_tensor(d);
    REQUIRE(l1_norm(a) == l1_of_function(witness));
  }

  // An explicit scale overrides the default.
  const PatternSpec forced(2, 2, 2, witness, Rat(1));
  REQUIRE(pattern_scale(forced) == 1);
  REQUIRE(l1_norm(build_pattern_tensor(forced)) == 16 * l1_of_function(witness));
}

TEST_CASE("uniform coverage") {
  const auto r1 = uniform_coverage_check(or_spec(2, 1, 2));
  REQUIRE(r1.uniform);
  REQUIRE(r1.expected == 4);
  REQUIRE(r1.counts == std::vector<Int>{4, 4});

  const auto r2 = uniform_coverage_check(or_spec(2, 2, 2));
  REQUIRE(r2.uniform);
  REQUIRE(r2.expected == 16);

  const auto r3 = uniform_coverage_check(or_spec(3, 1, 2));
  REQUIRE(r3.uniform);
  REQUIRE(r3.expected == 32);

  const auto r4 = uniform_coverage_check(or_spec(2, 2, 3));
  REQUIRE(r4.uniform);
  REQUIRE(r4.expected == 144);

  // m = 0: the empty product is trivially uniform.
  const auto r0 = uniform_coverage_check(PatternSpec(2, 0, 2, RealFunction(0, {Rat(1)})));
  REQUIRE(r0.uniform);
  REQUIRE(r0.counts == std::vector<Int>{1});

  const auto rd = uniform_coverage_check(or_spec(2, 2, 1));
  REQUIRE(rd.uniform);
  REQUIRE(rd.degenerate_side);
}

TEST_CASE("degenerate cube statistics") {
  const CubeStats s22 = degenerate_cube_stats(2, 2, 1);
  REQUIRE(s22.per_position == Rat(1, 2));
  REQUIRE(s22.enumerated);

  const CubeStats s32 = degenerate_cube_stats(3, 2, 1);
  REQUIRE(s32.per_position == Rat(3, 4));
  REQUIRE(s32.per_position <= 1);  // union bound (k-1)/M = 1 holds

  const CubeStats s242 = degenerate_cube_stats(2, 4, 2);
  REQUIRE(s242.distribution[2] == Rat(1, 16));
  REQUIRE(s242.enumerated);

  const CubeStats s1 = degenerate_cube_stats(2, 1, 3);
  REQUIRE(s1.degenerate_side);
  REQUIRE(s1.per_position == 1);
  REQUIRE(s1.distribution[3] == 1);
  REQUIRE(s1.tail(3) == 1);

  // Tail bound P[at least g degenerate] <= C(m,g) ((k-1)/M)^g everywhere.
  for (std::size_t k : {std::size_t{2}, std::size_t{3}})
    for (std::size_t M : {std::size_t{1}, std::size_t{2}, std::size_t{3}})
      for (std::size_t m = 0; m <= 3; ++m) {
        const CubeStats st = degenerate_cube_stats(k, M, m);
        REQUIRE(st.enumerated);
        for (std::size_t g = 0; g <= m; ++g) {
          const Rat bound = Rat(binomial(m, g)) *
                            rat_pow(Rat(static_cast<long>(k - 1), static_cast<long>(M)),
                                    static_cast<long>(g));
          REQUIRE(st.tail(g) <= bound);
        }
      }

  REQUIRE_THROWS_AS(degenerate_cube_stats(1, 2, 1), ValidationError);
}

TEST_CASE("disjointness embedding") {
  const DisjEmbedding e1 = embed_into_disj(or_spec(2, 1, 2));
  REQUIRE(e1.verified);
  REQUIRE(e1.ground_size == 2);
  REQUIRE(e1.selectors.size() == 1);
  REQUIRE(e1.selectors[0] == std::vector<std::string>{"10", "01"});

  const DisjEmbedding e2 = embed_into_disj(or_spec(2, 2, 2));
  REQUIRE(e2.verified);
  REQUIRE(e2.ground_size == 4);
  // Block 0 occupies positions 0..1, block 1 positions 2..3; digit vector
  // y = (y[0], y[1]) keeps cell y[0] in block 0 and cell y[1] in block 1.
  REQUIRE(e2.selectors[0][0] == "1010");
  REQUIRE(e2.selectors[0][3] == "0101");

  const DisjEmbedding e3 = embed_into_disj(or_spec(3, 1, 2));
  REQUIRE(e3.verified);
  REQUIRE(e3.ground_size == 4);
  // Cell (t1, t2) sits at position 2 t1 + t2; player 2 fixes t1, player 3 t2.
  REQUIRE(e3.selectors[0][0] == "1100");
  REQUIRE(e3.selectors[0][1] == "0011");
  REQUIRE(e3.selectors[1][0] == "1010");
  REQUIRE(e3.selectors[1][1] == "0101");

  REQUIRE_THROWS_AS(embed_into_disj(PatternSpec(2, 2, 2, to_real(make_and(2)))),
                    ValidationError);
  REQUIRE_THROWS_AS(embed_into_disj(PatternSpec(2, 1, 2, to_real(make_or(1)), Rat(2))),
                    ValidationError);
  REQUIRE_THROWS_AS(embed_into_disj(or_spec(3, 2, 2)), CapacityError);
}

TEST_CASE("pattern spec JSON") {
  const Json j = Json::parse(
      R"({"k":2,"m":1,"M":2,"phi":{"name":"OR","m":1},"scale":"1"})");
  const PatternSpec s = pattern_spec_from_json(j);
  REQUIRE(s.players == 2);
  REQUIRE(s.blocks == 1);
  REQUIRE(s.side == 2);
  REQUIRE(s.phi.table == std::vector<Rat>{1, -1});
  REQUIRE(s.scale.has_value());
  REQUIRE(*s.scale == 1);

  const PatternSpec back = pattern_spec_from_json(pattern_spec_to_json(s));
  REQUIRE(back.players == s.players);
  REQUIRE(back.blocks == s.blocks);
  REQUIRE(back.side == s.side);
  REQUIRE(back.phi.table == s.phi.table);
  REQUIRE(back.scale == s.scale);

  // Real-valued phi survives the round trip exactly.
  const PatternSpec real_spec(2, 2, 2, RealFunction(2, {Rat(1, 2), 0, 0, Rat(-1, 2)}));
  const PatternSpec real_back = pattern_spec_from_json(pattern_spec_to_json(real_spec));
  REQUIRE(real_back.phi.table == real_spec.phi.table);
  REQUIRE_FALSE(real_back.scale.has_value());

  Json missing = j;
  missing.erase("phi");
  REQUIRE_THROWS_AS(pattern_spec_from_json(missing), ValidationError);
  Json bad = j;
  bad["M"] = -3;
  REQUIRE_THROWS_AS(pattern_spec_from_json(bad), ValidationError);

  const DisjEmbedding e = embed_into_disj(or_spec(2, 1, 2));
  const Json je = embedding_to_json(e);
  REQUIRE(je["ground_size"] == 2);
  REQUIRE(je["verified"] == true);
  REQUIRE(je["selectors"][0][1] == "01");
}
