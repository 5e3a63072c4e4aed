#pragma once
// Pattern tensors: k-dimensional tensors whose first index is a long bit
// string x and whose remaining k-1 indices are digit vectors y_1..y_{k-1}.
// Each of the m blocks of x is an (k-1)-dimensional cube of side M; block i
// contributes the bit its cube holds at position (y_1[i], ..., y_{k-1}[i]),
// and the entry is c * phi applied to the m selected bits.
//
// Index layouts (fixed so embeddings are reproducible):
//  - x: m blocks of M^{k-1} bits; block i occupies bit positions
//    [i*M^{k-1}, (i+1)*M^{k-1}), block 0 lowest. Within a block, the cell
//    (t_1, ..., t_{k-1}) sits at the row-major offset (t_1 slowest,
//    t_{k-1} fastest). A set bit selects the value -1 (true).
//  - y_j: base-M digits, block 0 least significant: y_j[i] = (y_j / M^i) % M.
//  - phi points: bit i of the point index is 1 iff block i selected -1,
//    matching the character convention used by the Fourier helpers.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "boolfun.hpp"
#include "errors.hpp"
#include "rational.hpp"
#include "tensor.hpp"
#include "tensor_io.hpp"

namespace cinorm {

struct PatternSpec {
  std::size_t players;   // k >= 2
  std::size_t blocks;    // m >= 0
  std::size_t side;      // M >= 1
  RealFunction phi;      // arity must equal blocks
  std::optional<Rat> scale;  // c; see pattern_scale for the defaults

  PatternSpec(std::size_t k, std::size_t m, std::size_t M, RealFunction inner,
              std::optional<Rat> c = std::nullopt)
      : players(k), blocks(m), side(M), phi(std::move(inner)), scale(std::move(c)) {
    if (players < 2) throw ValidationError("pattern tensors need at least 2 players");
    if (side < 1) throw ValidationError("side length must be positive");
    if (phi.arity != blocks)
      throw DimensionError("inner function arity must equal the block count");
    if (scale) {
      if (scale->get_den() == 0) throw ValidationError("zero denominator in scale");
      scale->canonicalize();
    }
  }
};

namespace detail {

// side^exp with an overflow guard; the caller's size cap makes the bound
// tight enough for 64-bit arithmetic everywhere downstream.
inline std::size_t checked_pow(std::size_t base, std::size_t exp, std::size_t cap) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && r > cap / base)
      throw CapacityError("pattern dimension exceeds the cap of " + std::to_string(cap));
    r *= base;
  }
  return r;
}

inline std::size_t pattern_bits(const PatternSpec& s, std::size_t size_cap) {
  // Dimension 1 alone is 2^bits, so bits must stay below the size cap's log.
  std::size_t log_cap = 0;
  while ((std::size_t{1} << (log_cap + 1)) <= size_cap && log_cap < 62) ++log_cap;
  const std::size_t cube = checked_pow(s.side, s.players - 1, size_cap);
  if (s.blocks != 0 && cube > log_cap / s.blocks)
    throw CapacityError("pattern bit count exceeds the cap of " + std::to_string(size_cap));
  return s.blocks * cube;
}

inline std::size_t digit(std::size_t y, std::size_t block, std::size_t side) {
  std::size_t v = y;
  for (std::size_t i = 0; i < block; ++i) v /= side;
  return v % side;
}

}  // namespace detail

inline Shape pattern_shape(const PatternSpec& s, std::size_t size_cap = kDefaultSizeCap) {
  const std::size_t bits = detail::pattern_bits(s, size_cap);
  const std::size_t digits = detail::checked_pow(s.side, s.blocks, size_cap);
  std::vector<std::size_t> dims(s.players, digits);
  dims[0] = std::size_t{1} << bits;
  return Shape(std::move(dims), size_cap);
}

// The resolved scale c: an explicit value wins; otherwise 1 when phi is a
// sign function, and 2^m / size otherwise (the normalization that gives a
// pattern tensor built from a dual polynomial l1 norm exactly ||phi||_1).
inline Rat pattern_scale(const PatternSpec& s, std::size_t size_cap = kDefaultSizeCap) {
  if (s.scale) return *s.scale;
  bool sign = true;
  for (const Rat& v : s.phi.table)
    if (v != 1 && v != -1) {
      sign = false;
      break;
    }
  if (sign) return 1;
  const Shape shape = pattern_shape(s, size_cap);
  return pow2(static_cast<long>(s.blocks)) / Rat(static_cast<unsigned long>(shape.size()));
}

inline RationalTensor build_pattern_tensor(const PatternSpec& s,
                                           std::size_t size_cap = kDefaultSizeCap) {
  const Shape shape = pattern_shape(s, size_cap);
  const Rat c = pattern_scale(s, size_cap);
  const std::size_t k = s.players;
  const std::size_t m = s.blocks;
  const std::size_t cube_cells = detail::checked_pow(s.side, k - 1, size_cap);
  const std::size_t digits = shape.dim(1);
  std::size_t ytotal = 1;
  for (std::size_t j = 1; j < k; ++j) ytotal *= digits;

  // For every combined y index, the x-bit position each block selects.
  std::vector<std::vector<std::uint32_t>> sel(ytotal, std::vector<std::uint32_t>(m));
  std::vector<std::size_t> yj(k - 1);
  for (std::size_t yb = 0; yb < ytotal; ++yb) {
    std::size_t rest = yb;
    for (std::size_t j = k - 1; j-- > 0;) {
      yj[j] = rest % digits;
      rest /= digits;
    }
    for (std::size_t i = 0; i < m; ++i) {
      std::size_t cell = 0;
      for (std::size_t j = 0; j < k - 1; ++j)
        cell = cell * s.side + detail::digit(yj[j], i, s.side);
      sel[yb][i] = static_cast<std::uint32_t>(i * cube_cells + cell);
    }
  }

  std::vector<Rat> entries(shape.size());
  const std::size_t xs = shape.dim(0);
  for (std::size_t x = 0; x < xs; ++x)
    for (std::size_t yb = 0; yb < ytotal; ++yb) {
      std::size_t point = 0;
      for (std::size_t i = 0; i < m; ++i)
        point |= ((x >> sel[yb][i]) & 1) << i;
      entries[x * ytotal + yb] = c * s.phi.table[point];
    }
  return RationalTensor(shape, std::move(entries));
}

struct CoverageReport {
  bool uniform = false;         // every m-bit string selected equally often
  bool degenerate_side = false; // M = 1: all digit vectors coincide
  Int expected = 0;             // size / 2^m
  std::vector<Int> counts;      // selections of each phi point, by point index
};

// Exhaustively counts how often each m-bit input of phi is selected across
// all (x, y_1..y_{k-1}) and compares with the uniform count size / 2^m.
inline CoverageReport uniform_coverage_check(const PatternSpec& s,
                                             std::size_t size_cap = kDefaultSizeCap) {
  const Shape shape = pattern_shape(s, size_cap);
  const std::size_t k = s.players;
  const std::size_t m = s.blocks;
  const std::size_t cube_cells = detail::checked_pow(s.side, k - 1, size_cap);
  const std::size_t digits = shape.dim(1);
  std::size_t ytotal = 1;
  for (std::size_t j = 1; j < k; ++j) ytotal *= digits;

  CoverageReport rep;
  rep.degenerate_side = s.side == 1;
  rep.counts.assign(std::size_t{1} << m, Int(0));
  std::vector<std::size_t> yj(k - 1);
  for (std::size_t yb = 0; yb < ytotal; ++yb) {
    std::size_t rest = yb;
    for (std::size_t j = k - 1; j-- > 0;) {
      yj[j] = rest % digits;
      rest /= digits;
    }
    std::vector<std::uint32_t> sel(m);
    for (std::size_t i = 0; i < m; ++i) {
      std::size_t cell = 0;
      for (std::size_t j = 0; j < k - 1; ++j)
        cell = cell * s.side + detail::digit(yj[j], i, s.side);
      sel[i] = static_cast<std::uint32_t>(i * cube_cells + cell);
    }
    for (std::size_t x = 0; x < shape.dim(0); ++x) {
      std::size_t point = 0;
      for (std::size_t i = 0; i < m; ++i) point |= ((x >> sel[i]) & 1) << i;
      rep.counts[point] += 1;
    }
  }

  rep.expected = Int(static_cast<unsigned long>(shape.size())) >> m;
  rep.uniform = true;
  for (const Int& c : rep.counts)
    if (c != rep.expected) rep.uniform = false;
  return rep;
}

struct CubeStats {
  std::size_t players = 0;
  std::size_t side = 0;
  std::size_t blocks = 0;
  Rat per_position = 0;           // probability a fixed position is degenerate
  std::vector<Rat> distribution;  // P[exactly g positions degenerate], g = 0..m
  bool enumerated = false;        // analytic law cross-checked by exhaustion
  bool degenerate_side = false;   // M = 1: every position always degenerate

  // P[at least g positions degenerate].
  Rat tail(std::size_t g) const {
    Rat t = 0;
    for (std::size_t j = g; j < distribution.size(); ++j) t += distribution[j];
    return t;
  }
};

// Distribution of the number of degenerate positions between two independent
// uniform digit-vector tuples: position i is degenerate when some player's
// two vectors share the digit at block i. Positions are independent, so the
// law is Binomial(m, p1) with p1 = 1 - (1 - 1/M)^{k-1}; small cases are also
// enumerated exhaustively and compared exactly.
inline CubeStats degenerate_cube_stats(std::size_t k, std::size_t M, std::size_t m,
                                       std::uint64_t enumeration_cap = std::uint64_t{1} << 20) {
  if (k < 2) throw ValidationError("cube statistics need at least 2 players");
  if (M < 1) throw ValidationError("side length must be positive");

  CubeStats st;
  st.players = k;
  st.side = M;
  st.blocks = m;
  st.degenerate_side = M == 1;
  st.per_position = 1 - rat_pow(Rat(static_cast<long>(M - 1), static_cast<long>(M)),
                                static_cast<long>(k - 1));
  st.distribution.resize(m + 1);
  for (std::size_t g = 0; g <= m; ++g)
    st.distribution[g] = Rat(binomial(m, g)) * rat_pow(st.per_position, static_cast<long>(g)) *
                         rat_pow(1 - st.per_position, static_cast<long>(m - g));

  Rat total = 0;
  for (const Rat& p : st.distribution) total += p;
  if (total != 1) throw std::logic_error("cube distribution must sum to one");

  // Exhaustive cross-check when the full tuple space is small enough.
  std::uint64_t digits = 1;
  bool fits = true;
  for (std::size_t i = 0; i < m && fits; ++i) {
    if (digits > enumeration_cap / M) fits = false;
    digits *= M;
  }
  std::uint64_t tuples = 1;
  for (std::size_t j = 0; j < 2 * (k - 1) && fits; ++j) {
    if (tuples > enumeration_cap / digits) fits = false;
    tuples *= digits;
  }
  if (fits) {
    std::vector<Int> counts(m + 1, Int(0));
    std::vector<std::size_t> ys(2 * (k - 1));
    for (std::uint64_t t = 0; t < tuples; ++t) {
      std::uint64_t rest = t;
      for (std::size_t j = 0; j < ys.size(); ++j) {
        ys[j] = static_cast<std::size_t>(rest % digits);
        rest /= digits;
      }
      std::size_t g = 0;
      for (std::size_t i = 0; i < m; ++i) {
        bool degen = false;
        for (std::size_t j = 0; j < k - 1 && !degen; ++j)
          degen = detail::digit(ys[j], i, M) == detail::digit(ys[k - 1 + j], i, M);
        if (degen) ++g;
      }
      counts[g] += 1;
    }
    for (std::size_t g = 0; g <= m; ++g) {
      Rat observed(counts[g], Int(static_cast<unsigned long>(tuples)));
      observed.canonicalize();
      if (observed != st.distribution[g])
        throw std::logic_error("cube distribution disagrees with exhaustive enumeration");
    }
    st.enumerated = true;
  }
  return st;
}

struct DisjEmbedding {
  std::size_t players = 0;      // k
  std::size_t ground_size = 0;  // n' = m * M^{k-1}, the shared universe size
  // selectors[j][y]: the universe subset ('0'/'1', position = x bit index)
  // player j+2 contributes when its digit vector is y.
  std::vector<std::vector<std::string>> selectors;
  bool verified = false;
};

// For phi = OR_m and unit scale, the pattern tensor is exactly the negated
// k-party set-disjointness function on a universe of n' = m M^{k-1} items:
// player 1 holds x itself and player j+1 maps y_j to the selector that keeps,
// in every block i, the cells whose j-th coordinate is y_j[i]. The identity
// A[x, y_1..y_{k-1}] = -DISJ(x, z_1, .., z_{k-1}) is checked exhaustively.
inline DisjEmbedding embed_into_disj(const PatternSpec& s,
                                     std::size_t size_cap = kDefaultSizeCap,
                                     std::size_t verify_bits_cap = 20) {
  const BooleanFunction orf = make_or(s.blocks);
  bool is_or = s.phi.table.size() == orf.table.size();
  for (std::size_t i = 0; i < orf.table.size() && is_or; ++i)
    is_or = s.phi.table[i] == int(orf.table[i]);
  if (!is_or) throw ValidationError("the embedding requires the inner function OR");
  if (pattern_scale(s, size_cap) != 1)
    throw ValidationError("the embedding requires unit scale");

  const Shape shape = pattern_shape(s, size_cap);
  const std::size_t k = s.players;
  const std::size_t m = s.blocks;
  const std::size_t cube_cells = detail::checked_pow(s.side, k - 1, size_cap);
  const std::size_t nprime = m * cube_cells;
  const std::size_t digits = shape.dim(1);

  DisjEmbedding emb;
  emb.players = k;
  emb.ground_size = nprime;
  emb.selectors.assign(k - 1, std::vector<std::string>(digits, std::string(nprime, '0')));
  for (std::size_t j = 0; j < k - 1; ++j)
    for (std::size_t y = 0; y < digits; ++y)
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t cell = 0; cell < cube_cells; ++cell) {
          // Coordinate j of the cell in row-major order (t_1 slowest).
          std::size_t rest = cell;
          std::size_t tj = 0;
          for (std::size_t jj = k - 1; jj-- > 0;) {
            if (jj == j) tj = rest % s.side;
            rest /= s.side;
          }
          if (tj == detail::digit(y, i, s.side))
            emb.selectors[j][y][i * cube_cells + cell] = '1';
        }

  if (k * nprime > verify_bits_cap)
    throw CapacityError("embedding verification needs 2^" + std::to_string(k * nprime) +
                        " disjointness inputs, above the cap of 2^" +
                        std::to_string(verify_bits_cap));
  const BooleanFunction disj = make_disjointness(k, nprime);
  const RationalTensor a = build_pattern_tensor(s, size_cap);

  std::size_t ytotal = 1;
  for (std::size_t j = 1; j < k; ++j) ytotal *= digits;
  std::vector<std::size_t> yj(k - 1);
  for (std::size_t yb = 0; yb < ytotal; ++yb) {
    std::size_t rest = yb;
    for (std::size_t j = k - 1; j-- > 0;) {
      yj[j] = rest % digits;
      rest /= digits;
    }
    std::uint64_t zpart = 0;
    for (std::size_t j = 0; j < k - 1; ++j) {
      const std::string& sel = emb.selectors[j][yj[j]];
      for (std::size_t b = 0; b < nprime; ++b)
        if (sel[b] == '1') zpart |= std::uint64_t{1} << ((j + 1) * nprime + b);
    }
    for (std::size_t x = 0; x < shape.dim(0); ++x) {
      const std::size_t input = static_cast<std::size_t>(zpart | x);
      if (a[x * ytotal + yb] != -int(disj.table[input]))
        throw std::logic_error("pattern tensor disagrees with the disjointness embedding");
    }
  }
  emb.verified = true;
  return emb;
}

inline Json real_function_to_json(const RealFunction& f) {
  Json j;
  j["m"] = f.arity;
  Json t = Json::array();
  for (const Rat& v : f.table) t.push_back(rational_to_json(v));
  j["table"] = std::move(t);
  return j;
}

inline RealFunction real_function_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("function JSON must be an object");
  if (j.contains("name")) return to_real(function_from_json(j));
  if (!j.contains("m") || !j["m"].is_number_unsigned())
    throw ValidationError("function JSON needs an unsigned field 'm'");
  const std::size_t m = j["m"].get<std::size_t>();
  if (!j.contains("table") || !j["table"].is_array())
    throw ValidationError("real function JSON needs an array field 'table'");
  std::vector<Rat> t;
  for (const Json& e : j["table"]) t.push_back(rational_from_json(e));
  return RealFunction(m, std::move(t));
}

inline Json pattern_spec_to_json(const PatternSpec& s) {
  Json j;
  j["k"] = s.players;
  j["m"] = s.blocks;
  j["M"] = s.side;
  j["phi"] = real_function_to_json(s.phi);
  if (s.scale) j["scale"] = rational_to_json(*s.scale);
  return j;
}

inline PatternSpec pattern_spec_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("pattern spec JSON must be an object");
  for (const char* key : {"k", "m", "M", "phi"})
    if (!j.contains(key))
      throw ValidationError(std::string("pattern spec JSON missing field '") + key + "'");
  for (const char* key : {"k", "m", "M"})
    if (!j[key].is_number_unsigned())
      throw ValidationError(std::string("pattern spec field '") + key +
                            "' must be a nonnegative integer");
  std::optional<Rat> scale;
  if (j.contains("scale")) scale = rational_from_json(j["scale"]);
  return PatternSpec(j["k"].get<std::size_t>(), j["m"].get<std::size_t>(),
                     j["M"].get<std::size_t>(), real_function_from_json(j["phi"]),
                     std::move(scale));
}

inline Json embedding_to_json(const DisjEmbedding& e) {
  Json j;
  j["players"] = e.players;
  j["ground_size"] = e.ground_size;
  Json sel = Json::array();
  for (const auto& player : e.selectors) {
    Json per = Json::array();
    for (const std::string& z : player) per.push_back(z);
    sel.push_back(std::move(per));
  }
  j["selectors"] = std::move(sel);
  j["verified"] = e.verified;
  return j;
}

}  // namespace cinorm
