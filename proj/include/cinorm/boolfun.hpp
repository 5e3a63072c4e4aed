#pragma once
// Boolean and real-valued functions on {-1,+1}^m, characters, and the
// exact Fourier transform.
//
// Convention, fixed across the whole library: -1 encodes "true". Truth
// tables are indexed by an m-bit integer where bit j (counting from 0) set
// means coordinate j+1 equals -1.

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace cinorm {

inline constexpr std::size_t kMaxArity = 20;  // table length 2^m capped at 2^20

namespace detail {
inline std::size_t checked_table_length(std::size_t arity) {
  if (arity > kMaxArity)
    throw CapacityError("function arity " + std::to_string(arity) + " exceeds cap " +
                        std::to_string(kMaxArity));
  return std::size_t{1} << arity;
}
}  // namespace detail

struct BooleanFunction {
  std::size_t arity;
  std::vector<std::int8_t> table;  // values in {-1,+1}

  BooleanFunction(std::size_t m, std::vector<std::int8_t> t) : arity(m), table(std::move(t)) {
    if (table.size() != detail::checked_table_length(m))
      throw DimensionError("truth table length must be 2^arity");
    for (std::int8_t v : table)
      if (v != 1 && v != -1) throw ValidationError("truth table values must be +1 or -1");
  }
};

struct RealFunction {
  std::size_t arity;
  std::vector<Rat> table;

  // Values are canonicalized on ingestion; GMP equality needs canonical form.
  RealFunction(std::size_t m, std::vector<Rat> t) : arity(m), table(std::move(t)) {
    if (table.size() != detail::checked_table_length(m))
      throw DimensionError("value table length must be 2^arity");
    for (Rat& v : table) {
      if (v.get_den() == 0) throw ValidationError("zero denominator in function value");
      v.canonicalize();
    }
  }
};

inline RealFunction to_real(const BooleanFunction& f) {
  std::vector<Rat> t(f.table.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = int(f.table[i]);
  return RealFunction(f.arity, std::move(t));
}

// chi_S(x) = product of the coordinates selected by subset_mask, evaluated at
// the point encoded by point_index. Equals (-1)^popcount(S & x).
inline int character(std::uint32_t subset_mask, std::uint32_t point_index) {
  return (std::popcount(subset_mask & point_index) & 1) ? -1 : 1;
}

// Fourier coefficients indexed by subset mask; coefficients[S] = f^(S).
struct FourierSpectrum {
  std::size_t arity;
  std::vector<Rat> coefficients;

  // Largest |S| with a nonzero coefficient; 0 for the zero function.
  std::size_t degree() const {
    std::size_t d = 0;
    for (std::size_t s = 0; s < coefficients.size(); ++s)
      if (coefficients[s] != 0) {
        const auto w = static_cast<std::size_t>(std::popcount(static_cast<std::uint64_t>(s)));
        if (w > d) d = w;
      }
    return d;
  }
};

namespace detail {
// In-place Walsh-Hadamard butterfly; maps t to its character correlation
// vector: out[S] = sum_x t[x] * chi_S(x).
inline void walsh_hadamard(std::vector<Rat>& t) {
  for (std::size_t h = 1; h < t.size(); h <<= 1)
    for (std::size_t base = 0; base < t.size(); base += 2 * h)
      for (std::size_t j = base; j < base + h; ++j) {
        Rat u = t[j], v = t[j + h];
        t[j] = u + v;
        t[j + h] = u - v;
      }
}
}  // namespace detail

inline FourierSpectrum fourier_transform(const RealFunction& f) {
  std::vector<Rat> c = f.table;
  detail::walsh_hadamard(c);
  const Rat scale = pow2(-static_cast<long>(f.arity));
  for (Rat& v : c) v *= scale;
  return FourierSpectrum{f.arity, std::move(c)};
}

inline RealFunction inverse_fourier(const FourierSpectrum& s) {
  std::vector<Rat> t = s.coefficients;
  detail::walsh_hadamard(t);
  return RealFunction(s.arity, std::move(t));
}

inline Rat l1_of_function(const RealFunction& f) {
  Rat sum = 0;
  for (const Rat& v : f.table) sum += abs(v);
  return sum;
}

// Unnormalized inner product sum_x f(x) g(x).
inline Rat function_inner(const RealFunction& f, const RealFunction& g) {
  if (f.arity != g.arity) throw DimensionError("function arity mismatch");
  Rat sum = 0;
  for (std::size_t i = 0; i < f.table.size(); ++i) sum += f.table[i] * g.table[i];
  return sum;
}

// Built-in families. OR is -1 iff some input is -1; AND is -1 iff all are.
inline BooleanFunction make_or(std::size_t m) {
  const std::size_t n = detail::checked_table_length(m);
  std::vector<std::int8_t> t(n, -1);
  t[0] = 1;
  return BooleanFunction(m, std::move(t));
}

inline BooleanFunction make_and(std::size_t m) {
  const std::size_t n = detail::checked_table_length(m);
  std::vector<std::int8_t> t(n, 1);
  t[n - 1] = -1;
  return BooleanFunction(m, std::move(t));
}

inline BooleanFunction make_xor(std::size_t m) {
  const std::size_t n = detail::checked_table_length(m);
  std::vector<std::int8_t> t(n);
  for (std::size_t i = 0; i < n; ++i)
    t[i] = (std::popcount(static_cast<std::uint64_t>(i)) & 1) ? -1 : 1;
  return BooleanFunction(m, std::move(t));
}

/// Strict majority: -1 iff more than half of the inputs are -1.
inline BooleanFunction make_majority(std::size_t m) {
  const std::size_t n = detail::checked_table_length(m);
  std::vector<std::int8_t> t(n);
  for (std::size_t i = 0; i < n; ++i)
    t[i] = (2 * static_cast<std::size_t>(std::popcount(static_cast<std::uint64_t>(i))) > m) ? -1
                                                                                            : 1;
  return BooleanFunction(m, std::move(t));
}

/// k-party set disjointness on n-bit sets: the arity is k*n with player p
// holding coordinates (p-1)*n+1 .. p*n, and the value is
// -OR_n(x_1 AND ... AND x_k) under the -1 = "true" convention, i.e. -1
// exactly when the k sets have empty intersection.
inline BooleanFunction make_disjointness(std::size_t k, std::size_t n) {
  if (k < 1 || n < 1) throw ValidationError("disjointness needs k >= 1 and n >= 1");
  const std::size_t arity = k * n;
  const std::size_t len = detail::checked_table_length(arity);
  std::vector<std::int8_t> t(len);
  for (std::size_t i = 0; i < len; ++i) {
    bool intersect = false;
    for (std::size_t b = 0; b < n && !intersect; ++b) {
      bool all = true;
      for (std::size_t p = 0; p < k && all; ++p) all = (i >> (p * n + b)) & 1;
      intersect = all;
    }
    t[i] = intersect ? 1 : -1;
  }
  return BooleanFunction(arity, std::move(t));
}

inline BooleanFunction builtin_function(const std::string& name, std::size_t m,
                                        std::size_t k = 0) {
  if (name == "OR") return make_or(m);
  if (name == "AND") return make_and(m);
  if (name == "XOR") return make_xor(m);
  if (name == "MAJ") return make_majority(m);
  if (name == "DISJ") {
    if (k == 0) throw ValidationError("DISJ requires a player count k");
    return make_disjointness(k, m);
  }
  throw ValidationError("unknown builtin function: " + name);
}

}  // namespace cinorm
