#pragma once
// Cylinder intersections over a product index space X_1 x ... x X_k, their
// 0/1 characteristic tensors, canonical basis enumeration, and the exact
// mu* correlation search.
//
// A cylinder in dimension i is a subset of the full index space whose
// membership does not depend on the i-th coordinate; it is stored as a
// subset of the complement space (all dimensions except i, row-major). A
// cylinder intersection intersects one cylinder per dimension.

#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"
#include "tensor.hpp"

namespace cinorm {

inline constexpr std::uint64_t kDefaultSearchCap = std::uint64_t{1} << 25;

// Flat index of `multi` in the product of all dimensions except `skip`,
// row-major in the original dimension order.
inline std::size_t complement_index(const Shape& shape, const std::vector<std::size_t>& multi,
                                    std::size_t skip) {
  std::size_t flat = 0;
  for (std::size_t j = 0; j < shape.rank(); ++j) {
    if (j == skip) continue;
    flat = flat * shape.dim(j) + multi[j];
  }
  return flat;
}

struct CylinderIntersection {
  Shape shape;
  // membership[i][q] = 1 iff cylinder i contains the complement-space point
  // with flat index q.
  std::vector<std::vector<std::uint8_t>> membership;

  CylinderIntersection(Shape s, std::vector<std::vector<std::uint8_t>> m)
      : shape(std::move(s)), membership(std::move(m)) {
    if (membership.size() != shape.rank())
      throw DimensionError("need exactly one cylinder per dimension");
    for (std::size_t i = 0; i < membership.size(); ++i) {
      if (membership[i].size() != shape.size() / shape.dim(i))
        throw DimensionError("cylinder membership length must match the complement space");
      for (std::uint8_t b : membership[i])
        if (b > 1) throw ValidationError("membership flags must be 0 or 1");
    }
  }
};

inline CylinderIntersection full_intersection(const Shape& shape) {
  std::vector<std::vector<std::uint8_t>> m(shape.rank());
  for (std::size_t i = 0; i < shape.rank(); ++i)
    m[i].assign(shape.size() / shape.dim(i), 1);
  return CylinderIntersection(shape, std::move(m));
}

inline RationalTensor characteristic_tensor(const CylinderIntersection& z) {
  const Shape& shape = z.shape;
  std::vector<Rat> e(shape.size());
  for (std::size_t x = 0; x < shape.size(); ++x) {
    const auto multi = shape.multi_index(x);
    bool in = true;
    for (std::size_t i = 0; i < shape.rank() && in; ++i)
      in = z.membership[i][complement_index(shape, multi, i)] != 0;
    e[x] = in ? 1 : 0;
  }
  return RationalTensor(shape, std::move(e));
}

// The canonical per-dimension-shadow representation of t, when t is the
// characteristic tensor of some cylinder intersection; nullopt otherwise.
// The zero tensor maps to the all-empty intersection.
inline std::optional<CylinderIntersection> as_cylinder_intersection(const RationalTensor& t) {
  if (!t.is_zero_one()) return std::nullopt;
  const Shape& shape = t.shape();
  std::vector<std::vector<std::uint8_t>> m(shape.rank());
  for (std::size_t i = 0; i < shape.rank(); ++i)
    m[i].assign(shape.size() / shape.dim(i), 0);
  for (std::size_t x = 0; x < shape.size(); ++x) {
    if (t[x] == 0) continue;
    const auto multi = shape.multi_index(x);
    for (std::size_t i = 0; i < shape.rank(); ++i)
      m[i][complement_index(shape, multi, i)] = 1;
  }
  CylinderIntersection z(shape, std::move(m));
  if (characteristic_tensor(z) != t) return std::nullopt;
  return z;
}

// All distinct nonzero characteristic tensors over a shape, in ascending
// lexicographic order of their row-major 0/1 entries, with one witnessing
// intersection each.
struct CylinderBasis {
  Shape shape;
  std::vector<RationalTensor> elements;
  std::vector<CylinderIntersection> witnesses;
};

namespace detail {

// comp[i][x] = complement-space flat index of point x with dimension i
// removed; bit_count[i] = size of the complement space of dimension i.
struct ComplementTables {
  std::vector<std::vector<std::size_t>> comp;
  std::vector<std::size_t> bit_count;

  explicit ComplementTables(const Shape& shape) {
    const std::size_t k = shape.rank();
    comp.assign(k, std::vector<std::size_t>(shape.size()));
    bit_count.resize(k);
    for (std::size_t i = 0; i < k; ++i) bit_count[i] = shape.size() / shape.dim(i);
    for (std::size_t x = 0; x < shape.size(); ++x) {
      const auto multi = shape.multi_index(x);
      for (std::size_t i = 0; i < k; ++i) comp[i][x] = complement_index(shape, multi, i);
    }
  }
};

inline std::vector<std::vector<std::uint8_t>> masks_to_membership(
    const Shape& shape, const std::vector<std::uint64_t>& masks) {
  std::vector<std::vector<std::uint8_t>> m(shape.rank());
  for (std::size_t i = 0; i < shape.rank(); ++i) {
    const std::size_t s = shape.size() / shape.dim(i);
    m[i].resize(s);
    for (std::size_t q = 0; q < s; ++q) m[i][q] = (masks[i] >> q) & 1;
  }
  return m;
}

}  // namespace detail

inline CylinderBasis enumerate_basis(const Shape& shape,
                                     std::uint64_t search_cap = kDefaultSearchCap) {
  const std::size_t k = shape.rank();
  detail::ComplementTables tables(shape);
  std::size_t total_bits = 0;
  for (std::size_t i = 0; i < k; ++i) total_bits += tables.bit_count[i];
  if (total_bits >= 64 || (std::uint64_t{1} << total_bits) > search_cap)
    throw CapacityError("basis enumeration needs 2^" + std::to_string(total_bits) +
                        " raw combinations, above the cap of " + std::to_string(search_cap));
  const std::uint64_t total = std::uint64_t{1} << total_bits;

  std::map<std::vector<std::uint8_t>, std::vector<std::uint64_t>> dedup;
  std::vector<std::uint64_t> masks(k);
  std::vector<std::uint8_t> entries(shape.size());
  for (std::uint64_t combo = 0; combo < total; ++combo) {
    std::uint64_t rest = combo;
    for (std::size_t i = 0; i < k; ++i) {
      masks[i] = rest & ((std::uint64_t{1} << tables.bit_count[i]) - 1);
      rest >>= tables.bit_count[i];
    }
    bool nonzero = false;
    for (std::size_t x = 0; x < shape.size(); ++x) {
      std::uint8_t v = 1;
      for (std::size_t i = 0; i < k && v; ++i) v = (masks[i] >> tables.comp[i][x]) & 1;
      entries[x] = v;
      nonzero |= v != 0;
    }
    if (nonzero) dedup.try_emplace(entries, masks);
  }

  CylinderBasis basis{shape, {}, {}};
  basis.elements.reserve(dedup.size());
  basis.witnesses.reserve(dedup.size());
  for (const auto& [entry, mask] : dedup) {
    std::vector<Rat> e(entry.size());
    for (std::size_t x = 0; x < entry.size(); ++x) e[x] = int(entry[x]);
    basis.elements.emplace_back(shape, std::move(e));
    basis.witnesses.emplace_back(shape, detail::masks_to_membership(shape, mask));
  }
  return basis;
}

struct MuStarResult {
  Rat value;
  CylinderIntersection witness;
};

namespace detail {

// Exact evaluation of one candidate: given masks for dimensions 0..k-2,
// compute the per-prefix sums w(p), choose the best last-dimension cylinder
// greedily, and return the witness and its exact value.
inline MuStarResult finish_mu_star(const RationalTensor& q, const ComplementTables& tables,
                                   const std::vector<std::uint64_t>& masks) {
  const Shape& shape = q.shape();
  const std::size_t k = shape.rank();
  const std::size_t nlast = shape.dim(k - 1);
  const std::size_t prefixes = shape.size() / nlast;

  std::vector<Rat> w(prefixes, Rat(0));
  for (std::size_t x = 0; x < shape.size(); ++x) {
    bool in = true;
    for (std::size_t i = 0; i + 1 < k && in; ++i) in = (masks[i] >> tables.comp[i][x]) & 1;
    if (in) w[x / nlast] += q[x];
  }
  Rat pos = 0, neg = 0;
  for (const Rat& v : w) {
    if (v > 0) pos += v;
    if (v < 0) neg -= v;
  }
  const bool take_pos = pos >= neg;

  std::vector<std::vector<std::uint8_t>> member = masks_to_membership(shape, masks);
  member[k - 1].assign(prefixes, 0);
  for (std::size_t p = 0; p < prefixes; ++p)
    member[k - 1][p] = take_pos ? (w[p] > 0) : (w[p] < 0);
  return MuStarResult{take_pos ? pos : neg, CylinderIntersection(shape, std::move(member))};
}

}  // namespace detail

// mu*(Q) = max over cylinder intersections Z of |<Q, chi(Z)>|, exactly.
// Cylinders in dimensions 1..k-1 are enumerated; the last dimension's
// cylinder is chosen greedily from the sign of each prefix sum, trying both
// signs. A 64-bit scaled fast path covers the enumeration when the common
// denominator permits; the chosen maximizer is always re-evaluated in exact
// rational arithmetic.
inline MuStarResult mu_star(const RationalTensor& q,
                            std::uint64_t search_cap = kDefaultSearchCap) {
  const Shape& shape = q.shape();
  const std::size_t k = shape.rank();

  if (k == 1) {
    Rat s = 0;
    for (std::size_t x = 0; x < q.size(); ++x) s += q[x];
    return MuStarResult{abs(s), full_intersection(shape)};
  }

  detail::ComplementTables tables(shape);
  std::size_t enum_bits = 0;
  for (std::size_t i = 0; i + 1 < k; ++i) enum_bits += tables.bit_count[i];
  if (enum_bits >= 64 || (std::uint64_t{1} << enum_bits) > search_cap)
    throw CapacityError("mu* search needs 2^" + std::to_string(enum_bits) +
                        " candidates, above the cap of " + std::to_string(search_cap));

  const std::size_t gray_dim = k - 2;  // innermost enumerated dimension
  const std::size_t gray_bits = tables.bit_count[gray_dim];
  std::size_t outer_bits = enum_bits - gray_bits;
  const std::uint64_t outer_total = std::uint64_t{1} << outer_bits;
  const std::uint64_t gray_total = std::uint64_t{1} << gray_bits;

  const std::size_t nlast = shape.dim(k - 1);
  const std::size_t prefixes = shape.size() / nlast;

  // Cells grouped by their complement index in the Gray-coded dimension;
  // flipping that membership bit touches exactly these cells.
  std::vector<std::vector<std::uint32_t>> cells_of_bit(gray_bits);
  for (std::size_t x = 0; x < shape.size(); ++x)
    cells_of_bit[tables.comp[gray_dim][x]].push_back(static_cast<std::uint32_t>(x));

  // 64-bit fast path: scale to integers by the common denominator when the
  // magnitudes stay comfortably inside the type.
  bool use_int = true;
  std::vector<long long> scaled(shape.size());
  Int lcm = 1;
  for (std::size_t x = 0; x < q.size(); ++x) lcm = lcm_int(lcm, q[x].get_den());
  {
    const Int limit = Int(std::int64_t{1} << 62) / Int(static_cast<unsigned long>(shape.size()));
    for (std::size_t x = 0; x < q.size() && use_int; ++x) {
      Int s = q[x].get_num() * (lcm / q[x].get_den());
      if (abs(s) > limit || !s.fits_slong_p())
        use_int = false;
      else
        scaled[x] = s.get_si();
    }
  }

  std::vector<std::uint64_t> best_masks(k - 1, 0);
  std::vector<std::uint64_t> masks(k - 1, 0);
  Rat search_value = 0;  // the winning candidate's value as the search saw it

  auto decode_outer = [&](std::uint64_t outer_id) {
    std::uint64_t rest = outer_id;
    for (std::size_t i = 0; i + 2 < k; ++i) {
      masks[i] = rest & ((std::uint64_t{1} << tables.bit_count[i]) - 1);
      rest >>= tables.bit_count[i];
    }
  };

  if (use_int) {
    std::vector<std::uint8_t> ind_other(shape.size());
    std::vector<long long> w(prefixes);
    long long best = 0;
    for (std::uint64_t outer = 0; outer < outer_total; ++outer) {
      decode_outer(outer);
      for (std::size_t x = 0; x < shape.size(); ++x) {
        std::uint8_t v = 1;
        for (std::size_t i = 0; i + 2 < k && v; ++i) v = (masks[i] >> tables.comp[i][x]) & 1;
        ind_other[x] = v;
      }
      std::fill(w.begin(), w.end(), 0);
      long long pos = 0, neg = 0;
      std::uint64_t cur = 0;
      for (std::uint64_t t = 1; t < gray_total; ++t) {
        const unsigned bit = static_cast<unsigned>(std::countr_zero(t));
        cur ^= std::uint64_t{1} << bit;
        const bool now_set = (cur >> bit) & 1;
        for (std::uint32_t x : cells_of_bit[bit]) {
          if (!ind_other[x]) continue;
          long long& wp = w[x / nlast];
          const long long old = wp;
          wp = now_set ? old + scaled[x] : old - scaled[x];
          // pos and neg hold the positive and absolute negative mass of w.
          if (old > 0) pos -= old;
          if (old < 0) neg += old;
          if (wp > 0) pos += wp;
          if (wp < 0) neg -= wp;
        }
        const long long val = pos > neg ? pos : neg;
        if (val > best) {
          best = val;
          best_masks = masks;
          best_masks[gray_dim] = cur;
        }
      }
    }
    search_value = Rat(Int(static_cast<long>(best))) / Rat(lcm);
    search_value.canonicalize();
  } else {
    std::vector<std::uint8_t> ind_other(shape.size());
    std::vector<Rat> w(prefixes);
    Rat best = 0;
    for (std::uint64_t outer = 0; outer < outer_total; ++outer) {
      decode_outer(outer);
      for (std::size_t x = 0; x < shape.size(); ++x) {
        std::uint8_t v = 1;
        for (std::size_t i = 0; i + 2 < k && v; ++i) v = (masks[i] >> tables.comp[i][x]) & 1;
        ind_other[x] = v;
      }
      std::fill(w.begin(), w.end(), Rat(0));
      Rat pos = 0, neg = 0;
      std::uint64_t cur = 0;
      for (std::uint64_t t = 1; t < gray_total; ++t) {
        const unsigned bit = static_cast<unsigned>(std::countr_zero(t));
        cur ^= std::uint64_t{1} << bit;
        const bool now_set = (cur >> bit) & 1;
        for (std::uint32_t x : cells_of_bit[bit]) {
          if (!ind_other[x]) continue;
          Rat& wp = w[x / nlast];
          if (wp > 0) pos -= wp;
          if (wp < 0) neg += wp;
          if (now_set)
            wp += q[x];
          else
            wp -= q[x];
          if (wp > 0) pos += wp;
          if (wp < 0) neg -= wp;
        }
        const Rat& val = pos > neg ? pos : neg;
        if (val > best) {
          best = val;
          best_masks = masks;
          best_masks[gray_dim] = cur;
        }
      }
    }
    search_value = best;
  }

  MuStarResult result = detail::finish_mu_star(q, tables, best_masks);
  // The incremental search and the exact from-scratch finish must agree on
  // the winning candidate's value; any drift means an arithmetic fault.
  if (result.value != search_value) throw std::logic_error("mu* search value mismatch");
  return result;
}

}  // namespace cinorm
