#pragma once
// Dense k-dimensional tensors with exact rational entries, plus the
// elementary operations used everywhere else: inner and Hadamard products,
// l1/linf norms, the axis contraction product, and mean absolute value.
//
// Entries are stored row-major (last index fastest). All values are
// immutable in practice: operations are pure functions returning new
// tensors, so sharing across threads is safe.

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace cinorm {

inline constexpr std::size_t kDefaultSizeCap = std::size_t{1} << 20;

class Shape {
 public:
  explicit Shape(std::vector<std::size_t> dims, std::size_t size_cap = kDefaultSizeCap)
      : dims_(std::move(dims)), size_(1) {
    if (dims_.empty()) throw ValidationError("tensor rank must be at least 1");
    for (std::size_t n : dims_) {
      if (n == 0) throw ValidationError("tensor dimensions must be positive");
      if (size_ > size_cap / n)
        throw CapacityError("tensor size exceeds the cap of " + std::to_string(size_cap) +
                            " entries");
      size_ *= n;
    }
  }

  std::size_t rank() const { return dims_.size(); }
  std::size_t dim(std::size_t i) const { return dims_[i]; }
  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t size() const { return size_; }

  std::size_t flat_index(const std::vector<std::size_t>& multi) const {
    if (multi.size() != dims_.size()) throw DimensionError("multi-index rank mismatch");
    std::size_t flat = 0;
    for (std::size_t i = 0; i < dims_.size(); ++i) {
      if (multi[i] >= dims_[i]) throw DimensionError("multi-index out of range");
      flat = flat * dims_[i] + multi[i];
    }
    return flat;
  }

  std::vector<std::size_t> multi_index(std::size_t flat) const {
    std::vector<std::size_t> multi(dims_.size());
    for (std::size_t i = dims_.size(); i-- > 0;) {
      multi[i] = flat % dims_[i];
      flat /= dims_[i];
    }
    return multi;
  }

  friend bool operator==(const Shape& a, const Shape& b) { return a.dims_ == b.dims_; }
  friend bool operator!=(const Shape& a, const Shape& b) { return !(a == b); }

 private:
  std::vector<std::size_t> dims_;
  std::size_t size_;
};

class RationalTensor {
 public:
  // Entries are brought to canonical form on ingestion; GMP's equality
  // primitives are only reliable on canonical rationals.
  RationalTensor(Shape shape, std::vector<Rat> entries)
      : shape_(std::move(shape)), entries_(std::move(entries)) {
    if (entries_.size() != shape_.size())
      throw DimensionError("entry count does not match shape size");
    for (Rat& e : entries_) {
      if (e.get_den() == 0) throw ValidationError("zero denominator in tensor entry");
      e.canonicalize();
    }
  }

  static RationalTensor constant(const Shape& shape, const Rat& value) {
    return RationalTensor(shape, std::vector<Rat>(shape.size(), value));
  }
  static RationalTensor zero(const Shape& shape) { return constant(shape, 0); }
  static RationalTensor ones(const Shape& shape) { return constant(shape, 1); }

  const Shape& shape() const { return shape_; }
  std::size_t size() const { return shape_.size(); }
  const std::vector<Rat>& entries() const { return entries_; }

  const Rat& operator[](std::size_t flat) const { return entries_[flat]; }
  Rat& operator[](std::size_t flat) { return entries_[flat]; }
  const Rat& at(const std::vector<std::size_t>& multi) const {
    return entries_[shape_.flat_index(multi)];
  }

  bool is_sign() const {
    for (const Rat& e : entries_)
      if (e != 1 && e != -1) return false;
    return true;
  }
  bool is_zero_one() const {
    for (const Rat& e : entries_)
      if (e != 0 && e != 1) return false;
    return true;
  }

  friend bool operator==(const RationalTensor& a, const RationalTensor& b) {
    return a.shape_ == b.shape_ && a.entries_ == b.entries_;
  }
  friend bool operator!=(const RationalTensor& a, const RationalTensor& b) { return !(a == b); }

 private:
  Shape shape_;
  std::vector<Rat> entries_;
};

// A tensor whose entries are all +1 or -1.
class SignTensor {
 public:
  SignTensor(Shape shape, std::vector<std::int8_t> entries)
      : shape_(std::move(shape)), entries_(std::move(entries)) {
    if (entries_.size() != shape_.size())
      throw DimensionError("entry count does not match shape size");
    for (std::int8_t e : entries_)
      if (e != 1 && e != -1) throw ValidationError("sign tensor entries must be +1 or -1");
  }

  static SignTensor from_rational(const RationalTensor& t) {
    std::vector<std::int8_t> e(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (t[i] == 1)
        e[i] = 1;
      else if (t[i] == -1)
        e[i] = -1;
      else
        throw ValidationError("tensor entry is not +1 or -1");
    }
    return SignTensor(t.shape(), std::move(e));
  }

  const Shape& shape() const { return shape_; }
  std::size_t size() const { return shape_.size(); }
  std::int8_t operator[](std::size_t flat) const { return entries_[flat]; }
  const std::vector<std::int8_t>& entries() const { return entries_; }

  RationalTensor to_rational() const {
    std::vector<Rat> e(entries_.size());
    for (std::size_t i = 0; i < entries_.size(); ++i) e[i] = int(entries_[i]);
    return RationalTensor(shape_, std::move(e));
  }

 private:
  Shape shape_;
  std::vector<std::int8_t> entries_;
};

inline Rat inner_product(const RationalTensor& a, const RationalTensor& b) {
  if (a.shape() != b.shape()) throw DimensionError("inner product requires equal shapes");
  Rat sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

inline RationalTensor hadamard_product(const RationalTensor& a, const RationalTensor& b) {
  if (a.shape() != b.shape()) throw DimensionError("Hadamard product requires equal shapes");
  std::vector<Rat> e(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) e[i] = a[i] * b[i];
  return RationalTensor(a.shape(), std::move(e));
}

inline Rat l1_norm(const RationalTensor& a) {
  Rat sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += abs(a[i]);
  return sum;
}

inline Rat linf_norm(const RationalTensor& a) {
  Rat best = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    Rat v = abs(a[i]);
    if (v > best) best = v;
  }
  return best;
}

inline Rat mean_abs(const RationalTensor& a) { return l1_norm(a) / Rat(a.size()); }

inline RationalTensor scaled(const RationalTensor& a, const Rat& c) {
  std::vector<Rat> e(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) e[i] = c * a[i];
  return RationalTensor(a.shape(), std::move(e));
}

inline RationalTensor operator+(const RationalTensor& a, const RationalTensor& b) {
  if (a.shape() != b.shape()) throw DimensionError("sum requires equal shapes");
  std::vector<Rat> e(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) e[i] = a[i] + b[i];
  return RationalTensor(a.shape(), std::move(e));
}

inline RationalTensor operator-(const RationalTensor& a, const RationalTensor& b) {
  if (a.shape() != b.shape()) throw DimensionError("difference requires equal shapes");
  std::vector<Rat> e(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) e[i] = a[i] - b[i];
  return RationalTensor(a.shape(), std::move(e));
}

// Contraction product along `axis` (1-based). For a k-tensor B the result is
// a 2(k-1)-tensor indexed by interleaved pairs (x_2, x_2', x_3, x_3', ...)
// of the non-contracted dimensions, in their original order. Each entry is
// the average over the contracted coordinate y of the product of B over all
// 2^(k-1) ways of picking the plain or primed value in every pair.
inline RationalTensor contraction_product(const RationalTensor& b, std::size_t axis,
                                          std::size_t size_cap = kDefaultSizeCap) {
  const std::size_t k = b.shape().rank();
  if (k < 2) throw DimensionError("contraction product requires rank at least 2");
  if (axis < 1 || axis > k) throw DimensionError("contraction axis out of range");
  const std::size_t a = axis - 1;

  std::vector<std::size_t> kept;  // non-contracted axes in order
  for (std::size_t i = 0; i < k; ++i)
    if (i != a) kept.push_back(i);

  std::vector<std::size_t> out_dims;
  for (std::size_t i : kept) {
    out_dims.push_back(b.shape().dim(i));
    out_dims.push_back(b.shape().dim(i));
  }
  Shape out_shape(out_dims, size_cap);

  const std::size_t pairs = kept.size();
  const std::size_t choices = std::size_t{1} << pairs;
  const std::size_t na = b.shape().dim(a);

  std::vector<Rat> out(out_shape.size());
  std::vector<std::size_t> multi(k);
  for (std::size_t flat = 0; flat < out_shape.size(); ++flat) {
    const auto om = out_shape.multi_index(flat);
    Rat sum = 0;
    for (std::size_t y = 0; y < na; ++y) {
      Rat prod = 1;
      for (std::size_t c = 0; c < choices && prod != 0; ++c) {
        multi[a] = y;
        for (std::size_t j = 0; j < pairs; ++j)
          multi[kept[j]] = om[2 * j + ((c >> j) & 1)];
        prod *= b.at(multi);
      }
      sum += prod;
    }
    out[flat] = sum / Rat(na);
  }
  return RationalTensor(out_shape, std::move(out));
}

}  // namespace cinorm
