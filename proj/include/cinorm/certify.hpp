#pragma once
// Machine-checkable lower-bound certificates. A certificate is an ordered
// list of steps, each carrying a claim, a citation, a status, and the exact
// values the claim is about. check_certificate re-validates every step from
// the stored payload alone with exact arithmetic; the only recomputation it
// performs is cheap and LP-free (inner products, Fourier sums, contraction
// products, and small mu* enumerations).
//
// Values that are not rational live in the 2-power domain: a Quantity is
// 2^exp2 * factor^(1/root) with rational exp2 and factor. Comparisons raise
// both sides to the least common integer power, so no logarithm is ever
// taken in floating point; decimal bits appear only in rendered text.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "approxdeg.hpp"
#include "boolfun.hpp"
#include "cylinders.hpp"
#include "errors.hpp"
#include "pattern.hpp"
#include "rational.hpp"
#include "tensor.hpp"
#include "tensor_io.hpp"

namespace cinorm {

// ---------------------------------------------------------------------------
// Exact 2-power quantities

struct Quantity {
  Rat exp2 = 0;    // exponent of the power-of-two part
  Rat factor = 1;  // multiplied in as factor^(1/root); 0 encodes the value 0
  unsigned long root = 1;
};

namespace detail {

inline void validate_quantity(const Quantity& q) {
  if (q.exp2.get_den() == 0 || q.factor.get_den() == 0)
    throw ValidationError("zero denominator in quantity");
  if (q.root < 1) throw ValidationError("quantity root must be positive");
  if (q.factor < 0) throw ValidationError("quantity factor must be nonnegative");
}

// The least integer power that clears both roots and both exponent
// denominators, so that q^L is an exact rational.
inline unsigned long common_power(const Quantity& a, const Quantity& b) {
  Int l = lcm_int(Int(a.root), Int(b.root));
  l = lcm_int(l, a.exp2.get_den());
  l = lcm_int(l, b.exp2.get_den());
  if (l > 1000000) throw CapacityError("quantity comparison power too large");
  return l.get_ui();
}

inline Rat quantity_power(const Quantity& q, unsigned long l) {
  const Rat e = q.exp2 * static_cast<unsigned long>(l);
  if (e.get_den() != 1) throw std::logic_error("common power does not clear the exponent");
  if (!e.get_num().fits_slong_p()) throw CapacityError("quantity exponent too large");
  return rat_pow(Rat(2), e.get_num().get_si()) *
         rat_pow(q.factor, static_cast<long>(l / q.root));
}

}  // namespace detail

inline int quantity_cmp(const Quantity& a, const Quantity& b) {
  detail::validate_quantity(a);
  detail::validate_quantity(b);
  const bool az = a.factor == 0, bz = b.factor == 0;
  if (az && bz) return 0;
  if (az) return -1;
  if (bz) return 1;
  const unsigned long l = detail::common_power(a, b);
  const Rat pa = detail::quantity_power(a, l);
  const Rat pb = detail::quantity_power(b, l);
  return pa < pb ? -1 : (pa > pb ? 1 : 0);
}

inline bool quantity_eq(const Quantity& a, const Quantity& b) { return quantity_cmp(a, b) == 0; }
inline bool quantity_leq(const Quantity& a, const Quantity& b) { return quantity_cmp(a, b) <= 0; }

inline Quantity quantity_from_rational(const Rat& r) {
  if (r < 0) throw ValidationError("quantities are nonnegative");
  return Quantity{0, r, 1};
}

inline Quantity quantity_times(const Quantity& a, const Quantity& b) {
  detail::validate_quantity(a);
  detail::validate_quantity(b);
  if (a.factor == 0 || b.factor == 0) return Quantity{0, 0, 1};
  const Int l = lcm_int(Int(a.root), Int(b.root));
  if (l > 1000000) throw CapacityError("quantity product root too large");
  const unsigned long r = l.get_ui();
  return Quantity{a.exp2 + b.exp2,
                  rat_pow(a.factor, static_cast<long>(r / a.root)) *
                      rat_pow(b.factor, static_cast<long>(r / b.root)),
                  r};
}

inline Quantity quantity_reciprocal(const Quantity& q) {
  detail::validate_quantity(q);
  if (q.factor == 0) throw ValidationError("cannot invert a zero quantity");
  return Quantity{-q.exp2, 1 / q.factor, q.root};
}

// log2 of the quantity when it is exactly representable as a rational, i.e.
// when the factor is a power of two (or one).
inline std::optional<Rat> quantity_log2_exact(const Quantity& q) {
  detail::validate_quantity(q);
  if (q.factor == 0) return std::nullopt;
  const Int num = q.factor.get_num();
  const Int den = q.factor.get_den();
  const auto pow2_log = [](const Int& v) -> std::optional<long> {
    if (v <= 0 || mpz_popcount(v.get_mpz_t()) != 1) return std::nullopt;
    return static_cast<long>(mpz_sizeinbase(v.get_mpz_t(), 2)) - 1;
  };
  const auto pn = pow2_log(num);
  const auto pd = pow2_log(den);
  if (!pn || !pd) return std::nullopt;
  Rat l = q.exp2 + Rat(*pn - *pd) / Rat(q.root);
  l.canonicalize();
  return l;
}

// Largest multiple of 2^-20 that does not exceed the quantity; a sound
// rational underestimate for conversions that need to leave the 2-power
// domain (the nondeterministic bit bound).
inline Rat quantity_lower_bound(const Quantity& q, unsigned long precision_bits = 20) {
  detail::validate_quantity(q);
  if (q.factor == 0) return 0;
  // Binary search the largest integer x with (x / 2^p)^L <= q^L.
  Int lo = 0, hi = 1;
  const auto leq = [&](const Int& x) {
    Quantity cand{-Rat(precision_bits), Rat(x), 1};
    if (x == 0) cand = Quantity{0, 0, 1};
    return quantity_cmp(cand, q) <= 0;
  };
  while (leq(hi)) hi <<= 1;
  while (lo + 1 < hi) {
    const Int mid = (lo + hi) / 2;
    if (leq(mid)) lo = mid;
    else hi = mid;
  }
  Rat r(lo, Int(1) << precision_bits);
  r.canonicalize();
  return r;
}

inline double quantity_approx(const Quantity& q) {
  if (q.factor == 0) return 0.0;
  return std::pow(2.0, q.exp2.get_d()) *
         std::pow(q.factor.get_d(), 1.0 / static_cast<double>(q.root));
}

inline Json quantity_to_json(const Quantity& q) {
  Json j;
  j["exp2"] = rational_to_json(q.exp2);
  j["factor"] = rational_to_json(q.factor);
  j["root"] = q.root;
  return j;
}

inline Quantity quantity_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("quantity JSON must be an object");
  for (const char* key : {"exp2", "factor", "root"})
    if (!j.contains(key))
      throw ValidationError(std::string("quantity JSON missing field '") + key + "'");
  if (!j["root"].is_number_unsigned())
    throw ValidationError("quantity root must be a positive integer");
  Quantity q{rational_from_json(j["exp2"]), rational_from_json(j["factor"]),
             j["root"].get<unsigned long>()};
  detail::validate_quantity(q);
  return q;
}

// ---------------------------------------------------------------------------
// Certificate structure

enum class StepStatus { VerifiedExact, VerifiedByEnumeration, ExternalAssumption };

struct CertStep {
  std::string kind;      // checker dispatch key
  std::string claim;     // human-readable statement
  std::string citation;  // where the justification lives
  StepStatus status = StepStatus::VerifiedExact;
  std::map<std::string, Rat> rationals;
  std::map<std::string, Quantity> quantities;
  std::map<std::string, RationalTensor> tensors;
};

struct BoundCertificate {
  std::string title;
  std::string bound_kind;  // "mu-alpha", "mu-infinity", "mu-star-upper",
                           // "randomized-cc", ..., "contraction", "proof-size"
  std::optional<Rat> alpha;
  bool trivial = false;
  std::vector<CertStep> steps;
  Quantity final_bound;
  std::string final_claim;
};

struct CheckReport {
  bool ok = false;
  std::size_t verified_exact = 0;
  std::size_t verified_enum = 0;
  std::size_t external = 0;
  std::size_t failed = 0;
  std::vector<std::string> failures;
};

// ---------------------------------------------------------------------------
// Shared arithmetic pieces

// A rational strictly above Euler's number: 2.71828182845905. Soundness of
// every use only needs an upper bound on e, certified by the Taylor tail
// e < sum_{j<=17} 1/j! + (1/18!) * (19/18).
inline Rat euler_hat() {
  Rat e(Int("271828182845905"), int_pow(Int(10), 14));
  e.canonicalize();
  return e;
}

inline Rat euler_taylor_upper() {
  Rat sum = 0, term = 1;
  for (unsigned long j = 0; j <= 17; ++j) {
    sum += term;
    term /= (j + 1);
  }
  return sum + term * Rat(19, 18);  // term is 1/18!
}

namespace detail {

inline Rat two_pow_two_pow(std::size_t k) {  // 2^(2^(k-1))
  if (k < 1 || k > 16) throw CapacityError("player count outside the certified range");
  return Rat(Int(1) << (1ul << (k - 1)));
}

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

inline const Rat& need_rat(const CertStep& s, const std::string& key) {
  const auto it = s.rationals.find(key);
  if (it == s.rationals.end())
    throw ValidationError("step payload missing rational '" + key + "'");
  return it->second;
}

inline const Quantity& need_quantity(const CertStep& s, const std::string& key) {
  const auto it = s.quantities.find(key);
  if (it == s.quantities.end())
    throw ValidationError("step payload missing quantity '" + key + "'");
  return it->second;
}

inline const RationalTensor& need_tensor(const CertStep& s, const std::string& key) {
  const auto it = s.tensors.find(key);
  if (it == s.tensors.end())
    throw ValidationError("step payload missing tensor '" + key + "'");
  return it->second;
}

inline Int need_int(const CertStep& s, const std::string& key) {
  const Rat& r = need_rat(s, key);
  if (!is_integer(r)) throw ValidationError("payload '" + key + "' must be an integer");
  return r.get_num();
}

inline std::size_t need_size(const CertStep& s, const std::string& key) {
  const Int v = need_int(s, key);
  if (v < 0 || !v.fits_ulong_p())
    throw ValidationError("payload '" + key + "' out of machine range");
  return static_cast<std::size_t>(v.get_ui());
}

}  // namespace detail

// M * d >= 2 ehat (k-1) 2^(2^(k-1)) m, the margin the pattern correlation
// bound needs between the side length and the vanishing degree.
inline Rat side_condition_rhs(std::size_t k, const Int& m, const Rat& ehat) {
  return 2 * ehat * static_cast<unsigned long>(k - 1) * detail::two_pow_two_pow(k) * Rat(m);
}

inline bool side_condition_holds(std::size_t k, const Int& m, const Int& M, const Int& d,
                                 const Rat& ehat) {
  if (k < 2) throw ValidationError("side condition needs at least 2 players");
  return Rat(M * d) >= side_condition_rhs(k, m, ehat);
}

// ---------------------------------------------------------------------------
// Hadamard tensors

// A sign tensor is Hadamard when its self contraction along the first axis
// vanishes at every doubled index whose pairs all differ.
inline bool is_hadamard(const SignTensor& h, std::size_t size_cap = kDefaultSizeCap) {
  const RationalTensor c = contraction_product(h.to_rational(), 1, size_cap);
  const Shape& s = c.shape();
  for (std::size_t flat = 0; flat < s.size(); ++flat) {
    const auto multi = s.multi_index(flat);
    bool all_differ = true;
    for (std::size_t p = 0; p + 1 < multi.size() && all_differ; p += 2)
      all_differ = multi[p] != multi[p + 1];
    if (all_differ && c[flat] != 0) return false;
  }
  return true;
}

namespace detail {

inline RationalTensor flat_tensor(const std::vector<Rat>& values) {
  return RationalTensor(Shape({values.size()}), values);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Emitters

// claim: (mu*(B)/size(B))^(2^(k-1)) <= mu*(B.B)/size(B.B) <= E|B.B|, all
// three quantities computed exactly by enumeration.
inline BoundCertificate contraction_chain_check(const RationalTensor& b,
                                                std::size_t size_cap = kDefaultSizeCap,
                                                std::uint64_t search_cap = kDefaultSearchCap) {
  const std::size_t k = b.shape().rank();
  const RationalTensor bb = contraction_product(b, 1, size_cap);
  const Rat ms_b = mu_star(b, search_cap).value;
  const Rat ms_bb = mu_star(bb, search_cap).value;
  const Rat mean_bb = mean_abs(bb);

  const Rat lhs = rat_pow(ms_b / Rat(static_cast<unsigned long>(b.size())),
                          static_cast<long>(std::size_t{1} << (k - 1)));
  const Rat mid = ms_bb / Rat(static_cast<unsigned long>(bb.size()));
  if (lhs > mid || mid > mean_bb)
    throw std::logic_error("contraction chain inequality failed on exact values");

  CertStep step;
  step.kind = "contraction-chain";
  step.claim = "(mu*(B)/size(B))^(2^(k-1)) <= mu*(B.B)/size(B.B) <= E|B.B| for the stored B";
  step.citation = "Cauchy-Schwarz contraction argument (Babai-Nisan-Szegedy)";
  step.status = StepStatus::VerifiedByEnumeration;
  step.rationals.emplace("players", Rat(static_cast<unsigned long>(k)));
  step.rationals.emplace("mu_star_b", ms_b);
  step.rationals.emplace("mu_star_bb", ms_bb);
  step.rationals.emplace("mean_abs_bb", mean_bb);
  step.tensors.emplace("b", b);
  step.quantities.emplace("bound", quantity_from_rational(mid));

  BoundCertificate cert;
  cert.title = "contraction chain";
  cert.bound_kind = "contraction";
  cert.steps.push_back(std::move(step));
  cert.final_bound = quantity_from_rational(mid);
  cert.final_claim = "normalized correlation of the contracted tensor is " + rational_text(mid);
  return cert;
}

// mu^inf(H) >= <H,H>/mu*(H) = N^k/mu*(H) >= (N/(k-1))^(1/2^(k-1)) for a
// Hadamard tensor H of side N, with mu*(H) found by exact enumeration and
// additionally bounded through the contraction chain.
inline BoundCertificate hadamard_bound(const SignTensor& h,
                                       std::size_t size_cap = kDefaultSizeCap,
                                       std::uint64_t search_cap = kDefaultSearchCap) {
  const std::size_t k = h.shape().rank();
  if (k < 2) throw ValidationError("Hadamard bounds need at least 2 dimensions");
  const std::size_t n = h.shape().dim(0);
  for (std::size_t i = 0; i < k; ++i)
    if (h.shape().dim(i) != n) throw ValidationError("Hadamard tensors must be cubes");
  if (!is_hadamard(h, size_cap)) throw ValidationError("input is not a Hadamard tensor");

  const RationalTensor hr = h.to_rational();
  const Rat gram = inner_product(hr, hr);
  if (gram != Rat(static_cast<unsigned long>(h.size())))
    throw std::logic_error("sign tensor gram must equal its size");
  const Rat ms = mu_star(hr, search_cap).value;
  if (ms <= 0) throw std::logic_error("mu* of a sign tensor is positive");
  const Quantity bound = quantity_from_rational(gram / ms);
  const Quantity target{0, Rat(static_cast<unsigned long>(n)) / static_cast<unsigned long>(k - 1),
                        1ul << (k - 1)};
  if (!quantity_leq(target, bound))
    throw std::logic_error("Hadamard bound fell below its guaranteed target");

  BoundCertificate cert;
  cert.title = "Hadamard tensor bound, side " + std::to_string(n);
  cert.bound_kind = "mu-infinity";

  CertStep had;
  had.kind = "hadamard-check";
  had.claim = "the stored tensor is a Hadamard cube of side " + std::to_string(n);
  had.citation = "vanishing self-contraction at fully distinct doubled indices";
  had.status = StepStatus::VerifiedExact;
  had.rationals.emplace("side", Rat(static_cast<unsigned long>(n)));
  had.tensors.emplace("h", hr);
  cert.steps.push_back(std::move(had));

  cert.steps.push_back(contraction_chain_check(hr, size_cap, search_cap).steps.front());

  CertStep ms_step;
  ms_step.kind = "mu-star-enumeration";
  ms_step.claim = "mu*(H) = " + rational_text(ms) + " by exhaustive search";
  ms_step.citation = "exact enumeration over cylinder intersections";
  ms_step.status = StepStatus::VerifiedByEnumeration;
  ms_step.rationals.emplace("value", ms);
  ms_step.tensors.emplace("q", hr);
  cert.steps.push_back(std::move(ms_step));

  CertStep gram_step;
  gram_step.kind = "inner-product-eq";
  gram_step.claim = "<H,H> = " + rational_text(gram) + " = N^k";
  gram_step.citation = "direct summation";
  gram_step.status = StepStatus::VerifiedExact;
  gram_step.rationals.emplace("value", gram);
  gram_step.tensors.emplace("a", hr);
  gram_step.tensors.emplace("b", hr);
  cert.steps.push_back(std::move(gram_step));

  CertStep dual;
  dual.kind = "mu-inf-duality-witness";
  dual.claim = "mu^inf(H) >= <H,H>/mu*(H) = " + rational_text(gram / ms) +
               " via the witness Q = H/mu*(H), which has H o Q >= 0 and correlation at most 1 "
               "with every cylinder intersection";
  dual.citation = "duality between mu^inf and mu*";
  dual.status = StepStatus::VerifiedExact;
  dual.rationals.emplace("mu_star", ms);
  dual.rationals.emplace("gram", gram);
  dual.quantities.emplace("bound", bound);
  cert.steps.push_back(std::move(dual));

  CertStep cmp;
  cmp.kind = "quantity-leq";
  cmp.claim = "(N/(k-1))^(1/2^(k-1)) <= <H,H>/mu*(H)";
  cmp.citation = "Ford-Gal";
  cmp.status = StepStatus::VerifiedExact;
  cmp.quantities.emplace("lhs", target);
  cmp.quantities.emplace("rhs", bound);
  cert.steps.push_back(std::move(cmp));

  cert.final_bound = bound;
  cert.final_claim = "mu^inf(H) >= " + rational_text(gram / ms);
  return cert;
}

namespace detail {

inline CertStep euler_step() {
  CertStep s;
  s.kind = "euler-upper-bound";
  s.claim = "ehat = 271828182845905/10^14 exceeds Euler's number";
  s.citation = "Taylor series tail bound";
  s.status = StepStatus::VerifiedExact;
  s.rationals.emplace("euler_hat", euler_hat());
  return s;
}

inline CertStep side_condition_step(std::size_t k, const Int& m, const Int& M, const Int& d) {
  if (!side_condition_holds(k, m, M, d, euler_hat()))
    throw ConditionViolatedError(
        "side condition fails: M*d = " + Rat(M * d).get_str() + " < 2*ehat*(k-1)*2^(2^(k-1))*m = " +
        side_condition_rhs(k, m, euler_hat()).get_str());
  CertStep s;
  s.kind = "side-condition";
  s.claim = "M*d >= 2*ehat*(k-1)*2^(2^(k-1))*m for (k,m,M,d) = (" + std::to_string(k) + "," +
            m.get_str() + "," + M.get_str() + "," + d.get_str() + ")";
  s.citation = "exact cross-multiplication";
  s.status = StepStatus::VerifiedExact;
  s.rationals.emplace("k", Rat(static_cast<unsigned long>(k)));
  s.rationals.emplace("m", Rat(m));
  s.rationals.emplace("M", Rat(M));
  s.rationals.emplace("dprime", Rat(d));
  s.rationals.emplace("euler_hat", euler_hat());
  return s;
}

inline CertStep pattern_mu_star_step(std::size_t k, const Int& m, const Int& M, const Int& d) {
  CertStep s;
  s.kind = "pattern-mu-star";
  s.claim = "mu*(Q) <= 2^(-d/2^(k-1)) for the pattern tensor built from the normalized "
            "inner function with vanishing degree d = " + d.get_str();
  s.citation = "iterated contraction bound for pattern tensors (Babai-Nisan-Szegedy method)";
  s.status = StepStatus::ExternalAssumption;
  s.rationals.emplace("k", Rat(static_cast<unsigned long>(k)));
  s.rationals.emplace("m", Rat(m));
  s.rationals.emplace("M", Rat(M));
  s.rationals.emplace("dprime", Rat(d));
  s.rationals.emplace("euler_hat", euler_hat());
  s.quantities.emplace("mu_star_bound",
                       Quantity{-Rat(d) / Rat(std::size_t{1} << (k - 1)), 1, 1});
  return s;
}

inline CertStep normalization_step() {
  CertStep s;
  s.kind = "pattern-normalization";
  s.claim = "||Q||_1 = 1: the scale 2^m/size spreads the unit-norm inner function uniformly "
            "(every m-bit input selected exactly size/2^m times)";
  s.citation = "uniform coverage of pattern tensors";
  s.status = StepStatus::VerifiedExact;
  s.rationals.emplace("phi_l1", Rat(1));
  return s;
}

}  // namespace detail

// The correlation bound mu*(Q) <= 2^(-d/2^(k-1)) for a pattern tensor whose
// inner function is a verified dual polynomial: checks the premises (unit l1
// norm, Fourier vanishing up to d) by direct transform, checks the side
// condition exactly, and emits the bound with the lemma as an assumption.
inline BoundCertificate pattern_mu_star_bound(const PatternSpec& spec, std::size_t d) {
  const std::size_t k = spec.players;
  const std::size_t m = spec.blocks;
  if (spec.phi.arity != m) throw DimensionError("inner function arity mismatch");
  if (d > m) throw ValidationError("vanishing degree exceeds the block count");
  if (spec.scale)
    throw ValidationError("the correlation lemma applies to the default normalization; "
                          "leave the scale unset");

  Rat l1 = 0;
  for (const Rat& v : spec.phi.table) l1 += abs(v);
  if (l1 != 1)
    throw ValidationError("unverifiable premises: the inner function is not l1-normalized");
  for (std::uint32_t s = 0; s < (std::uint32_t{1} << m); ++s) {
    if (static_cast<std::size_t>(std::popcount(s)) > d) continue;
    Rat dot = 0;
    for (std::size_t x = 0; x < spec.phi.table.size(); ++x)
      dot += spec.phi.table[x] * character(s, static_cast<std::uint32_t>(x));
    if (dot != 0)
      throw ValidationError("unverifiable premises: Fourier mass below the vanishing degree");
  }

  BoundCertificate cert;
  cert.title = "pattern correlation bound";
  cert.bound_kind = "mu-star-upper";

  CertStep premises;
  premises.kind = "fourier-vanishing";
  premises.claim = "the inner function has unit l1 norm and no Fourier mass on characters of "
                   "degree at most " + std::to_string(d);
  premises.citation = "direct Fourier transform";
  premises.status = StepStatus::VerifiedExact;
  premises.rationals.emplace("vanishing_degree", Rat(static_cast<unsigned long>(d)));
  premises.rationals.emplace("l1", l1);
  premises.tensors.emplace("phi", detail::flat_tensor(spec.phi.table));
  cert.steps.push_back(std::move(premises));

  cert.steps.push_back(detail::euler_step());
  cert.steps.push_back(detail::side_condition_step(
      k, Int(static_cast<unsigned long>(m)), Int(static_cast<unsigned long>(spec.side)),
      Int(static_cast<unsigned long>(d))));
  CertStep lemma = detail::pattern_mu_star_step(
      k, Int(static_cast<unsigned long>(m)), Int(static_cast<unsigned long>(spec.side)),
      Int(static_cast<unsigned long>(d)));
  const Quantity bound = lemma.quantities.at("mu_star_bound");
  lemma.quantities.emplace("bound", bound);
  cert.steps.push_back(std::move(lemma));

  cert.final_bound = bound;
  cert.final_claim = "mu*(Q) <= 2^(-" + std::to_string(d) + "/" +
                     std::to_string(std::size_t{1} << (k - 1)) + ")";
  return cert;
}

// log2 mu^alpha(A_{k,M,f}) >= d/2^(k-1) + log2((alpha0-alpha)/(alpha0+1))
// where d is the verified vanishing degree of the extracted dual polynomial
// (one below the degree threshold). The infinite path needs alpha = alpha0 =
// infinity and gives mu^inf(A) >= 2^(d/2^(k-1)).
inline BoundCertificate degree_to_mu_alpha(const BooleanFunction& f, std::size_t k, std::size_t M,
                                           const std::optional<Rat>& alpha,
                                           const std::optional<Rat>& alpha0,
                                           std::size_t arity_cap = kDefaultApproxArityCap) {
  if (k < 2) throw ValidationError("pattern bounds need at least 2 players");
  if (alpha0) {
    if (!alpha) throw ValidationError("finite alpha0 needs a finite alpha");
    if (*alpha < 1) throw ValidationError("alpha must be at least 1");
    if (*alpha >= *alpha0) throw ValidationError("alpha must be strictly below alpha0");
  } else if (alpha) {
    throw ValidationError("the infinite path takes both alpha and alpha0 infinite");
  }

  const DualPolynomial v = dual_polynomial(f, alpha0, arity_cap);
  const std::size_t d = v.vanishing_degree;
  const std::size_t m = f.arity;
  const Rat half_pow = Rat(std::size_t{1} << (k - 1));

  BoundCertificate cert;
  cert.title = "degree to mu bound";
  cert.bound_kind = alpha0 ? "mu-alpha" : "mu-infinity";
  cert.alpha = alpha;

  CertStep wit;
  wit.kind = "dual-poly-witness";
  wit.claim = "the stored dual polynomial is l1-normalized, vanishes on all characters of "
              "degree at most " + std::to_string(d) + ", and correlates " +
              rational_text(v.correlation) + " with f";
  wit.citation = "LP duality for approximate degree";
  wit.status = StepStatus::VerifiedExact;
  wit.rationals.emplace("vanishing_degree", Rat(static_cast<unsigned long>(d)));
  wit.rationals.emplace("correlation", v.correlation);
  wit.rationals.emplace("alpha_finite", Rat(alpha0 ? 1 : 0));
  if (alpha0) wit.rationals.emplace("alpha", *alpha0);
  wit.tensors.emplace("v", detail::flat_tensor(v.values));
  {
    std::vector<Rat> ft(f.table.size());
    for (std::size_t x = 0; x < ft.size(); ++x) ft[x] = int(f.table[x]);
    wit.tensors.emplace("f", detail::flat_tensor(ft));
  }
  cert.steps.push_back(std::move(wit));

  cert.steps.push_back(detail::euler_step());
  cert.steps.push_back(detail::side_condition_step(k, Int(static_cast<unsigned long>(m)),
                                                   Int(static_cast<unsigned long>(M)),
                                                   Int(static_cast<unsigned long>(d))));
  cert.steps.push_back(detail::normalization_step());
  cert.steps.push_back(detail::pattern_mu_star_step(k, Int(static_cast<unsigned long>(m)),
                                                    Int(static_cast<unsigned long>(M)),
                                                    Int(static_cast<unsigned long>(d))));
  const Quantity mu_star_bound = cert.steps.back().quantities.at("mu_star_bound");

  CertStep conv;
  conv.kind = "mu-alpha-duality-step";
  conv.status = StepStatus::VerifiedExact;
  conv.citation = "dual characterization of mu^alpha";
  conv.rationals.emplace("alpha_finite", Rat(alpha0 ? 1 : 0));
  conv.rationals.emplace("correlation", v.correlation);
  conv.rationals.emplace("q_l1", Rat(1));
  conv.rationals.emplace("dprime", Rat(static_cast<unsigned long>(d)));
  conv.rationals.emplace("k", Rat(static_cast<unsigned long>(k)));
  conv.quantities.emplace("mu_star_bound", mu_star_bound);
  Quantity bound;
  if (alpha0) {
    const Rat factor = (*alpha0 - *alpha) / (*alpha0 + 1);
    bound = Quantity{Rat(static_cast<unsigned long>(d)) / half_pow, factor, 1};
    conv.rationals.emplace("alpha", *alpha);
    conv.rationals.emplace("alpha0", *alpha0);
    conv.claim = "mu^alpha(A) >= ((1+alpha)<A,Q> + (1-alpha)||Q||_1) / (2 mu*(Q)) >= "
                 "2^(d/2^(k-1)) * (alpha0-alpha)/(alpha0+1)";
  } else {
    bound = Quantity{Rat(static_cast<unsigned long>(d)) / half_pow, 1, 1};
    conv.claim = "mu^inf(A) >= <A,Q>/mu*(Q) = 2^(d/2^(k-1)), using A o Q >= 0 pointwise";
  }
  conv.quantities.emplace("bound", bound);
  cert.steps.push_back(std::move(conv));

  cert.final_bound = bound;
  cert.final_claim = (alpha0 ? std::string("mu^alpha lower bound, alpha = ") + rational_text(*alpha)
                             : std::string("mu^inf lower bound")) +
                     ": about " + std::to_string(quantity_approx(bound));
  return cert;
}

// Appends the communication-complexity conversion matching the input bound:
// randomized bits from mu-alpha (needs alpha >= alpha_eps = 1/(1-2 eps)),
// deterministic bits from mu, and for mu-infinity both the randomized and
// the folklore nondeterministic conversions.
inline BoundCertificate cc_bounds(const BoundCertificate& input, const Rat& eps = Rat(1, 4)) {
  BoundCertificate cert = input;
  if (input.bound_kind == "mu") {
    CertStep s;
    s.kind = "cc-conversion-deterministic";
    s.claim = "D(A) >= log2 mu(A)";
    s.citation = "cylinder-intersection partition bound for deterministic protocols";
    s.status = StepStatus::VerifiedExact;
    s.quantities.emplace("mu_bound", input.final_bound);
    s.quantities.emplace("bound", input.final_bound);
    cert.steps.push_back(std::move(s));
    cert.bound_kind = "deterministic-cc";
    cert.final_claim = "D >= log2 of " + std::to_string(quantity_approx(cert.final_bound)) +
                       " bits";
    return cert;
  }
  if (input.bound_kind != "mu-alpha" && input.bound_kind != "mu-infinity")
    throw ValidationError("cc conversions take a mu, mu-alpha or mu-infinity bound");

  if (eps < 0 || eps >= Rat(1, 2)) throw ValidationError("error rate must lie in [0, 1/2)");
  const Rat alpha_eps = 1 / (1 - 2 * eps);
  if (input.bound_kind == "mu-alpha") {
    if (!input.alpha) throw ValidationError("mu-alpha certificates must carry alpha");
    if (*input.alpha < alpha_eps)
      throw ValidationError("alpha below alpha_eps = 1/(1-2 eps): the randomized conversion "
                            "does not apply");
  }

  const Quantity bits_pow =
      quantity_times(input.final_bound, quantity_from_rational(1 / alpha_eps));
  CertStep r;
  r.kind = "cc-conversion-randomized";
  r.claim = "R_eps(A) >= log2 mu^alpha(A) - log2 alpha_eps, alpha_eps = " +
            rational_text(alpha_eps);
  r.citation = "discrepancy/norm lower bound for randomized number-on-the-forehead protocols";
  r.status = StepStatus::VerifiedExact;
  r.rationals.emplace("epsilon", eps);
  r.rationals.emplace("alpha_eps", alpha_eps);
  r.rationals.emplace("alpha", input.alpha ? *input.alpha : alpha_eps);
  r.quantities.emplace("mu_bound", input.final_bound);
  r.quantities.emplace("bound", bits_pow);
  cert.steps.push_back(std::move(r));

  if (input.bound_kind == "mu-infinity") {
    // N(A) >= log2((mu^inf(A) - 1)/2); exact when the bound is rational,
    // otherwise a certified rational underestimate is subtracted from.
    CertStep nd;
    nd.kind = "cc-conversion-nondeterministic";
    nd.citation = "folklore nondeterministic cover bound";
    nd.status = StepStatus::VerifiedExact;
    const Rat lower = quantity_lower_bound(input.final_bound);
    nd.rationals.emplace("mu_lower", lower);
    const bool vacuous = lower <= 1;
    nd.rationals.emplace("vacuous", Rat(vacuous ? 1 : 0));
    nd.quantities.emplace("mu_bound", input.final_bound);
    if (vacuous) {
      nd.claim = "N(A) >= log2((mu^inf(A)-1)/2) is vacuous here (bound at most 1)";
      nd.quantities.emplace("nondet_bound", Quantity{0, 0, 1});
    } else {
      nd.claim = "N(A) >= log2((mu^inf(A)-1)/2) >= log2(" + rational_text((lower - 1) / 2) + ")";
      nd.quantities.emplace("nondet_bound", quantity_from_rational((lower - 1) / 2));
    }
    cert.steps.push_back(std::move(nd));
  }

  cert.bound_kind = "randomized-cc";
  cert.final_bound = bits_pow;
  cert.final_claim = "R_" + rational_text(eps) + " >= log2 of " +
                     std::to_string(quantity_approx(bits_pow)) + " bits";
  return cert;
}

namespace detail {

// Largest integer t with t^(k+1) * (2 c_k)^(2(k-1)) <= n^2; exact integer
// roots, no floating point.
inline Int disj_m0(const Int& n, std::size_t k, const Rat& c_k) {
  const Rat denom = rat_pow(2 * c_k, static_cast<long>(2 * (k - 1)));
  const Int budget = (n * n * denom.get_den()) / denom.get_num();
  return root_floor(budget, static_cast<unsigned long>(k + 1));
}

// Smallest d with 6 d^2 >= m.
inline Int degree_for(const Int& m) {
  Int d = sqrt_floor(div_ceil(m, 6));
  while (6 * d * d < m) d += 1;
  while (d > 0 && 6 * (d - 1) * (d - 1) >= m) d -= 1;
  return d;
}

inline Int disj_side(const Int& m, const Int& dprime, std::size_t k, const Rat& c_k) {
  const Rat first = c_k * Rat(sqrt_ceil(m));
  const Rat second = side_condition_rhs(k, m, euler_hat()) / Rat(dprime);
  return rat_ceil(first > second ? first : second);
}

inline BoundCertificate trivial_certificate(std::string title, std::string bound_kind,
                                            std::string reason,
                                            std::vector<CertStep> prefix = {}) {
  BoundCertificate cert;
  cert.title = std::move(title);
  cert.bound_kind = std::move(bound_kind);
  cert.trivial = true;
  cert.steps = std::move(prefix);
  CertStep s;
  s.kind = "trivial-bound";
  s.claim = "only the trivial bound is certified: " + reason;
  s.citation = "every protocol uses at least 0 bits";
  s.status = StepStatus::VerifiedExact;
  s.quantities.emplace("bound", Quantity{0, 1, 1});
  cert.steps.push_back(std::move(s));
  cert.final_bound = Quantity{0, 1, 1};
  cert.final_claim = "lower bound of 0 bits (trivial)";
  return cert;
}

}  // namespace detail

// The full randomized lower-bound pipeline for k-party set disjointness on n
// items with error eps: block count m (largest feasible under n' <= n), side
// M = max(ceil(c_k sqrt(m)), side-condition minimum), degree d = ceil of
// sqrt(m/6) from the Nisan-Szegedy bound, vanishing degree d-1, and the
// pattern/embedding/conversion chain. Falls back to the trivial certificate
// whenever the analytic value would drop below 0 bits.
inline BoundCertificate disjointness_bound(const Int& n, std::size_t k,
                                           const Rat& eps = Rat(1, 4)) {
  if (k < 2 || k > 16) throw ValidationError("player count must lie in [2, 16]");
  if (n < 1) throw ValidationError("the universe must be nonempty");
  if (eps < 0 || eps >= Rat(1, 3))
    throw ValidationError("error rate must lie in [0, 1/3) so that alpha_eps < 3");
  const Rat alpha_eps = 1 / (1 - 2 * eps);
  const Rat alpha0 = 3;
  const Rat c_k = 5 * euler_hat() * static_cast<unsigned long>(k - 1) *
                  detail::two_pow_two_pow(k);
  const std::string title = "randomized lower bound for " + std::to_string(k) +
                            "-party disjointness on " + n.get_str() + " items";

  const Int m0 = detail::disj_m0(n, k, c_k);

  CertStep params;
  params.kind = "disj-parameters";
  params.citation = "exact integer roots";
  params.status = StepStatus::VerifiedExact;
  params.rationals.emplace("n", Rat(n));
  params.rationals.emplace("k", Rat(static_cast<unsigned long>(k)));
  params.rationals.emplace("c_k", c_k);
  params.rationals.emplace("m0", Rat(m0));
  params.rationals.emplace("euler_hat", euler_hat());

  if (m0 < 7)
    return detail::trivial_certificate(title, "randomized-cc",
                                       "m0 = " + m0.get_str() + " is below 7, so no degree-2 "
                                       "inner function fits");

  Int m = 0, d = 0, mm = 0, nprime = 0;
  for (Int cand = m0; cand >= 7; cand -= 1) {
    const Int dc = detail::degree_for(cand);
    const Int side = detail::disj_side(cand, dc - 1, k, c_k);
    const Int np = cand * int_pow(side, static_cast<unsigned long>(k - 1));
    if (np <= n) {
      m = cand;
      d = dc;
      mm = side;
      nprime = np;
      break;
    }
  }
  if (m == 0)
    return detail::trivial_certificate(title, "randomized-cc",
                                       "no block count at or below m0 = " + m0.get_str() +
                                       " keeps the embedded universe within n");
  const Int dprime = d - 1;
  params.rationals.emplace("m", Rat(m));
  params.claim = "parameters: m0 = " + m0.get_str() + ", chosen m = " + m.get_str() +
                 ", M = " + mm.get_str() + ", n' = " + nprime.get_str() + " <= n";

  const Rat half_pow = Rat(Int(1) << (k - 1));
  const Rat factor = (alpha0 - alpha_eps) / (alpha0 + 1);
  const Quantity mu_bound{Rat(dprime) / half_pow, factor, 1};
  const Quantity bits_pow = quantity_times(mu_bound, quantity_from_rational(1 / alpha_eps));

  if (quantity_cmp(bits_pow, Quantity{0, 1, 1}) < 0) {
    std::vector<CertStep> prefix;
    prefix.push_back(std::move(params));
    return detail::trivial_certificate(title, "randomized-cc",
                                       "the analytic chain yields under 0 bits at m = " +
                                           m.get_str(),
                                       std::move(prefix));
  }

  BoundCertificate cert;
  cert.title = title;
  cert.bound_kind = "randomized-cc";
  cert.alpha = alpha_eps;
  cert.steps.push_back(std::move(params));
  cert.steps.push_back(detail::euler_step());

  CertStep deg;
  deg.kind = "degree-choice";
  deg.claim = "d = " + d.get_str() + " is the least integer with 6 d^2 >= m";
  deg.citation = "integer square root";
  deg.status = StepStatus::VerifiedExact;
  deg.rationals.emplace("m", Rat(m));
  deg.rationals.emplace("d", Rat(d));
  cert.steps.push_back(std::move(deg));

  CertStep ns;
  ns.kind = "nisan-szegedy";
  ns.claim = "deg_3(OR_m) >= sqrt(m/6), hence deg_3(OR_m) >= d = " + d.get_str();
  ns.citation = "Nisan-Szegedy";
  ns.status = StepStatus::ExternalAssumption;
  ns.rationals.emplace("m", Rat(m));
  ns.rationals.emplace("d", Rat(d));
  cert.steps.push_back(std::move(ns));

  CertStep ex;
  ex.kind = "dual-poly-existence-at-scale";
  ex.claim = "some l1-normalized v on m bits vanishes on all characters of degree at most " +
             dprime.get_str() + " and correlates at least 1/2 with OR_m";
  ex.citation = "LP duality for approximate degree with the Nisan-Szegedy threshold";
  ex.status = StepStatus::ExternalAssumption;
  ex.rationals.emplace("m", Rat(m));
  ex.rationals.emplace("d", Rat(d));
  ex.rationals.emplace("dprime", Rat(dprime));
  ex.rationals.emplace("alpha0", alpha0);
  ex.rationals.emplace("correlation_floor", (alpha0 - 1) / (alpha0 + 1));
  cert.steps.push_back(std::move(ex));

  cert.steps.push_back(detail::normalization_step());
  cert.steps.push_back(detail::side_condition_step(k, m, mm, dprime));
  cert.steps.push_back(detail::pattern_mu_star_step(k, m, mm, dprime));

  CertStep conv;
  conv.kind = "mu-alpha-duality-step";
  conv.claim = "mu^alpha(A) >= 2^(d'/2^(k-1)) (alpha0-alpha)/(alpha0+1) with alpha = alpha_eps = " +
               rational_text(alpha_eps) + ", alpha0 = 3";
  conv.citation = "dual characterization of mu^alpha";
  conv.status = StepStatus::VerifiedExact;
  conv.rationals.emplace("alpha_finite", Rat(1));
  conv.rationals.emplace("alpha", alpha_eps);
  conv.rationals.emplace("alpha0", alpha0);
  conv.rationals.emplace("correlation", (alpha0 - 1) / (alpha0 + 1));
  conv.rationals.emplace("q_l1", Rat(1));
  conv.rationals.emplace("dprime", Rat(dprime));
  conv.rationals.emplace("k", Rat(static_cast<unsigned long>(k)));
  conv.quantities.emplace("mu_star_bound", Quantity{-Rat(dprime) / half_pow, 1, 1});
  conv.quantities.emplace("bound", mu_bound);
  cert.steps.push_back(std::move(conv));

  CertStep cc;
  cc.kind = "cc-conversion-randomized";
  cc.claim = "R_eps(A) >= log2 mu^alpha(A) - log2 alpha_eps";
  cc.citation = "discrepancy/norm lower bound for randomized number-on-the-forehead protocols";
  cc.status = StepStatus::VerifiedExact;
  cc.rationals.emplace("epsilon", eps);
  cc.rationals.emplace("alpha_eps", alpha_eps);
  cc.rationals.emplace("alpha", alpha_eps);
  cc.quantities.emplace("mu_bound", mu_bound);
  cc.quantities.emplace("bound", bits_pow);
  cert.steps.push_back(std::move(cc));

  CertStep emb;
  emb.kind = "embedding";
  emb.claim = "A_{k,M,OR_m} is a subtensor of the negated disjointness on n' = m M^(k-1) = " +
              nprime.get_str() + " <= n items, so the bound transfers to DISJ on n items";
  emb.citation = "selector-string embedding into set disjointness";
  emb.status = StepStatus::ExternalAssumption;
  emb.rationals.emplace("k", Rat(static_cast<unsigned long>(k)));
  emb.rationals.emplace("m", Rat(m));
  emb.rationals.emplace("M", Rat(mm));
  emb.rationals.emplace("n_prime", Rat(nprime));
  emb.rationals.emplace("n", Rat(n));
  emb.quantities.emplace("bound", bits_pow);
  cert.steps.push_back(std::move(emb));

  cert.final_bound = bits_pow;
  const auto bits = quantity_log2_exact(bits_pow);
  cert.final_claim = "R_" + rational_text(eps) + "(DISJ_{" + std::to_string(k) + "," +
                     n.get_str() + "}) >= " +
                     (bits ? rational_text(*bits) + " bits"
                           : "log2 of " + std::to_string(quantity_approx(bits_pow)) + " bits");
  return cert;
}

// Tree-like threshold-logic proof size for the provably hard formulas built
// from disjointness: with n = 2^j, the disjointness instance has m_bps =
// floor(n^(2/3)/(2j)) items, and refutation size is exp(Omega(E)) with E =
// (bits/j)^(1/3). The closed-form target value is reported alongside.
inline BoundCertificate proof_size_bound(const Int& n, std::size_t k) {
  if (k < 2 || k > 16) throw ValidationError("player count must lie in [2, 16]");
  if (n < 2 || mpz_popcount(n.get_mpz_t()) != 1)
    throw ValidationError("proof-size bounds need n a power of two");
  const unsigned long j = mpz_sizeinbase(n.get_mpz_t(), 2) - 1;

  const Int m_bps = root_floor(n * n, 3) / Int(2 * j);
  const std::string title = "tree-like threshold-proof size bound, n = 2^" + std::to_string(j) +
                            ", k = " + std::to_string(k);

  CertStep params;
  params.kind = "bps-parameters";
  params.claim = "n = 2^" + std::to_string(j) + "; disjointness instance size m_bps = "
                 "floor(n^(2/3)/(2 log2 n)) = " + m_bps.get_str();
  params.citation = "Beame-Pitassi-Segerlind";
  params.status = StepStatus::VerifiedExact;
  params.rationals.emplace("n", Rat(n));
  params.rationals.emplace("j", Rat(j));
  params.rationals.emplace("m_bps", Rat(m_bps));

  if (m_bps < 1) {
    std::vector<CertStep> prefix;
    prefix.push_back(std::move(params));
    BoundCertificate cert = detail::trivial_certificate(
        title, "proof-size", "the derived disjointness instance is empty", std::move(prefix));
    cert.final_bound = Quantity{0, 0, 1};
    cert.final_claim = "proof size >= exp(Omega(0)) (trivial)";
    return cert;
  }

  const BoundCertificate sub = disjointness_bound(m_bps, k, Rat(1, 4));
  const auto bits_opt = quantity_log2_exact(sub.final_bound);
  if (!bits_opt) throw std::logic_error("disjointness bits must be an exact rational");
  const Rat bits = *bits_opt < 0 ? Rat(0) : *bits_opt;

  BoundCertificate cert;
  cert.title = title;
  cert.bound_kind = "proof-size";
  cert.trivial = sub.trivial || bits == 0;
  cert.steps.push_back(std::move(params));
  for (const CertStep& s : sub.steps) cert.steps.push_back(s);

  CertStep omega;
  omega.kind = "bps-omega";
  omega.claim = "tree-like degree-" + std::to_string(k) + " threshold refutations of the "
                "lifted formulas require size exp(Omega((R/log n)^(1/3))), constants absorbed "
                "into Omega";
  omega.citation = "Beame-Pitassi-Segerlind";
  omega.status = StepStatus::ExternalAssumption;
  omega.rationals.emplace("k", Rat(static_cast<unsigned long>(k)));
  cert.steps.push_back(std::move(omega));

  const Quantity exponent = bits == 0 ? Quantity{0, 0, 1} : Quantity{0, bits / Rat(j), 3};
  CertStep expo;
  expo.kind = "bps-exponent";
  expo.claim = "E = (bits/log2 n)^(1/3) with bits = " + rational_text(bits);
  expo.citation = "exact arithmetic";
  expo.status = StepStatus::VerifiedExact;
  expo.rationals.emplace("bits", bits);
  expo.rationals.emplace("j", Rat(j));
  expo.quantities.emplace("sub_bound", bits == 0 ? Quantity{0, 1, 1} : sub.final_bound);
  expo.quantities.emplace("bound", exponent);
  cert.steps.push_back(std::move(expo));

  CertStep closed;
  closed.kind = "closed-form-value";
  closed.claim = "closed-form target: 2^(2j/(9k+9) - 2^k/3) * j^(-4/9)";
  closed.citation = "Beame-Pitassi-Segerlind corollary arithmetic";
  closed.status = StepStatus::VerifiedExact;
  closed.rationals.emplace("j", Rat(j));
  closed.rationals.emplace("k", Rat(static_cast<unsigned long>(k)));
  const Quantity closed_form{Rat(2 * j) / Rat(static_cast<unsigned long>(9 * k + 9)) -
                                 Rat(Int(1) << k) / 3,
                             Rat(1) / Rat(int_pow(Int(j), 4)), 9};
  closed.quantities.emplace("value", closed_form);
  cert.steps.push_back(std::move(closed));

  cert.final_bound = exponent;
  cert.final_claim = "refutation size >= exp(Omega(" + std::to_string(quantity_approx(exponent)) +
                     ")); closed-form target about " + std::to_string(quantity_approx(closed_form));
  return cert;
}

// ---------------------------------------------------------------------------
// The checker

namespace detail {

inline void check_step(const CertStep& s, std::size_t size_cap, std::uint64_t search_cap) {
  const auto fail = [](const std::string& why) { throw ValidationError(why); };

  if (s.kind == "note") {
    if (s.quantities.count("bound"))
      fail("informational steps cannot conclude bounds");
  } else if (s.kind == "rational-eq") {
    if (need_rat(s, "lhs") != need_rat(s, "rhs")) fail("rational equality does not hold");
  } else if (s.kind == "rational-leq") {
    if (!(need_rat(s, "lhs") <= need_rat(s, "rhs"))) fail("rational inequality does not hold");
  } else if (s.kind == "quantity-eq") {
    if (!quantity_eq(need_quantity(s, "lhs"), need_quantity(s, "rhs")))
      fail("quantity equality does not hold");
  } else if (s.kind == "quantity-leq") {
    if (!quantity_leq(need_quantity(s, "lhs"), need_quantity(s, "rhs")))
      fail("quantity inequality does not hold");
  } else if (s.kind == "product-eq") {
    if (!quantity_eq(quantity_times(need_quantity(s, "a"), need_quantity(s, "b")),
                     need_quantity(s, "product")))
      fail("quantity product does not match");
  } else if (s.kind == "trivial-bound") {
    if (!quantity_eq(need_quantity(s, "bound"), Quantity{0, 1, 1}) &&
        !quantity_eq(need_quantity(s, "bound"), Quantity{0, 0, 1}))
      fail("trivial bound must be 0 bits");
  } else if (s.kind == "euler-upper-bound") {
    const Rat& ehat = need_rat(s, "euler_hat");
    if (ehat < euler_taylor_upper()) fail("euler_hat does not dominate the Taylor upper bound");
    if (ehat > 3) fail("euler_hat is implausibly large");
  } else if (s.kind == "degree-choice") {
    const Int m = need_int(s, "m");
    const Int d = need_int(s, "d");
    if (d < 1 || 6 * d * d < m || (d > 1 && 6 * (d - 1) * (d - 1) >= m))
      fail("d is not the least integer with 6 d^2 >= m");
  } else if (s.kind == "nisan-szegedy") {
    if (s.status != StepStatus::ExternalAssumption)
      fail("the degree lower bound must be tagged as an external assumption");
    const Int m = need_int(s, "m");
    const Int d = need_int(s, "d");
    if (d < 1 || 6 * d * d < m) fail("claimed degree is inconsistent with sqrt(m/6)");
  } else if (s.kind == "dual-poly-existence-at-scale") {
    if (s.status != StepStatus::ExternalAssumption)
      fail("witness existence at scale must be tagged as an external assumption");
    const Int d = need_int(s, "d");
    if (need_int(s, "dprime") != d - 1) fail("vanishing degree must be one below the threshold");
    const Rat& a0 = need_rat(s, "alpha0");
    if (a0 <= 1) fail("alpha0 must exceed 1");
    if (need_rat(s, "correlation_floor") != (a0 - 1) / (a0 + 1))
      fail("correlation floor must equal (alpha0-1)/(alpha0+1)");
  } else if (s.kind == "dual-poly-witness") {
    const RationalTensor& v = need_tensor(s, "v");
    const RationalTensor& f = need_tensor(s, "f");
    if (v.shape().rank() != 1 || f.shape() != v.shape())
      fail("witness tables must be flat and equally long");
    const std::size_t points = v.size();
    if (points == 0 || (points & (points - 1)) != 0) fail("table length must be a power of two");
    std::size_t arity = 0;
    while ((std::size_t{1} << arity) < points) ++arity;
    if (arity > kMaxArity) fail("witness arity above the supported range");
    const std::size_t d = need_size(s, "vanishing_degree");
    Rat norm = 0;
    for (std::size_t x = 0; x < points; ++x) {
      norm += abs(v[x]);
      if (f[x] != 1 && f[x] != -1) fail("f must be a sign table");
    }
    if (norm != 1) fail("witness is not l1-normalized");
    for (std::uint32_t mask = 0; mask < points; ++mask) {
      if (static_cast<std::size_t>(std::popcount(mask)) > d) continue;
      Rat dot = 0;
      for (std::size_t x = 0; x < points; ++x)
        dot += v[x] * character(mask, static_cast<std::uint32_t>(x));
      if (dot != 0) fail("witness has Fourier mass at degree <= vanishing degree");
    }
    Rat corr = 0;
    for (std::size_t x = 0; x < points; ++x) corr += v[x] * f[x];
    if (corr != need_rat(s, "correlation")) fail("stored correlation mismatch");
    if (need_rat(s, "alpha_finite") == 1) {
      const Rat& a = need_rat(s, "alpha");
      if (corr < (a - 1) / (a + 1)) fail("correlation below the (alpha-1)/(alpha+1) floor");
    } else {
      for (std::size_t x = 0; x < points; ++x)
        if (v[x] * f[x] < 0) fail("infinite-alpha witness must satisfy v o f >= 0");
    }
  } else if (s.kind == "fourier-vanishing") {
    const RationalTensor& phi = need_tensor(s, "phi");
    if (phi.shape().rank() != 1) fail("inner function table must be flat");
    const std::size_t points = phi.size();
    if (points == 0 || (points & (points - 1)) != 0) fail("table length must be a power of two");
    const std::size_t d = need_size(s, "vanishing_degree");
    Rat l1 = 0;
    for (std::size_t x = 0; x < points; ++x) l1 += abs(phi[x]);
    if (l1 != need_rat(s, "l1")) fail("stored l1 norm mismatch");
    for (std::uint32_t mask = 0; mask < points; ++mask) {
      if (static_cast<std::size_t>(std::popcount(mask)) > d) continue;
      Rat dot = 0;
      for (std::size_t x = 0; x < points; ++x)
        dot += phi[x] * character(mask, static_cast<std::uint32_t>(x));
      if (dot != 0) fail("Fourier mass present at degree <= vanishing degree");
    }
  } else if (s.kind == "side-condition") {
    if (!side_condition_holds(need_size(s, "k"), need_int(s, "m"), need_int(s, "M"),
                              need_int(s, "dprime"), need_rat(s, "euler_hat")))
      fail("side condition arithmetic does not hold");
    if (need_rat(s, "euler_hat") < euler_taylor_upper())
      fail("side condition uses an euler_hat below Euler's number");
  } else if (s.kind == "pattern-mu-star") {
    if (s.status != StepStatus::ExternalAssumption)
      fail("the pattern correlation bound must be tagged as an external assumption");
    const std::size_t k = need_size(s, "k");
    if (!side_condition_holds(k, need_int(s, "m"), need_int(s, "M"), need_int(s, "dprime"),
                              need_rat(s, "euler_hat")))
      fail("side condition prerequisite does not hold");
    const Rat d = need_rat(s, "dprime");
    if (!quantity_eq(need_quantity(s, "mu_star_bound"),
                     Quantity{-d / Rat(Int(1) << (k - 1)), 1, 1}))
      fail("stored bound is not 2^(-d/2^(k-1))");
  } else if (s.kind == "pattern-normalization") {
    if (need_rat(s, "phi_l1") != 1) fail("inner function must have unit l1 norm");
    const auto it = s.tensors.find("q");
    if (it != s.tensors.end() && l1_norm(it->second) != 1)
      fail("stored pattern tensor does not have unit l1 norm");
  } else if (s.kind == "mu-star-enumeration") {
    if (s.status != StepStatus::VerifiedByEnumeration)
      fail("mu* evaluations are verified by enumeration");
    if (mu_star(need_tensor(s, "q"), search_cap).value != need_rat(s, "value"))
      fail("recomputed mu* disagrees with the stored value");
  } else if (s.kind == "contraction-chain") {
    if (s.status != StepStatus::VerifiedByEnumeration)
      fail("contraction chains are verified by enumeration");
    const RationalTensor& b = need_tensor(s, "b");
    const std::size_t k = b.shape().rank();
    if (need_size(s, "players") != k) fail("stored player count mismatch");
    const RationalTensor bb = contraction_product(b, 1, size_cap);
    const Rat ms_b = mu_star(b, search_cap).value;
    const Rat ms_bb = mu_star(bb, search_cap).value;
    if (ms_b != need_rat(s, "mu_star_b") || ms_bb != need_rat(s, "mu_star_bb") ||
        mean_abs(bb) != need_rat(s, "mean_abs_bb"))
      fail("recomputed contraction quantities disagree with the stored values");
    const Rat lhs = rat_pow(ms_b / Rat(static_cast<unsigned long>(b.size())),
                            static_cast<long>(std::size_t{1} << (k - 1)));
    const Rat mid = ms_bb / Rat(static_cast<unsigned long>(bb.size()));
    if (lhs > mid || mid > mean_abs(bb)) fail("contraction chain inequality does not hold");
  } else if (s.kind == "hadamard-check") {
    const RationalTensor& h = need_tensor(s, "h");
    const std::size_t n = need_size(s, "side");
    for (std::size_t i = 0; i < h.shape().rank(); ++i)
      if (h.shape().dim(i) != n) fail("stored tensor is not a cube of the stored side");
    if (!is_hadamard(SignTensor::from_rational(h), size_cap))
      fail("stored tensor is not Hadamard");
  } else if (s.kind == "inner-product-eq") {
    if (inner_product(need_tensor(s, "a"), need_tensor(s, "b")) != need_rat(s, "value"))
      fail("recomputed inner product disagrees with the stored value");
  } else if (s.kind == "mu-inf-duality-witness") {
    const Rat& ms = need_rat(s, "mu_star");
    if (ms <= 0) fail("mu* must be positive");
    if (!quantity_eq(need_quantity(s, "bound"),
                     quantity_from_rational(need_rat(s, "gram") / ms)))
      fail("stored bound is not gram/mu*");
  } else if (s.kind == "mu-alpha-duality-step") {
    const Rat& corr = need_rat(s, "correlation");
    const Rat& ql1 = need_rat(s, "q_l1");
    const Quantity& msb = need_quantity(s, "mu_star_bound");
    Rat margin;
    if (need_rat(s, "alpha_finite") == 1) {
      const Rat& a = need_rat(s, "alpha");
      const Rat& a0 = need_rat(s, "alpha0");
      if (!(1 <= a && a < a0)) fail("need 1 <= alpha < alpha0");
      if (corr < (a0 - 1) / (a0 + 1)) fail("correlation below the alpha0 floor");
      margin = ((1 + a) * corr + (1 - a) * ql1) / 2;
    } else {
      margin = corr;
    }
    if (margin <= 0) fail("the duality margin must be positive");
    const Quantity implied =
        quantity_times(quantity_from_rational(margin), quantity_reciprocal(msb));
    if (!quantity_leq(need_quantity(s, "bound"), implied))
      fail("stored bound exceeds what the duality margin yields");
  } else if (s.kind == "embedding") {
    const std::size_t k = need_size(s, "k");
    const Int m = need_int(s, "m");
    const Int mm = need_int(s, "M");
    const Int np = need_int(s, "n_prime");
    if (np != m * int_pow(mm, static_cast<unsigned long>(k - 1)))
      fail("n' does not equal m M^(k-1)");
    if (np > need_int(s, "n")) fail("embedded universe exceeds n");
    if (np.fits_ulong_p() && k * np.get_ui() <= 20) {
      if (s.status != StepStatus::VerifiedByEnumeration)
        fail("feasible embeddings must be verified by enumeration");
      const PatternSpec ps(k, static_cast<std::size_t>(m.get_ui()),
                           static_cast<std::size_t>(mm.get_ui()),
                           to_real(make_or(static_cast<std::size_t>(m.get_ui()))));
      if (!embed_into_disj(ps, size_cap).verified) fail("embedding re-verification failed");
    } else if (s.status != StepStatus::ExternalAssumption) {
      fail("unenumerable embeddings must be tagged as external assumptions");
    }
  } else if (s.kind == "cc-conversion-randomized") {
    const Rat& eps = need_rat(s, "epsilon");
    if (eps < 0 || eps >= Rat(1, 2)) fail("error rate out of range");
    if (need_rat(s, "alpha_eps") != 1 / (1 - 2 * eps)) fail("alpha_eps mismatch");
    if (need_rat(s, "alpha") < need_rat(s, "alpha_eps"))
      fail("alpha below alpha_eps: conversion inapplicable");
    if (!quantity_eq(need_quantity(s, "bound"),
                     quantity_times(need_quantity(s, "mu_bound"),
                                    quantity_from_rational(1 / need_rat(s, "alpha_eps")))))
      fail("bits do not equal the mu bound divided by alpha_eps");
  } else if (s.kind == "cc-conversion-deterministic") {
    if (!quantity_eq(need_quantity(s, "bound"), need_quantity(s, "mu_bound")))
      fail("deterministic bits must equal the mu bound");
  } else if (s.kind == "cc-conversion-nondeterministic") {
    const Rat& lower = need_rat(s, "mu_lower");
    if (!quantity_leq(quantity_from_rational(lower < 0 ? Rat(0) : lower),
                      need_quantity(s, "mu_bound")))
      fail("stored rational underestimate exceeds the mu bound");
    const bool vacuous = need_rat(s, "vacuous") == 1;
    if (vacuous != (lower <= 1)) fail("vacuity flag inconsistent with the underestimate");
    const Quantity expect = vacuous ? Quantity{0, 0, 1}
                                    : quantity_from_rational((lower - 1) / 2);
    if (!quantity_eq(need_quantity(s, "nondet_bound"), expect))
      fail("nondeterministic bound does not equal (underestimate-1)/2");
  } else if (s.kind == "disj-parameters") {
    const std::size_t k = need_size(s, "k");
    const Rat& ehat = need_rat(s, "euler_hat");
    if (ehat < euler_taylor_upper()) fail("euler_hat below Euler's number");
    const Rat c_k = 5 * ehat * static_cast<unsigned long>(k - 1) * two_pow_two_pow(k);
    if (need_rat(s, "c_k") != c_k) fail("stored c_k mismatch");
    const Int n = need_int(s, "n");
    if (need_int(s, "m0") != disj_m0(n, k, c_k)) fail("stored m0 mismatch");
    const auto it = s.rationals.find("m");
    if (it != s.rationals.end()) {
      if (!is_integer(it->second) || it->second.get_num() > need_int(s, "m0") ||
          it->second.get_num() < 7)
        fail("chosen m out of range");
    }
  } else if (s.kind == "bps-parameters") {
    const Int n = need_int(s, "n");
    const Int j = need_int(s, "j");
    if (j < 1 || !j.fits_ulong_p()) fail("log2 n out of range");
    if (n != Int(1) << j.get_ui()) fail("n is not 2^j");
    if (need_int(s, "m_bps") != root_floor(n * n, 3) / (2 * j))
      fail("m_bps does not equal floor(n^(2/3)/(2j))");
  } else if (s.kind == "bps-omega") {
    if (s.status != StepStatus::ExternalAssumption)
      fail("the proof-size reduction must be tagged as an external assumption");
    if (need_int(s, "k") < 2) fail("the reduction needs at least 2 players");
  } else if (s.kind == "bps-exponent") {
    const Rat& bits = need_rat(s, "bits");
    const Int j = need_int(s, "j");
    if (bits < 0 || j < 1) fail("bits and j must be nonnegative");
    if (bits > 0 && !quantity_eq(Quantity{bits, 1, 1}, need_quantity(s, "sub_bound")))
      fail("bits disagree with the disjointness bound");
    const Quantity expect = bits == 0 ? Quantity{0, 0, 1} : Quantity{0, bits / Rat(j), 3};
    if (!quantity_eq(need_quantity(s, "bound"), expect))
      fail("exponent does not equal (bits/j)^(1/3)");
  } else if (s.kind == "closed-form-value") {
    const Int j = need_int(s, "j");
    const std::size_t k = need_size(s, "k");
    if (j < 1 || !j.fits_ulong_p() || k < 2) fail("parameters out of range");
    const Quantity expect{Rat(2 * j) / Rat(static_cast<unsigned long>(9 * k + 9)) -
                              Rat(Int(1) << k) / 3,
                          Rat(1) / Rat(int_pow(j, 4)), 9};
    if (!quantity_eq(need_quantity(s, "value"), expect))
      fail("closed-form value does not match its parameters");
  } else {
    fail("unknown step kind '" + s.kind + "'");
  }
}

}  // namespace detail

inline CheckReport check_certificate(const BoundCertificate& cert,
                                     std::size_t size_cap = kDefaultSizeCap,
                                     std::uint64_t search_cap = kDefaultSearchCap) {
  CheckReport rep;
  for (std::size_t i = 0; i < cert.steps.size(); ++i) {
    const CertStep& s = cert.steps[i];
    try {
      detail::check_step(s, size_cap, search_cap);
      switch (s.status) {
        case StepStatus::VerifiedExact: ++rep.verified_exact; break;
        case StepStatus::VerifiedByEnumeration: ++rep.verified_enum; break;
        case StepStatus::ExternalAssumption: ++rep.external; break;
      }
    } catch (const std::exception& e) {
      ++rep.failed;
      rep.failures.push_back("step " + std::to_string(i) + " (" + s.kind + "): " + e.what());
    }
  }

  // The final bound must be the one concluded by the last bound-carrying step.
  bool bound_seen = false;
  for (auto it = cert.steps.rbegin(); it != cert.steps.rend() && !bound_seen; ++it) {
    const auto q = it->quantities.find("bound");
    if (q == it->quantities.end()) continue;
    bound_seen = true;
    bool matches = false;
    try {
      matches = quantity_eq(q->second, cert.final_bound);
    } catch (const std::exception&) {
      matches = false;
    }
    if (!matches) {
      ++rep.failed;
      rep.failures.push_back("final bound does not match the concluding step");
    }
  }
  if (!bound_seen) {
    ++rep.failed;
    rep.failures.push_back("no step concludes a bound");
  }
  if (cert.bound_kind == "mu-alpha" && !cert.alpha) {
    ++rep.failed;
    rep.failures.push_back("mu-alpha certificates must carry alpha");
  }
  rep.ok = rep.failed == 0;
  return rep;
}

// ---------------------------------------------------------------------------
// JSON serialization

inline std::string step_status_text(StepStatus s) {
  switch (s) {
    case StepStatus::VerifiedExact: return "verified-exact";
    case StepStatus::VerifiedByEnumeration: return "verified-by-enumeration";
    case StepStatus::ExternalAssumption: return "external-assumption";
  }
  throw std::logic_error("unreachable status");
}

inline StepStatus step_status_from_text(const std::string& t) {
  if (t == "verified-exact") return StepStatus::VerifiedExact;
  if (t == "verified-by-enumeration") return StepStatus::VerifiedByEnumeration;
  if (t == "external-assumption") return StepStatus::ExternalAssumption;
  throw ValidationError("unknown step status '" + t + "'");
}

inline Json cert_step_to_json(const CertStep& s) {
  Json j;
  j["kind"] = s.kind;
  j["claim"] = s.claim;
  j["citation"] = s.citation;
  j["status"] = step_status_text(s.status);
  if (!s.rationals.empty()) {
    Json r = Json::object();
    for (const auto& [k, v] : s.rationals) r[k] = rational_to_json(v);
    j["rationals"] = std::move(r);
  }
  if (!s.quantities.empty()) {
    Json q = Json::object();
    for (const auto& [k, v] : s.quantities) q[k] = quantity_to_json(v);
    j["quantities"] = std::move(q);
  }
  if (!s.tensors.empty()) {
    Json t = Json::object();
    for (const auto& [k, v] : s.tensors) t[k] = tensor_to_json(v);
    j["tensors"] = std::move(t);
  }
  return j;
}

inline CertStep cert_step_from_json(const Json& j, std::size_t size_cap = kDefaultSizeCap) {
  if (!j.is_object()) throw ValidationError("certificate step JSON must be an object");
  for (const char* key : {"kind", "claim", "citation", "status"})
    if (!j.contains(key) || !j[key].is_string())
      throw ValidationError(std::string("certificate step JSON needs string field '") + key +
                            "'");
  CertStep s;
  s.kind = j["kind"].get<std::string>();
  s.claim = j["claim"].get<std::string>();
  s.citation = j["citation"].get<std::string>();
  s.status = step_status_from_text(j["status"].get<std::string>());
  if (j.contains("rationals")) {
    if (!j["rationals"].is_object()) throw ValidationError("rationals must be an object");
    for (const auto& [k, v] : j["rationals"].items())
      s.rationals.emplace(k, rational_from_json(v));
  }
  if (j.contains("quantities")) {
    if (!j["quantities"].is_object()) throw ValidationError("quantities must be an object");
    for (const auto& [k, v] : j["quantities"].items())
      s.quantities.emplace(k, quantity_from_json(v));
  }
  if (j.contains("tensors")) {
    if (!j["tensors"].is_object()) throw ValidationError("tensors must be an object");
    for (const auto& [k, v] : j["tensors"].items())
      s.tensors.emplace(k, tensor_from_json(v, size_cap));
  }
  return s;
}

inline Json certificate_to_json(const BoundCertificate& c) {
  Json j;
  j["title"] = c.title;
  j["bound_kind"] = c.bound_kind;
  if (c.alpha) j["alpha"] = rational_to_json(*c.alpha);
  j["trivial"] = c.trivial;
  Json steps = Json::array();
  for (const CertStep& s : c.steps) steps.push_back(cert_step_to_json(s));
  j["steps"] = std::move(steps);
  j["final_bound"] = quantity_to_json(c.final_bound);
  j["final_claim"] = c.final_claim;
  return j;
}

inline BoundCertificate certificate_from_json(const Json& j,
                                              std::size_t size_cap = kDefaultSizeCap) {
  if (!j.is_object()) throw ValidationError("certificate JSON must be an object");
  for (const char* key : {"title", "bound_kind", "final_claim"})
    if (!j.contains(key) || !j[key].is_string())
      throw ValidationError(std::string("certificate JSON needs string field '") + key + "'");
  if (!j.contains("steps") || !j["steps"].is_array())
    throw ValidationError("certificate JSON needs an array field 'steps'");
  if (!j.contains("final_bound"))
    throw ValidationError("certificate JSON needs field 'final_bound'");
  BoundCertificate c;
  c.title = j["title"].get<std::string>();
  c.bound_kind = j["bound_kind"].get<std::string>();
  if (j.contains("alpha")) c.alpha = rational_from_json(j["alpha"]);
  if (j.contains("trivial")) {
    if (!j["trivial"].is_boolean()) throw ValidationError("trivial flag must be boolean");
    c.trivial = j["trivial"].get<bool>();
  }
  for (const Json& s : j["steps"]) c.steps.push_back(cert_step_from_json(s, size_cap));
  c.final_bound = quantity_from_json(j["final_bound"]);
  c.final_claim = j["final_claim"].get<std::string>();
  return c;
}

}  // namespace cinorm
