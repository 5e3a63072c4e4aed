// Acceptance suite: one pass/fail line per criterion, all checks exact
// (zero tolerance). Returns nonzero if any criterion fails.

#include <array>
#include <chrono>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "cinorm/approxdeg.hpp"
#include "cinorm/boolfun.hpp"
#include "cinorm/certify.hpp"
#include "cinorm/cylinders.hpp"
#include "cinorm/norms.hpp"
#include "cinorm/pattern.hpp"
#include "cinorm/rational.hpp"
#include "cinorm/tensor.hpp"

using namespace cinorm;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;
std::vector<BoundCertificate> g_emitted;  // every certificate the run produces

void report(int idx, bool ok, const std::string& what, Clock::time_point t0) {
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  std::printf("criterion %2d %s  %s (%.2fs)\n", idx, ok ? "PASS" : "FAIL", what.c_str(), secs);
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

SignTensor random_sign(const Shape& s, std::mt19937_64& rng) {
  std::vector<std::int8_t> e(s.size());
  for (auto& v : e) v = (rng() & 1) ? 1 : -1;
  return SignTensor(s, std::move(e));
}

RationalTensor random_rational(const Shape& s, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 9);
  std::vector<Rat> e(s.size());
  for (auto& v : e) v = Rat(num(rng), den(rng));
  return RationalTensor(s, std::move(e));
}

RationalTensor sylvester(std::size_t n) {
  std::vector<Rat> e(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      e[i * n + j] = (std::popcount(i & j) & 1) ? -1 : 1;
  return RationalTensor(Shape({n, n}), std::move(e));
}

// phi(x) = (-1)^popcount(x) / 2^m: sign-balanced with ||phi||_1 = 1.
RealFunction normalized_parity(std::size_t m) {
  std::vector<Rat> vals(std::size_t{1} << m);
  const Rat unit = Rat(1) / Rat(Int(1) << m);
  for (std::size_t x = 0; x < vals.size(); ++x)
    vals[x] = (std::popcount(x) & 1) ? -unit : unit;
  return RealFunction(m, std::move(vals));
}

struct CorpusEntry {
  SignTensor a;
  const CylinderBasis* basis;
  std::map<int, Rat> primal;  // key: 1, 2, 3; 0 stands for infinity
  std::map<int, Rat> dual;
};

std::optional<Rat> alpha_of(int key) {
  return key == 0 ? std::optional<Rat>{} : std::optional<Rat>{Rat(key)};
}

}  // namespace

int main() {
  std::mt19937_64 rng(20240817);

  // Shared bases, one per distinct shape in the corpus.
  const std::vector<Shape> matrix_shapes = {Shape({2, 2}), Shape({2, 3}), Shape({3, 2}),
                                            Shape({3, 3})};
  const Shape cube_shape({2, 2, 2});
  std::vector<CylinderBasis> matrix_bases;
  for (const Shape& s : matrix_shapes) matrix_bases.push_back(enumerate_basis(s));
  const CylinderBasis cube_basis = enumerate_basis(cube_shape);

  std::vector<CorpusEntry> corpus;
  for (std::size_t i = 0; i < 50; ++i) {
    const std::size_t which = i % matrix_shapes.size();
    corpus.push_back({random_sign(matrix_shapes[which], rng), &matrix_bases[which], {}, {}});
  }
  for (std::size_t i = 0; i < 20; ++i)
    corpus.push_back({random_sign(cube_shape, rng), &cube_basis, {}, {}});

  // --- 1: primal/dual equality of mu^alpha ---------------------------------
  {
    const auto t0 = Clock::now();
    bool ok = true;
    for (CorpusEntry& e : corpus) {
      for (int key : {1, 2, 3, 0}) {
        e.primal[key] = mu_alpha_primal(e.a, alpha_of(key), *e.basis).value;
        e.dual[key] = mu_alpha_dual(e.a, alpha_of(key), *e.basis).value;
        ok = ok && e.primal[key] == e.dual[key];
      }
    }
    report(1, ok, "mu^alpha primal equals dual for alpha in {1,2,3,inf} on 70 sign tensors",
           t0);
  }

  // --- 2: mu^inf(A) * disc(A) = 1 ------------------------------------------
  {
    const auto t0 = Clock::now();
    bool ok = true;
    for (const CorpusEntry& e : corpus)
      ok = ok && e.primal.at(0) * disc(e.a, *e.basis).value == 1;
    report(2, ok, "mu^inf(A) * disc(A) = 1 exactly on the corpus", t0);
  }

  // --- 3: monotonicity in alpha and the mu/mu_pm sandwich ------------------
  {
    const auto t0 = Clock::now();
    bool ok = true;
    for (const CorpusEntry& e : corpus) {
      ok = ok && e.primal.at(1) >= e.primal.at(2) && e.primal.at(2) >= e.primal.at(3) &&
           e.primal.at(3) >= e.primal.at(0);
      const RationalTensor b = e.a.to_rational();
      const Rat mu_v = mu(b, *e.basis).value;
      const Rat pm_v = mu_pm(b, *e.basis).value;
      const Rat scale = Rat(Int(1) << e.a.shape().rank());
      ok = ok && mu_v >= pm_v && pm_v * scale >= mu_v;
    }
    report(3, ok, "mu^1 >= mu^2 >= mu^3 >= mu^inf and mu >= mu_pm >= 2^-k mu", t0);
  }

  // --- 4: Hadamard bounds --------------------------------------------------
  std::map<std::size_t, Rat> exact_mu_inf;  // reused by criterion 11
  {
    const auto t0 = Clock::now();
    bool ok = true;
    for (std::size_t n : {std::size_t{2}, std::size_t{4}}) {
      const RationalTensor h = sylvester(n);
      const SignTensor hs = SignTensor::from_rational(h);
      exact_mu_inf[n] = mu_alpha_primal(hs, std::nullopt, enumerate_basis(h.shape())).value;
      ok = ok && exact_mu_inf[n] * exact_mu_inf[n] >= Rat(static_cast<unsigned long>(n));
      g_emitted.push_back(hadamard_bound(hs));
      const Rat chain = inner_product(h, h) / mu_star(h).value;
      ok = ok && quantity_eq(g_emitted.back().final_bound, quantity_from_rational(chain));
    }
    {
      const RationalTensor h = sylvester(8);
      g_emitted.push_back(hadamard_bound(SignTensor::from_rational(h)));
      const Rat chain = inner_product(h, h) / mu_star(h).value;
      ok = ok && quantity_eq(g_emitted.back().final_bound, quantity_from_rational(chain));
      ok = ok && check_certificate(g_emitted.back()).ok;
    }
    report(4, ok, "Hadamard: LP mu^inf(H)^2 >= N at N in {2,4}; chain = <H,H>/mu*(H) up to N=8",
           t0);
  }

  // --- 5: contraction chain on random rational tensors ---------------------
  {
    const auto t0 = Clock::now();
    bool ok = true;
    std::size_t emitted = 0;
    try {
      for (std::size_t i = 0; i < 50; ++i) {
        g_emitted.push_back(contraction_chain_check(random_rational(Shape({3, 3}), rng)));
        ++emitted;
      }
      for (std::size_t i = 0; i < 50; ++i) {
        g_emitted.push_back(contraction_chain_check(random_rational(cube_shape, rng)));
        ++emitted;
      }
    } catch (const std::exception& ex) {
      std::fprintf(stderr, "contraction chain violated: %s\n", ex.what());
      ok = false;
    }
    ok = ok && emitted == 100;
    report(5, ok, "contraction chain exact on 100 random rational tensors (3x3 and 2x2x2)", t0);
  }

  // --- 6: dual polynomials for OR_m ----------------------------------------
  {
    const auto t0 = Clock::now();
    bool ok = true;
    for (std::size_t m = 1; m <= 4; ++m) {
      const BooleanFunction f = make_or(m);
      for (int key : {2, 3, 0}) {
        const std::optional<Rat> alpha = alpha_of(key);
        const std::size_t d = deg_alpha(f, alpha);
        const DualPolynomial v = dual_polynomial(f, alpha);
        ok = ok && v.vanishing_degree == d - 1;
        ok = ok && verify_dual_polynomial(v, f, alpha).ok();
        // Bracketing at d: alpha_d(f) <= alpha < alpha_{d-1}(f), with a
        // missing value meaning "not sign-representable at all" (infinite).
        const auto at_d = alpha_d(f, d);
        const auto below = d == 0 ? std::optional<Rat>{Rat(1)} : alpha_d(f, d - 1);
        if (alpha) {
          ok = ok && at_d.has_value() && *at_d <= *alpha;
          ok = ok && (d == 0 || !below.has_value() || *below > *alpha);
        } else {
          ok = ok && at_d.has_value() && (d == 0 || !below.has_value());
        }
      }
    }
    report(6, ok, "dual polynomials for OR_m, m<=4, alpha in {2,3,inf}: all properties exact",
           t0);
  }

  // --- 7: degree consistency with sqrt(m/6) --------------------------------
  {
    const auto t0 = Clock::now();
    bool ok = true;
    for (std::size_t m = 1; m <= 4; ++m) {
      const Int d(static_cast<unsigned long>(deg_alpha(make_or(m), Rat(3))));
      ok = ok && 6 * d * d >= Int(static_cast<unsigned long>(m));
    }
    report(7, ok, "deg_3(OR_m)^2 * 6 >= m for m <= 4 (integer comparison)", t0);
  }

  // --- 8: pattern tensor structure ------------------------------------------
  const std::vector<std::array<std::size_t, 3>> pattern_points = {
      {2, 1, 2}, {2, 2, 2}, {3, 1, 2}};  // (k, m, M)
  {
    const auto t0 = Clock::now();
    bool ok = true;
    for (const auto& [k, m, M] : pattern_points) {
      const PatternSpec spec(k, m, M, normalized_parity(m));
      const Shape shape = pattern_shape(spec);
      std::size_t cells = m;
      for (std::size_t j = 1; j < k; ++j) cells *= M;
      ok = ok && shape.rank() == k && shape.dim(0) == (std::size_t{1} << cells);
      std::size_t digits = 1;
      for (std::size_t i = 0; i < m; ++i) digits *= M;
      for (std::size_t j = 1; j < k; ++j) ok = ok && shape.dim(j) == digits;
      ok = ok && uniform_coverage_check(spec).uniform;
      ok = ok && l1_norm(build_pattern_tensor(spec)) == 1;
    }
    report(8, ok, "pattern size formula, uniform coverage, and ||Q||_1 = 1 at three points",
           t0);
  }

  // --- 9: embedding into disjointness --------------------------------------
  {
    const auto t0 = Clock::now();
    bool ok = true;
    for (const auto& [k, m, M] : pattern_points) {
      const DisjEmbedding e = embed_into_disj(PatternSpec(k, m, M, to_real(make_or(m))));
      std::size_t nprime = m;
      for (std::size_t j = 1; j < k; ++j) nprime *= M;
      ok = ok && e.verified && e.ground_size == nprime;
    }
    report(9, ok, "selector embedding reproduces the OR pattern inside DISJ at three points",
           t0);
  }

  // --- 10: degenerate-cube combinatorics ------------------------------------
  {
    const auto t0 = Clock::now();
    bool ok = true;
    try {
      for (const auto& [k, m, M] : pattern_points) {
        const CubeStats st = degenerate_cube_stats(k, M, m);
        ok = ok && st.enumerated;  // analytic law == exhaustive enumeration
        const Rat ratio = Rat(static_cast<long>(k - 1), static_cast<long>(M));
        for (std::size_t g = 0; g <= m; ++g)
          ok = ok && Rat(binomial(m, g)) * rat_pow(ratio, static_cast<long>(g)) >= st.tail(g);
      }
    } catch (const std::exception& ex) {
      std::fprintf(stderr, "cube statistics failed: %s\n", ex.what());
      ok = false;
    }
    report(10, ok, "Binomial(m, 1-(1-1/M)^(k-1)) law matches enumeration; tail bound dominates",
           t0);
  }

  // --- 11: certificate soundness --------------------------------------------
  {
    const auto t0 = Clock::now();
    bool ok = true;

    // (a) Analytic certificate bounds never exceed exactly computed values.
    for (std::size_t n : {std::size_t{2}, std::size_t{4}})
      ok = ok && quantity_leq(g_emitted[n == 2 ? 0 : 1].final_bound,
                              quantity_from_rational(exact_mu_inf[n]));

    // (b) Monotonicity of the disjointness bound in n, including a unit step.
    const std::vector<std::pair<Int, std::size_t>> ladder = {
        {Int(10000), 2},        {Int(100000), 2},     {Int(1000000), 2},
        {Int(1000001), 2},      {Int(10000000), 2},   {Int(100000000), 2},
        {Int(1000000000), 2},
    };
    Quantity prev{0, 0, 1};
    for (const auto& [n, k] : ladder) {
      g_emitted.push_back(disjointness_bound(n, k));
      ok = ok && quantity_leq(prev, g_emitted.back().final_bound);
      prev = g_emitted.back().final_bound;
    }
    prev = Quantity{0, 0, 1};
    for (long e : {6, 9, 12}) {
      g_emitted.push_back(disjointness_bound(int_pow(Int(10), e), 3));
      ok = ok && quantity_leq(prev, g_emitted.back().final_bound);
      prev = g_emitted.back().final_bound;
    }

    // (c) Spot points frozen from the independent arithmetic oracle
    //     (tests/oracle/disj_bound_oracle.py).
    struct Spot {
      Int n;
      std::size_t k;
      Rat eps;
      Int m0, m, d, M, nprime;
      Rat bits;
    };
    const std::vector<Spot> spots = {
        {Int(1000000), 2, Rat(1, 4), Int(438), Int(438), Int(9), Int(1191), Int(521658),
         Rat(1)},
        {Int(1000000), 2, Rat(0), Int(438), Int(438), Int(9), Int(1191), Int(521658), Rat(3)},
        {Int(100000000), 2, Rat(1, 4), Int(9457), Int(9457), Int(40), Int(5328),
         Int(50386896), Rat(33, 2)},
        {int_pow(Int(10), 12), 3, Rat(1, 4), Int(1149), Int(1149), Int(14), Int(15377),
         Int("271683496221"), Rat(1, 4)},
        {Int(11930464), 2, Rat(1, 4), Int(2291), Int(2291), Int(20), Int(2623), Int(6009293),
         Rat(13, 2)},
    };
    for (const Spot& s : spots) {
      g_emitted.push_back(disjointness_bound(s.n, s.k, s.eps));
      const BoundCertificate& c = g_emitted.back();
      Rat m0, m, d, M, nprime;
      for (const CertStep& st : c.steps) {
        if (st.kind == "disj-parameters") {
          m0 = st.rationals.at("m0");
          m = st.rationals.at("m");
        } else if (st.kind == "degree-choice") {
          d = st.rationals.at("d");
        } else if (st.kind == "embedding") {
          M = st.rationals.at("M");
          nprime = st.rationals.at("n_prime");
        }
      }
      ok = ok && m0 == Rat(s.m0) && m == Rat(s.m) && d == Rat(s.d) && M == Rat(s.M) &&
           nprime == Rat(s.nprime);
      const auto bits = quantity_log2_exact(c.final_bound);
      ok = ok && bits.has_value() && *bits == s.bits;
    }

    // A few proof-size certificates join the pool as well.
    for (unsigned long j : {20ul, 30ul, 39ul, 45ul})
      g_emitted.push_back(proof_size_bound(Int(1) << j, 2));

    // (d) `check` re-validates 100% of the certificates emitted in this run,
    //     after a round trip through JSON.
    std::size_t checked = 0;
    for (const BoundCertificate& c : g_emitted) {
      const BoundCertificate back = certificate_from_json(certificate_to_json(c));
      if (check_certificate(back).ok) ++checked;
    }
    ok = ok && checked == g_emitted.size();

    report(11, ok,
           "certificates: sound vs exact values, monotone in n, oracle spot points, " +
               std::to_string(checked) + "/" + std::to_string(g_emitted.size()) +
               " re-validated",
           t0);
  }

  if (g_failures != 0) std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
