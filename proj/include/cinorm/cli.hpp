#pragma once
// Command-line front end. Every verb reads JSON inputs, validates before
// computing, prints a one-or-two-line summary, and optionally writes the
// full JSON result with --out. Exit codes: 0 success, 1 runtime/IO,
// 2 validation (including an invalid certificate under `check`),
// 3 capacity, 4 side condition violated.

#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "approxdeg.hpp"
#include "boolfun.hpp"
#include "certify.hpp"
#include "cylinders.hpp"
#include "errors.hpp"
#include "norms.hpp"
#include "pattern.hpp"
#include "rational.hpp"
#include "tensor.hpp"
#include "tensor_io.hpp"

namespace cinorm {

namespace cli_detail {

inline Int parse_big_int(const std::string& text) {
  try {
    Int v(text, 10);
    return v;
  } catch (const std::invalid_argument&) {
    throw ValidationError("not an integer: '" + text + "'");
  }
}

inline std::optional<Rat> parse_alpha(const std::string& text) {
  if (text == "inf" || text == "infinity") return std::nullopt;
  return parse_rational(text);
}

inline void write_out(const std::string& path, const Json& j) {
  if (!path.empty()) save_json_file(path, j);
}

inline RationalTensor load_tensor(const std::string& path, std::size_t size_cap) {
  return tensor_from_json(load_json_file(path), size_cap);
}

inline BooleanFunction resolve_function(const std::string& table_path, const std::string& name,
                                        std::size_t m, std::size_t k) {
  if (!table_path.empty()) return function_from_json(load_json_file(table_path));
  if (name.empty()) throw ValidationError("provide --fn or --table");
  return builtin_function(name, m, k);
}

inline RealFunction resolve_real_function(const std::string& table_path, const std::string& name,
                                          std::size_t m, std::size_t k) {
  if (!table_path.empty()) {
    const Json j = load_json_file(table_path);
    // Accept both sign-function documents and real-valued tables.
    if (j.is_object() && j.contains("table") && j.at("table").is_array()) {
      try {
        return real_function_from_json(j);
      } catch (const ValidationError&) {
      }
    }
    return to_real(function_from_json(j));
  }
  if (name.empty()) throw ValidationError("provide --fn or --table");
  return to_real(builtin_function(name, m, k));
}

inline Json check_report_to_json(const CheckReport& r) {
  Json j;
  j["ok"] = r.ok;
  j["verified_exact"] = r.verified_exact;
  j["verified_by_enumeration"] = r.verified_enum;
  j["external_assumptions"] = r.external;
  j["failed"] = r.failed;
  j["failures"] = r.failures;
  return j;
}

// Certificates are always re-checked before they leave the process.
inline int emit_certificate(const BoundCertificate& cert, const std::string& out,
                            std::size_t size_cap, std::uint64_t search_cap) {
  const CheckReport rep = check_certificate(cert, size_cap, search_cap);
  std::cout << cert.title << "\n" << cert.final_claim << "\n"
            << "check = " << (rep.ok ? "ok" : "FAILED") << " (exact " << rep.verified_exact
            << ", enumerated " << rep.verified_enum << ", external " << rep.external << ")\n";
  for (const std::string& f : rep.failures) std::cout << "  " << f << "\n";
  write_out(out, certificate_to_json(cert));
  if (!rep.ok) throw std::logic_error("freshly emitted certificate failed validation");
  return 0;
}

struct CommonOpts {
  std::string out;
  std::size_t max_size = kDefaultSizeCap;
  std::uint64_t max_candidates = kDefaultSearchCap;
};

inline void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--out", o.out, "write the JSON result to this path");
  cmd->add_option("--max-size", o.max_size, "tensor size cap (default 2^20)");
  cmd->add_option("--max-candidates", o.max_candidates,
                  "mu* search candidate cap (default 2^25)");
}

}  // namespace cli_detail

inline int run_cli(int argc, const char* const* argv) {
  using cli_detail::CommonOpts;

  CLI::App app{"exact cylinder-intersection norms, degree bounds, and certificates"};
  app.require_subcommand(1);

  // ---- norm ----
  struct {
    CommonOpts common;
    std::string tensor;
    bool pm = false;
  } norm_o;
  CLI::App* norm_c = app.add_subcommand("norm", "mu or mu+- of a tensor");
  norm_c->add_option("--tensor", norm_o.tensor, "tensor JSON file")->required();
  norm_c->add_flag("--pm", norm_o.pm, "compute mu+- instead of mu");
  cli_detail::add_common(norm_c, norm_o.common);

  // ---- mu-alpha ----
  struct {
    CommonOpts common;
    std::string tensor;
    std::string alpha = "inf";
    bool dual = false;
  } ma_o;
  CLI::App* ma_c = app.add_subcommand("mu-alpha", "mu^alpha of a sign tensor");
  ma_c->add_option("--tensor", ma_o.tensor, "tensor JSON file")->required();
  ma_c->add_option("--alpha", ma_o.alpha, "rational p/q or 'inf' (default)");
  ma_c->add_flag("--dual", ma_o.dual, "solve the dual program instead of the primal");
  cli_detail::add_common(ma_c, ma_o.common);

  // ---- disc ----
  struct {
    CommonOpts common;
    std::string tensor;
    std::string dist;
  } disc_o;
  CLI::App* disc_c = app.add_subcommand("disc", "discrepancy of a sign tensor");
  disc_c->add_option("--tensor", disc_o.tensor, "tensor JSON file")->required();
  disc_c->add_option("--dist", disc_o.dist, "distribution JSON file (fixed-P discrepancy)");
  cli_detail::add_common(disc_c, disc_o.common);

  // ---- mu-star ----
  struct {
    CommonOpts common;
    std::string tensor;
  } ms_o;
  CLI::App* ms_c = app.add_subcommand("mu-star", "mu* of a tensor, with a witness");
  ms_c->add_option("--tensor", ms_o.tensor, "tensor JSON file")->required();
  cli_detail::add_common(ms_c, ms_o.common);

  // ---- adeg ----
  struct {
    CommonOpts common;
    std::string fn, table, alpha = "inf";
    std::size_t m = 0, k = 0;
  } adeg_o;
  CLI::App* adeg_c = app.add_subcommand("adeg", "approximate degree deg_alpha(f)");
  adeg_c->add_option("--fn", adeg_o.fn, "builtin name: OR, AND, XOR, MAJ, DISJ");
  adeg_c->add_option("--m", adeg_o.m, "arity (bits per player for DISJ)");
  adeg_c->add_option("--k", adeg_o.k, "player count (DISJ only)");
  adeg_c->add_option("--table", adeg_o.table, "function JSON file instead of --fn");
  adeg_c->add_option("--alpha", adeg_o.alpha, "rational p/q or 'inf' (default)");
  cli_detail::add_common(adeg_c, adeg_o.common);

  // ---- dualpoly ----
  struct {
    CommonOpts common;
    std::string fn, table, alpha = "inf";
    std::size_t m = 0, k = 0;
  } dp_o;
  CLI::App* dp_c = app.add_subcommand("dualpoly", "extract and verify a dual polynomial");
  dp_c->add_option("--fn", dp_o.fn, "builtin name: OR, AND, XOR, MAJ, DISJ");
  dp_c->add_option("--m", dp_o.m, "arity (bits per player for DISJ)");
  dp_c->add_option("--k", dp_o.k, "player count (DISJ only)");
  dp_c->add_option("--table", dp_o.table, "function JSON file instead of --fn");
  dp_c->add_option("--alpha", dp_o.alpha, "rational p/q or 'inf' (default)");
  cli_detail::add_common(dp_c, dp_o.common);

  // ---- pattern ----
  struct {
    CommonOpts common;
    std::string fn, table, scale;
    std::size_t m = 0, k = 2, M = 1;
  } pat_o;
  CLI::App* pat_c = app.add_subcommand("pattern", "build a pattern tensor");
  pat_c->add_option("--fn", pat_o.fn, "builtin inner function");
  pat_c->add_option("--table", pat_o.table, "inner function JSON file (may be real-valued)");
  pat_c->add_option("--m", pat_o.m, "block count")->required();
  pat_c->add_option("--k", pat_o.k, "player count")->required();
  pat_c->add_option("--M", pat_o.M, "side length")->required();
  pat_c->add_option("--scale", pat_o.scale, "explicit scale c as p/q");
  cli_detail::add_common(pat_c, pat_o.common);

  // ---- embed-disj ----
  struct {
    CommonOpts common;
    std::size_t m = 0, k = 2, M = 1;
  } emb_o;
  CLI::App* emb_c = app.add_subcommand("embed-disj", "embed an OR pattern into disjointness");
  emb_c->add_option("--m", emb_o.m, "block count")->required();
  emb_c->add_option("--k", emb_o.k, "player count")->required();
  emb_c->add_option("--M", emb_o.M, "side length")->required();
  cli_detail::add_common(emb_c, emb_o.common);

  // ---- hadamard ----
  struct {
    CommonOpts common;
    std::string tensor;
  } had_o;
  CLI::App* had_c = app.add_subcommand("hadamard", "mu^inf certificate for a Hadamard tensor");
  had_c->add_option("--tensor", had_o.tensor, "tensor JSON file")->required();
  cli_detail::add_common(had_c, had_o.common);

  // ---- contraction-check ----
  struct {
    CommonOpts common;
    std::string tensor;
  } cc_o;
  CLI::App* cc_c = app.add_subcommand("contraction-check",
                                      "verify the contraction chain on a tensor");
  cc_c->add_option("--tensor", cc_o.tensor, "tensor JSON file")->required();
  cli_detail::add_common(cc_c, cc_o.common);

  // ---- certify-disj ----
  struct {
    CommonOpts common;
    std::string n, eps = "1/4";
    std::size_t k = 2;
  } cd_o;
  CLI::App* cd_c = app.add_subcommand("certify-disj",
                                      "randomized lower-bound certificate for disjointness");
  cd_c->add_option("--n", cd_o.n, "universe size (integer, may be large)")->required();
  cd_c->add_option("--k", cd_o.k, "player count")->required();
  cd_c->add_option("--eps", cd_o.eps, "error rate in [0, 1/3) as p/q (default 1/4)");
  cli_detail::add_common(cd_c, cd_o.common);

  // ---- proof-size ----
  struct {
    CommonOpts common;
    std::string n;
    std::size_t k = 2;
  } ps_o;
  CLI::App* ps_c = app.add_subcommand("proof-size",
                                      "tree-like threshold-proof size certificate");
  ps_c->add_option("--n", ps_o.n, "number of variables (a power of two)")->required();
  ps_c->add_option("--k", ps_o.k, "player count")->required();
  cli_detail::add_common(ps_c, ps_o.common);

  // ---- check ----
  struct {
    CommonOpts common;
    std::string cert;
  } ck_o;
  CLI::App* ck_c = app.add_subcommand("check", "re-validate a certificate file");
  ck_c->add_option("--cert", ck_o.cert, "certificate JSON file")->required();
  cli_detail::add_common(ck_c, ck_o.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (norm_c->parsed()) {
      const RationalTensor b = cli_detail::load_tensor(norm_o.tensor, norm_o.common.max_size);
      const CylinderBasis basis = enumerate_basis(b.shape(), norm_o.common.max_candidates);
      const NormResult r = norm_o.pm ? mu_pm(b, basis) : mu(b, basis);
      std::cout << (norm_o.pm ? "mu_pm = " : "mu = ") << rational_text(r.value) << "\n";
      Json j;
      j["verb"] = "norm";
      j["pm"] = norm_o.pm;
      j["value"] = rational_to_json(r.value);
      Json dec = Json::array();
      for (const WeightedBasisElement& w : r.decomposition) {
        Json e;
        e["basis_index"] = w.basis_index;
        e["weight"] = rational_to_json(w.weight);
        dec.push_back(std::move(e));
      }
      j["decomposition"] = std::move(dec);
      cli_detail::write_out(norm_o.common.out, j);
    } else if (ma_c->parsed()) {
      const RationalTensor b = cli_detail::load_tensor(ma_o.tensor, ma_o.common.max_size);
      const SignTensor a = SignTensor::from_rational(b);
      const std::optional<Rat> alpha = cli_detail::parse_alpha(ma_o.alpha);
      const CylinderBasis basis = enumerate_basis(a.shape(), ma_o.common.max_candidates);
      const NormResult r =
          ma_o.dual ? mu_alpha_dual(a, alpha, basis) : mu_alpha_primal(a, alpha, basis);
      std::cout << "mu^" << (alpha ? rational_text(*alpha) : "inf") << " = "
                << rational_text(r.value) << "\n";
      Json j;
      j["verb"] = "mu-alpha";
      j["alpha"] = alpha ? rational_text(*alpha) : "inf";
      j["method"] = ma_o.dual ? "dual" : "primal";
      j["value"] = rational_to_json(r.value);
      cli_detail::write_out(ma_o.common.out, j);
    } else if (disc_c->parsed()) {
      const RationalTensor b = cli_detail::load_tensor(disc_o.tensor, disc_o.common.max_size);
      const SignTensor a = SignTensor::from_rational(b);
      Json j;
      j["verb"] = "disc";
      if (!disc_o.dist.empty()) {
        const RationalTensor p = cli_detail::load_tensor(disc_o.dist, disc_o.common.max_size);
        const Rat v = disc_p(a, p, disc_o.common.max_candidates);
        std::cout << "disc_P = " << rational_text(v) << "\n";
        j["value"] = rational_to_json(v);
        j["fixed_distribution"] = true;
      } else {
        const CylinderBasis basis = enumerate_basis(a.shape(), disc_o.common.max_candidates);
        const DiscResult r = disc(a, basis);
        std::cout << "disc = " << rational_text(r.value) << "\n";
        j["value"] = rational_to_json(r.value);
        j["distribution"] = tensor_to_json(r.distribution);
      }
      cli_detail::write_out(disc_o.common.out, j);
    } else if (ms_c->parsed()) {
      const RationalTensor b = cli_detail::load_tensor(ms_o.tensor, ms_o.common.max_size);
      const MuStarResult r = mu_star(b, ms_o.common.max_candidates);
      std::cout << "mu* = " << rational_text(r.value) << "\n";
      Json j;
      j["verb"] = "mu-star";
      j["value"] = rational_to_json(r.value);
      Json membership = Json::array();
      for (const auto& side : r.witness.membership) {
        std::string bits(side.size(), '0');
        for (std::size_t q = 0; q < side.size(); ++q)
          if (side[q]) bits[q] = '1';
        membership.push_back(std::move(bits));
      }
      j["witness_membership"] = std::move(membership);
      cli_detail::write_out(ms_o.common.out, j);
    } else if (adeg_c->parsed()) {
      const BooleanFunction f =
          cli_detail::resolve_function(adeg_o.table, adeg_o.fn, adeg_o.m, adeg_o.k);
      const std::optional<Rat> alpha = cli_detail::parse_alpha(adeg_o.alpha);
      const std::size_t d = deg_alpha(f, alpha);
      std::cout << "deg_" << (alpha ? rational_text(*alpha) : "inf") << " = " << d << "\n";
      Json j;
      j["verb"] = "adeg";
      j["alpha"] = alpha ? rational_text(*alpha) : "inf";
      j["degree"] = d;
      cli_detail::write_out(adeg_o.common.out, j);
    } else if (dp_c->parsed()) {
      const BooleanFunction f =
          cli_detail::resolve_function(dp_o.table, dp_o.fn, dp_o.m, dp_o.k);
      const std::optional<Rat> alpha = cli_detail::parse_alpha(dp_o.alpha);
      const DualPolynomial v = dual_polynomial(f, alpha);
      const DualPolynomialReport rep = verify_dual_polynomial(v, f, alpha);
      std::cout << "vanishing_degree = " << v.vanishing_degree
                << ", correlation = " << rational_text(v.correlation)
                << ", verified = " << (rep.ok() ? 1 : 0) << "\n";
      if (!rep.ok()) throw std::logic_error("freshly extracted witness failed verification");
      cli_detail::write_out(dp_o.common.out, dual_polynomial_to_json(v));
    } else if (pat_c->parsed()) {
      const RealFunction inner =
          cli_detail::resolve_real_function(pat_o.table, pat_o.fn, pat_o.m, pat_o.k);
      std::optional<Rat> scale;
      if (!pat_o.scale.empty()) scale = parse_rational(pat_o.scale);
      const PatternSpec spec(pat_o.k, pat_o.m, pat_o.M, inner, scale);
      const RationalTensor t = build_pattern_tensor(spec, pat_o.common.max_size);
      std::cout << "shape =";
      for (std::size_t i = 0; i < t.shape().rank(); ++i) std::cout << " " << t.shape().dim(i);
      std::cout << ", l1 = " << rational_text(l1_norm(t)) << "\n";
      Json j;
      j["verb"] = "pattern";
      j["spec"] = pattern_spec_to_json(spec);
      j["tensor"] = tensor_to_json(t);
      j["l1"] = rational_to_json(l1_norm(t));
      cli_detail::write_out(pat_o.common.out, j);
    } else if (emb_c->parsed()) {
      const PatternSpec spec(emb_o.k, emb_o.m, emb_o.M, to_real(make_or(emb_o.m)));
      const DisjEmbedding e = embed_into_disj(spec, emb_o.common.max_size);
      std::cout << "n_prime = " << e.ground_size << ", verified = " << (e.verified ? 1 : 0)
                << "\n";
      cli_detail::write_out(emb_o.common.out, embedding_to_json(e));
    } else if (had_c->parsed()) {
      const RationalTensor b = cli_detail::load_tensor(had_o.tensor, had_o.common.max_size);
      const BoundCertificate cert = hadamard_bound(SignTensor::from_rational(b),
                                                    had_o.common.max_size,
                                                    had_o.common.max_candidates);
      return cli_detail::emit_certificate(cert, had_o.common.out, had_o.common.max_size,
                                          had_o.common.max_candidates);
    } else if (cc_c->parsed()) {
      const RationalTensor b = cli_detail::load_tensor(cc_o.tensor, cc_o.common.max_size);
      const BoundCertificate cert =
          contraction_chain_check(b, cc_o.common.max_size, cc_o.common.max_candidates);
      const CertStep& s = cert.steps.front();
      std::cout << "mu_star_b = " << rational_text(s.rationals.at("mu_star_b"))
                << ", mu_star_bb = " << rational_text(s.rationals.at("mu_star_bb"))
                << ", mean_abs_bb = " << rational_text(s.rationals.at("mean_abs_bb")) << "\n";
      return cli_detail::emit_certificate(cert, cc_o.common.out, cc_o.common.max_size,
                                          cc_o.common.max_candidates);
    } else if (cd_c->parsed()) {
      const BoundCertificate cert = disjointness_bound(cli_detail::parse_big_int(cd_o.n),
                                                       cd_o.k, parse_rational(cd_o.eps));
      return cli_detail::emit_certificate(cert, cd_o.common.out, cd_o.common.max_size,
                                          cd_o.common.max_candidates);
    } else if (ps_c->parsed()) {
      const BoundCertificate cert = proof_size_bound(cli_detail::parse_big_int(ps_o.n), ps_o.k);
      return cli_detail::emit_certificate(cert, ps_o.common.out, ps_o.common.max_size,
                                          ps_o.common.max_candidates);
    } else if (ck_c->parsed()) {
      const BoundCertificate cert =
          certificate_from_json(load_json_file(ck_o.cert), ck_o.common.max_size);
      const CheckReport rep =
          check_certificate(cert, ck_o.common.max_size, ck_o.common.max_candidates);
      std::cout << "ok = " << (rep.ok ? 1 : 0) << " (exact " << rep.verified_exact
                << ", enumerated " << rep.verified_enum << ", external " << rep.external
                << ", failed " << rep.failed << ")\n";
      for (const std::string& f : rep.failures) std::cout << "  " << f << "\n";
      cli_detail::write_out(ck_o.common.out, cli_detail::check_report_to_json(rep));
      return rep.ok ? 0 : 2;
    }
    return 0;
  } catch (const ConditionViolatedError& e) {
    std::cerr << "condition violated: " << e.what() << "\n";
    return 4;
  } catch (const CapacityError& e) {
    std::cerr << "capacity: " << e.what() << "\n";
    return 3;
  } catch (const ValidationError& e) {
    std::cerr << "invalid: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace cinorm
