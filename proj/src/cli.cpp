#include "gadgetforge/cli.hpp"

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "gadgetforge/json_io.hpp"

namespace gforge {

namespace {

std::uint64_t default_budget() {
  if (const char* env = std::getenv("GADGETFORGE_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
    std::cerr << "warning: ignoring malformed GADGETFORGE_BUDGET\n";
  }
  return 1ull << 26;
}

/// Wrap generated payloads with tool/seed/input provenance before writing.
void emit(const std::string& path, Json payload, std::uint64_t seed,
          const std::vector<std::pair<std::string, std::string>>& input_digests) {
  Json prov;
  prov["tool"] = kToolVersion;
  prov["seed"] = seed;
  if (!input_digests.empty()) {
    Json in;
    for (const auto& [name, digest] : input_digests) in[name] = digest;
    prov["inputs"] = in;
  }
  payload["provenance"] = prov;
  write_json_atomic(path, payload);
}

std::string digest_of_file(const std::string& path) {
  Json j = read_json_file(path);
  return fnv1a_hex(canonical_dump(j));
}

struct VerifyOutcome {
  VerificationReport report;
  Label label = Label::Unknown;
};

int finish_verify(const VerifyOutcome& out, const std::string& out_path) {
  Json j = verification_to_json(out.report);
  j["instance_label"] = to_string(out.label);
  bool match = true;
  if (out.report.verdict == Verdict::Undecided || out.report.verdict == Verdict::GapViolation)
    match = false;
  else if (out.label == Label::Yes)
    match = out.report.verdict == Verdict::Yes;
  else if (out.label == Label::No)
    match = out.report.verdict == Verdict::No;
  j["matches_label"] = match;
  if (!out_path.empty())
    write_json_atomic(out_path, j);
  else
    std::cout << canonical_dump(j);
  return match ? 0 : 1;
}

int do_fixtures(const std::string& name, const std::string& dir, std::uint64_t seed,
                std::uint64_t budget);

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"gadget constructions, randomized code/lattice reductions, and exact oracles"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);
  app.fallthrough();  // lets --budget appear after the subcommand name
  std::uint64_t budget = default_budget();
  app.add_option("--budget", budget, "enumeration budget (nodes / candidates)");

  // ---- gen-bch ----------------------------------------------------------
  auto* gen_bch = app.add_subcommand("gen-bch", "construct a q-ary BCH code");
  u64 bch_q = 2, bch_d = 3;
  unsigned bch_r = 3;
  std::string bch_out;
  gen_bch->add_option("--q", bch_q, "field size (prime power)")->required();
  gen_bch->add_option("--r", bch_r, "locator extension degree (length q^r - 1)")->required();
  gen_bch->add_option("--d", bch_d, "design minimum distance")->required();
  gen_bch->add_option("-o,--out", bch_out, "output file")->required();

  // ---- gen-ldc ----------------------------------------------------------
  auto* gen_ldc = app.add_subcommand("gen-ldc", "sample a locally dense code gadget");
  u64 ldc_q = 2, ldc_k = 1, ldc_m = 4, ldc_seed = 0, ldc_override = 0;
  bool ldc_density = false;
  std::string ldc_out;
  gen_ldc->add_option("--q", ldc_q)->required();
  gen_ldc->add_option("--k", ldc_k)->required();
  gen_ldc->add_option("--m", ldc_m)->required();
  gen_ldc->add_option("--seed", ldc_seed, "RNG seed")->required();
  gen_ldc->add_option("--scale-override", ldc_override, "desk-scale block length q^r - 1");
  gen_ldc->add_flag("--estimate-density", ldc_density, "run the density estimator");
  gen_ldc->add_option("-o,--out", ldc_out)->required();

  // ---- gen-rs-lattice ----------------------------------------------------
  auto* gen_rs = app.add_subcommand("gen-rs-lattice", "Construction-A lattice of a Reed-Solomon code");
  u64 rs_q = 5, rs_ell = 2;
  std::string rs_out;
  gen_rs->add_option("--q", rs_q, "prime evaluation domain size")->required();
  gen_rs->add_option("--ell", rs_ell, "RS dimension")->required();
  gen_rs->add_option("-o,--out", rs_out)->required();

  // ---- gen-ldl ----------------------------------------------------------
  auto* gen_ldl = app.add_subcommand("gen-ldl", "sample a locally dense lattice gadget");
  std::string ldl_p = "2", ldl_gpp = "1", ldl_out;
  u64 ldl_k = 1, ldl_m = 3, ldl_seed = 0;
  u64 ovr_q = 0, ovr_ell = 0, ovr_w = 0, ovr_d = 0;
  bool ldl_density = false;
  gen_ldl->add_option("--p", ldl_p, "norm exponent (integer)")->required();
  gen_ldl->add_option("--gamma-prime-pow-p", ldl_gpp, "gamma'^p as an exact rational")->required();
  gen_ldl->add_option("--k", ldl_k)->required();
  gen_ldl->add_option("--m", ldl_m)->required();
  gen_ldl->add_option("--seed", ldl_seed)->required();
  gen_ldl->add_option("--override-q", ovr_q, "desk-scale prime q");
  gen_ldl->add_option("--override-ell", ovr_ell);
  gen_ldl->add_option("--override-w", ovr_w);
  gen_ldl->add_option("--override-d", ovr_d);
  gen_ldl->add_flag("--estimate-density", ldl_density);
  gen_ldl->add_option("-o,--out", ldl_out)->required();

  // ---- reduce ------------------------------------------------------------
  auto* reduce = app.add_subcommand("reduce", "run a reduction pipeline");
  reduce->require_subcommand(1);

  auto* red_ncp = reduce->add_subcommand("ncp-to-mdp", "NCP -> MDP over any F_q");
  std::string rn_in, rn_gadget, rn_out, rn_report, rn_gamma_prime;
  u64 rn_seed = 0;
  std::int64_t rn_h_override = -1;
  red_ncp->add_option("--in", rn_in)->required();
  red_ncp->add_option("--gadget", rn_gadget)->required();
  red_ncp->add_option("--seed", rn_seed)->required();
  red_ncp->add_option("--gamma-prime", rn_gamma_prime,
                      "output gap (default gamma/(1+alpha gamma))");
  red_ncp->add_option("--h-override", rn_h_override, "sparsifier codimension override");
  red_ncp->add_option("-o,--out", rn_out)->required();
  red_ncp->add_option("--report", rn_report, "write the reduction report here");

  auto* red_cvp = reduce->add_subcommand("cvp-to-svp", "CVP_p -> SVP_p");
  std::string rc_in, rc_gadget, rc_out, rc_report, rc_gamma_prime, rc_rho;
  u64 rc_seed = 0;
  red_cvp->add_option("--in", rc_in)->required();
  red_cvp->add_option("--gadget", rc_gadget)->required();
  red_cvp->add_option("--seed", rc_seed)->required();
  red_cvp->add_option("--gamma-prime", rc_gamma_prime)->required();
  red_cvp->add_option("--rho-override", rc_rho, "prime sparsifier modulus");
  red_cvp->add_option("-o,--out", rc_out)->required();
  red_cvp->add_option("--report", rc_report);

  auto* red_n2 = reduce->add_subcommand("ncp2-to-svp", "tensor-friendly NCP_2 -> SVP_p");
  std::string n2_in, n2_out, n2_report, n2_p = "2", n2_alpha, n2_gamma_prime, n2_rho;
  u64 n2_seed = 0;
  std::uint32_t n2_c = 1;
  std::int64_t n2_r_override = -1;
  red_n2->add_option("--in", n2_in)->required();
  red_n2->add_option("--p", n2_p)->required();
  red_n2->add_option("--alpha", n2_alpha, "relative radius (rational)")->required();
  red_n2->add_option("--gamma-prime", n2_gamma_prime)->required();
  red_n2->add_option("--c", n2_c, "intended tensor exponent")->required();
  red_n2->add_option("--seed", n2_seed)->required();
  red_n2->add_option("--r-override", n2_r_override, "BCH extension degree (m' = 2^r - 1)");
  red_n2->add_option("--rho-override", n2_rho);
  red_n2->add_option("-o,--out", n2_out)->required();
  red_n2->add_option("--report", n2_report);

  // ---- tensor ------------------------------------------------------------
  auto* tensor = app.add_subcommand("tensor", "Kronecker-boost an MDP or SVP instance");
  std::string t_in, t_out;
  std::uint32_t t_c = 2;
  tensor->add_option("--in", t_in)->required();
  tensor->add_option("--c", t_c)->required();
  tensor->add_option("-o,--out", t_out)->required();

  // ---- verify ------------------------------------------------------------
  auto* verify = app.add_subcommand("verify", "classify an instance or check a gadget");
  std::string v_in, v_out;
  verify->add_option("--in", v_in)->required();
  verify->add_option("-o,--out", v_out, "write the verification report here");

  // ---- stats -------------------------------------------------------------
  auto* stats = app.add_subcommand("stats", "sparsifier survival statistics");
  std::string s_kind = "code", s_out;
  u64 s_q = 2, s_h = 3, s_rho = 5, s_len = 16, s_trials = 100000, s_seed = 0;
  stats->add_option("--kind", s_kind, "code | lattice")->required();
  stats->add_option("--q", s_q);
  stats->add_option("--codim", s_h, "sparsifier codimension h");
  stats->add_option("--rho", s_rho);
  stats->add_option("--length", s_len);
  stats->add_option("--trials", s_trials);
  stats->add_option("--seed", s_seed)->required();
  stats->add_option("-o,--out", s_out);

  // ---- fixtures ----------------------------------------------------------
  auto* fixtures = app.add_subcommand("fixtures", "emit oracle-verified micro instance sets");
  std::string f_name, f_dir = ".";
  u64 f_seed = 0;
  fixtures->add_option("name", f_name, "ncp-micro | cvp-micro | rs-ldl-toy")->required();
  fixtures->add_option("-o,--out-dir", f_dir);
  fixtures->add_option("--seed", f_seed)->required();

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help / --version
      std::cout << app.help();
      return 0;
    }
    std::cerr << "usage: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*gen_bch) {
      BchResult res = build_bch({bch_q, bch_r, bch_d});
      Json j = code_to_json(res.code);
      j["bch"] = {{"q", bch_q},
                  {"r", bch_r},
                  {"design_distance", bch_d},
                  {"codimension", res.codimension},
                  {"codimension_bound", res.codimension_bound},
                  {"constraint_cosets", res.constraint_cosets}};
      emit(bch_out, j, 0, {});
      return 0;
    }
    if (*gen_ldc) {
      std::optional<LdcOverride> ovr;
      if (gen_ldc->count("--scale-override")) ovr = LdcOverride{ldc_override};
      LocallyDenseCode g = sample_locally_dense_code(ldc_q, ldc_k, ldc_m, ldc_seed, ovr);
      if (ldc_density) estimate_density(g, budget, ldc_seed ^ 0x64656e73u);
      emit(ldc_out, ldc_to_json(g), ldc_seed, {});
      return 0;
    }
    if (*gen_rs) {
      IntegerLattice lat = build_rs_lattice(rs_q, rs_ell);
      Json j = lattice_to_json(lat);
      j["rs"] = {{"q", rs_q}, {"ell", rs_ell}};
      emit(rs_out, j, 0, {});
      return 0;
    }
    if (*gen_ldl) {
      std::optional<RsLdlOverride> ovr;
      if (gen_ldl->count("--override-q"))
        ovr = RsLdlOverride{ovr_q, ovr_ell, ovr_w, ovr_d};
      LocallyDenseLattice g = sample_rs_locally_dense_lattice(
          normspec_from_string(ldl_p), rat_from_string(ldl_gpp), ldl_k, ldl_m, ldl_seed, ovr);
      if (ldl_density) estimate_density(g, budget, ldl_seed ^ 0x64656e73u);
      emit(ldl_out, ldl_to_json(g), ldl_seed, {});
      return 0;
    }
    if (*red_ncp) {
      NcpInstance inst = ncp_from_json(read_json_file(rn_in));
      LocallyDenseCode gadget = ldc_from_json(read_json_file(rn_gadget));
      Rat gamma_prime = rn_gamma_prime.empty()
                            ? inst.gamma / (1 + gadget.alpha * inst.gamma)
                            : rat_from_string(rn_gamma_prime);
      NcpToMdpOptions opt;
      if (rn_h_override >= 0) opt.h_override = static_cast<u64>(rn_h_override);
      NcpToMdpResult res = ncp_to_mdp(inst, gadget, gamma_prime, rn_seed, opt);
      res.report.input_digest = digest_of_file(rn_in);
      res.report.gadget_digest = digest_of_file(rn_gadget);
      emit(rn_out, mdp_to_json(res.instance), rn_seed,
           {{"instance", res.report.input_digest}, {"gadget", res.report.gadget_digest}});
      if (!rn_report.empty()) write_json_atomic(rn_report, report_to_json(res.report));
      return 0;
    }
    if (*red_cvp) {
      CvpInstance inst = cvp_from_json(read_json_file(rc_in));
      LocallyDenseLattice gadget = ldl_from_json(read_json_file(rc_gadget));
      CvpToSvpOptions opt;
      if (!rc_rho.empty()) opt.rho_override = Int(rc_rho);
      CvpToSvpResult res = cvp_to_svp(inst, gadget, rat_from_string(rc_gamma_prime), rc_seed, opt);
      res.report.input_digest = digest_of_file(rc_in);
      res.report.gadget_digest = digest_of_file(rc_gadget);
      emit(rc_out, svp_to_json(res.instance), rc_seed,
           {{"instance", res.report.input_digest}, {"gadget", res.report.gadget_digest}});
      if (!rc_report.empty()) write_json_atomic(rc_report, report_to_json(res.report));
      return 0;
    }
    if (*red_n2) {
      NcpInstance inst = ncp_from_json(read_json_file(n2_in));
      Ncp2ToSvpOptions opt;
      if (n2_r_override >= 0) opt.r_override = static_cast<unsigned>(n2_r_override);
      if (!n2_rho.empty()) opt.rho_override = Int(n2_rho);
      Ncp2ToSvpResult res =
          ncp2_to_svp_tensorable(inst, normspec_from_string(n2_p), rat_from_string(n2_alpha),
                                 rat_from_string(n2_gamma_prime), n2_c, n2_seed, opt);
      res.report.input_digest = digest_of_file(n2_in);
      emit(n2_out, svp_to_json(res.instance), n2_seed, {{"instance", res.report.input_digest}});
      if (!n2_report.empty()) write_json_atomic(n2_report, report_to_json(res.report));
      return 0;
    }
    if (*tensor) {
      Json j = read_json_file(t_in);
      std::string kind = j.value("kind", "");
      std::string digest = digest_of_file(t_in);
      if (kind == "mdp") {
        MdpInstance out = tensor_boost_mdp(mdp_from_json(j), t_c, budget);
        emit(t_out, mdp_to_json(out), 0, {{"instance", digest}});
        return 0;
      }
      if (kind == "svp") {
        SvpInstance out = tensor_boost_svp(svp_from_json(j), t_c, budget);
        emit(t_out, svp_to_json(out), 0, {{"instance", digest}});
        return 0;
      }
      std::cerr << "schema: tensor expects an mdp or svp instance\n";
      return 2;
    }
    if (*verify) {
      Json j = read_json_file(v_in);
      std::string kind = j.value("kind", "");
      OracleBudget ob{budget};
      VerifyOutcome out;
      if (kind == "mdp") {
        MdpInstance inst = mdp_from_json(j);
        out.report = classify_mdp(inst, ob);
        out.label = inst.label;
      } else if (kind == "svp") {
        SvpInstance inst = svp_from_json(j);
        out.report = classify_svp(inst, ob);
        out.label = inst.label;
      } else if (kind == "ncp") {
        NcpInstance inst = ncp_from_json(j);
        out.report = classify_ncp(inst, ob);
        out.label = inst.label;
      } else if (kind == "cvp") {
        CvpInstance inst = cvp_from_json(j);
        out.report = classify_cvp(inst, ob);
        out.label = inst.label;
      } else if (kind == "ldc") {
        LocallyDenseCode g = ldc_from_json(j);
        VerificationReport rep;
        rep.oracle = "min_distance";
        DistanceOptions dopt;
        dopt.budget = budget;
        dopt.radius_cap = g.d;
        DistanceReport dr = min_distance(g.code, dopt);
        rep.work = dr.visited;
        bool ok = !dr.distance;  // no nonzero codeword of weight <= d
        rep.exact_value = dr.distance ? std::to_string(*dr.distance) : ("> " + std::to_string(g.d));
        rep.verdict = ok ? Verdict::Yes : Verdict::No;
        rep.detail = "structural check lambda(C) > d";
        out.report = rep;
        out.label = ok ? Label::Yes : Label::No;
        return finish_verify(out, v_out);
      } else if (kind == "ldl") {
        LocallyDenseLattice g = ldl_from_json(j);
        VerificationReport rep;
        rep.oracle = "lambda1";
        EnumOptions eopt;
        eopt.max_nodes = budget;
        Lambda1Report l1 = lambda1(g.lattice, g.p, eopt);
        rep.work = l1.visited;
        rep.exact_value = l1.value.to_string();
        bool ok = l1.value.compare(Rat(ipow(Int(g.d), g.p.num))) > 0;
        rep.verdict = ok ? Verdict::Yes : Verdict::No;
        rep.detail = "structural check lambda_1^(p) > d";
        out.report = rep;
        out.label = ok ? Label::Yes : Label::No;
        return finish_verify(out, v_out);
      } else {
        std::cerr << "schema: verify expects ncp/mdp/cvp/svp/ldc/ldl\n";
        return 2;
      }
      return finish_verify(out, v_out);
    }
    if (*stats) {
      SparsifierStats st;
      if (s_kind == "code")
        st = code_sparsifier_stats(s_q, s_h, s_len, s_trials, s_seed);
      else if (s_kind == "lattice")
        st = lattice_sparsifier_stats(s_rho, s_len, s_trials, s_seed);
      else {
        std::cerr << "usage: stats --kind must be code or lattice\n";
        return 2;
      }
      Json j;
      j["kind"] = "stats";
      j["trials"] = st.trials;
      j["survived"] = st.survived;
      j["survived_second"] = st.survived_second;
      j["survived_joint"] = st.survived_joint;
      j["expected_rate"] = rat_to_string(st.expected_rate);
      j["within_4_sigma"] = st.within_4_sigma;
      j["joint_within_4_sigma"] = st.joint_within_4_sigma;
      if (!s_out.empty())
        write_json_atomic(s_out, j);
      else
        std::cout << canonical_dump(j);
      return st.within_4_sigma && st.joint_within_4_sigma ? 0 : 1;
    }
    if (*fixtures) {
      return do_fixtures(f_name, f_dir, f_seed, budget);
    }
  } catch (const SchemaError& e) {
    std::cerr << "schema: " << e.what() << "\n";
    return 2;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget: " << e.what() << "\n";
    return 2;
  } catch (const CertificationError& e) {
    std::cerr << "certification: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::cerr << "usage: no subcommand\n";
  return 2;
}

namespace {

NcpInstance make_ncp_fixture(u64 q, std::size_t m, u64 k, const Rat& gamma, bool yes) {
  auto pp = prime_power_decompose(q);
  FieldPtr f = FiniteField::make(pp->first, pp->second);
  FqMat g(f, m, 2);
  g.at(0, 0) = 1;
  g.at(1, 1) = 1;
  NcpInstance inst;
  inst.code = LinearCode::from_generator(std::move(g));
  inst.k = k;
  inst.gamma = gamma;
  if (yes) {
    // target = e1 + e2 + e3: distance exactly 1, witness (1, 1).
    inst.target.assign(m, 0);
    inst.target[0] = 1;
    inst.target[1] = 1;
    inst.target[2] = 1;
    inst.label = Label::Yes;
    inst.witness = std::vector<u64>{1, 1};
  } else {
    // all-ones target: distance m - 2 from the span of e1, e2 (any scaling).
    inst.target.assign(m, 1);
    inst.label = Label::No;
  }
  return inst;
}

int do_fixtures(const std::string& name, const std::string& dir, std::uint64_t seed,
                std::uint64_t budget) {
  auto path = [&](const std::string& f) { return dir + "/" + f; };
  OracleBudget ob{budget};
  if (name == "ncp-micro") {
    struct Row {
      u64 q;
      std::size_t m;
      Rat gamma;
      bool yes;
      const char* file;
    };
    // gamma = 4q matches the gadget family d = 4qk; NO instances need
    // m - 2 > gamma k, hence the longer blocks.
    const Row rows[] = {
        {2, 6, Rat(8), true, "ncp-q2-yes.json"},
        {2, 12, Rat(8), false, "ncp-q2-no.json"},
        {3, 6, Rat(12), true, "ncp-q3-yes.json"},
        {3, 16, Rat(12), false, "ncp-q3-no.json"},
    };
    for (const Row& r : rows) {
      NcpInstance inst = make_ncp_fixture(r.q, r.m, 1, r.gamma, r.yes);
      VerificationReport rep = classify_ncp(inst, ob);
      if ((inst.label == Label::Yes) != (rep.verdict == Verdict::Yes) ||
          (inst.label == Label::No) != (rep.verdict == Verdict::No)) {
        std::cerr << "error: fixture " << r.file << " failed its oracle check ("
                  << to_string(rep.verdict) << ")\n";
        return 1;
      }
      emit(path(r.file), ncp_to_json(inst), seed, {});
    }
    return 0;
  }
  if (name == "cvp-micro") {
    ZMat b(3, 2);
    b.at(0, 0) = 1;
    b.at(1, 1) = 1;
    for (int yes = 0; yes < 2; ++yes) {
      CvpInstance inst;
      inst.lattice = IntegerLattice::from_basis(b);
      inst.k = 1;
      inst.p = NormSpec::integral(2);
      inst.gamma = 3;
      if (yes) {
        inst.target = {Int(1), Int(1), Int(1)};
        inst.label = Label::Yes;
        inst.witness = std::vector<Int>{Int(1), Int(1)};
      } else {
        inst.target = {Int(0), Int(0), Int(5)};
        inst.label = Label::No;
      }
      VerificationReport rep = classify_cvp(inst, ob);
      if ((inst.label == Label::Yes) != (rep.verdict == Verdict::Yes) ||
          (inst.label == Label::No) != (rep.verdict == Verdict::No)) {
        std::cerr << "error: cvp fixture failed its oracle check (" << to_string(rep.verdict)
                  << ")\n";
        return 1;
      }
      emit(path(yes ? "cvp-yes.json" : "cvp-no.json"), cvp_to_json(inst), seed, {});
    }
    return 0;
  }
  if (name == "rs-ldl-toy") {
    LocallyDenseLattice g = sample_rs_locally_dense_lattice(
        NormSpec::integral(2), Rat(1), 1, 2, seed, RsLdlOverride{13, 3, 4, 3});
    estimate_density(g, budget, seed ^ 0x64656e73u);
    emit(path("rs-ldl-toy.json"), ldl_to_json(g), seed, {});
    return 0;
  }
  std::cerr << "usage: unknown fixture set: " << name << "\n";
  return 2;
}

}  // namespace

}  // namespace gforge
