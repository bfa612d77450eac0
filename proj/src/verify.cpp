#include "gadgetforge/verify.hpp"

#include <sstream>

namespace gforge {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "YES";
    case Verdict::No: return "NO";
    case Verdict::GapViolation: return "GAP_VIOLATION";
    case Verdict::Undecided: return "UNDECIDED";
  }
  return "?";
}

namespace {

Rat rat_pow_u(Rat base, std::uint64_t e) {
  Rat r = 1;
  while (e) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

u64 floor_rat(const Rat& r) {
  Int q = numerator(r) / denominator(r);
  if (Rat(q) > r) q -= 1;
  return q.convert_to<u64>();
}

u64 hammingweight_int(const std::vector<Int>& v) {
  u64 w = 0;
  for (const Int& x : v)
    if (x != 0) ++w;
  return w;
}

}  // namespace

VerificationReport classify_mdp(const MdpInstance& inst, const OracleBudget& budget) {
  VerificationReport rep;
  rep.oracle = "min_distance";
  Rat gap = inst.gamma * Rat(inst.k);
  DistanceOptions opt;
  opt.budget = budget.max_nodes;
  opt.radius_cap = floor_rat(gap);
  try {
    DistanceReport dr = min_distance(inst.code, opt);
    rep.work = dr.visited;
    if (!dr.distance) {
      // lambda exceeds floor(gamma k), hence exceeds gamma k.
      rep.verdict = Verdict::No;
      rep.exact_value = inst.code.dimension() == 0 ? "inf" : ("> " + std::to_string(*opt.radius_cap));
    } else {
      u64 lam = *dr.distance;
      rep.exact_value = std::to_string(lam);
      if (lam <= inst.k)
        rep.verdict = Verdict::Yes;
      else if (Rat(lam) > gap)
        rep.verdict = Verdict::No;
      else
        rep.verdict = Verdict::GapViolation;
    }
  } catch (const BudgetExceeded& e) {
    rep.verdict = Verdict::Undecided;
    rep.detail = e.what();
  }
  return rep;
}

VerificationReport classify_svp(const SvpInstance& inst, const OracleBudget& budget) {
  VerificationReport rep;
  rep.oracle = "lambda1";
  if (!inst.p.is_integral()) {
    if (inst.gamma != 1)
      throw std::invalid_argument("classify_svp: non-integral p needs gamma = 1 for an exact gate");
  }
  EnumOptions opt;
  opt.max_nodes = budget.max_nodes;
  try {
    Lambda1Report l1 = lambda1(inst.lattice, inst.p, opt);
    rep.work = l1.visited;
    rep.exact_value = l1.value.to_string();
    if (l1.value.is_infinite()) {
      rep.verdict = Verdict::No;
      return rep;
    }
    Rat gate_pow = inst.p.is_integral()
                       ? rat_pow_u(inst.gamma, inst.p.num) * inst.threshold_pow_p
                       : inst.threshold_pow_p;
    if (l1.value.compare(inst.threshold_pow_p) <= 0)
      rep.verdict = Verdict::Yes;
    else if (l1.value.compare(gate_pow) > 0)
      rep.verdict = Verdict::No;
    else
      rep.verdict = Verdict::GapViolation;
  } catch (const BudgetExceeded& e) {
    rep.verdict = Verdict::Undecided;
    rep.detail = e.what();
  }
  return rep;
}

VerificationReport classify_ncp(const NcpInstance& inst, const OracleBudget& budget) {
  VerificationReport rep;
  rep.oracle = "nearest_codeword_distance";
  const FiniteField& F = *inst.code.field();
  DistanceOptions opt;
  opt.budget = budget.max_nodes;
  try {
    DistanceReport base = nearest_codeword_distance(inst.code, inst.target, opt);
    rep.work += base.visited;
    u64 dist1 = *base.distance;
    rep.exact_value = std::to_string(dist1);
    if (dist1 <= inst.k) {
      rep.verdict = Verdict::Yes;
      return rep;
    }
    // NO requires every nonzero scaling of the target to stay far.
    u64 min_over_scalings = dist1;
    for (u64 beta = 2; beta < F.order(); ++beta) {
      std::vector<u64> scaled(inst.target.size());
      for (std::size_t i = 0; i < scaled.size(); ++i) scaled[i] = F.mul(beta, inst.target[i]);
      DistanceReport dr = nearest_codeword_distance(inst.code, scaled, opt);
      rep.work += dr.visited;
      min_over_scalings = std::min(min_over_scalings, *dr.distance);
    }
    std::ostringstream os;
    os << "min over scalings " << min_over_scalings;
    rep.detail = os.str();
    if (Rat(min_over_scalings) > inst.gamma * Rat(inst.k))
      rep.verdict = Verdict::No;
    else
      rep.verdict = Verdict::GapViolation;
  } catch (const BudgetExceeded& e) {
    rep.verdict = Verdict::Undecided;
    rep.detail = e.what();
  }
  return rep;
}

VerificationReport classify_cvp(const CvpInstance& inst, const OracleBudget& budget) {
  VerificationReport rep;
  rep.oracle = "cvp_distance";
  EnumOptions opt;
  opt.max_nodes = budget.max_nodes;
  try {
    CvpReport base = cvp_distance(inst.lattice, inst.target, inst.p, opt);
    rep.work += base.visited;
    rep.exact_value = base.distance_pow.to_string();
    Rat k_pow = inst.p.is_integral() ? Rat(ipow(Int(inst.k), inst.p.num)) : Rat(0);
    if (!inst.p.is_integral())
      throw std::invalid_argument("classify_cvp: p must be integral");
    if (base.distance_pow.compare(k_pow) <= 0) {
      rep.verdict = Verdict::Yes;
      return rep;
    }
    Rat gate_pow = rat_pow_u(inst.gamma * Rat(inst.k), inst.p.num);
    MultiplesReport mult = cvp_all_multiples(inst.lattice, inst.target, inst.p, gate_pow, opt);
    std::ostringstream os;
    os << "alpha range " << mult.alpha_bound;
    if (mult.exact_multiple) os << "; exact multiple at alpha = " << *mult.exact_multiple;
    rep.detail = os.str();
    if (mult.exact_multiple) {
      rep.verdict = Verdict::GapViolation;  // some alpha t is a lattice point
      return rep;
    }
    if (mult.min_distance_pow.compare(gate_pow) > 0)
      rep.verdict = Verdict::No;
    else
      rep.verdict = Verdict::GapViolation;
  } catch (const BudgetExceeded& e) {
    rep.verdict = Verdict::Undecided;
    rep.detail = e.what();
  }
  return rep;
}

CodeCensus census_code(const LinearCode& c_int, std::size_t n_code, std::size_t n_gadget,
                       u64 k_prime, u64 d, bool check_no_structure, const OracleBudget& budget) {
  if (c_int.dimension() != n_code + n_gadget + 1)
    throw std::invalid_argument("census_code: dimension does not match the block split");
  const FiniteField& F = *c_int.field();
  double cost = 1;
  for (std::size_t i = 0; i < c_int.dimension(); ++i) {
    cost *= static_cast<double>(F.order());
    if (cost > static_cast<double>(budget.max_nodes))
      throw BudgetExceeded("census_code: q^dim exceeds the budget");
  }
  CodeCensus out;
  std::vector<u64> msg(c_int.dimension(), 0);
  for (;;) {
    // advance odometer; classify nonzero messages
    std::size_t pos = 0;
    while (pos < msg.size() && msg[pos] + 1 == F.order()) {
      msg[pos] = 0;
      ++pos;
    }
    if (pos == msg.size()) break;
    ++msg[pos];
    ++out.total;
    std::vector<u64> word = c_int.encode(msg);
    u64 wt = hamming_weight(word);
    if (wt <= k_prime) ++out.good_count;
    if (wt <= d) {
      ++out.annoying_count;
      if (check_no_structure) {
        bool gadget_zero = true;
        for (std::size_t i = n_code; i < msg.size(); ++i)
          if (msg[i] != 0) {
            gadget_zero = false;
            break;
          }
        if (!gadget_zero) {
          out.structure_ok = false;
          std::ostringstream os;
          os << "light codeword of weight " << wt << " uses the gadget or target column";
          out.violation = os.str();
        }
      }
    }
  }
  return out;
}

LatticeCensus census_lattice_khot(const IntegerLattice& l_int, std::size_t n_code,
                                  std::size_t n_gadget, const NormSpec& p,
                                  const Rat& k_prime_pow, const Rat& gamma_k_pow,
                                  bool check_no_structure, const OracleBudget& budget) {
  LatticeCensus out;
  EnumOptions opt;
  opt.max_nodes = budget.max_nodes;
  const std::size_t last = l_int.ambient_dim() - 1;
  Rat radius = std::max(k_prime_pow, gamma_k_pow);
  enumerate_lattice_points(l_int, nullptr, p, radius, opt, [&](const EnumPoint& pt) {
    ++out.enumerated;
    bool zero = true;
    for (const Int& v : pt.vector)
      if (v != 0) {
        zero = false;
        break;
      }
    if (zero) return true;
    bool light_kp = pt.norm_pow.compare(k_prime_pow) <= 0;
    bool light_gk = pt.norm_pow.compare(gamma_k_pow) <= 0;
    if (light_kp && pt.vector[last] == 1) ++out.good_count;
    if (light_gk) {
      ++out.annoying_count;
      if (check_no_structure) {
        // NO case: light vectors must not touch the gadget or target columns.
        bool clean = pt.coeffs[n_code + n_gadget] == 0;
        for (std::size_t i = n_code; clean && i < n_code + n_gadget; ++i)
          if (pt.coeffs[i] != 0) clean = false;
        if (!clean) {
          out.structure_ok = false;
          out.violation = "light vector uses gadget or target coefficients";
        }
      }
    }
    return true;
  });
  return out;
}

TensorCensus census_lattice_tensor(const IntegerLattice& l_int, std::size_t m_code,
                                   std::size_t m_gadget, const NormSpec& p, u64 d,
                                   const Rat& gammap_kprime_pow, std::uint32_t c,
                                   const Rat& radius_pow_cap, const OracleBudget& budget) {
  if (!p.is_integral()) throw std::invalid_argument("census_lattice_tensor: p must be integral");
  const std::uint32_t pi = p.num;
  TensorCensus out;
  EnumOptions opt;
  opt.max_nodes = budget.max_nodes;
  (void)d;
  // Third Haviv-Regev threshold compared on squared p-th powers:
  // ||w||_p <= (gamma' k')^{c+3p/2}  <=>  (||w||_p^p)^2 <= ((gamma' k')^p)^{2c+3p}.
  Rat third_sq = rat_pow_u(gammap_kprime_pow, 2ull * c + 3ull * pi);

  enumerate_lattice_points(l_int, nullptr, p, radius_pow_cap, opt, [&](const EnumPoint& pt) {
    bool zero = true;
    for (const Int& v : pt.vector)
      if (v != 0) {
        zero = false;
        break;
      }
    if (zero) return true;
    ++out.enumerated;
    const Int& beta = pt.coeffs[m_code + m_gadget];
    bool beta_even = beta % 2 == 0;
    bool bch_block_even = true;
    for (std::size_t i = m_code; i < m_code + m_gadget; ++i)
      if (pt.vector[i] % 2 != 0) {
        bch_block_even = false;
        break;
      }
    bool all_even = true;
    for (const Int& v : pt.vector)
      if (v % 2 != 0) {
        all_even = false;
        break;
      }
    const u64 wt = hammingweight_int(pt.vector);
    if (!beta_even || (beta_even && !bch_block_even)) {
      // Lemma cases 1 and 2: these vectors must be heavy.
      if (Rat(wt) <= gammap_kprime_pow) {
        out.case_analysis_ok = false;
        std::ostringstream os;
        os << "odd-case vector of weight " << wt << " within (gamma' k')^p";
        out.violation = os.str();
      }
      return true;
    }
    if (!all_even) {
      out.case_analysis_ok = false;
      out.violation = "even beta and even BCH block but an odd coordinate elsewhere";
      return true;
    }
    // All-even vectors: annoying when they defeat all three thresholds.
    bool a1 = Rat(wt) <= gammap_kprime_pow;
    bool a2 = Rat(wt) * ipow(Int(2), pi) <= gammap_kprime_pow;
    Rat norm_sq = pt.norm_pow.rational() * pt.norm_pow.rational();
    bool a3 = norm_sq <= third_sq;
    if (a1 && a2 && a3) ++out.annoying_count;
    return true;
  });
  return out;
}

std::variant<HavivRegevCertificate, HrRefusal> check_haviv_regev(const IntegerLattice& lat, u64 d,
                                                                 const NormSpec& p, std::uint32_t c,
                                                                 const OracleBudget& budget) {
  if (!p.is_integral()) throw std::invalid_argument("check_haviv_regev: p must be integral");
  if (d == 0) throw std::invalid_argument("check_haviv_regev: d must be positive");
  const std::uint32_t pi = p.num;
  const std::size_t m = lat.ambient_dim();
  const Int dp = ipow(Int(d), pi);             // d^p
  const Int third_sq = ipow(Int(d), std::uint64_t(pi) * (2 * c + 3 * pi));  // d^{p(2c+3p)}

  // Odd class: every lattice vector with an odd coordinate reduces to a
  // nonzero codeword of the mod-2 code of the basis, so its weight is at
  // least the code's minimum distance.
  FieldPtr f2 = FiniteField::make(2, 1);
  FqMat g2t(f2, lat.rank(), m);
  for (std::size_t j = 0; j < lat.rank(); ++j)
    for (std::size_t i = 0; i < m; ++i) {
      Int r = lat.basis().at(i, j) % 2;
      if (r < 0) r += 2;
      g2t.at(j, i) = r.convert_to<u64>();
    }
  std::size_t rank2 = fq_row_reduce(g2t, true);
  FqMat g2(f2, m, rank2);
  for (std::size_t r = 0; r < rank2; ++r)
    for (std::size_t i = 0; i < m; ++i) g2.at(i, r) = g2t.at(r, i);
  std::uint64_t odd_work = 0;
  if (rank2 > 0) {
    LinearCode mod2 = LinearCode::from_generator(std::move(g2));
    DistanceOptions dopt;
    dopt.budget = budget.max_nodes;
    if (dp <= Int(m)) dopt.radius_cap = dp.convert_to<u64>();
    DistanceReport dr = min_distance(mod2, dopt);
    odd_work = dr.visited;
    if (dr.distance && Rat(*dr.distance) <= Rat(dp)) {
      // A light odd-class direction exists; produce the codeword as the
      // concrete obstruction.
      HrRefusal ref;
      ref.reason = "mod-2 code of the basis has a nonzero codeword of weight <= d^p";
      ref.witness.assign(m, 0);
      // Recover some codeword of minimal weight by ball search.
      HammingBall ball{f2, m, *dr.distance};
      std::vector<Int> wit(m, 0);
      enumerate_ball(ball, budget.max_nodes, [&](const std::vector<u64>& v) {
        if (hamming_weight(v) == 0) return true;
        if (mod2.contains(v)) {
          for (std::size_t i = 0; i < m; ++i) wit[i] = Int(v[i]);
          return false;
        }
        return true;
      });
      ref.witness = std::move(wit);
      return ref;
    }
  }

  // Even violators: w in L, all entries even, weight <= (d/2)^p and
  // ||w||_p <= d^{c+3p/2}. Support-first enumeration with exact membership.
  const Int wt_max_i = dp / ipow(Int(2), pi);  // floor((d/2)^p)
  Int candidates = 0;
  Int entry_bound = floor_nth_root(third_sq, 2 * pi);  // |w_i| <= d^{c+3p/2}
  if (entry_bound % 2 != 0) entry_bound -= 1;          // entries are even
  std::uint64_t wt_max = wt_max_i > Int(m) ? static_cast<u64>(m) : wt_max_i.convert_to<u64>();
  if (wt_max > 0 && entry_bound >= 2) {
    // candidate count: sum_s C(m, s) * (#even nonzero values)^s
    Int values = entry_bound;  // 2, 4, ..., entry_bound and negatives: = entry_bound
    Int total = 0;
    for (u64 s = 1; s <= wt_max; ++s) total += binomial(m, s) * ipow(values, s);
    if (total > Int(budget.max_nodes))
      throw BudgetExceeded("check_haviv_regev: even-violator enumeration exceeds budget");
    std::vector<Int> w(m, 0);
    std::vector<std::size_t> support;
    std::optional<std::vector<Int>> violator;
    std::function<void(std::size_t, u64)> rec = [&](std::size_t next, u64 remaining) {
      if (violator) return;
      if (remaining == 0) {
        ++candidates;
        if (!lat.contains(w)) return;
        // Conditions (2) and (1) fail by construction; check (3) exactly.
        PNormPow nrm = PNormPow::of_vector(w, p);
        Rat nsq = nrm.rational() * nrm.rational();
        if (nsq <= Rat(third_sq)) violator = w;
        return;
      }
      for (std::size_t i = next; i + remaining <= m && !violator; ++i) {
        support.push_back(i);
        for (Int val = 2; val <= entry_bound && !violator; val += 2) {
          for (int sign = 0; sign < 2 && !violator; ++sign) {
            w[i] = sign ? -val : val;
            rec(i + 1, remaining - 1);
          }
        }
        w[i] = 0;
        support.pop_back();
      }
    };
    for (u64 s = 1; s <= wt_max && !violator; ++s) rec(0, s);
    if (violator) {
      HrRefusal ref;
      ref.witness = *violator;
      ref.reason = "even lattice vector defeats all three tensoring conditions";
      return ref;
    }
  }

  HavivRegevCertificate cert;
  cert.d = d;
  cert.p = p;
  cert.c = c;
  cert.method = "mod2-census + even-support-enumeration";
  cert.enumerated = candidates;
  {
    std::ostringstream os;
    os << "odd class via mod-2 code (work " << odd_work << "); even violators enumerated up to weight "
       << wt_max << ", entries to " << entry_bound;
    cert.evidence = os.str();
  }
  return cert;
}

bool lattice_min_exceeds(const IntegerLattice& lat, const NormSpec& p, const Rat& bound_pow,
                         const OracleBudget& budget) {
  if (bound_pow < 1) return true;  // nonzero integer vectors have ||w||_p^p >= 1
  if (bound_pow == 1) {
    // Only candidates are the signed unit vectors.
    std::vector<Int> e(lat.ambient_dim(), 0);
    for (std::size_t i = 0; i < lat.ambient_dim(); ++i) {
      e[i] = 1;
      if (lat.contains(e)) return false;
      e[i] = 0;
    }
    return true;
  }
  EnumOptions opt;
  opt.max_nodes = budget.max_nodes;
  bool found = false;
  enumerate_lattice_points(lat, nullptr, p, bound_pow, opt, [&](const EnumPoint& pt) {
    for (const Int& v : pt.vector)
      if (v != 0) {
        found = true;
        return false;
      }
    return true;
  });
  return !found;
}

namespace {

bool within_band(std::uint64_t hits, std::uint64_t trials, const Rat& rate) {
  // |hits - E|^2 <= 16 sigma^2, sigma^2 = trials * rate * (1 - rate), exact.
  Rat e = Rat(trials) * rate;
  Rat dev = Rat(hits) - e;
  return dev * dev <= 16 * Rat(trials) * rate * (1 - rate);
}

}  // namespace

SparsifierStats code_sparsifier_stats(u64 q, u64 h, std::size_t length, std::uint64_t trials,
                                      u64 seed) {
  if (length < 2) throw std::invalid_argument("code_sparsifier_stats: length must be >= 2");
  auto pp = prime_power_decompose(q);
  if (!pp) throw std::invalid_argument("code_sparsifier_stats: q must be a prime power");
  FieldPtr F = FiniteField::make(pp->first, pp->second);
  Rng rng(seed);
  SparsifierStats st;
  st.trials = trials;
  st.expected_rate = Rat(1, ipow(Int(q), h));
  // Fixed pair of linearly independent vectors: e1 and e2. H v depends on
  // one column each, but the full matrix is drawn to exercise the same
  // sampling path as the pipelines.
  for (std::uint64_t t = 0; t < trials; ++t) {
    bool v_zero = true, w_zero = true;
    for (u64 row = 0; row < h; ++row) {
      u64 hv = 0, hw = 0;
      for (std::size_t col = 0; col < length; ++col) {
        u64 entry = rng.uniform(F->order());
        if (col == 0) hv = entry;
        if (col == 1) hw = entry;
      }
      if (hv != 0) v_zero = false;
      if (hw != 0) w_zero = false;
    }
    if (v_zero) ++st.survived;
    if (w_zero) ++st.survived_second;
    if (v_zero && w_zero) ++st.survived_joint;
  }
  st.within_4_sigma = within_band(st.survived, trials, st.expected_rate) &&
                      within_band(st.survived_second, trials, st.expected_rate);
  st.joint_within_4_sigma =
      within_band(st.survived_joint, trials, st.expected_rate * st.expected_rate);
  return st;
}

SparsifierStats lattice_sparsifier_stats(u64 rho, std::size_t length, std::uint64_t trials,
                                         u64 seed) {
  if (!is_prime_u64(rho)) throw std::invalid_argument("lattice_sparsifier_stats: rho must be prime");
  if (length < 2) throw std::invalid_argument("lattice_sparsifier_stats: length must be >= 2");
  Rng rng(seed);
  SparsifierStats st;
  st.trials = trials;
  st.expected_rate = Rat(1, rho);
  for (std::uint64_t t = 0; t < trials; ++t) {
    u64 v0 = 0, v1 = 0;
    for (std::size_t i = 0; i < length; ++i) {
      u64 entry = rng.uniform(rho);
      if (i == 0) v0 = entry;
      if (i == 1) v1 = entry;
    }
    if (v0 == 0) ++st.survived;        // <v, e1> = 0 mod rho
    if (v1 == 0) ++st.survived_second; // <v, e2> = 0 mod rho
    if (v0 == 0 && v1 == 0) ++st.survived_joint;
  }
  st.within_4_sigma = within_band(st.survived, trials, st.expected_rate) &&
                      within_band(st.survived_second, trials, st.expected_rate);
  st.joint_within_4_sigma =
      within_band(st.survived_joint, trials, st.expected_rate * st.expected_rate);
  return st;
}

bool sublattice_trichotomy(const IntegerLattice& lat, u64 d, const NormSpec& p, std::uint32_t c,
                           const Int& max_index) {
  if (!p.is_integral()) throw std::invalid_argument("sublattice_trichotomy: p must be integral");
  const std::uint32_t pi = p.num;
  const Int dp = ipow(Int(d), pi);
  bool all_ok = true;
  enumerate_sublattices(lat, max_index, [&](const IntegerLattice& sub) {
    // Nonzero rows of any basis = support of the sublattice; the canonical
    // basis suffices.
    Int supp = 0;
    bool even = true;
    for (std::size_t i = 0; i < sub.ambient_dim(); ++i) {
      bool nz = false;
      for (std::size_t j = 0; j < sub.rank(); ++j) {
        const Int& v = sub.basis().at(i, j);
        if (v != 0) nz = true;
        if (v % 2 != 0) even = false;
      }
      if (nz) ++supp;
    }
    bool c1 = supp > dp;
    bool c2 = even && supp * ipow(Int(2), pi) > dp;
    Int det_sq = sub.gram_det();
    // det > d^{r(c+p/2)}  <=>  det^2 > d^{r(2c+p)}
    bool c3 = supp * ipow(Int(2), pi) <= dp &&
              det_sq > ipow(Int(d), sub.rank() * (2ull * c + pi));
    if (!(c1 || c2 || c3)) {
      all_ok = false;
      return false;
    }
    return true;
  });
  return all_ok;
}

}  // namespace gforge
