#include "gadgetforge/reductions.hpp"

#include <sstream>

namespace gforge {

std::string to_string(Label l) {
  switch (l) {
    case Label::Yes: return "YES";
    case Label::No: return "NO";
    case Label::Unknown: return "UNKNOWN";
  }
  return "?";
}

Label label_from_string(const std::string& s) {
  if (s == "YES") return Label::Yes;
  if (s == "NO") return Label::No;
  if (s == "UNKNOWN") return Label::Unknown;
  throw std::invalid_argument("bad label: " + s);
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

// Smallest j >= 0 with q^j >= m^d, i.e. ceil(d log_q m).
u64 ceil_d_log_q(u64 q, u64 m, u64 d) {
  Int target = ipow(Int(m), d);
  Int pw = 1;
  u64 j = 0;
  while (pw < target) {
    pw *= q;
    ++j;
  }
  return j;
}

FqMat uniform_matrix(const FieldPtr& f, std::size_t rows, std::size_t cols, Rng& rng) {
  FqMat h(f, rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) h.at(r, c) = rng.uniform(f->order());
  return h;
}

}  // namespace

LinearCode sparsify_code(const LinearCode& c, u64 h, Rng& rng) {
  if (h == 0) return c;  // no constraint
  FqMat parity = uniform_matrix(c.field(), static_cast<std::size_t>(h), c.block_length(), rng);
  return intersect_codes(c, LinearCode::from_parity(parity));
}

NcpToMdpResult ncp_to_mdp(const NcpInstance& inst, const LocallyDenseCode& gadget,
                          const Rat& gamma_prime, u64 seed, const NcpToMdpOptions& opt) {
  const FieldPtr& F = inst.code.field();
  if (!F->same(*gadget.code.field()))
    throw std::invalid_argument("ncp_to_mdp: instance and gadget fields differ");
  const std::size_t m = inst.code.block_length();
  const std::size_t n = inst.code.dimension();
  const std::size_t mp = gadget.code.block_length();
  const std::size_t np = gadget.code.dimension();
  if (inst.target.size() != m) throw std::invalid_argument("ncp_to_mdp: bad target length");

  // Parameter gates: d = gamma k, alpha d integral, gamma' <= gamma/(1+alpha gamma).
  if (Rat(gadget.d) != inst.gamma * inst.k)
    throw std::invalid_argument("ncp_to_mdp: gadget distance bound d != gamma * k");
  Rat alpha_d = gadget.alpha * Rat(gadget.d);
  if (denominator(alpha_d) != 1)
    throw std::invalid_argument("ncp_to_mdp: alpha * d must be integral");
  const u64 ad = numerator(alpha_d).convert_to<u64>();
  if (gamma_prime > inst.gamma / (1 + gadget.alpha * inst.gamma))
    throw std::invalid_argument("ncp_to_mdp: gamma' exceeds gamma / (1 + alpha gamma)");

  // Intermediate generator [G 0 -t; 0 A -s].
  FqMat gi(F, m + mp, n + np + 1);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < n; ++c) gi.at(r, c) = inst.code.generator().at(r, c);
    gi.at(r, n + np) = F->neg(inst.target[r]);
  }
  for (std::size_t r = 0; r < mp; ++r) {
    for (std::size_t c = 0; c < np; ++c) gi.at(m + r, n + c) = gadget.code.generator().at(r, c);
    gi.at(m + r, n + np) = F->neg(gadget.target[r]);
  }
  LinearCode c_int = LinearCode::from_generator(std::move(gi));

  // Sparsifier codimension ceil(7 + d (1 + log_q m)).
  u64 h = 7 + gadget.d + ceil_d_log_q(F->order(), m, gadget.d);
  if (opt.h_override) h = *opt.h_override;

  Rng rng(seed);
  Rng hrng = rng.child("ncp2mdp-H");
  FqMat sparsifier = uniform_matrix(F, static_cast<std::size_t>(h), m + mp, hrng);
  LinearCode c_final = h == 0 ? c_int : intersect_codes(c_int, LinearCode::from_parity(sparsifier));

  NcpToMdpResult out;
  out.intermediate = c_int;
  out.n_code = n;
  out.n_gadget = np;
  out.h = h;
  out.sparsifier = sparsifier;

  out.instance.code = c_final;
  out.instance.k = inst.k + ad;
  out.instance.gamma = gamma_prime;
  out.instance.label = inst.label;

  std::ostringstream notes;
  if (c_final.dimension() == 0) notes << "rank collapse: final code is the zero code; ";

  // Witness propagation: combine the instance witness with any gadget vector
  // inside the density ball, then check sparsifier survival.
  if (inst.witness) {
    std::optional<std::vector<u64>> y;
    double cost = 1;
    bool enumerable = true;
    for (std::size_t i = 0; i < np; ++i) {
      cost *= static_cast<double>(F->order());
      if (cost > 1u << 22) {
        enumerable = false;
        break;
      }
    }
    if (enumerable) {
      std::vector<u64> msg(np, 0);
      for (;;) {
        std::vector<u64> word = gadget.code.encode(msg);
        u64 wt = 0;
        for (std::size_t i = 0; i < mp; ++i)
          if (word[i] != gadget.target[i]) ++wt;
        if (wt <= ad) {
          y = msg;
          break;
        }
        std::size_t pos = 0;
        while (pos < np && msg[pos] + 1 == F->order()) {
          msg[pos] = 0;
          ++pos;
        }
        if (pos == np) break;
        ++msg[pos];
      }
    }
    if (y) {
      std::vector<u64> z(n + np + 1, 0);
      for (std::size_t i = 0; i < n; ++i) z[i] = (*inst.witness)[i];
      for (std::size_t i = 0; i < np; ++i) z[n + i] = (*y)[i];
      z[n + np] = 1;
      std::vector<u64> v = c_int.encode(z);
      out.combined_witness_vector = v;
      if (c_final.contains(v)) {
        out.witness_survived = true;
        out.instance.witness = c_final.coefficients_of(v);
      } else {
        notes << "constructed witness killed by sparsifier; ";
      }
    } else {
      notes << "no gadget vector found inside the density ball; ";
    }
  }

  out.report.pipeline = "ncp-to-mdp";
  out.report.seed = seed;
  {
    std::ostringstream params;
    params << "{\"h\":" << h << ",\"k_prime\":" << out.instance.k << ",\"alpha_d\":" << ad
           << ",\"gamma_prime\":\"" << gamma_prime << "\"}";
    out.report.params_json = params.str();
  }
  out.report.notes = notes.str();
  return out;
}

IntegerLattice sparsify_lattice(const IntegerLattice& lat, const Int& rho,
                                const std::vector<Int>& v) {
  if (v.size() != lat.ambient_dim()) throw std::invalid_argument("sparsify_lattice: bad v length");
  if (rho <= 1) throw std::invalid_argument("sparsify_lattice: rho must be a prime > 1");
  // Condition <v, Bx> = 0 mod rho on the coefficient vector x: one parity
  // check u = B^T v mod rho, lifted by Construction A in coefficient space.
  const std::size_t r = lat.rank();
  std::vector<Int> u(r, 0);
  for (std::size_t j = 0; j < r; ++j) {
    Int acc = 0;
    for (std::size_t i = 0; i < lat.ambient_dim(); ++i) acc += lat.basis().at(i, j) * v[i];
    acc %= rho;
    if (acc < 0) acc += rho;
    u[j] = acc;
  }
  bool all_zero = true;
  for (const Int& x : u)
    if (x != 0) {
      all_zero = false;
      break;
    }
  if (all_zero) return lat;  // constraint vacuous (index 1)
  // Coefficient sublattice {x : <u, x> = 0 mod rho} = ker(u^T) + rho Z^r.
  if (rho > Int(std::numeric_limits<u64>::max() >> 2))
    throw std::invalid_argument("sparsify_lattice: rho too large for field arithmetic");
  const u64 rho64 = rho.convert_to<u64>();
  FieldPtr F = FiniteField::make(rho64, 1);
  FqMat parity(F, 1, r);
  for (std::size_t j = 0; j < r; ++j) parity.at(0, j) = u[j].convert_to<u64>();
  IntegerLattice coeff = construction_a(LinearCode::from_parity(parity), rho64);
  // New basis: B * M.
  return IntegerLattice::from_basis(lat.basis().mul(coeff.basis()));
}

namespace {

struct PrimeDraw {
  Int rho;
  std::string method;
};

// A prime in (lo, hi]: up to 64 uniform draws, then a forward scan from the
// last draw. The scan keeps the step deterministic per seed instead of
// resampling forever.
PrimeDraw sample_prime_in(const Int& lo, const Int& hi, Rng& rng) {
  if (hi <= lo) throw std::invalid_argument("sample_prime_in: empty interval");
  if (hi > Int(1) << 62)
    throw BudgetExceeded("sample_prime_in: interval exceeds 64-bit primality range");
  const u64 lo64 = lo.convert_to<u64>(), hi64 = hi.convert_to<u64>();
  u64 last = lo64 + 1;
  for (int t = 0; t < 64; ++t) {
    u64 cand = lo64 + 1 + rng.uniform(hi64 - lo64);
    last = cand;
    if (is_prime_u64(cand)) return {Int(cand), "uniform"};
  }
  u64 scan = next_prime_u64(last);
  if (scan <= hi64) return {Int(scan), "scan"};
  scan = next_prime_u64(lo64);
  if (scan <= hi64) return {Int(scan), "scan"};
  throw std::runtime_error("sample_prime_in: no prime found in interval");
}

std::vector<Int> uniform_mod_vector(std::size_t len, const Int& rho, Rng& rng) {
  std::vector<Int> v(len);
  for (std::size_t i = 0; i < len; ++i) v[i] = rng.uniform_big(rho);
  return v;
}

// lambda_final = {w in L : <v, w> = 0 mod rho}, via the dual-intersection
// route when L is square full-rank, coefficient-space otherwise.
IntegerLattice mod_constraint_sublattice(const IntegerLattice& lat, const Int& rho,
                                         const std::vector<Int>& v, std::string* route) {
  if (lat.rank() == lat.ambient_dim() && rho <= Int(1) << 30) {
    const u64 rho64 = rho.convert_to<u64>();
    FieldPtr F = FiniteField::make(rho64, 1);
    FqMat parity(F, 1, lat.ambient_dim());
    bool all_zero = true;
    for (std::size_t i = 0; i < lat.ambient_dim(); ++i) {
      Int r = v[i] % rho;
      if (r < 0) r += rho;
      parity.at(0, i) = r.convert_to<u64>();
      if (parity.at(0, i) != 0) all_zero = false;
    }
    if (all_zero) {
      *route = "identity";
      return lat;
    }
    IntegerLattice hyper = construction_a(LinearCode::from_parity(parity), rho64);
    *route = "dual-intersection";
    return intersect_lattices(lat, hyper);
  }
  *route = "coefficient-space";
  return sparsify_lattice(lat, rho, v);
}

}  // namespace

CvpToSvpResult cvp_to_svp(const CvpInstance& inst, const LocallyDenseLattice& gadget,
                          const Rat& gamma_prime, u64 seed, const CvpToSvpOptions& opt) {
  if (!inst.p.is_integral())
    throw std::invalid_argument("cvp_to_svp: p must be integral for exact gate arithmetic");
  if (!(inst.p == gadget.p)) throw std::invalid_argument("cvp_to_svp: gadget norm differs");
  const std::uint32_t pi = inst.p.num;
  const std::size_t m = inst.lattice.ambient_dim();
  const std::size_t n = inst.lattice.rank();
  const std::size_t mp = gadget.lattice.ambient_dim();
  const std::size_t np = gadget.lattice.rank();
  if (inst.target.size() != m) throw std::invalid_argument("cvp_to_svp: bad target length");

  if (Rat(gadget.d) != inst.gamma * inst.k)
    throw std::invalid_argument("cvp_to_svp: gadget distance bound d != gamma * k");
  // alpha <= ((gamma/gamma')^p - 2)^{1/p} / gamma, on p-th powers:
  // alpha^p gamma^p + 2 <= (gamma/gamma')^p.
  Rat gamma_pow = rat_pow_u(inst.gamma, pi);
  Rat ratio_pow = rat_pow_u(inst.gamma / gamma_prime, pi);
  if (gadget.alpha_pow_p * gamma_pow + 2 > ratio_pow)
    throw std::invalid_argument("cvp_to_svp: relative radius violates the alpha gate");
  // k' = gamma k / gamma' must be integral (callers pick compatible factors).
  Rat kp = inst.gamma * Rat(inst.k) / gamma_prime;
  if (denominator(kp) != 1)
    throw std::invalid_argument("cvp_to_svp: gamma k / gamma' is not an integer");

  // Intermediate basis [B 0 -t; 0 A -s; 0 0 1].
  ZMat bi(m + mp + 1, n + np + 1);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < n; ++c) bi.at(r, c) = inst.lattice.basis().at(r, c);
    bi.at(r, n + np) = -inst.target[r];
  }
  for (std::size_t r = 0; r < mp; ++r) {
    for (std::size_t c = 0; c < np; ++c) bi.at(m + r, n + c) = gadget.lattice.basis().at(r, c);
    bi.at(m + r, n + np) = -gadget.target[r];
  }
  bi.at(m + mp, n + np) = 1;
  IntegerLattice l_int = IntegerLattice::from_basis(bi);
  if (l_int.rank() != n + np + 1)
    throw std::logic_error("cvp_to_svp: intermediate basis lost rank");

  // rho from the paper interval (100 N', 200 N'], N' = (2m(1+gamma k))^{(gamma k)^p}.
  Rng rng(seed);
  Int rho;
  std::string rho_method;
  {
    Rat gk = inst.gamma * Rat(inst.k);
    if (denominator(gk) != 1) throw std::invalid_argument("cvp_to_svp: gamma k not integral");
    Int gki = numerator(gk);
    Int annoying_bound = ipow(Int(2) * m * (1 + gki), ipow(gki, pi).convert_to<std::uint64_t>());
    if (opt.rho_override) {
      rho = *opt.rho_override;
      if (rho > (Int(1) << 62) || !is_prime_u64(rho.convert_to<u64>()))
        throw std::invalid_argument("cvp_to_svp: rho override must be a prime below 2^62");
      rho_method = "override";
    } else {
      Rng prng = rng.child("cvp2svp-rho");
      PrimeDraw draw = sample_prime_in(100 * annoying_bound, 200 * annoying_bound, prng);
      rho = draw.rho;
      rho_method = draw.method;
    }
  }

  Rng vrng = rng.child("cvp2svp-v");
  std::vector<Int> v = uniform_mod_vector(m + mp + 1, rho, vrng);
  std::string route;
  IntegerLattice l_final = mod_constraint_sublattice(l_int, rho, v, &route);

  CvpToSvpResult out;
  out.intermediate = l_int;
  out.n_code = n;
  out.n_gadget = np;
  out.rho = rho;
  out.constraint = v;

  out.instance.lattice = l_final;
  out.instance.p = inst.p;
  out.instance.threshold_pow_p = rat_pow_u(kp, pi);
  out.instance.gamma = gamma_prime;
  out.instance.label = inst.label;

  std::ostringstream notes;
  notes << "rho-method=" << rho_method << "; sublattice-route=" << route << "; ";

  // Witness propagation.
  if (inst.witness) {
    Rat radius = gadget.alpha_pow_p * Rat(ipow(Int(gadget.d), pi));
    std::optional<std::vector<Int>> ycoeffs;
    try {
      EnumOptions eopt;
      eopt.max_nodes = 1u << 22;
      enumerate_lattice_points(gadget.lattice, &gadget.target, gadget.p, radius, eopt,
                               [&](const EnumPoint& pt) {
                                 ycoeffs = pt.coeffs;
                                 return false;
                               });
    } catch (const BudgetExceeded&) {
      notes << "witness search hit enumeration budget; ";
    }
    if (ycoeffs) {
      std::vector<Int> z(n + np + 1, 0);
      for (std::size_t i = 0; i < n; ++i) z[i] = (*inst.witness)[i];
      for (std::size_t i = 0; i < np; ++i) z[n + i] = (*ycoeffs)[i];
      z[n + np] = 1;
      std::vector<Int> w = bi.mul_vec(z);
      Int dot = 0;
      for (std::size_t i = 0; i < w.size(); ++i) dot += v[i] * w[i];
      if (dot % rho == 0) {
        out.witness_survived = true;
        out.instance.witness = l_final.coefficients_of(w);
      } else {
        notes << "constructed witness killed by sparsifier; ";
      }
      out.combined_witness_vector = w;
    } else {
      notes << "no gadget vector found inside the density ball; ";
    }
  }

  out.report.pipeline = "cvp-to-svp";
  out.report.seed = seed;
  {
    std::ostringstream params;
    params << "{\"rho\":\"" << rho << "\",\"k_prime\":\"" << kp << "\",\"gamma_prime\":\""
           << gamma_prime << "\"}";
    out.report.params_json = params.str();
  }
  out.report.notes = notes.str();
  return out;
}

Int ncp2_threshold_pow(const NormSpec& p, u64 k, const Rat& alpha, u64 d) {
  if (!p.is_integral()) throw std::invalid_argument("ncp2_threshold_pow: p must be integral");
  Rat ad = alpha * Rat(d);
  if (denominator(ad) != 1)
    throw std::invalid_argument("ncp2_threshold_pow: alpha d must be integral");
  return ipow(Int(2), p.num) * k + numerator(ad) + 1;
}

Ncp2ToSvpResult ncp2_to_svp_tensorable(const NcpInstance& inst, const NormSpec& p,
                                       const Rat& alpha, const Rat& gamma_prime, std::uint32_t c,
                                       u64 seed, const Ncp2ToSvpOptions& opt) {
  const FieldPtr& F = inst.code.field();
  if (F->order() != 2) throw std::invalid_argument("ncp2_to_svp: instance must be over F_2");
  if (!p.is_integral() || p.num < 2)
    throw std::invalid_argument("ncp2_to_svp: p must be an integer >= 2 for exact thresholds");
  const std::uint32_t pi = p.num;
  if (denominator(inst.gamma) != 1)
    throw std::invalid_argument("ncp2_to_svp: gamma must be an even integer");
  Int gamma_i = numerator(inst.gamma);
  if (gamma_i < 2 || gamma_i % 2 != 0)
    throw std::invalid_argument("ncp2_to_svp: gamma must be an even integer >= 2");
  const u64 gamma = gamma_i.convert_to<u64>();
  const u64 d = gamma * inst.k;
  // alpha in (1/2 + 2^{-p}, 1), alpha d integral.
  Rat lower = Rat(1, 2) + Rat(1, ipow(Int(2), pi));
  if (!(alpha > lower && alpha < 1))
    throw std::invalid_argument("ncp2_to_svp: alpha outside (1/2 + 2^{-p}, 1)");
  Rat ad_rat = alpha * Rat(d);
  if (denominator(ad_rat) != 1)
    throw std::invalid_argument("ncp2_to_svp: alpha d must be integral");
  const u64 ad = numerator(ad_rat).convert_to<u64>();
  // gamma'^p < gamma / (2^p + 1 + alpha gamma)
  Rat gp_pow = rat_pow_u(gamma_prime, pi);
  Rat gate = Rat(gamma) / (Rat(ipow(Int(2), pi)) + 1 + alpha * Rat(gamma));
  if (!(gp_pow < gate))
    throw std::invalid_argument("ncp2_to_svp: gamma'^p violates the tensoring gate");

  const std::size_t m = inst.code.block_length();
  if (inst.target.size() != m) throw std::invalid_argument("ncp2_to_svp: bad target length");

  // m' = smallest 2^r - 1 above max(m+1, (1e8 d^{12c})^{1/(alpha - 1/2 - 2^{-p})}).
  Rat expo = 1 / (alpha - lower);
  Int paper_threshold = -1;  // -1: too large to materialize
  {
    Int base = Int(100000000) * ipow(Int(d), 12ull * c);
    Rat e = expo;
    Int e_ceil = numerator(e) / denominator(e) + 1;
    if (e_ceil * Int(msb(base) + 1) <= 20000)
      paper_threshold = ipow(base, e_ceil.convert_to<std::uint64_t>());  // upper proxy, recorded
  }
  unsigned r = 0;
  if (opt.r_override) {
    r = *opt.r_override;
  } else {
    if (paper_threshold < 0 || paper_threshold > 4096)
      throw BudgetExceeded(
          "ncp2_to_svp: paper-scale m' cannot be materialized; pass an r override");
    Int need = std::max(Int(m + 1), paper_threshold);
    r = 1;
    while ((Int(1) << r) - 1 <= need) ++r;
  }
  const u64 m_prime = (u64(1) << r) - 1;
  if (m_prime < d + 2)
    throw std::invalid_argument("ncp2_to_svp: 2^r - 1 must be at least d + 2");
  if (ad > m_prime) throw std::invalid_argument("ncp2_to_svp: alpha d exceeds 2^r - 1");

  Rng rng(seed);
  BchLatticeGadget gadget = build_bch_construction_a(r, d, ad, rng.child("ncp2svp-bch").next_u64());

  IntegerLattice l_ncp = construction_a(inst.code, 2);

  // Intermediate basis [2 B_NCP 0 -2t; 0 B_BCH -s; 0 0 1].
  ZMat bi(m + m_prime + 1, m + m_prime + 1);
  for (std::size_t row = 0; row < m; ++row) {
    for (std::size_t col = 0; col < m; ++col) bi.at(row, col) = 2 * l_ncp.basis().at(row, col);
    bi.at(row, m + m_prime) = -2 * Int(inst.target[row]);
  }
  for (std::size_t row = 0; row < m_prime; ++row) {
    for (std::size_t col = 0; col < m_prime; ++col)
      bi.at(m + row, m + col) = gadget.lattice.basis().at(row, col);
    bi.at(m + row, m + m_prime) = -gadget.target[row];
  }
  bi.at(m + m_prime, m + m_prime) = 1;
  IntegerLattice l_int = IntegerLattice::from_basis(bi);

  // Declared density N = C(m', alpha d) / (100 (m'+1)^{d/2}) and the rho
  // interval (N/100, N/50]. Desk-scale N is usually tiny: an override is then
  // required and recorded.
  Rat declared_n = Rat(binomial(m_prime, static_cast<std::size_t>(ad)),
                       100 * ipow(Int(m_prime + 1), (d + 1) / 2));
  Int rho;
  std::string rho_method;
  if (opt.rho_override) {
    rho = *opt.rho_override;
    if (rho > (Int(1) << 62) || !is_prime_u64(rho.convert_to<u64>()))
      throw std::invalid_argument("ncp2_to_svp: rho override must be a prime below 2^62");
    rho_method = "override";
  } else {
    Rat lo = declared_n / 100, hi = declared_n / 50;
    Int lo_i = numerator(lo) / denominator(lo);
    Int hi_i = numerator(hi) / denominator(hi);
    if (hi_i - lo_i < 16)
      throw BudgetExceeded(
          "ncp2_to_svp: declared density too small for the rho interval at this scale; "
          "pass a rho override");
    Rng prng = rng.child("ncp2svp-rho");
    PrimeDraw draw = sample_prime_in(lo_i, hi_i, prng);
    rho = draw.rho;
    rho_method = draw.method;
  }

  Rng vrng = rng.child("ncp2svp-v");
  std::vector<Int> v = uniform_mod_vector(m + m_prime + 1, rho, vrng);
  std::string route;
  IntegerLattice l_final = mod_constraint_sublattice(l_int, rho, v, &route);

  Ncp2ToSvpResult out;
  out.intermediate = l_int;
  out.d = d;
  out.alpha_d = ad;
  out.rho = rho;
  out.m_code = m;
  out.m_gadget = m_prime;

  out.instance.lattice = l_final;
  out.instance.p = p;
  out.instance.threshold_pow_p = Rat(ncp2_threshold_pow(p, inst.k, alpha, d));
  out.instance.gamma = gamma_prime;
  out.instance.label = inst.label;

  std::ostringstream notes;
  notes << "rho-method=" << rho_method << "; sublattice-route=" << route
        << "; declared-N=" << declared_n << "; ";

  if (inst.witness) {
    // Lift the close codeword into the lattice and pair it with a gadget
    // vector inside the alpha d ball.
    std::vector<u64> cw = inst.code.encode(*inst.witness);
    std::vector<Int> clift(cw.begin(), cw.end());
    auto xcoeffs = l_ncp.coefficients_of(clift);
    std::optional<std::vector<Int>> ycoeffs;
    try {
      EnumOptions eopt;
      eopt.max_nodes = 1u << 24;
      enumerate_lattice_points(gadget.lattice, &gadget.target, p, Rat(ad), eopt,
                               [&](const EnumPoint& pt) {
                                 ycoeffs = pt.coeffs;
                                 return false;
                               });
    } catch (const BudgetExceeded&) {
      notes << "witness search hit enumeration budget; ";
    }
    if (xcoeffs && ycoeffs) {
      std::vector<Int> z(m + m_prime + 1, 0);
      for (std::size_t i = 0; i < m; ++i) z[i] = (*xcoeffs)[i];
      for (std::size_t i = 0; i < m_prime; ++i) z[m + i] = (*ycoeffs)[i];
      z[m + m_prime] = 1;
      std::vector<Int> w = bi.mul_vec(z);
      Int dot = 0;
      for (std::size_t i = 0; i < w.size(); ++i) dot += v[i] * w[i];
      if (dot % rho == 0) {
        out.witness_survived = true;
        out.instance.witness = l_final.coefficients_of(w);
      } else {
        notes << "constructed witness killed by sparsifier; ";
      }
      out.combined_witness_vector = w;
    }
  }

  out.report.pipeline = "ncp2-to-svp";
  out.report.seed = seed;
  {
    std::ostringstream params;
    params << "{\"r\":" << r << ",\"d\":" << d << ",\"alpha_d\":" << ad << ",\"rho\":\"" << rho
           << "\",\"threshold_pow_p\":\"" << out.instance.threshold_pow_p << "\",\"c\":" << c
           << "}";
    out.report.params_json = params.str();
  }
  out.report.notes = notes.str();
  return out;
}

MdpInstance tensor_boost_mdp(const MdpInstance& inst, std::uint32_t c, std::uint64_t cell_budget) {
  if (c < 1) throw std::invalid_argument("tensor_boost_mdp: c must be >= 1");
  if (c == 1) return inst;
  double cells = 1;
  for (std::uint32_t i = 0; i < c; ++i)
    cells *= static_cast<double>(inst.code.block_length()) *
             std::max<std::size_t>(inst.code.dimension(), 1);
  if (cells > static_cast<double>(cell_budget))
    throw BudgetExceeded("tensor_boost_mdp: output size exceeds budget");

  MdpInstance out;
  LinearCode acc = inst.code;
  for (std::uint32_t i = 1; i < c; ++i) acc = tensor_codes(acc, inst.code);
  out.code = acc;
  Int kc = ipow(Int(inst.k), c);
  out.k = kc.convert_to<u64>();
  out.gamma = rat_pow_u(inst.gamma, c);
  out.label = inst.label;
  if (inst.witness) {
    // Kronecker power of the witness coefficients.
    std::vector<u64> w = *inst.witness;
    const FiniteField& F = *inst.code.field();
    std::vector<u64> accw = w;
    for (std::uint32_t i = 1; i < c; ++i) {
      std::vector<u64> next(accw.size() * w.size());
      for (std::size_t a = 0; a < accw.size(); ++a)
        for (std::size_t b = 0; b < w.size(); ++b) next[a * w.size() + b] = F.mul(accw[a], w[b]);
      accw = std::move(next);
    }
    out.witness = accw;
  }
  return out;
}

SvpInstance tensor_boost_svp(const SvpInstance& inst, std::uint32_t c, std::uint64_t cell_budget) {
  if (c < 1) throw std::invalid_argument("tensor_boost_svp: c must be >= 1");
  if (c == 1) return inst;
  if (!inst.certificate || inst.certificate->c < c)
    throw std::invalid_argument(
        "tensor_boost_svp: refusing to tensor without a Haviv-Regev certificate for this exponent");
  double cells = 1;
  for (std::uint32_t i = 0; i < c; ++i)
    cells *= static_cast<double>(inst.lattice.ambient_dim()) * inst.lattice.rank();
  if (cells > static_cast<double>(cell_budget))
    throw BudgetExceeded("tensor_boost_svp: output size exceeds budget");

  SvpInstance out;
  IntegerLattice acc = inst.lattice;
  for (std::uint32_t i = 1; i < c; ++i) acc = tensor_lattices(acc, inst.lattice);
  out.lattice = acc;
  out.p = inst.p;
  out.threshold_pow_p = rat_pow_u(inst.threshold_pow_p, c);
  out.gamma = rat_pow_u(inst.gamma, c);
  out.label = inst.label;
  // The certificate covers the base instance; the tensor power would need a
  // fresh one.
  return out;
}

}  // namespace gforge
