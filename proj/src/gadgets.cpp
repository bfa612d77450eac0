#include "gadgetforge/gadgets.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace gforge {

u64 BchSpec::block_length() const {
  u64 m = 1;
  for (unsigned i = 0; i < r; ++i) {
    if (m > (~u64{0}) / q) throw std::invalid_argument("BchSpec: q^r overflows");
    m *= q;
  }
  return m - 1;
}

std::string to_string(GadgetStatus s) {
  switch (s) {
    case GadgetStatus::Unverified: return "UNVERIFIED";
    case GadgetStatus::StructuralOk: return "STRUCTURAL_OK";
    case GadgetStatus::DensityEstimated: return "DENSITY_ESTIMATED";
  }
  return "?";
}

namespace {

// Invert a square matrix over F_p (small); throws if singular.
FqMat fq_inverse(const FqMat& m) {
  const std::size_t n = m.rows();
  FqMat aug(m.field(), n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, n + i) = 1;
  }
  if (fq_row_reduce(aug, true) != n) throw std::invalid_argument("fq_inverse: singular");
  FqMat inv(m.field(), n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv.at(i, j) = aug.at(i, n + j);
  return inv;
}

}  // namespace

BchResult build_bch(const BchSpec& spec) {
  auto pp = prime_power_decompose(spec.q);
  if (!pp) throw std::invalid_argument("build_bch: q must be a prime power");
  const u64 p = pp->first;
  const unsigned e = pp->second;
  const u64 m_len = spec.block_length();
  const u64 d = spec.design_distance;
  if (d < 1 || d > m_len) throw std::invalid_argument("build_bch: need 1 <= d <= q^r - 1");

  FieldPtr F = FiniteField::make(p, e);
  FieldPtr E = FiniteField::make(p, e * spec.r);
  SubfieldEmbedding emb = SubfieldEmbedding::compute(F, E);
  const u64 alpha = E->primitive_element();

  // Coordinates of F_{q^r} over F_q: invert the F_p-linear map sending the
  // (l, j) unit to xi^j * alpha^l, xi the image of the F_q generator.
  const unsigned er = e * spec.r;
  FieldPtr Fp = FiniteField::make(p, 1);
  FqMat basis_map(Fp, er, er);
  for (unsigned l = 0; l < spec.r; ++l) {
    u64 alpha_l = E->pow(alpha, l);
    for (unsigned j = 0; j < e; ++j) {
      u64 xi_j = E->pow(emb.generator_image(), j);
      u64 val = E->mul(xi_j, alpha_l);
      std::vector<u64> digits = E->to_coeffs(val);
      for (unsigned row = 0; row < er; ++row) basis_map.at(row, l * e + j) = digits[row];
    }
  }
  FqMat decomp = fq_inverse(basis_map);

  // alpha^t for t in [0, m_len) and their F_q coordinates over the basis.
  std::vector<std::vector<u64>> coords(m_len, std::vector<u64>(spec.r, 0));
  {
    u64 pw = 1;
    for (u64 t = 0; t < m_len; ++t) {
      std::vector<u64> digits = E->to_coeffs(pw);
      std::vector<u64> v = decomp.mul_vec(digits);
      for (unsigned l = 0; l < spec.r; ++l) {
        std::vector<u64> fq_digits(v.begin() + l * e, v.begin() + (l + 1) * e);
        coords[t][l] = F->from_coeffs(fq_digits);
      }
      pw = E->mul(pw, alpha);
    }
  }

  // Frobenius closure: one locator constraint per q-cyclotomic coset of
  // {1, ..., d-1} mod m_len.
  std::set<u64> reps;
  for (u64 i = 1; i < d; ++i) {
    u64 mn = i, t = i;
    do {
      t = static_cast<u64>((unsigned __int128)(t)*spec.q % m_len);
      mn = std::min(mn, t);
    } while (t != i);
    reps.insert(mn);
  }

  FqMat parity(F, reps.size() * spec.r, m_len);
  std::size_t row = 0;
  for (u64 i : reps) {
    for (unsigned l = 0; l < spec.r; ++l, ++row) {
      for (u64 j = 0; j < m_len; ++j) {
        u64 t = static_cast<u64>((unsigned __int128)(i)*j % m_len);
        parity.at(row, j) = coords[t][l];
      }
    }
  }

  BchResult out{LinearCode::from_parity(parity), 0, reps.size(), 0};
  out.codimension = m_len - out.code.dimension();
  // ceil((d-1)(1-1/q)) * r
  u64 num = (d - 1) * (spec.q - 1);
  out.codimension_bound = ((num + spec.q - 1) / spec.q) * spec.r;
  if (out.codimension > out.codimension_bound)
    throw std::logic_error("build_bch: measured codimension exceeds the closure bound");
  return out;
}

std::vector<u64> sample_binary_weight(std::size_t length, u64 weight, Rng& rng) {
  if (weight > length) throw std::invalid_argument("sample_binary_weight: weight > length");
  std::vector<std::size_t> idx(length);
  for (std::size_t i = 0; i < length; ++i) idx[i] = i;
  for (u64 i = 0; i < weight; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.uniform(length - i));
    std::swap(idx[i], idx[j]);
  }
  std::vector<u64> v(length, 0);
  for (u64 i = 0; i < weight; ++i) v[idx[i]] = 1;
  return v;
}

LocallyDenseCode sample_locally_dense_code(u64 q, u64 k, u64 m, u64 seed,
                                           std::optional<LdcOverride> scale_override) {
  Rng rng(seed);
  if (k < 1 || m < 1) throw std::invalid_argument("sample_locally_dense_code: need k, m >= 1");
  auto pp = prime_power_decompose(q);
  if (!pp) throw std::invalid_argument("sample_locally_dense_code: q must be a prime power");

  LocallyDenseCode g;
  g.q = q;
  g.k = k;
  g.m = m;
  g.d = 4 * q * k;
  g.alpha = Rat(2 * q - 1, 2 * q);
  const u64 alpha_d = (2 * q - 1) * 2 * k;  // alpha * d, integral by construction

  // Paper block length: smallest q^r - 1 >= (d q m)^{4q}.
  Int threshold = ipow(Int(g.d) * q * m, 4 * q);
  unsigned paper_r = 1;
  Int pw = q;
  while (pw - 1 < threshold) {
    pw *= q;
    ++paper_r;
  }
  g.paper_block_length = pw - 1;

  // Declared density (q m)^{2d} / 100; meaningful at paper scale only.
  g.declared_density = Rat(ipow(Int(q) * m, 2 * g.d), 100);

  unsigned r = paper_r;
  u64 m_prime = 0;
  if (scale_override) {
    m_prime = scale_override->block_length;
    u64 check = q;
    r = 1;
    while (check - 1 < m_prime) {
      check *= q;
      ++r;
    }
    if (check - 1 != m_prime)
      throw std::invalid_argument("sample_locally_dense_code: override length must be q^r - 1");
    g.override_block_length = m_prime;
  } else {
    if (g.paper_block_length > 4096) {
      std::ostringstream os;
      os << "sample_locally_dense_code: paper-scale block length " << g.paper_block_length
         << " cannot be materialized; pass a scale override";
      throw BudgetExceeded(os.str());
    }
    m_prime = static_cast<u64>(g.paper_block_length);
  }
  if (alpha_d > m_prime)
    throw std::invalid_argument("sample_locally_dense_code: target weight exceeds block length");
  if (g.d + 1 > m_prime)
    throw std::invalid_argument("sample_locally_dense_code: design distance exceeds block length");

  BchResult bch = build_bch({q, r, g.d + 1});
  g.code = bch.code;
  // Design distance d+1 implies lambda(C) > d.
  g.status = GadgetStatus::StructuralOk;
  g.seed = seed;
  Rng tgt = rng.child("ldc-target");
  g.target = sample_binary_weight(m_prime, alpha_d, tgt);
  return g;
}

namespace {

// Uniform point of B_{q,m}(radius): pick the weight layer proportionally,
// then support and values uniformly.
std::vector<u64> sample_ball_point(const FiniteField& F, std::size_t m, u64 radius, Rng& rng) {
  const u64 q = F.order();
  std::vector<Int> layer(radius + 1);
  Int total = 0;
  for (u64 w = 0; w <= radius && w <= m; ++w) {
    layer[w] = binomial(m, static_cast<std::size_t>(w)) * ipow(Int(q - 1), w);
    total += layer[w];
  }
  Int pick = rng.uniform_big(total);
  u64 w = 0;
  while (pick >= layer[w]) {
    pick -= layer[w];
    ++w;
  }
  std::vector<u64> v(m, 0);
  // support: w distinct positions
  std::vector<std::size_t> idx(m);
  for (std::size_t i = 0; i < m; ++i) idx[i] = i;
  for (u64 i = 0; i < w; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.uniform(m - i));
    std::swap(idx[i], idx[j]);
  }
  for (u64 i = 0; i < w; ++i) v[idx[i]] = 1 + rng.uniform(q - 1);
  return v;
}

void wilson_interval(std::uint64_t successes, std::uint64_t trials, Rat& lo, Rat& hi) {
  // 95% Wilson score interval with z^2 = 4 kept rational.
  const Rat z2 = 4;
  Rat n(trials), x(successes);
  Rat center = (x + z2 / 2) / (n + z2);
  // half-width^2 = z2 * (x(n-x)/n + z2/4) / (n+z2)^2 ; bound the square root
  Rat hw2 = z2 * (x * (n - x) / n + z2 / 4) / ((n + z2) * (n + z2));
  // rational sqrt upper bound
  Int num = numerator(hw2), den = denominator(hw2);
  Int scale = Int(1) << 32;
  Int root = floor_nth_root(num * scale * scale / den, 2) + 2;
  Rat hw(root, scale);
  lo = center - hw;
  hi = center + hw;
  if (lo < 0) lo = 0;
  if (hi > 1) hi = 1;
}

}  // namespace

DensityEstimate estimate_density(LocallyDenseCode& g, std::uint64_t budget, u64 seed) {
  Rng rng(seed);
  const FiniteField& F = *g.code.field();
  const std::size_t m = g.code.block_length();
  const Rat alpha_d_rat = g.alpha * Rat(g.d);
  if (denominator(alpha_d_rat) != 1) throw std::logic_error("estimate_density: alpha*d not integral");
  const u64 radius = numerator(alpha_d_rat).convert_to<u64>();

  HammingBall ball{g.code.field(), m, radius};
  DensityEstimate est;
  est.ball_size = ball.size();

  // Codeword-side exact count when the code is small.
  double msg_cost = 1;
  bool code_small = true;
  for (std::size_t i = 0; i < g.code.dimension(); ++i) {
    msg_cost *= static_cast<double>(F.order());
    if (msg_cost > static_cast<double>(budget)) {
      code_small = false;
      break;
    }
  }
  if (code_small) {
    est.exact = true;
    Int count = 0;
    std::vector<u64> msg(g.code.dimension(), 0);
    // plain odometer over all messages, including zero
    for (;;) {
      std::vector<u64> c = g.code.encode(msg);
      u64 wt = 0;
      for (std::size_t i = 0; i < m; ++i)
        if (c[i] != g.target[i]) ++wt;
      if (wt <= radius) ++count;
      std::size_t pos = 0;
      while (pos < msg.size() && msg[pos] + 1 == F.order()) {
        msg[pos] = 0;
        ++pos;
      }
      if (pos == msg.size()) break;
      ++msg[pos];
    }
    est.count = count;
  } else if (est.ball_size <= budget) {
    est.exact = true;
    Int count = 0;
    std::vector<u64> word(m);
    enumerate_ball(ball, budget, [&](const std::vector<u64>& v) {
      for (std::size_t i = 0; i < m; ++i) word[i] = F.add(v[i], g.target[i]);
      if (g.code.contains(word)) ++count;
      return true;
    });
    est.count = count;
  } else {
    const std::uint64_t trials = std::min<std::uint64_t>(budget, 100000);
    est.trials = trials;
    std::uint64_t hits = 0;
    Rng mc = rng.child("density-mc");
    std::vector<u64> word(m);
    for (std::uint64_t t = 0; t < trials; ++t) {
      std::vector<u64> v = sample_ball_point(F, m, radius, mc);
      for (std::size_t i = 0; i < m; ++i) word[i] = F.add(v[i], g.target[i]);
      if (g.code.contains(word)) ++hits;
    }
    est.count = hits;
    wilson_interval(hits, trials, est.rate_low, est.rate_high);
  }
  g.density = est;
  g.status = GadgetStatus::DensityEstimated;
  return est;
}

LinearCode build_rs_code(u64 q_prime, u64 ell) {
  if (!is_prime_u64(q_prime)) throw std::invalid_argument("build_rs_code: q must be prime");
  if (ell < 1 || ell > q_prime) throw std::invalid_argument("build_rs_code: need 1 <= ell <= q");
  FieldPtr F = FiniteField::make(q_prime, 1);
  FqMat g(F, q_prime, ell);
  for (u64 zeta = 0; zeta < q_prime; ++zeta) {
    u64 pw = 1;
    for (u64 j = 0; j < ell; ++j) {
      g.at(zeta, j) = pw;
      pw = F->mul(pw, zeta);
    }
  }
  return LinearCode::from_generator(std::move(g));
}

IntegerLattice build_rs_lattice(u64 q_prime, u64 ell) {
  return construction_a(build_rs_code(q_prime, ell), q_prime);
}

LocallyDenseLattice sample_rs_locally_dense_lattice(const NormSpec& p, const Rat& gamma_prime_pow_p,
                                                    u64 k, u64 m, u64 seed,
                                                    std::optional<RsLdlOverride> scale_override) {
  Rng rng(seed);
  if (!p.is_integral())
    throw std::invalid_argument("sample_rs_locally_dense_lattice: p must be integral for exact parameters");
  if (gamma_prime_pow_p < 1 || gamma_prime_pow_p >= 2)
    throw std::invalid_argument("sample_rs_locally_dense_lattice: gamma'^p must lie in [1, 2)");
  if (k < 1 || m < 1) throw std::invalid_argument("sample_rs_locally_dense_lattice: need k, m >= 1");
  const std::uint32_t pi = p.num;

  LocallyDenseLattice g;
  g.p = p;
  g.k = k;
  g.m = m;

  const Rat eps = 1 / gamma_prime_pow_p - Rat(1, 2);
  // gamma = ceil(max(12/eps, 1/((1+eps/2)^{1/p} - 1))): the second term's
  // ceiling is the least n with (1+1/n)^p <= 1 + eps/2.
  Rat twelve_over_eps = 12 / eps;
  Int g1 = numerator(twelve_over_eps) / denominator(twelve_over_eps);
  if (Rat(g1) < twelve_over_eps) g1 += 1;
  u64 g2 = 1;
  for (;; ++g2) {
    Rat base = 1 + Rat(1, g2);
    Rat pw = 1;
    for (std::uint32_t i = 0; i < pi; ++i) pw *= base;
    if (pw <= 1 + eps / 2) break;
    if (g2 > 100000000) throw std::logic_error("gamma search runaway");
  }
  u64 gamma = std::max(g1.convert_to<u64>(), g2);
  g.gamma = gamma;

  Int gk = Int(gamma) * k;
  Int ell_num = ipow(1 + gk, pi);
  Int ell_int = (ell_num + 1) / 2;  // ceil(x/2)
  Rat w_rat = (Rat(ipow(gk, pi)) / gamma_prime_pow_p) - 2 * Rat(ipow(Int(k), pi));
  Int w_int = numerator(w_rat) / denominator(w_rat);
  if (Rat(w_int) > w_rat) w_int -= 1;  // floor for positives; w_rat < 0 rejected below
  if (w_int <= 0)
    throw std::invalid_argument("sample_rs_locally_dense_lattice: target weight w is zero (degenerate)");

  // alpha^p = 1/gamma'^p - 2/gamma^p (paper-scale relative radius).
  g.alpha_pow_p = 1 / gamma_prime_pow_p - Rat(2, ipow(Int(gamma), pi));

  // Declared density (2m(1+gamma k))^{3 (gamma k)^p}; kept exact when it
  // fits, otherwise left at zero with the symbolic record below.
  {
    Int base_n = Int(2) * m * (1 + gk);
    Int expo = 3 * ipow(gk, pi);
    if (expo <= 100000 && msb(base_n) * expo.convert_to<std::uint64_t>() <= 200000)
      g.declared_density = Rat(ipow(base_n, expo.convert_to<std::uint64_t>()));
    else
      g.declared_density = 0;
  }

  // Paper prime threshold (300 w (gamma k)^p (2m(1+gamma k)))^{9/eps},
  // recorded symbolically; it is astronomically large for honest inputs.
  Int base = Int(300) * w_int * ipow(gk, pi) * (Int(2) * m * (1 + gk));
  {
    std::ostringstream os;
    os << base << "^(" << 9 * denominator(eps) << "/" << numerator(eps) << ")";
    g.paper_q_threshold = os.str();
  }

  u64 q = 0, ell = 0, w = 0, d = 0;
  if (scale_override) {
    q = scale_override->q;
    ell = scale_override->ell;
    w = scale_override->w;
    d = scale_override->d;
    if (!is_prime_u64(q)) throw std::invalid_argument("override q must be prime");
    if (ell < 1 || ell > q || w > q) throw std::invalid_argument("override (ell, w) out of range");
    if (d == 0) throw std::invalid_argument("override d must be positive");
    if (w == 0) throw std::invalid_argument("override target weight w is zero (degenerate)");
    if (Int(w) >= ipow(Int(d), pi))
      throw std::invalid_argument("override requires w < d^p so that alpha < 1");
    // Effective relative radius at this scale: alpha^p = w / d^p.
    g.alpha_pow_p = Rat(Int(w), ipow(Int(d), pi));
  } else {
    // Materializing the honest prime is hopeless for real inputs; the
    // threshold is recorded symbolically and the caller must override.
    Rat exp_rat = 9 / eps;
    Int exp_floor = numerator(exp_rat) / denominator(exp_rat);
    if (exp_floor > 64 ||
        msb(base) * (exp_floor.convert_to<std::uint64_t>() + 1) > 62)
      throw BudgetExceeded(
          "sample_rs_locally_dense_lattice: paper-scale prime exceeds " + g.paper_q_threshold +
          " and cannot be materialized; pass a scale override");
    // Tiny corner: threshold fits in 64 bits. ceil(base^{9/eps}) by root.
    Int pow_num = ipow(base, numerator(exp_rat).convert_to<std::uint64_t>());
    Int floor_root = floor_nth_root(pow_num, denominator(exp_rat).convert_to<std::uint32_t>());
    q = next_prime_u64(floor_root.convert_to<u64>() + 1);
    ell = ell_int.convert_to<u64>();
    w = w_int.convert_to<u64>();
    d = gamma * k;
  }
  g.q = q;
  g.ell = ell;
  g.w = w;
  g.d = d;
  if (q > 4096) throw BudgetExceeded("sample_rs_locally_dense_lattice: q too large to build");

  g.lattice = build_rs_lattice(q, ell);
  // Structural check: lambda_1^(p) > d, exact.
  Lambda1Report l1 = lambda1(g.lattice, p);
  if (l1.value.compare(Rat(ipow(Int(d), pi))) <= 0)
    throw std::invalid_argument("sample_rs_locally_dense_lattice: lambda_1 <= d for these parameters");
  g.status = GadgetStatus::StructuralOk;

  Rng tgt = rng.child("ldl-target");
  std::vector<u64> s = sample_binary_weight(q, w, tgt);
  g.target.assign(s.begin(), s.end());
  g.seed = seed;
  return g;
}

DensityEstimate estimate_density(LocallyDenseLattice& g, std::uint64_t budget, u64 seed) {
  Rng rng(seed);
  DensityEstimate est;
  const std::size_t q = g.lattice.ambient_dim();
  est.ball_size = binomial(q, static_cast<std::size_t>(g.w));
  // Radius^p = alpha^p d^p.
  Rat radius_pow = g.alpha_pow_p * Rat(ipow(Int(g.d), g.p.num));

  // Exact count via certified enumeration around the target.
  EnumOptions opt;
  opt.max_nodes = budget;
  try {
    Int count = 0;
    enumerate_lattice_points(g.lattice, &g.target, g.p, radius_pow, opt,
                             [&](const EnumPoint&) {
                               ++count;
                               return true;
                             });
    est.exact = true;
    est.count = count;
  } catch (const BudgetExceeded&) {
    // Monte Carlo over the binary weight-w slice B_{q,w}.
    const std::uint64_t trials = std::min<std::uint64_t>(budget, 100000);
    est.trials = trials;
    std::uint64_t hits = 0;
    Rng mc = rng.child("ldl-density-mc");
    for (std::uint64_t t = 0; t < trials; ++t) {
      std::vector<u64> x = sample_binary_weight(q, g.w, mc);
      std::vector<Int> v(q);
      for (std::size_t i = 0; i < q; ++i) v[i] = Int(x[i]) + g.target[i];
      if (g.lattice.contains(v)) ++hits;
    }
    est.count = hits;
    wilson_interval(hits, trials, est.rate_low, est.rate_high);
  }
  g.density = est;
  g.status = GadgetStatus::DensityEstimated;
  return est;
}

BchLatticeGadget build_bch_construction_a(unsigned r, u64 d, u64 target_weight, u64 seed) {
  Rng rng(seed);
  const u64 m_prime = (u64(1) << r) - 1;
  if (m_prime < d + 2) throw std::invalid_argument("build_bch_construction_a: need 2^r - 1 >= d + 2");
  if (target_weight > m_prime)
    throw std::invalid_argument("build_bch_construction_a: target weight exceeds length");
  BchResult bch = build_bch({2, r, d + 1});
  BchLatticeGadget g{construction_a(bch.code, 2), bch.code, {}, d, target_weight,
                     bch.codimension, seed};
  Rng tgt = rng.child("bch-ca-target");
  std::vector<u64> s = sample_binary_weight(m_prime, target_weight, tgt);
  g.target.assign(s.size(), 0);
  for (std::size_t i = 0; i < s.size(); ++i) g.target[i] = Int(s[i]);
  return g;
}

}  // namespace gforge
