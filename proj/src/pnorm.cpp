#include "gadgetforge/pnorm.hpp"

#include <numeric>
#include <sstream>

namespace gforge {

NormSpec::NormSpec(std::uint32_t n, std::uint32_t d) : num(n), den(d) {
  if (den == 0) throw std::invalid_argument("NormSpec: zero denominator");
  std::uint32_t g = std::gcd(num, den);
  num /= g;
  den /= g;
  if (num < den) throw std::invalid_argument("NormSpec: p must be >= 1");
}

Int ipow(Int base, std::uint64_t exp) {
  Int r = 1;
  while (exp) {
    if (exp & 1) r *= base;
    base *= base;
    exp >>= 1;
  }
  return r;
}

Int floor_nth_root(const Int& x, std::uint32_t n) {
  if (x < 0) throw std::invalid_argument("floor_nth_root: negative radicand");
  if (n == 0) throw std::invalid_argument("floor_nth_root: zero index");
  if (x == 0 || x == 1 || n == 1) return x;
  // Newton iteration from an upper-bound seed.
  const std::size_t bits = msb(x) + 1;
  Int r = Int(1) << (bits / n + 1);
  for (;;) {
    // r_{k+1} = ((n-1) r + x / r^{n-1}) / n
    Int rp = ipow(r, n - 1);
    Int nr = ((n - 1) * r + x / rp) / n;
    if (nr >= r) break;
    r = nr;
  }
  while (ipow(r, n) > x) --r;
  while (ipow(r + 1, n) <= x) ++r;
  return r;
}

bool is_perfect_nth_power(const Int& x, std::uint32_t n, Int* root) {
  if (x < 0) return false;
  Int r = floor_nth_root(x, n);
  if (ipow(r, n) == x) {
    if (root) *root = r;
    return true;
  }
  return false;
}

void RootSum::add_rational(const Rat& r) { rational_ += r; }

void RootSum::add_root(const Int& radicand, const Int& coeff) {
  if (radicand < 0) throw std::invalid_argument("RootSum: negative radicand");
  if (coeff <= 0) throw std::invalid_argument("RootSum: coefficient must be positive");
  if (radicand == 0) return;
  const std::uint32_t b = root_index_;
  Int w = radicand;
  Int c = coeff;
  // Pull b-th powers out of the radicand: small prime factors, then a
  // perfect-power check on the remainder. The reduction is deterministic;
  // radicands at desk scale are fully reduced by it.
  Int rest = 1;  // non-extractable small-prime residue, multiplied back below
  for (std::uint64_t q = 2; Int(q) * q <= w && q < 1000; q == 2 ? q = 3 : q += 2) {
    if (w % q != 0) continue;
    unsigned mult = 0;
    while (w % q == 0) {
      w /= q;
      ++mult;
    }
    c *= ipow(Int(q), mult / b);
    rest *= ipow(Int(q), mult % b);
  }
  Int rem_root;
  if (w > 1 && is_perfect_nth_power(w, b, &rem_root)) {
    c *= rem_root;
    w = 1;
  }
  w *= rest;
  if (w == 1) {
    rational_ += Rat(c);
    return;
  }
  terms_[w] += c;
}

std::pair<Rat, Rat> RootSum::bracket(unsigned precision_bits) const {
  const std::uint32_t b = root_index_;
  Rat lo = rational_, hi = rational_;
  const unsigned s = precision_bits;
  const Int scale = Int(1) << s;
  for (const auto& [w, c] : terms_) {
    // n / 2^s <= w^{1/b} < (n+1) / 2^s
    Int n = floor_nth_root(w * ipow(scale, b), b);
    lo += Rat(c * n, scale);
    hi += Rat(c * (n + 1), scale);
  }
  return {lo, hi};
}

int RootSum::compare(const Rat& rhs) const {
  if (terms_.empty()) return rational_ < rhs ? -1 : (rational_ == rhs ? 0 : 1);
  for (unsigned bits = 32; bits <= 2048; bits *= 2) {
    auto [lo, hi] = bracket(bits);
    if (lo > rhs) return 1;
    if (hi < rhs) return -1;
  }
  // A nonempty sum of positive b-th roots of b-power-free radicands is
  // irrational, so this refinement terminates for honest inputs.
  throw CertificationError("RootSum: comparison with rational not certified at precision cap");
}

int RootSum::compare(const RootSum& rhs) const {
  if (terms_.empty()) return -rhs.compare(rational_);
  if (rhs.terms_.empty()) return compare(rhs.rational_);
  if (root_index_ != rhs.root_index_)
    throw std::invalid_argument("RootSum: mixed root indices");
  if (*this == rhs) return 0;
  for (unsigned bits = 32; bits <= 2048; bits *= 2) {
    auto [alo, ahi] = bracket(bits);
    auto [blo, bhi] = rhs.bracket(bits);
    if (alo > bhi) return 1;
    if (ahi < blo) return -1;
  }
  throw CertificationError("RootSum: comparison not certified at precision cap");
}

std::string RootSum::to_string() const {
  std::ostringstream os;
  os << rational_;
  for (const auto& [w, c] : terms_) os << " + " << c << "*(" << w << ")^(1/" << root_index_ << ")";
  return os.str();
}

PNormPow PNormPow::of_vector(const std::vector<Int>& v, const NormSpec& p) {
  PNormPow out;
  out.spec_ = p;
  if (p.is_integral()) {
    Int acc = 0;
    for (const Int& x : v) acc += ipow(abs(x), p.num);
    out.exact_ = Rat(acc);
  } else {
    RootSum s(p.den);
    for (const Int& x : v) {
      if (x != 0) s.add_root(ipow(abs(x), p.num));
    }
    out.sum_ = std::move(s);
  }
  return out;
}

PNormPow PNormPow::from_rational(const Rat& r, const NormSpec& p) {
  PNormPow out;
  out.spec_ = p;
  if (p.is_integral()) {
    out.exact_ = r;
  } else {
    RootSum s(p.den);
    s.add_rational(r);
    out.sum_ = std::move(s);
  }
  return out;
}

PNormPow PNormPow::infinity(const NormSpec& p) {
  PNormPow out;
  out.spec_ = p;
  out.infinite_ = true;
  return out;
}

Rat PNormPow::rational() const {
  if (infinite_) throw std::domain_error("PNormPow: infinite value");
  if (spec_.is_integral()) return exact_;
  if (sum_->is_rational()) return sum_->rational_part();
  throw std::domain_error("PNormPow: irrational value");
}

int PNormPow::compare(const Rat& threshold_pow_p) const {
  if (infinite_) return 1;
  if (spec_.is_integral()) return exact_ < threshold_pow_p ? -1 : (exact_ == threshold_pow_p ? 0 : 1);
  return sum_->compare(threshold_pow_p);
}

int PNormPow::compare(const PNormPow& other) const {
  if (!(spec_ == other.spec_)) throw std::invalid_argument("PNormPow: mixed norms");
  if (infinite_ && other.infinite_) return 0;
  if (infinite_) return 1;
  if (other.infinite_) return -1;
  if (spec_.is_integral())
    return exact_ < other.exact_ ? -1 : (exact_ == other.exact_ ? 0 : 1);
  return sum_->compare(*other.sum_);
}

std::string PNormPow::to_string() const {
  if (infinite_) return "inf";
  if (spec_.is_integral()) {
    std::ostringstream os;
    os << exact_;
    return os.str();
  }
  return sum_->to_string();
}

namespace {

Rat rat_pow(Rat base, std::uint64_t exp) {
  Rat r = 1;
  while (exp) {
    if (exp & 1) r *= base;
    base *= base;
    exp >>= 1;
  }
  return r;
}

// Certified sign of base^exp - rhs for a RootSum base. The callers only
// reach this on strict inequalities, so the refinement terminates; an exact
// tie would exhaust the precision cap and throw instead of guessing.
int certified_cmp_pow(const RootSum& base, std::uint64_t exp, const Rat& rhs) {
  if (base.is_rational()) {
    Rat v = rat_pow(base.rational_part(), exp);
    return v < rhs ? -1 : (v == rhs ? 0 : 1);
  }
  for (unsigned bits = 32; bits <= 2048; bits *= 2) {
    auto [lo, hi] = base.bracket(bits);
    if (lo < 0) lo = 0;
    if (rat_pow(lo, exp) > rhs) return 1;
    if (rat_pow(hi, exp) < rhs) return -1;
  }
  throw CertificationError("norm inequality: interval comparison not certified");
}

}  // namespace

bool check_norm_inequalities(const std::vector<Int>& v, const NormSpec& p) {
  Int support = 0;
  Int n2sq = 0;
  bool uniform = true;
  Int mag = -1;
  for (const Int& x : v) {
    if (x == 0) continue;
    ++support;
    n2sq += x * x;
    Int a = abs(x);
    if (mag < 0)
      mag = a;
    else if (a != mag)
      uniform = false;
  }
  // Weight <= 1: every norm equals |x| and both inequalities are equalities.
  if (support <= 1) return true;
  // All magnitudes equal: ||v||_p = s^{1/p} c, ||v||_2 = s^{1/2} c, and both
  // inequalities reduce to monotonicity of s^t in t (equality at p = 2 resp.
  // p = 1). Holds unconditionally.
  if (uniform) return true;

  const Int s = support;
  if (p.is_integral()) {
    const std::uint32_t pi = p.num;
    Int npp = 0;
    for (const Int& x : v) npp += ipow(abs(x), pi);
    // (1) ||v||_p >= s^{1/max(2,p)-1/2} ||v||_2
    bool ok1;
    if (pi <= 2) {
      ok1 = npp * npp >= ipow(n2sq, pi);
    } else {
      ok1 = ipow(s, pi - 2) * npp * npp >= ipow(n2sq, pi);
    }
    // (2) ||v||_2 >= s^{-1/2} ||v||_p
    bool ok2 = ipow(s * n2sq, pi) >= npp * npp;
    return ok1 && ok2;
  }

  // Non-integral p on non-uniform support: both inequalities are strict, so
  // certified interval signs decide them.
  const std::uint32_t a = p.num, b = p.den;
  RootSum npp(b);
  for (const Int& x : v) {
    if (x != 0) npp.add_root(ipow(abs(x), a));
  }
  bool ok1;
  if (a <= 2 * b) {
    // p <= 2: raise ||v||_p >= ||v||_2 to the power 2a: N^{2b} vs n2sq^a.
    ok1 = certified_cmp_pow(npp, 2 * b, Rat(ipow(n2sq, a))) > 0;
  } else {
    // p > 2: raise to 2ab: s^{b(a-2b)} N^{2b^2} vs n2sq^{ab}.
    Rat rhs = Rat(ipow(n2sq, std::uint64_t(a) * b), ipow(s, std::uint64_t(b) * (a - 2 * b)));
    ok1 = certified_cmp_pow(npp, 2 * std::uint64_t(b) * b, rhs) > 0;
  }
  // (2) squared and raised to a: (s * n2sq)^a vs N^{2b}.
  bool ok2 = certified_cmp_pow(npp, 2 * b, Rat(ipow(s * n2sq, a))) < 0;
  return ok1 && ok2;
}

}  // namespace gforge
