#include "gadgetforge/field.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace gforge {

namespace {

using u128 = unsigned __int128;

u64 mulmod_u64(u64 a, u64 b, u64 m) { return static_cast<u64>((u128(a) * b) % m); }

u64 powmod_u64(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod_u64(r, a, m);
    a = mulmod_u64(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // This witness set decides primality for all n < 2^64.
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = powmod_u64(a % n, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

u64 next_prime_u64(u64 n) {
  u64 c = n + 1;
  if (c <= 2) return 2;
  if ((c & 1) == 0) ++c;
  while (!is_prime_u64(c)) c += 2;
  return c;
}

namespace {

u64 pollard_rho(u64 n) {
  if ((n & 1) == 0) return 2;
  for (u64 c = 1;; ++c) {
    u64 x = 2, y = 2, d = 1;
    while (d == 1) {
      x = (mulmod_u64(x, x, n) + c) % n;
      y = (mulmod_u64(y, y, n) + c) % n;
      y = (mulmod_u64(y, y, n) + c) % n;
      d = std::__gcd(x > y ? x - y : y - x, n);
    }
    if (d != n) return d;
  }
}

void factor_u64(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (is_prime_u64(n)) {
    out.push_back(n);
    return;
  }
  for (u64 p = 2; p * p <= n && p < 100000; p == 2 ? p = 3 : p += 2) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
      factor_u64(n, out);
      return;
    }
  }
  u64 d = pollard_rho(n);
  factor_u64(d, out);
  factor_u64(n / d, out);
}

std::vector<u64> prime_factors(u64 n) {
  std::vector<u64> fs;
  factor_u64(n, fs);
  std::sort(fs.begin(), fs.end());
  fs.erase(std::unique(fs.begin(), fs.end()), fs.end());
  return fs;
}

}  // namespace

std::optional<std::pair<u64, unsigned>> prime_power_decompose(u64 q) {
  if (q < 2) return std::nullopt;
  if (is_prime_u64(q)) return std::make_pair(q, 1u);
  std::vector<u64> fs = prime_factors(q);
  if (fs.size() != 1) return std::nullopt;
  u64 p = fs[0];
  unsigned e = 0;
  while (q % p == 0) {
    q /= p;
    ++e;
  }
  if (q != 1) return std::nullopt;
  return std::make_pair(p, e);
}

namespace fppoly {

namespace {
void trim(std::vector<u64>& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

// Remainder of a modulo monic divisor `mod`, coefficients over F_p.
std::vector<u64> rem(std::vector<u64> a, const std::vector<u64>& mod, u64 p) {
  trim(a);
  const std::size_t dm = mod.size() - 1;
  while (a.size() > dm) {
    u64 lead = a.back();
    std::size_t shift = a.size() - 1 - dm;
    if (lead != 0) {
      for (std::size_t i = 0; i < dm; ++i) {
        u64 sub = mulmod_u64(lead, mod[i], p);
        u64& tgt = a[shift + i];
        tgt = (tgt + p - sub) % p;
      }
    }
    a.pop_back();
    trim(a);
  }
  return a;
}
}  // namespace

std::vector<u64> mul_mod(const std::vector<u64>& a, const std::vector<u64>& b,
                         const std::vector<u64>& mod, u64 p) {
  if (a.empty() || b.empty()) return {};
  std::vector<u64> c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      c[i + j] = (c[i + j] + u128(a[i]) * b[j]) % p;
    }
  }
  return rem(std::move(c), mod, p);
}

namespace {
std::vector<u64> pow_poly_mod(std::vector<u64> base, u64 exp, const std::vector<u64>& mod, u64 p) {
  std::vector<u64> r = {1};
  base = rem(std::move(base), mod, p);
  while (exp) {
    if (exp & 1) r = mul_mod(r, base, mod, p);
    base = mul_mod(base, base, mod, p);
    exp >>= 1;
  }
  return r;
}
}  // namespace

std::vector<u64> pow_x_mod(u64 exp, const std::vector<u64>& mod, u64 p) {
  return pow_poly_mod({0, 1}, exp, mod, p);
}

std::vector<u64> gcd(std::vector<u64> a, std::vector<u64> b, u64 p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    // a mod b, with b made monic on the fly.
    u64 lead_inv = powmod_u64(b.back(), p - 2, p);
    std::vector<u64> bm(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) bm[i] = mulmod_u64(b[i], lead_inv, p);
    a = rem(std::move(a), bm, p);
    std::swap(a, b);
  }
  return a;
}

bool is_irreducible(const std::vector<u64>& f, u64 p) {
  const std::size_t e = f.size() - 1;
  if (e == 0) return false;
  if (e == 1) return true;
  // No irreducible factor of degree <= e/2  <=>  gcd(f, x^{p^i} - x) = 1 for
  // all i <= e/2, since x^{p^i} - x is the product of all irreducibles of
  // degree dividing i.
  std::vector<u64> t = {0, 1};  // x
  for (std::size_t i = 1; 2 * i <= e; ++i) {
    t = pow_poly_mod(t, p, f, p);  // now x^{p^i} mod f
    std::vector<u64> diff = t;
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = (diff[1] + p - 1) % p;
    std::vector<u64> g = gcd(f, diff, p);
    if (g.size() > 1) return false;
  }
  return true;
}

}  // namespace fppoly

namespace {
std::map<std::pair<u64, unsigned>, std::weak_ptr<const FiniteField>>& field_cache() {
  static std::map<std::pair<u64, unsigned>, std::weak_ptr<const FiniteField>> c;
  return c;
}
std::mutex& field_cache_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

FieldPtr FiniteField::make(u64 p, unsigned e) {
  if (!is_prime_u64(p)) throw std::invalid_argument("make_field: p must be prime");
  if (e == 0) throw std::invalid_argument("make_field: extension degree must be >= 1");

  {
    std::lock_guard<std::mutex> lock(field_cache_mutex());
    auto it = field_cache().find({p, e});
    if (it != field_cache().end()) {
      if (auto f = it->second.lock()) return f;
    }
  }

  u128 q128 = 1;
  for (unsigned i = 0; i < e; ++i) {
    q128 *= p;
    if (q128 > u128(~u64{0})) throw std::invalid_argument("make_field: q exceeds 64 bits");
  }
  const u64 q = static_cast<u64>(q128);

  auto f = std::shared_ptr<FiniteField>(new FiniteField());
  f->p_ = p;
  f->e_ = e;
  f->q_ = q;

  // Lexicographically smallest monic irreducible: scan non-leading
  // coefficient vectors in little-endian base-p integer order.
  for (u64 val = 0;; ++val) {
    if (val >= q) throw std::logic_error("irreducible search exhausted");
    std::vector<u64> cand(e + 1, 0);
    u64 v = val;
    for (unsigned i = 0; i < e; ++i) {
      cand[i] = v % p;
      v /= p;
    }
    cand[e] = 1;
    if (fppoly::is_irreducible(cand, p)) {
      f->modulus_ = std::move(cand);
      break;
    }
  }

  if (q <= 256 && e > 1) {
    f->mul_table_.resize(static_cast<std::size_t>(q) * q);
    f->add_table_.resize(static_cast<std::size_t>(q) * q);
    for (u64 a = 0; a < q; ++a) {
      for (u64 b = 0; b < q; ++b) {
        f->mul_table_[a * q + b] = f->mul_generic(a, b);
        f->add_table_[a * q + b] = f->add_generic(a, b);
      }
    }
  }

  {
    std::lock_guard<std::mutex> lock(field_cache_mutex());
    field_cache()[{p, e}] = f;
  }
  return f;
}

std::vector<u64> FiniteField::to_coeffs(u64 v) const {
  check_value(v);
  std::vector<u64> c(e_, 0);
  for (unsigned i = 0; i < e_; ++i) {
    c[i] = v % p_;
    v /= p_;
  }
  return c;
}

u64 FiniteField::from_coeffs(const std::vector<u64>& c) const {
  if (c.size() > e_) throw std::invalid_argument("coefficient vector too long");
  u64 v = 0;
  for (std::size_t i = c.size(); i-- > 0;) {
    if (c[i] >= p_) throw std::invalid_argument("coefficient not reduced mod p");
    v = v * p_ + c[i];
  }
  return v;
}

u64 FiniteField::add_generic(u64 a, u64 b) const {
  u64 out = 0, mult = 1;
  for (unsigned i = 0; i < e_; ++i) {
    u64 da = a % p_, db = b % p_;
    a /= p_;
    b /= p_;
    out += ((da + db) % p_) * mult;
    mult *= p_;
  }
  return out;
}

u64 FiniteField::add(u64 a, u64 b) const {
  check_value(a);
  check_value(b);
  if (e_ == 1) return (a + b) % p_;
  if (p_ == 2) return a ^ b;
  if (!add_table_.empty()) return add_table_[a * q_ + b];
  return add_generic(a, b);
}

u64 FiniteField::neg(u64 a) const {
  check_value(a);
  if (e_ == 1) return a == 0 ? 0 : p_ - a;
  if (p_ == 2) return a;
  u64 out = 0, mult = 1, v = a;
  for (unsigned i = 0; i < e_; ++i) {
    u64 d = v % p_;
    v /= p_;
    out += (d == 0 ? 0 : p_ - d) * mult;
    mult *= p_;
  }
  return out;
}

u64 FiniteField::sub(u64 a, u64 b) const { return add(a, neg(b)); }

u64 FiniteField::mul_generic(u64 a, u64 b) const {
  std::vector<u64> pa = to_coeffs(a), pb = to_coeffs(b);
  std::vector<u64> prod = fppoly::mul_mod(pa, pb, modulus_, p_);
  prod.resize(e_, 0);
  return from_coeffs(prod);
}

u64 FiniteField::mul(u64 a, u64 b) const {
  check_value(a);
  check_value(b);
  if (e_ == 1) return mulmod_u64(a, b, p_);
  if (!mul_table_.empty()) return mul_table_[a * q_ + b];
  return mul_generic(a, b);
}

u64 FiniteField::pow(u64 a, u64 exp) const {
  check_value(a);
  u64 r = 1, base = a;
  while (exp) {
    if (exp & 1) r = mul(r, base);
    base = mul(base, base);
    exp >>= 1;
  }
  return r;
}

u64 FiniteField::inv(u64 a) const {
  check_value(a);
  if (a == 0) throw std::domain_error("inverse of zero");
  return pow(a, q_ - 2);
}

u64 FiniteField::multiplicative_order(u64 a) const {
  check_value(a);
  if (a == 0) throw std::domain_error("order of zero");
  u64 ord = q_ - 1;
  if (ord == 0) return 1;
  for (u64 f : prime_factors(q_ - 1)) {
    while (ord % f == 0 && pow(a, ord / f) == 1) ord /= f;
  }
  return ord;
}

u64 FiniteField::primitive_element() const {
  if (primitive_known_) return primitive_cache_;
  for (u64 a = 1; a < q_; ++a) {
    if (multiplicative_order(a) == q_ - 1) {
      primitive_cache_ = a;
      primitive_known_ = true;
      return a;
    }
  }
  throw std::logic_error("no primitive element found");
}

SubfieldEmbedding SubfieldEmbedding::compute(const FieldPtr& sub, const FieldPtr& big) {
  if (sub->characteristic() != big->characteristic())
    throw std::invalid_argument("subfield embedding: characteristic mismatch");
  if (big->degree() % sub->degree() != 0)
    throw std::invalid_argument("subfield embedding: degree does not divide");
  if (big->order() > (1ULL << 22))
    throw std::invalid_argument("subfield embedding: big field too large for root search");

  SubfieldEmbedding emb;
  emb.sub_ = sub;
  emb.big_ = big;

  // Evaluate the subfield modulus at each element of the big field; the
  // smallest root (canonical order) is the image of the subfield generator.
  const auto& mod = sub->modulus();
  u64 root = 0;
  bool found = false;
  for (u64 beta = 0; beta < big->order(); ++beta) {
    u64 acc = 0, power = 1;
    for (std::size_t i = 0; i < mod.size(); ++i) {
      if (mod[i] != 0) acc = big->add(acc, big->mul(mod[i] % big->order(), power));
      power = big->mul(power, beta);
    }
    if (acc == 0) {
      root = beta;
      found = true;
      break;
    }
  }
  if (!found) throw std::logic_error("subfield embedding: modulus has no root in big field");

  emb.xi_ = root;
  emb.power_images_.resize(sub->degree());
  u64 pw = 1;
  for (unsigned j = 0; j < sub->degree(); ++j) {
    emb.power_images_[j] = pw;
    pw = big->mul(pw, root);
  }
  return emb;
}

u64 SubfieldEmbedding::embed(u64 sub_value) const {
  sub_->check_value(sub_value);
  u64 out = 0;
  u64 v = sub_value;
  const u64 p = sub_->characteristic();
  for (unsigned j = 0; j < sub_->degree(); ++j) {
    u64 digit = v % p;
    v /= p;
    if (digit != 0) out = big_->add(out, big_->mul(digit, power_images_[j]));
  }
  return out;
}

}  // namespace gforge
