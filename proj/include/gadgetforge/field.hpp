#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

namespace gforge {

using u64 = std::uint64_t;

class FiniteField;
using FieldPtr = std::shared_ptr<const FiniteField>;

/// Exact arithmetic in F_q, q = p^e. Elements are carried as canonical
/// integers in [0, q): the value sum c_i * p^i encodes the coefficient vector
/// (c_0, ..., c_{e-1}) of the residue class modulo the field's modulus
/// polynomial. The modulus is the lexicographically smallest monic
/// irreducible of degree e over F_p (non-leading coefficients compared as a
/// little-endian base-p integer), so two fields built from equal (p, e) are
/// bit-identical.
class FiniteField {
 public:
  /// Build F_{p^e}. Throws on non-prime p, e = 0, or q >= 2^63 (the tool is
  /// desk-scale; element values must stay well inside 64 bits).
  static FieldPtr make(u64 p, unsigned e);

  u64 characteristic() const { return p_; }
  unsigned degree() const { return e_; }
  u64 order() const { return q_; }
  bool prime_field() const { return e_ == 1; }

  /// Monic modulus polynomial, ascending coefficients, length e+1.
  const std::vector<u64>& modulus() const { return modulus_; }

  bool same(const FiniteField& other) const {
    return p_ == other.p_ && e_ == other.e_;
  }

  // Element arithmetic on canonical values in [0, q).
  u64 add(u64 a, u64 b) const;
  u64 sub(u64 a, u64 b) const;
  u64 neg(u64 a) const;
  u64 mul(u64 a, u64 b) const;
  u64 inv(u64 a) const;  // throws on a == 0
  u64 pow(u64 a, u64 exp) const;

  /// Smallest element (canonical integer order) of multiplicative order q-1.
  u64 primitive_element() const;
  u64 multiplicative_order(u64 a) const;  // a != 0

  std::vector<u64> to_coeffs(u64 v) const;
  u64 from_coeffs(const std::vector<u64>& c) const;

  void check_value(u64 v) const {
    if (v >= q_) throw std::invalid_argument("field element out of range");
  }

 private:
  FiniteField() = default;

  u64 p_ = 0;
  unsigned e_ = 0;
  u64 q_ = 0;
  std::vector<u64> modulus_;
  // Full operation tables for small fields; empty otherwise.
  std::vector<u64> mul_table_;
  std::vector<u64> add_table_;
  mutable u64 primitive_cache_ = 0;
  mutable bool primitive_known_ = false;

  u64 mul_generic(u64 a, u64 b) const;
  u64 add_generic(u64 a, u64 b) const;
};

/// Typed element wrapper for call sites where operator syntax reads better
/// than field.mul(a, b). Values are immutable; mixing fields throws.
class FieldElement {
 public:
  FieldElement() = default;
  FieldElement(FieldPtr f, u64 v) : field_(std::move(f)), v_(v) {
    field_->check_value(v_);
  }

  u64 value() const { return v_; }
  const FieldPtr& field() const { return field_; }

  FieldElement operator+(const FieldElement& o) const {
    require_same(o);
    return FieldElement(field_, field_->add(v_, o.v_));
  }
  FieldElement operator-(const FieldElement& o) const {
    require_same(o);
    return FieldElement(field_, field_->sub(v_, o.v_));
  }
  FieldElement operator*(const FieldElement& o) const {
    require_same(o);
    return FieldElement(field_, field_->mul(v_, o.v_));
  }
  FieldElement inverse() const { return FieldElement(field_, field_->inv(v_)); }
  FieldElement pow(u64 e) const { return FieldElement(field_, field_->pow(v_, e)); }
  bool operator==(const FieldElement& o) const {
    return field_->same(*o.field_) && v_ == o.v_;
  }

 private:
  void require_same(const FieldElement& o) const {
    if (!field_ || !o.field_ || !field_->same(*o.field_))
      throw std::invalid_argument("field mismatch");
  }

  FieldPtr field_;
  u64 v_ = 0;
};

/// F_q -> F_{q^r} embedding for the single subfield tower the BCH
/// construction needs. The big field is built directly over F_p with degree
/// e*r; the embedding sends the generator of F_q to the smallest root of
/// F_q's modulus inside the big field, extended F_p-linearly.
class SubfieldEmbedding {
 public:
  static SubfieldEmbedding compute(const FieldPtr& sub, const FieldPtr& big);

  u64 embed(u64 sub_value) const;

  const FieldPtr& subfield() const { return sub_; }
  const FieldPtr& bigfield() const { return big_; }
  u64 generator_image() const { return xi_; }

 private:
  FieldPtr sub_;
  FieldPtr big_;
  u64 xi_ = 0;                       // image of the degree-e generator
  std::vector<u64> power_images_;    // embed(x^j) for j < e
};

bool is_prime_u64(u64 n);  // deterministic Miller-Rabin for 64-bit inputs
u64 next_prime_u64(u64 n); // smallest prime > n
/// q = p^e with p prime, or nullopt if q is not a prime power.
std::optional<std::pair<u64, unsigned>> prime_power_decompose(u64 q);

// Polynomial helpers over F_p (ascending coefficient vectors), exposed for
// oracles and the irreducibility machinery.
namespace fppoly {
std::vector<u64> mul_mod(const std::vector<u64>& a, const std::vector<u64>& b,
                         const std::vector<u64>& mod, u64 p);
std::vector<u64> pow_x_mod(u64 exp_base_p_power, const std::vector<u64>& mod, u64 p);
std::vector<u64> gcd(std::vector<u64> a, std::vector<u64> b, u64 p);
bool is_irreducible(const std::vector<u64>& f, u64 p);
}  // namespace fppoly

}  // namespace gforge
