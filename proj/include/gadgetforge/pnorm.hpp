#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace gforge {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

struct BudgetExceeded : std::runtime_error {
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when an interval comparison between irrational quantities cannot be
/// certified at the precision cap. Comparisons never round silently.
struct CertificationError : std::runtime_error {
  explicit CertificationError(const std::string& what) : std::runtime_error(what) {}
};

/// The exponent of an ell_p norm, kept as an exact rational p = num/den >= 1.
struct NormSpec {
  std::uint32_t num = 2;
  std::uint32_t den = 1;

  NormSpec() = default;
  NormSpec(std::uint32_t n, std::uint32_t d);
  static NormSpec integral(std::uint32_t p) { return NormSpec(p, 1); }

  bool is_integral() const { return den == 1; }
  Rat value() const { return Rat(num, den); }
  bool operator==(const NormSpec& o) const { return num == o.num && den == o.den; }
};

Int ipow(Int base, std::uint64_t exp);
Int floor_nth_root(const Int& x, std::uint32_t n);  // x >= 0
bool is_perfect_nth_power(const Int& x, std::uint32_t n, Int* root = nullptr);

/// A nonnegative real of the form sum_i c_i * w_i^{1/b} with integer c_i > 0
/// and b-th-power-free radicands w_i >= 1 (plus an optional rational part).
/// This is the exact carrier for ||x||_p^p when p = a/b is non-integral:
/// each |x_i|^{a/b} contributes ((|x_i|^a))^{1/b}. Comparisons are certified
/// by interval refinement; identical canonical forms short-circuit as equal.
class RootSum {
 public:
  RootSum() : root_index_(1) {}
  explicit RootSum(std::uint32_t b) : root_index_(b) {}

  std::uint32_t root_index() const { return root_index_; }
  bool is_rational() const { return terms_.empty(); }
  const Rat& rational_part() const { return rational_; }

  void add_rational(const Rat& r);
  void add_root(const Int& radicand, const Int& coeff = Int(1));  // coeff * radicand^{1/b}

  /// Certified three-way comparison with a rational. -1, 0, +1.
  int compare(const Rat& rhs) const;
  int compare(const RootSum& rhs) const;

  /// Rational bracket a <= value <= b with b - a <= 2^-precision_bits.
  std::pair<Rat, Rat> bracket(unsigned precision_bits) const;

  std::string to_string() const;

  bool operator==(const RootSum& o) const {
    return root_index_ == o.root_index_ && rational_ == o.rational_ && terms_ == o.terms_;
  }

 private:
  std::uint32_t root_index_;
  Rat rational_ = 0;
  std::map<Int, Int> terms_;  // radicand (b-power-free, > 1) -> coefficient
};

/// Exact value of ||v||_p^p for an integer vector. Integral p gives an exact
/// integer; rational p = a/b gives a RootSum of b-th roots.
class PNormPow {
 public:
  PNormPow() : spec_(), exact_(0) {}
  static PNormPow of_vector(const std::vector<Int>& v, const NormSpec& p);
  static PNormPow from_rational(const Rat& r, const NormSpec& p);
  static PNormPow infinity(const NormSpec& p);

  bool is_infinite() const { return infinite_; }
  const NormSpec& spec() const { return spec_; }

  /// Exact rational value; throws if the value is irrational or infinite.
  Rat rational() const;

  int compare(const Rat& threshold_pow_p) const;  // -1/0/+1 vs threshold
  int compare(const PNormPow& other) const;

  std::string to_string() const;

 private:
  NormSpec spec_;
  bool infinite_ = false;
  Rat exact_ = 0;          // used when spec_.is_integral()
  std::optional<RootSum> sum_;  // used otherwise
};

/// ||v||_p >= s^{1/max(2,p) - 1/2} * ||v||_2 and
/// ||v||_2 >= s^{-1/2} * ||v||_p, where s = |supp(v)|.
/// Verified exactly (integral p) or by certified intervals; support <= 1
/// holds with equality throughout and is confirmed structurally.
bool check_norm_inequalities(const std::vector<Int>& v, const NormSpec& p);

}  // namespace gforge
