#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gadgetforge/field.hpp"
#include "gadgetforge/pnorm.hpp"

namespace gforge {

/// Dense matrix over F_q, entries in canonical integer form, row-major.
class FqMat {
 public:
  FqMat() = default;
  FqMat(FieldPtr f, std::size_t rows, std::size_t cols)
      : field_(std::move(f)), rows_(rows), cols_(cols), a_(rows * cols, 0) {}

  const FieldPtr& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  u64& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  u64 at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }
  const std::vector<u64>& data() const { return a_; }
  std::vector<u64>& data() { return a_; }

  std::vector<u64> mul_vec(const std::vector<u64>& x) const;  // this * x
  FqMat mul(const FqMat& other) const;
  FqMat transpose() const;
  bool operator==(const FqMat& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_ && field_->same(*o.field_);
  }

 private:
  FieldPtr field_;
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<u64> a_;
};

/// Row echelon form in place; returns rank. `reduced` gives RREF.
std::size_t fq_row_reduce(FqMat& m, bool reduced = true);
std::size_t fq_rank(FqMat m);
/// Basis of the right kernel {x : M x = 0}, returned as columns of a matrix
/// (cols = kernel dimension).
FqMat fq_kernel(const FqMat& m);
/// Solve M x = b; nullopt if inconsistent. M need not be square.
std::optional<std::vector<u64>> fq_solve(FqMat m, std::vector<u64> b);

/// Linear code over F_q carried by a column-generating matrix: the code is
/// the F_q-span of the columns of G (m x n). G always has full column rank;
/// the zero code is represented with n = 0.
class LinearCode {
 public:
  LinearCode() = default;  // empty placeholder; length-0 zero code

  /// Throws if G is rank-deficient.
  static LinearCode from_generator(FqMat g);
  /// Build the code ker(H) from a parity-check matrix (rows are checks).
  static LinearCode from_parity(const FqMat& h);
  static LinearCode zero_code(FieldPtr f, std::size_t m);
  static LinearCode full_space(FieldPtr f, std::size_t m);
  static LinearCode repetition(FieldPtr f, std::size_t m);

  const FieldPtr& field() const { return gen_.field(); }
  std::size_t block_length() const { return gen_.rows(); }
  std::size_t dimension() const { return gen_.cols(); }
  const FqMat& generator() const { return gen_; }

  /// Parity-check matrix H ((m - n) x m) with H G = 0; cached.
  const FqMat& parity_check() const;

  bool contains(const std::vector<u64>& word) const;
  /// Coefficients x with G x = word, if word is in the code.
  std::optional<std::vector<u64>> coefficients_of(const std::vector<u64>& word) const;
  std::vector<u64> encode(const std::vector<u64>& message) const;

  Int codeword_count() const;

 private:
  explicit LinearCode(FqMat g) : gen_(std::move(g)) {}
  FqMat gen_;
  mutable std::optional<FqMat> parity_;
};

/// Enumerable descriptor of B_{q,m}(r) = words of Hamming weight <= r.
struct HammingBall {
  FieldPtr field;
  std::size_t length = 0;
  u64 radius = 0;

  Int size() const;  // sum_{i<=r} C(m,i)(q-1)^i
};

Int binomial(std::size_t n, std::size_t k);

/// Visit every vector of the ball exactly once in deterministic order:
/// weight-major, then support lexicographic, then value lexicographic. The
/// callback returns false to stop early. Throws BudgetExceeded if the ball
/// size exceeds `budget` before enumeration starts.
void enumerate_ball(const HammingBall& ball, std::uint64_t budget,
                    const std::function<bool(const std::vector<u64>&)>& visit);

enum class DistanceStrategy { MessageEnumeration, BallEnumeration, ZeroCode };

struct DistanceReport {
  /// Empty means "no codeword within the searched radius": the exact
  /// distance exceeds `radius_cap` (or the code is the zero code).
  std::optional<u64> distance;
  DistanceStrategy strategy = DistanceStrategy::MessageEnumeration;
  std::uint64_t visited = 0;
  std::optional<u64> radius_cap;  // set when the search was capped
};

struct DistanceOptions {
  std::uint64_t budget = 1ull << 26;
  std::optional<u64> radius_cap;  // search only weights <= cap
};

/// Exact minimum Hamming weight of a nonzero codeword (lambda). Strategy is
/// chosen by cost: enumerate all q^n messages, or enumerate the Hamming ball
/// against the parity check when that is smaller. Throws BudgetExceeded when
/// neither fits.
DistanceReport min_distance(const LinearCode& c, const DistanceOptions& opt = {});

/// Exact Hamming distance from `target` to the code.
DistanceReport nearest_codeword_distance(const LinearCode& c, const std::vector<u64>& target,
                                         const DistanceOptions& opt = {});

/// Kronecker-product code: block length m1*m2, dimension n1*n2.
LinearCode tensor_codes(const LinearCode& a, const LinearCode& b);

/// C(a) intersect C(b), via the kernel of stacked parity checks. The result
/// may be the zero code.
LinearCode intersect_codes(const LinearCode& a, const LinearCode& b);

u64 hamming_weight(const std::vector<u64>& v);

}  // namespace gforge
