#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "gadgetforge/code.hpp"
#include "gadgetforge/pnorm.hpp"

namespace gforge {

/// Dense integer matrix, row-major, arbitrary-precision entries.
class ZMat {
 public:
  ZMat() = default;
  ZMat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Int& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  const Int& at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

  ZMat transpose() const;
  ZMat mul(const ZMat& o) const;
  std::vector<Int> mul_vec(const std::vector<Int>& x) const;
  std::vector<Int> column(std::size_t c) const;
  bool operator==(const ZMat& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Int> a_;
};

/// Column-style Hermite normal form of the lattice generated by the columns
/// of B: dependent columns are dropped, pivot rows increase left to right,
/// pivots are positive, and entries left of a pivot in its row lie in
/// [0, pivot). Equal column lattices yield identical matrices.
ZMat hnf(const ZMat& b);

/// Exact determinant via fraction-free (Bareiss) elimination.
Int integer_det(ZMat m);

/// Construction-A provenance: the lattice is {x : x mod rho in C}. Lets the
/// oracles use coset enumeration instead of geometric search.
struct ModCodeProvenance {
  u64 rho = 0;
  LinearCode code;
};

/// Integer lattice of rank r in Z^m, column-generated, basis kept in
/// canonical column HNF.
class IntegerLattice {
 public:
  IntegerLattice() = default;  // empty placeholder

  static IntegerLattice from_basis(const ZMat& b);
  /// Accept a basis already in column-echelon shape (strictly increasing
  /// pivot rows, positive pivots, zeros above each pivot) without
  /// re-canonicalizing. Kronecker products of HNF bases arrive this way;
  /// re-running HNF on them would be quadratic-space busywork.
  static IntegerLattice from_echelon_basis(ZMat b);

  std::size_t ambient_dim() const { return basis_.rows(); }
  std::size_t rank() const { return basis_.cols(); }
  const ZMat& basis() const { return basis_; }

  bool contains(const std::vector<Int>& v) const;
  /// Integer coefficients x with B x = v, when v is a lattice vector.
  std::optional<std::vector<Int>> coefficients_of(const std::vector<Int>& v) const;

  /// det(B^T B), exact (squared volume; determinant^2 for full rank).
  Int gram_det() const;
  /// Determinant for full-rank lattices: product of HNF pivots.
  Int det() const;

  const std::optional<ModCodeProvenance>& provenance() const { return prov_; }
  void set_provenance(ModCodeProvenance p) { prov_ = std::move(p); }

 private:
  explicit IntegerLattice(ZMat b) : basis_(std::move(b)) {}
  ZMat basis_;
  std::optional<ModCodeProvenance> prov_;
};

/// Lift of a code over a prime field to {x in Z^m : x mod rho in C(G)}.
/// Throws for non-prime rho or a field mismatch.
IntegerLattice construction_a(const LinearCode& c, u64 rho);

/// Intersection of two full-rank lattices in the same ambient space, via
/// det-scaled integral duals: the dual of the intersection is the sum of the
/// duals. Throws unless both inputs are full-rank.
IntegerLattice intersect_lattices(const IntegerLattice& a, const IntegerLattice& b);

/// Kronecker-product lattice.
IntegerLattice tensor_lattices(const IntegerLattice& a, const IntegerLattice& b);

struct EnumOptions {
  std::uint64_t max_nodes = 1ull << 26;
};

/// One enumerated lattice point (or difference to the target).
struct EnumPoint {
  std::vector<Int> coeffs;
  std::vector<Int> vector;  // B x - t (t = 0 without a target)
  PNormPow norm_pow;
};

/// Exhaustively visit every lattice point w = Bx (minus the target, when
/// given) with ||w||_p^p <= radius_pow_p. The sweep runs a Fincke-Pohst
/// search on an exact Gram-Schmidt profile; pruning uses outward-rounded
/// interval arithmetic, so no qualifying point can be skipped, and every
/// reported point is verified with exact arithmetic. The callback may return
/// false to stop. Throws BudgetExceeded past max_nodes.
void enumerate_lattice_points(const IntegerLattice& lat, const std::vector<Int>* target,
                              const NormSpec& p, const Rat& radius_pow_p,
                              const EnumOptions& opt,
                              const std::function<bool(const EnumPoint&)>& visit);

enum class LatticeStrategy { FinckePohst, CodeCosets };

struct Lambda1Report {
  PNormPow value;  // infinite only for the trivial rank-0 lattice
  std::vector<Int> witness;
  LatticeStrategy strategy = LatticeStrategy::FinckePohst;
  std::uint64_t visited = 0;
};

/// Exact lambda_1^(p). Construction-A lattices with enumerable codes use the
/// coset closed form (coordinatewise minimal lifts); everything else runs
/// the Fincke-Pohst sweep.
Lambda1Report lambda1(const IntegerLattice& lat, const NormSpec& p, const EnumOptions& opt = {});

struct CvpReport {
  PNormPow distance_pow;
  std::vector<Int> closest;
  LatticeStrategy strategy = LatticeStrategy::FinckePohst;
  std::uint64_t visited = 0;
};

/// Exact dist_p(L, t)^p.
CvpReport cvp_distance(const IntegerLattice& lat, const std::vector<Int>& target,
                       const NormSpec& p, const EnumOptions& opt = {});

struct MultiplesReport {
  /// Smallest dist_p(L, alpha t)^p over alpha != 0 within the searched range.
  PNormPow min_distance_pow;
  Int witness_alpha = 0;
  /// Range of alpha > 0 that had to be searched; values beyond it are
  /// certified to exceed the threshold (or the target spans a lattice
  /// multiple, reported below).
  Int alpha_bound = 0;
  /// Set when some D t is itself a lattice vector (distance 0 at alpha = D).
  std::optional<Int> exact_multiple;
};

/// The NO-side check for affine lattice problems: min over alpha != 0 of
/// dist_p(L, alpha t)^p, compared against threshold_pow_p. If t lies in the
/// rational span of L, some multiple D t is a lattice vector and the report
/// says so; otherwise the perpendicular component bounds the search range.
MultiplesReport cvp_all_multiples(const IntegerLattice& lat, const std::vector<Int>& target,
                                  const NormSpec& p, const Rat& threshold_pow_p,
                                  const EnumOptions& opt = {});

struct MinkowskiReport {
  bool holds = false;
  Int gram_det;    // det(L)^2
  Int lambda1_sq;  // lambda_1^(2) squared
  std::size_t rank = 0;
};

/// Minkowski's first theorem, det(L) >= (lambda_1 / sqrt(r))^r, checked as
/// det(B^T B) * r^r >= (lambda_1^2)^r in exact integers.
MinkowskiReport minkowski_check(const IntegerLattice& lat, const EnumOptions& opt = {});

/// Visit canonical coefficient matrices of all finite-index sublattices of a
/// rank-r lattice up to the given index. Used by the sublattice trichotomy
/// suite at toy scale.
void enumerate_sublattices(const IntegerLattice& lat, const Int& max_index,
                           const std::function<bool(const IntegerLattice&)>& visit);

// Rational linear algebra helpers (exact).
struct RatSolveResult {
  std::vector<Rat> solution;   // least-squares coefficients in span
  Rat perp_norm_sq;            // ||t - B x||_2^2
};
RatSolveResult rational_project(const ZMat& basis, const std::vector<Int>& t);

}  // namespace gforge
