#pragma once

#include <optional>
#include <string>

#include "gadgetforge/code.hpp"
#include "gadgetforge/lattice.hpp"
#include "gadgetforge/rng.hpp"

namespace gforge {

/// Narrow-sense primitive BCH code over F_q with block length q^r - 1 and
/// design minimum distance d.
struct BchSpec {
  u64 q = 2;          // prime power
  unsigned r = 2;     // extension degree of the locator field
  u64 design_distance = 2;

  u64 block_length() const;
};

struct BchResult {
  LinearCode code;
  std::size_t codimension = 0;       // measured rank of the parity material
  std::size_t constraint_cosets = 0; // distinct locator constraints after Frobenius closure
  u64 codimension_bound = 0;         // ceil((d-1)(1-1/q)) * r
};

/// Expand the locator constraints f(alpha^i) = 0, i = 1..d-1, into F_q-linear
/// parity checks over the basis {1, alpha, ..., alpha^{r-1}} of F_{q^r},
/// dropping Frobenius-redundant constraints, and return the kernel code.
/// The resulting code has minimum distance >= d and codimension within the
/// stated bound.
BchResult build_bch(const BchSpec& spec);

enum class GadgetStatus { Unverified, StructuralOk, DensityEstimated };

std::string to_string(GadgetStatus s);

struct DensityEstimate {
  bool exact = false;
  Int count = 0;            // exact count when exact, else observed successes
  std::uint64_t trials = 0; // Monte Carlo trials (0 when exact)
  // Wilson 95% interval for the success rate, scaled to a count estimate.
  Rat rate_low = 0, rate_high = 0;
  Int ball_size = 0;
};

/// Locally dense code gadget: matrix A (as a code), binary target s of
/// weight alpha*d, with lambda(C(A)) > d. `declared_density` carries the
/// paper-scale guarantee (q m)^{2d} / 100, meaningful only at paper scale.
struct LocallyDenseCode {
  LinearCode code;
  std::vector<u64> target;
  Rat alpha;          // relative radius
  u64 d = 0;          // distance bound: lambda(C) > d
  Rat declared_density;
  GadgetStatus status = GadgetStatus::Unverified;
  std::optional<DensityEstimate> density;
  // provenance
  u64 seed = 0;
  u64 q = 0, k = 0, m = 0;
  std::optional<u64> override_block_length;
  Int paper_block_length = 0;  // smallest q^r - 1 >= (d q m)^{4q}
};

struct LdcOverride {
  u64 block_length;  // must be q^r - 1
};

/// Sample the NCP->MDP gadget: A = BCH generator with design distance d+1,
/// d = 4qk, alpha = 1 - 1/(2q); s uniform of Hamming weight exactly alpha*d.
/// Without an override the block length follows the paper formula, which is
/// astronomically large for honest inputs; materialization is refused and
/// the caller is pointed at scale_override.
LocallyDenseCode sample_locally_dense_code(u64 q, u64 k, u64 m, u64 seed,
                                           std::optional<LdcOverride> scale_override = {});

/// Exact density count |(C(A) - s) cap B(alpha d)| when the ball or the
/// code fits the budget; Monte Carlo estimate over uniform ball points
/// otherwise. Updates the gadget's status.
DensityEstimate estimate_density(LocallyDenseCode& g, std::uint64_t budget, u64 seed);

/// Reed-Solomon code over prime F_q: (f(0), f(1), ..., f(q-1)) for deg f < ell.
LinearCode build_rs_code(u64 q_prime, u64 ell);
/// Construction-A lift of the Reed-Solomon code: RS + q Z^q.
IntegerLattice build_rs_lattice(u64 q_prime, u64 ell);

struct LocallyDenseLattice {
  IntegerLattice lattice;
  std::vector<Int> target;  // binary, weight w
  NormSpec p;
  Rat alpha_pow_p;   // alpha^p, exact
  u64 d = 0;         // lambda_1^(p) > d
  Rat declared_density;
  GadgetStatus status = GadgetStatus::Unverified;
  std::optional<DensityEstimate> density;
  // provenance
  u64 seed = 0;
  u64 k = 0, m = 0;
  u64 q = 0, ell = 0, w = 0;
  u64 gamma = 0;
  std::string paper_q_threshold;  // decimal or symbolic base^exp
};

struct RsLdlOverride {
  u64 q;    // prime
  u64 ell;  // RS dimension
  u64 w;    // target weight
  u64 d;    // declared distance bound; lambda_1^(p) > d is oracle-checked
};

/// Sample the CVP->SVP gadget per the locally-dense-lattice recipe:
/// eps = 1/gamma'^p - 1/2, gamma = ceil(max(12/eps, 1/((1+eps/2)^{1/p}-1))),
/// ell = ceil((1+gamma k)^p / 2), w = floor(((gamma/gamma')^p - 2) k^p),
/// q = smallest prime above (300 w (gamma k)^p (2m(1+gamma k)))^{9/eps}.
/// gamma'^p is taken as an exact rational; p must be integral so all
/// parameter arithmetic stays exact. Honest q overflows 64 bits for all but
/// trivial inputs; an override supplies (q, ell, w) directly.
LocallyDenseLattice sample_rs_locally_dense_lattice(const NormSpec& p, const Rat& gamma_prime_pow_p,
                                                    u64 k, u64 m, u64 seed,
                                                    std::optional<RsLdlOverride> scale_override = {});

DensityEstimate estimate_density(LocallyDenseLattice& g, std::uint64_t budget, u64 seed);

/// Binary BCH Construction-A lattice C_BCH + 2 Z^{m'} with a random binary
/// target of the given weight. Block length 2^r - 1; design distance d+1.
struct BchLatticeGadget {
  IntegerLattice lattice;
  LinearCode bch;
  std::vector<Int> target;
  u64 d = 0;
  u64 target_weight = 0;
  std::size_t bch_codimension = 0;
  u64 seed = 0;
};

BchLatticeGadget build_bch_construction_a(unsigned r, u64 d, u64 target_weight, u64 seed);

/// Uniform binary vector of exact weight w (Fisher-Yates over positions).
std::vector<u64> sample_binary_weight(std::size_t length, u64 weight, Rng& rng);

}  // namespace gforge
