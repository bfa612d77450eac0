#pragma once

#include <optional>
#include <string>

#include "gadgetforge/gadgets.hpp"

namespace gforge {

enum class Label { Yes, No, Unknown };
std::string to_string(Label l);
Label label_from_string(const std::string& s);

/// Promise instance of the nearest-codeword problem: decide
/// dist(C(G), t) <= k versus > gamma k (all nonzero scalings of t).
struct NcpInstance {
  LinearCode code;
  std::vector<u64> target;
  u64 k = 1;
  Rat gamma = 1;
  Label label = Label::Unknown;
  std::optional<std::vector<u64>> witness;  // x with ||Gx - t||_0 <= k
};

struct MdpInstance {
  LinearCode code;
  u64 k = 1;
  Rat gamma = 1;
  Label label = Label::Unknown;
  std::optional<std::vector<u64>> witness;  // coefficients of a light codeword
};

struct CvpInstance {
  IntegerLattice lattice;
  std::vector<Int> target;
  u64 k = 1;
  NormSpec p;
  Rat gamma = 1;
  Label label = Label::Unknown;
  std::optional<std::vector<Int>> witness;
};

struct HavivRegevCertificate {
  u64 d = 0;
  NormSpec p;
  std::uint32_t c = 1;  // certified tensor exponent
  std::string method;
  Int enumerated = 0;
  std::string evidence;
};

struct SvpInstance {
  IntegerLattice lattice;
  Rat threshold_pow_p;  // k'^p, exact; all comparisons on p-th powers
  NormSpec p;
  Rat gamma = 1;
  Label label = Label::Unknown;
  std::optional<std::vector<Int>> witness;  // coefficient vector of a short vector
  std::optional<HavivRegevCertificate> certificate;
};

/// Reproducibility record emitted next to every pipeline output. Contains
/// everything needed to re-run the step; byte-stable across reruns with the
/// same seed (timing deliberately excluded).
struct ReductionReport {
  std::string pipeline;
  std::uint64_t seed = 0;
  std::string input_digest;
  std::string gadget_digest;
  std::string params_json;  // pipeline-specific knobs, serialized
  std::string notes;
};

struct NcpToMdpOptions {
  std::optional<u64> h_override;  // sparsifier codimension override
};

struct NcpToMdpResult {
  MdpInstance instance;
  ReductionReport report;
  LinearCode intermediate;     // C_int before sparsification
  std::size_t n_code = 0;      // coefficient split of C_int columns
  std::size_t n_gadget = 0;
  u64 h = 0;                   // sparsifier codimension used
  FqMat sparsifier;            // the sampled parity matrix H
  std::optional<std::vector<u64>> combined_witness_vector;  // G_int (x, y, 1)
  bool witness_survived = false;
};

/// The code-side affine-to-linear reduction: stack the instance against a
/// locally dense gadget, sparsify with a random parity kernel of codimension
/// h = ceil(7 + d(1 + log_q m)), and output (C_int cap ker H, k + alpha d).
/// Requires gadget.d = gamma k, integral alpha d, and
/// gamma' <= gamma / (1 + alpha gamma).
NcpToMdpResult ncp_to_mdp(const NcpInstance& inst, const LocallyDenseCode& gadget,
                          const Rat& gamma_prime, u64 seed, const NcpToMdpOptions& opt = {});

/// C cap ker(H) for a fresh uniform H in F_q^{h x m}. Each fixed nonzero
/// vector survives with probability exactly q^{-h}.
LinearCode sparsify_code(const LinearCode& c, u64 h, Rng& rng);

struct CvpToSvpOptions {
  std::optional<Int> rho_override;  // must be prime
};

struct CvpToSvpResult {
  SvpInstance instance;
  ReductionReport report;
  IntegerLattice intermediate;
  std::size_t n_code = 0;    // columns of B (instance block)
  std::size_t n_gadget = 0;  // columns of A
  Int rho = 0;
  std::vector<Int> constraint;  // the sampled mod-rho vector v
  std::optional<std::vector<Int>> combined_witness_vector;  // B_int (x, y, 1)
  bool witness_survived = false;
};

/// Khot-style lattice reduction: intermediate basis [B 0 -t; 0 A -s; 0 0 1],
/// a random mod-rho hyperplane constraint, threshold k' = gamma k / gamma'
/// stored as k'^p. Requires gadget d = gamma k and
/// alpha <= ((gamma/gamma')^p - 2)^{1/p} / gamma (checked on p-th powers).
CvpToSvpResult cvp_to_svp(const CvpInstance& inst, const LocallyDenseLattice& gadget,
                          const Rat& gamma_prime, u64 seed, const CvpToSvpOptions& opt = {});

/// {w in L : <v, w> = 0 mod rho}: an index-rho (or index-1) sublattice.
IntegerLattice sparsify_lattice(const IntegerLattice& lat, const Int& rho,
                                const std::vector<Int>& v);

struct Ncp2ToSvpOptions {
  std::optional<unsigned> r_override;  // BCH extension degree: m' = 2^r - 1
  std::optional<Int> rho_override;
};

struct Ncp2ToSvpResult {
  SvpInstance instance;
  ReductionReport report;
  IntegerLattice intermediate;
  u64 d = 0;
  u64 alpha_d = 0;
  Int rho = 0;
  std::size_t m_code = 0;    // NCP block width (columns of 2 B_NCP)
  std::size_t m_gadget = 0;  // BCH block width
  std::optional<std::vector<Int>> combined_witness_vector;
  bool witness_survived = false;
};

/// The tensor-friendly reduction from binary NCP to SVP_p: intermediate
/// basis [2B_NCP 0 -2t; 0 B_BCH -s; 0 0 1] over Construction-A lattices,
/// mod-rho sparsification, threshold k'^p = 2^p k + alpha d + 1. Requires
/// q = 2, even gamma >= 2, integral p > 1, alpha in (1/2 + 2^{-p}, 1) with
/// alpha d integral, and gamma'^p < gamma / (2^p + 1 + alpha gamma).
Ncp2ToSvpResult ncp2_to_svp_tensorable(const NcpInstance& inst, const NormSpec& p,
                                       const Rat& alpha, const Rat& gamma_prime, std::uint32_t c,
                                       u64 seed, const Ncp2ToSvpOptions& opt = {});

/// Threshold arithmetic of the tensor-friendly reduction, exposed for tests:
/// k'^p = 2^p k + alpha d + 1. Throws unless alpha d is an integer.
Int ncp2_threshold_pow(const NormSpec& p, u64 k, const Rat& alpha, u64 d);

/// (G^{tensor c}, k^c), gap gamma^c. Preserves labels unconditionally
/// (code tensoring is multiplicative in distance).
MdpInstance tensor_boost_mdp(const MdpInstance& inst, std::uint32_t c, std::uint64_t cell_budget = 1u << 24);

/// (B^{tensor c}, (k'^p)^c). Refuses without a Haviv-Regev certificate
/// covering exponent c: lattice tensoring is unsound in general.
SvpInstance tensor_boost_svp(const SvpInstance& inst, std::uint32_t c, std::uint64_t cell_budget = 1u << 24);

}  // namespace gforge
