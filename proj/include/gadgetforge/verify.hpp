#pragma once

#include <variant>

#include "gadgetforge/reductions.hpp"

namespace gforge {

enum class Verdict { Yes, No, GapViolation, Undecided };
std::string to_string(Verdict v);

struct VerificationReport {
  Verdict verdict = Verdict::Undecided;
  std::string oracle;
  std::string exact_value;   // lambda / distance, as decimal or p-th power
  std::uint64_t work = 0;
  std::string detail;
};

struct OracleBudget {
  std::uint64_t max_nodes = 1ull << 26;
};

/// Exact classification of an MDP instance: YES if lambda <= k, NO if
/// lambda > gamma k, GAP_VIOLATION in between, UNDECIDED past the budget.
VerificationReport classify_mdp(const MdpInstance& inst, const OracleBudget& budget = {});

/// Same for SVP; all comparisons on p-th powers of norms.
VerificationReport classify_svp(const SvpInstance& inst, const OracleBudget& budget = {});

/// Label check for affine instances: recomputes the distance (and the
/// all-multiples NO condition for CVP) and compares with the promise.
VerificationReport classify_ncp(const NcpInstance& inst, const OracleBudget& budget = {});
VerificationReport classify_cvp(const CvpInstance& inst, const OracleBudget& budget = {});

/// Census of the NCP->MDP intermediate code: counts of good vectors (weight
/// <= k') and annoying vectors (nonzero, weight <= d), plus the structural
/// check that every annoying vector has coefficient form (x, 0, 0).
struct CodeCensus {
  Int total = 0;
  Int good_count = 0;
  Int annoying_count = 0;
  bool structure_ok = true;
  std::string violation;
};

CodeCensus census_code(const LinearCode& c_int, std::size_t n_code, std::size_t n_gadget,
                       u64 k_prime, u64 d, bool check_no_structure,
                       const OracleBudget& budget = {});

/// Census of the CVP->SVP intermediate lattice (good vectors have last
/// coordinate 1; light NO-case vectors have zero gadget block and zero last
/// coordinate), enumerated up to ||w||_p^p <= radius_pow_p.
struct LatticeCensus {
  Int enumerated = 0;
  Int good_count = 0;      // norm <= k'^p and last coordinate 1
  Int annoying_count = 0;  // nonzero, norm <= (gamma k)^p
  bool structure_ok = true;
  std::string violation;
};

LatticeCensus census_lattice_khot(const IntegerLattice& l_int, std::size_t n_code,
                                  std::size_t n_gadget, const NormSpec& p,
                                  const Rat& k_prime_pow, const Rat& gamma_k_pow,
                                  bool check_no_structure, const OracleBudget& budget = {});

/// Census for the tensor-friendly pipeline (Lemma-style case analysis): every
/// enumerated vector with an odd last coefficient must exceed weight d, every
/// even-beta vector with odd BCH block must exceed weight d; all-even
/// vectors are counted as annoying when they beat all three thresholds.
struct TensorCensus {
  Int enumerated = 0;
  Int annoying_count = 0;
  bool case_analysis_ok = true;
  std::string violation;
};

TensorCensus census_lattice_tensor(const IntegerLattice& l_int, std::size_t m_code,
                                   std::size_t m_gadget, const NormSpec& p, u64 d,
                                   const Rat& gammap_kprime_pow, std::uint32_t c,
                                   const Rat& radius_pow_cap, const OracleBudget& budget = {});

struct HrRefusal {
  std::vector<Int> witness;
  std::string reason;
};

/// Check the tensoring conditions: every nonzero w in L satisfies
/// ||w||_0 > d^p, or w even and ||w||_0 > (d/2)^p, or w even and
/// ||w||_p > d^{c+3p/2}. The odd class is certified through the mod-2
/// code of the basis (its light codewords bound all odd vectors); the even
/// violator class has weight <= (d/2)^p and bounded entries, so it is
/// enumerated support-first. Integral p only.
std::variant<HavivRegevCertificate, HrRefusal> check_haviv_regev(const IntegerLattice& lat, u64 d,
                                                                 const NormSpec& p, std::uint32_t c,
                                                                 const OracleBudget& budget = {});

/// lambda_1^(p)(L)^p > bound_pow, decided exactly. For bound_pow <= 1 this
/// is a unit-vector membership test (works at any dimension); otherwise it
/// runs the enumeration oracle.
bool lattice_min_exceeds(const IntegerLattice& lat, const NormSpec& p, const Rat& bound_pow,
                         const OracleBudget& budget = {});

struct SparsifierStats {
  std::uint64_t trials = 0;
  std::uint64_t survived = 0;         // fixed vector v
  std::uint64_t survived_second = 0;  // fixed vector w (pairwise test)
  std::uint64_t survived_joint = 0;   // both at once
  Rat expected_rate;
  bool within_4_sigma = false;
  bool joint_within_4_sigma = false;
};

/// Empirical survival statistics of the code sparsifier H v = 0 (expected
/// rate q^{-h}) with a pairwise-independence check on two linearly
/// independent vectors.
SparsifierStats code_sparsifier_stats(u64 q, u64 h, std::size_t length, std::uint64_t trials,
                                      u64 seed);

/// Same for the mod-rho lattice sparsifier (expected rate 1/rho).
SparsifierStats lattice_sparsifier_stats(u64 rho, std::size_t length, std::uint64_t trials,
                                         u64 seed);

/// Appendix-style sublattice trichotomy: for every sublattice of index <=
/// max_index, its support exceeds d^p, or it is even with support >
/// (d/2)^p, or its determinant exceeds d^{r(c+p/2)} with support <=
/// (d/2)^p. Returns true when every enumerated sublattice satisfies one.
bool sublattice_trichotomy(const IntegerLattice& lat, u64 d, const NormSpec& p, std::uint32_t c,
                           const Int& max_index);

}  // namespace gforge
