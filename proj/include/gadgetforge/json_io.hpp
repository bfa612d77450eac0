#pragma once

#include <string>

#include <json.hpp>

#include "gadgetforge/verify.hpp"

namespace gforge {

using Json = nlohmann::json;

// Rationals travel as canonical strings: "num" or "num/den", lowest terms.
std::string rat_to_string(const Rat& r);
Rat rat_from_string(const std::string& s);
std::string normspec_to_string(const NormSpec& p);
NormSpec normspec_from_string(const std::string& s);

Json code_to_json(const LinearCode& c);
LinearCode code_from_json(const Json& j);

Json lattice_to_json(const IntegerLattice& l);
IntegerLattice lattice_from_json(const Json& j);

Json ncp_to_json(const NcpInstance& x);
NcpInstance ncp_from_json(const Json& j);
Json mdp_to_json(const MdpInstance& x);
MdpInstance mdp_from_json(const Json& j);
Json cvp_to_json(const CvpInstance& x);
CvpInstance cvp_from_json(const Json& j);
Json svp_to_json(const SvpInstance& x);
SvpInstance svp_from_json(const Json& j);

Json ldc_to_json(const LocallyDenseCode& g);
LocallyDenseCode ldc_from_json(const Json& j);
Json ldl_to_json(const LocallyDenseLattice& g);
LocallyDenseLattice ldl_from_json(const Json& j);

Json report_to_json(const ReductionReport& r);
Json verification_to_json(const VerificationReport& r);

/// Parse error with a schema-oriented message; thrown by the *_from_json
/// helpers so the CLI can map it to the schema-violation diagnostic.
struct SchemaError : std::runtime_error {
  explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

/// Canonical serialization used for digests and byte-stable outputs.
std::string canonical_dump(const Json& j);

/// Atomic write: serialize to path + ".tmp", then rename over path.
void write_json_atomic(const std::string& path, const Json& j);
Json read_json_file(const std::string& path);

}  // namespace gforge
