#include "gadgetforge/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace gforge {

std::string rat_to_string(const Rat& r) {
  std::ostringstream os;
  os << numerator(r);
  if (denominator(r) != 1) os << "/" << denominator(r);
  return os.str();
}

Rat rat_from_string(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(s));
    return Rat(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
  } catch (const std::exception&) {
    throw SchemaError("bad rational: " + s);
  }
}

std::string normspec_to_string(const NormSpec& p) {
  if (p.den == 1) return std::to_string(p.num);
  return std::to_string(p.num) + "/" + std::to_string(p.den);
}

NormSpec normspec_from_string(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return NormSpec(std::stoul(s), 1);
    return NormSpec(std::stoul(s.substr(0, slash)), std::stoul(s.substr(slash + 1)));
  } catch (const std::exception&) {
    throw SchemaError("bad norm exponent: " + s);
  }
}

namespace {

const Json& field_of(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(std::string("missing field: ") + key);
  return *it;
}

std::vector<u64> u64_vector(const Json& j, const char* key) {
  const Json& v = field_of(j, key);
  if (!v.is_array()) throw SchemaError(std::string(key) + " must be an array");
  std::vector<u64> out;
  for (const auto& e : v) out.push_back(e.get<u64>());
  return out;
}

std::vector<Int> int_vector(const Json& j, const char* key) {
  const Json& v = field_of(j, key);
  if (!v.is_array()) throw SchemaError(std::string(key) + " must be an array");
  std::vector<Int> out;
  for (const auto& e : v) out.emplace_back(e.get<std::string>());
  return out;
}

Json int_vector_to_json(const std::vector<Int>& v) {
  Json out = Json::array();
  for (const Int& x : v) {
    std::ostringstream os;
    os << x;
    out.push_back(os.str());
  }
  return out;
}

void expect_kind(const Json& j, const std::string& kind) {
  if (field_of(j, "kind").get<std::string>() != kind)
    throw SchemaError("expected kind \"" + kind + "\"");
}

}  // namespace

Json code_to_json(const LinearCode& c) {
  // Column-generator semantics: the code is the F_q-span of the columns.
  Json j;
  j["q-char"] = c.field()->characteristic();
  j["q-deg"] = c.field()->degree();
  j["m"] = c.block_length();
  j["n"] = c.dimension();
  Json rows = Json::array();
  for (std::size_t r = 0; r < c.block_length(); ++r) {
    Json row = Json::array();
    for (std::size_t col = 0; col < c.dimension(); ++col) row.push_back(c.generator().at(r, col));
    rows.push_back(row);
  }
  j["generator"] = rows;
  return j;
}

LinearCode code_from_json(const Json& j) {
  u64 p = field_of(j, "q-char").get<u64>();
  unsigned e = field_of(j, "q-deg").get<unsigned>();
  std::size_t m = field_of(j, "m").get<std::size_t>();
  std::size_t n = field_of(j, "n").get<std::size_t>();
  FieldPtr f = FiniteField::make(p, e);
  const Json& rows = field_of(j, "generator");
  if (!rows.is_array() || rows.size() != m) throw SchemaError("generator must have m rows");
  FqMat g(f, m, n);
  for (std::size_t r = 0; r < m; ++r) {
    if (!rows[r].is_array() || rows[r].size() != n)
      throw SchemaError("generator rows must have n entries");
    for (std::size_t c = 0; c < n; ++c) {
      u64 v = rows[r][c].get<u64>();
      if (v >= f->order()) throw SchemaError("generator entry out of field range");
      g.at(r, c) = v;
    }
  }
  try {
    return LinearCode::from_generator(std::move(g));
  } catch (const std::invalid_argument& ex) {
    throw SchemaError(ex.what());
  }
}

Json lattice_to_json(const IntegerLattice& l) {
  Json j;
  j["m"] = l.ambient_dim();
  j["rank"] = l.rank();
  Json rows = Json::array();
  for (std::size_t r = 0; r < l.ambient_dim(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < l.rank(); ++c) {
      std::ostringstream os;
      os << l.basis().at(r, c);
      row.push_back(os.str());
    }
    rows.push_back(row);
  }
  j["basis"] = rows;
  return j;
}

IntegerLattice lattice_from_json(const Json& j) {
  std::size_t m = field_of(j, "m").get<std::size_t>();
  std::size_t rank = field_of(j, "rank").get<std::size_t>();
  const Json& rows = field_of(j, "basis");
  if (!rows.is_array() || rows.size() != m) throw SchemaError("basis must have m rows");
  ZMat b(m, rank);
  for (std::size_t r = 0; r < m; ++r) {
    if (!rows[r].is_array() || rows[r].size() != rank)
      throw SchemaError("basis rows must have `rank` entries");
    for (std::size_t c = 0; c < rank; ++c) b.at(r, c) = Int(rows[r][c].get<std::string>());
  }
  IntegerLattice lat = IntegerLattice::from_basis(b);
  if (lat.rank() != rank) throw SchemaError("basis is rank-deficient");
  return lat;
}

Json ncp_to_json(const NcpInstance& x) {
  Json j;
  j["kind"] = "ncp";
  j["code"] = code_to_json(x.code);
  j["target"] = x.target;
  j["k"] = x.k;
  j["gamma"] = rat_to_string(x.gamma);
  j["label"] = to_string(x.label);
  if (x.witness) j["witness"] = *x.witness;
  return j;
}

NcpInstance ncp_from_json(const Json& j) {
  expect_kind(j, "ncp");
  NcpInstance x;
  x.code = code_from_json(field_of(j, "code"));
  x.target = u64_vector(j, "target");
  if (x.target.size() != x.code.block_length()) throw SchemaError("target length != m");
  x.k = field_of(j, "k").get<u64>();
  if (x.k < 1) throw SchemaError("k must be >= 1");
  x.gamma = rat_from_string(field_of(j, "gamma").get<std::string>());
  x.label = label_from_string(field_of(j, "label").get<std::string>());
  if (j.contains("witness")) x.witness = u64_vector(j, "witness");
  return x;
}

Json mdp_to_json(const MdpInstance& x) {
  Json j;
  j["kind"] = "mdp";
  j["code"] = code_to_json(x.code);
  j["k"] = x.k;
  j["gamma"] = rat_to_string(x.gamma);
  j["label"] = to_string(x.label);
  if (x.witness) j["witness"] = *x.witness;
  return j;
}

MdpInstance mdp_from_json(const Json& j) {
  expect_kind(j, "mdp");
  MdpInstance x;
  x.code = code_from_json(field_of(j, "code"));
  x.k = field_of(j, "k").get<u64>();
  if (x.k < 1) throw SchemaError("k must be >= 1");
  x.gamma = rat_from_string(field_of(j, "gamma").get<std::string>());
  x.label = label_from_string(field_of(j, "label").get<std::string>());
  if (j.contains("witness")) x.witness = u64_vector(j, "witness");
  return x;
}

Json cvp_to_json(const CvpInstance& x) {
  Json j;
  j["kind"] = "cvp";
  j["lattice"] = lattice_to_json(x.lattice);
  j["target"] = int_vector_to_json(x.target);
  j["k"] = x.k;
  j["p"] = normspec_to_string(x.p);
  j["gamma"] = rat_to_string(x.gamma);
  j["label"] = to_string(x.label);
  if (x.witness) j["witness"] = int_vector_to_json(*x.witness);
  return j;
}

CvpInstance cvp_from_json(const Json& j) {
  expect_kind(j, "cvp");
  CvpInstance x;
  x.lattice = lattice_from_json(field_of(j, "lattice"));
  x.target = int_vector(j, "target");
  if (x.target.size() != x.lattice.ambient_dim()) throw SchemaError("target length != m");
  x.k = field_of(j, "k").get<u64>();
  x.p = normspec_from_string(field_of(j, "p").get<std::string>());
  x.gamma = rat_from_string(field_of(j, "gamma").get<std::string>());
  x.label = label_from_string(field_of(j, "label").get<std::string>());
  if (j.contains("witness")) x.witness = int_vector(j, "witness");
  return x;
}

Json svp_to_json(const SvpInstance& x) {
  Json j;
  j["kind"] = "svp";
  j["lattice"] = lattice_to_json(x.lattice);
  j["threshold_pow_p"] = rat_to_string(x.threshold_pow_p);
  j["p"] = normspec_to_string(x.p);
  j["gamma"] = rat_to_string(x.gamma);
  j["label"] = to_string(x.label);
  if (x.witness) j["witness"] = int_vector_to_json(*x.witness);
  if (x.certificate) {
    Json c;
    c["d"] = x.certificate->d;
    c["p"] = normspec_to_string(x.certificate->p);
    c["c"] = x.certificate->c;
    c["method"] = x.certificate->method;
    {
      std::ostringstream os;
      os << x.certificate->enumerated;
      c["enumerated"] = os.str();
    }
    c["evidence"] = x.certificate->evidence;
    j["certificate"] = c;
  }
  return j;
}

SvpInstance svp_from_json(const Json& j) {
  expect_kind(j, "svp");
  SvpInstance x;
  x.lattice = lattice_from_json(field_of(j, "lattice"));
  x.threshold_pow_p = rat_from_string(field_of(j, "threshold_pow_p").get<std::string>());
  if (x.threshold_pow_p <= 0) throw SchemaError("threshold_pow_p must be positive");
  x.p = normspec_from_string(field_of(j, "p").get<std::string>());
  x.gamma = rat_from_string(field_of(j, "gamma").get<std::string>());
  x.label = label_from_string(field_of(j, "label").get<std::string>());
  if (j.contains("witness")) x.witness = int_vector(j, "witness");
  if (j.contains("certificate")) {
    const Json& c = j["certificate"];
    HavivRegevCertificate cert;
    cert.d = field_of(c, "d").get<u64>();
    cert.p = normspec_from_string(field_of(c, "p").get<std::string>());
    cert.c = field_of(c, "c").get<std::uint32_t>();
    cert.method = field_of(c, "method").get<std::string>();
    cert.enumerated = Int(field_of(c, "enumerated").get<std::string>());
    cert.evidence = field_of(c, "evidence").get<std::string>();
    x.certificate = cert;
  }
  return x;
}

namespace {

Json density_to_json(const DensityEstimate& d) {
  Json j;
  j["exact"] = d.exact;
  {
    std::ostringstream os;
    os << d.count;
    j["count"] = os.str();
  }
  j["trials"] = d.trials;
  j["rate_low"] = rat_to_string(d.rate_low);
  j["rate_high"] = rat_to_string(d.rate_high);
  {
    std::ostringstream os;
    os << d.ball_size;
    j["ball_size"] = os.str();
  }
  return j;
}

DensityEstimate density_from_json(const Json& j) {
  DensityEstimate d;
  d.exact = field_of(j, "exact").get<bool>();
  d.count = Int(field_of(j, "count").get<std::string>());
  d.trials = field_of(j, "trials").get<std::uint64_t>();
  d.rate_low = rat_from_string(field_of(j, "rate_low").get<std::string>());
  d.rate_high = rat_from_string(field_of(j, "rate_high").get<std::string>());
  d.ball_size = Int(field_of(j, "ball_size").get<std::string>());
  return d;
}

GadgetStatus status_from_string(const std::string& s) {
  if (s == "UNVERIFIED") return GadgetStatus::Unverified;
  if (s == "STRUCTURAL_OK") return GadgetStatus::StructuralOk;
  if (s == "DENSITY_ESTIMATED") return GadgetStatus::DensityEstimated;
  throw SchemaError("bad gadget status: " + s);
}

}  // namespace

Json ldc_to_json(const LocallyDenseCode& g) {
  Json j;
  j["kind"] = "ldc";
  Json params;
  params["q"] = g.q;
  params["k"] = g.k;
  params["m"] = g.m;
  params["d"] = g.d;
  params["alpha"] = rat_to_string(g.alpha);
  params["declared_density"] = rat_to_string(g.declared_density);
  {
    std::ostringstream os;
    os << g.paper_block_length;
    params["paper_block_length"] = os.str();
  }
  if (g.override_block_length) params["override_block_length"] = *g.override_block_length;
  j["params"] = params;
  j["seed"] = g.seed;
  j["code"] = code_to_json(g.code);
  j["target"] = g.target;
  j["status"] = to_string(g.status);
  if (g.density) j["density"] = density_to_json(*g.density);
  return j;
}

LocallyDenseCode ldc_from_json(const Json& j) {
  expect_kind(j, "ldc");
  LocallyDenseCode g;
  const Json& params = field_of(j, "params");
  g.q = field_of(params, "q").get<u64>();
  g.k = field_of(params, "k").get<u64>();
  g.m = field_of(params, "m").get<u64>();
  g.d = field_of(params, "d").get<u64>();
  g.alpha = rat_from_string(field_of(params, "alpha").get<std::string>());
  g.declared_density = rat_from_string(field_of(params, "declared_density").get<std::string>());
  g.paper_block_length = Int(field_of(params, "paper_block_length").get<std::string>());
  if (params.contains("override_block_length"))
    g.override_block_length = params["override_block_length"].get<u64>();
  g.seed = field_of(j, "seed").get<u64>();
  g.code = code_from_json(field_of(j, "code"));
  g.target = u64_vector(j, "target");
  if (g.target.size() != g.code.block_length()) throw SchemaError("ldc target length mismatch");
  g.status = status_from_string(field_of(j, "status").get<std::string>());
  if (j.contains("density")) g.density = density_from_json(j["density"]);
  return g;
}

Json ldl_to_json(const LocallyDenseLattice& g) {
  Json j;
  j["kind"] = "ldl";
  Json params;
  params["p"] = normspec_to_string(g.p);
  params["alpha_pow_p"] = rat_to_string(g.alpha_pow_p);
  params["d"] = g.d;
  params["k"] = g.k;
  params["m"] = g.m;
  params["q"] = g.q;
  params["ell"] = g.ell;
  params["w"] = g.w;
  params["gamma"] = g.gamma;
  params["declared_density"] = rat_to_string(g.declared_density);
  params["paper_q_threshold"] = g.paper_q_threshold;
  j["params"] = params;
  j["seed"] = g.seed;
  j["lattice"] = lattice_to_json(g.lattice);
  j["target"] = int_vector_to_json(g.target);
  j["status"] = to_string(g.status);
  if (g.density) j["density"] = density_to_json(*g.density);
  return j;
}

LocallyDenseLattice ldl_from_json(const Json& j) {
  expect_kind(j, "ldl");
  LocallyDenseLattice g;
  const Json& params = field_of(j, "params");
  g.p = normspec_from_string(field_of(params, "p").get<std::string>());
  g.alpha_pow_p = rat_from_string(field_of(params, "alpha_pow_p").get<std::string>());
  g.d = field_of(params, "d").get<u64>();
  g.k = field_of(params, "k").get<u64>();
  g.m = field_of(params, "m").get<u64>();
  g.q = field_of(params, "q").get<u64>();
  g.ell = field_of(params, "ell").get<u64>();
  g.w = field_of(params, "w").get<u64>();
  g.gamma = field_of(params, "gamma").get<u64>();
  g.declared_density = rat_from_string(field_of(params, "declared_density").get<std::string>());
  g.paper_q_threshold = field_of(params, "paper_q_threshold").get<std::string>();
  g.seed = field_of(j, "seed").get<u64>();
  g.lattice = lattice_from_json(field_of(j, "lattice"));
  // Re-attach the coset provenance so the oracles keep their fast path.
  g.lattice.set_provenance(ModCodeProvenance{g.q, build_rs_code(g.q, g.ell)});
  g.target = int_vector(j, "target");
  g.status = status_from_string(field_of(j, "status").get<std::string>());
  if (j.contains("density")) g.density = density_from_json(j["density"]);
  return g;
}

Json report_to_json(const ReductionReport& r) {
  Json j;
  j["kind"] = "report";
  j["pipeline"] = r.pipeline;
  j["seed"] = r.seed;
  j["input_digest"] = r.input_digest;
  j["gadget_digest"] = r.gadget_digest;
  j["params"] = r.params_json;
  j["notes"] = r.notes;
  return j;
}

Json verification_to_json(const VerificationReport& r) {
  Json j;
  j["kind"] = "verification";
  j["verdict"] = to_string(r.verdict);
  j["oracle"] = r.oracle;
  j["exact_value"] = r.exact_value;
  j["work"] = r.work;
  j["detail"] = r.detail;
  return j;
}

std::string canonical_dump(const Json& j) { return j.dump(2) + "\n"; }

void write_json_atomic(const std::string& path, const Json& j) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
    out << canonical_dump(j);
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("rename failed: " + path);
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw SchemaError(std::string("malformed JSON in ") + path + ": " + e.what());
  }
  return j;
}

}  // namespace gforge
