#include "nondiv/io.hpp"

#include <sstream>

#include "json.hpp"

namespace nondiv {

namespace {

using Json = nlohmann::ordered_json;

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw ValidationError("json", e.what());
  }
}

const Json& field(const Json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object()) throw ValidationError(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(where + "." + key, "missing");
  return *it;
}

Rational rational_at(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(Integer(std::to_string(j.get<long long>())));
  if (!j.is_string()) throw ValidationError(where, "expected a rational string \"p/q\"");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const std::exception& e) {
    throw ValidationError(where, e.what());
  }
}

Integer integer_at(const Json& j, const std::string& where) {
  const Rational r = rational_at(j, where);
  if (r.get_den() != 1) throw ValidationError(where, "expected an integer");
  return r.get_num();
}

std::size_t count_at(const Json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw ValidationError(where, "expected a non-negative integer");
  return j.get<std::size_t>();
}

const Json& array_at(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ValidationError(where, "expected an array");
  return j;
}

std::string idx(const std::string& where, std::size_t i) { return where + "[" + std::to_string(i) + "]"; }

RatMatrix rat_rows_at(const Json& j, const std::string& where, std::size_t rows, std::size_t cols) {
  array_at(j, where);
  if (j.size() != rows) throw ValidationError(where, "expected " + std::to_string(rows) + " rows");
  RatMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto& row = array_at(j[i], idx(where, i));
    if (row.size() != cols) throw ValidationError(idx(where, i), "expected " + std::to_string(cols) + " entries");
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = rational_at(row[k], idx(idx(where, i), k));
  }
  return m;
}

std::vector<Rational> rat_list_at(const Json& j, const std::string& where) {
  array_at(j, where);
  std::vector<Rational> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(rational_at(j[i], idx(where, i)));
  return out;
}

Json rat_list(const std::vector<Rational>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_string(x));
  return a;
}

Json int_rows(const IntMatrix& m) {
  Json a = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(to_string(m(i, k)));
    a.push_back(std::move(row));
  }
  return a;
}

// A stored HNF must already be the canonical saturated basis.
RationalSubspace subspace_at(const Json& j, const std::string& where, std::size_t n) {
  array_at(j, where);
  if (j.empty()) throw ValidationError(where, "empty subspace basis");
  IntMatrix m(j.size(), n);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& row = array_at(j[i], idx(where, i));
    if (row.size() != n) throw ValidationError(idx(where, i), "expected " + std::to_string(n) + " entries");
    for (std::size_t k = 0; k < n; ++k) m(i, k) = integer_at(row[k], idx(idx(where, i), k));
  }
  RationalSubspace w = [&] {
    try {
      return RationalSubspace::from_generators(m);
    } catch (const Error& e) {
      throw ValidationError(where, e.what());
    }
  }();
  if (!(w.basis() == m)) throw ValidationError(where, "not a saturated Hermite normal form");
  return w;
}

Json delta_json(const DeltaResult& d) {
  Json j;
  j["delta_sq_pow"] = to_string(d.delta_sq_pow);
  j["exponent_l"] = d.exponent_l;
  j["delta_float"] = d.delta_float;
  j["witness_dim"] = d.witness.dim();
  j["witness_hnf"] = int_rows(d.witness.basis());
  j["witness_covolume_sq"] = to_string(d.witness_covolume_sq);
  j["complete"] = d.complete;
  return j;
}

DeltaResult delta_at(const Json& j, const std::string& where) {
  const Json& hnf = field(j, "witness_hnf", where);
  array_at(hnf, where + ".witness_hnf");
  if (hnf.empty() || !hnf[0].is_array()) throw ValidationError(where + ".witness_hnf", "expected a matrix");
  const std::size_t n = hnf[0].size();
  DeltaResult d{rational_at(field(j, "delta_sq_pow", where), where + ".delta_sq_pow"),
                count_at(field(j, "exponent_l", where), where + ".exponent_l"),
                0.0,
                subspace_at(hnf, where + ".witness_hnf", n),
                rational_at(field(j, "witness_covolume_sq", where), where + ".witness_covolume_sq"),
                true};
  const Json& f = field(j, "delta_float", where);
  if (!f.is_number()) throw ValidationError(where + ".delta_float", "expected a number");
  d.delta_float = f.get<double>();
  const Json& c = field(j, "complete", where);
  if (!c.is_boolean()) throw ValidationError(where + ".complete", "expected a boolean");
  d.complete = c.get<bool>();
  if (count_at(field(j, "witness_dim", where), where + ".witness_dim") != d.witness.dim())
    throw ValidationError(where + ".witness_dim", "does not match the witness");
  if (d.exponent_l != lcm_upto(n)) throw ValidationError(where + ".exponent_l", "is not lcm(1..N)");
  if (normalized_covolume_pow(d.witness_covolume_sq, d.witness.dim(), d.exponent_l) != d.delta_sq_pow)
    throw ValidationError(where + ".delta_sq_pow", "inconsistent with the witness covolume");
  return d;
}

Json lattice_json(const RatMatrix& b) {
  Json j;
  j["dimension"] = b.rows();
  Json cols = Json::array();
  for (std::size_t c = 0; c < b.cols(); ++c) cols.push_back(rat_list(b.col(c)));
  j["basis"] = std::move(cols);
  j["determinant"] = to_string(determinant(b));
  return j;
}

UnimodularLattice lattice_at(const Json& j, const std::string& where) {
  const std::size_t n = count_at(field(j, "dimension", where), where + ".dimension");
  if (n < 2) throw ValidationError(where + ".dimension", "must be at least 2");
  // Column-major on disk.
  const RatMatrix cols = rat_rows_at(field(j, "basis", where), where + ".basis", n, n);
  const RatMatrix b = transpose(cols);
  const Rational det = determinant(b);
  if (auto it = j.find("determinant"); it != j.end()) {
    const Rational recorded = rational_at(*it, where + ".determinant");
    if (recorded != det)
      throw ValidationError(where + ".determinant", "recorded " + to_string(recorded) + " but basis has " + to_string(det));
  }
  try {
    return UnimodularLattice(b);
  } catch (const Error& e) {
    throw ValidationError(where + ".basis", e.what());
  }
}

Json expansion_json(const ExpansionCertificate& e) {
  Json j;
  j["torus_scalars"] = rat_list(e.s.scalars());
  Json ix = Json::array();
  for (auto b : e.index_set) ix.push_back(b + 1);
  j["index_set"] = std::move(ix);
  j["c_w_sq"] = to_string(e.c_w_sq);
  j["rho"] = to_string(e.rho);
  j["lambda"] = to_string(e.lambda);
  j["mu"] = to_string(e.mu);
  j["achieved_c1"] = to_string(e.achieved_c1);
  j["achieved_c2_sq"] = to_string(e.achieved_c2_sq);
  return j;
}

ExpansionCertificate expansion_at(const Json& j, const std::string& where, const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> ix;
  const Json& ij = array_at(field(j, "index_set", where), where + ".index_set");
  for (std::size_t i = 0; i < ij.size(); ++i) {
    const std::size_t b = count_at(ij[i], idx(where + ".index_set", i));
    if (b < 1 || b > dims.size()) throw ValidationError(idx(where + ".index_set", i), "block out of range");
    ix.push_back(b - 1);
  }
  auto r = [&](const char* key) { return rational_at(field(j, key, where), where + "." + key); };
  try {
    return ExpansionCertificate{TorusElement(rat_list_at(field(j, "torus_scalars", where), where + ".torus_scalars"), dims),
                                ix,
                                r("c_w_sq"),
                                r("rho"),
                                r("lambda"),
                                r("mu"),
                                r("achieved_c1"),
                                r("achieved_c2_sq")};
  } catch (const InvalidTorusElement& e) {
    throw ValidationError(where + ".torus_scalars", e.what());
  }
}

bool bool_at(const Json& j, const std::string& where) {
  if (!j.is_boolean()) throw ValidationError(where, "expected a boolean");
  return j.get<bool>();
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace

ScenarioFile parse_scenario(std::string_view json_text) {
  const Json j = parse_json(json_text);
  const std::size_t n = count_at(field(j, "dimension", "scenario"), "dimension");
  if (n < 2) throw ValidationError("dimension", "must be at least 2");
  std::vector<Block> blocks;
  const Json& bj = array_at(field(j, "blocks", "scenario"), "blocks");
  for (std::size_t i = 0; i < bj.size(); ++i) {
    const auto& pair = array_at(bj[i], idx("blocks", i));
    if (pair.size() != 2) throw ValidationError(idx("blocks", i), "expected [start, end]");
    const std::size_t s = count_at(pair[0], idx("blocks", i)), e = count_at(pair[1], idx("blocks", i));
    const std::string range = "[" + std::to_string(s) + "," + std::to_string(e) + "]";
    if (s < 1 || e < s || e > n) throw ValidationError(idx("blocks", i), "invalid range " + range);
    if (!blocks.empty() && s - 1 < blocks.back().end)
      throw ValidationError(idx("blocks", i), "range " + range + " overlaps the previous block");
    blocks.push_back({s - 1, e});
  }
  std::vector<RatMatrix> gens;
  if (auto it = j.find("m_generators"); it != j.end()) {
    array_at(*it, "m_generators");
    for (std::size_t g = 0; g < it->size(); ++g) gens.push_back(rat_rows_at((*it)[g], idx("m_generators", g), n, n));
  }
  if (auto it = j.find("torus"); it != j.end() && *it != "full-block-scalar")
    throw ValidationError("torus", "only \"full-block-scalar\" is supported");
  PushoutConfig cfg;
  if (auto it = j.find("config"); it != j.end()) {
    const Json& c = *it;
    if (!c.is_object()) throw ValidationError("config", "expected an object");
    if (auto k = c.find("lambda_multiplier"); k != c.end())
      cfg.lambda_multiplier = rational_at(*k, "config.lambda_multiplier");
    if (auto k = c.find("eta0"); k != c.end() && !k->is_null()) cfg.eta0_override = rational_at(*k, "config.eta0");
    if (auto k = c.find("max_steps"); k != c.end()) cfg.max_steps = count_at(*k, "config.max_steps");
    if (auto k = c.find("vector_budget"); k != c.end()) cfg.vector_budget = count_at(*k, "config.vector_budget");
    try {
      cfg.validate();
    } catch (const Error& e) {
      throw ValidationError("config", e.what());
    }
  }
  try {
    return ScenarioFile{Scenario(n, std::move(blocks), std::move(gens)), cfg};
  } catch (const InvalidScenario& e) {
    throw ValidationError("scenario", e.what());
  }
}

UnimodularLattice parse_lattice(std::string_view json_text) { return lattice_at(parse_json(json_text), "lattice"); }

std::string scenario_to_json(const ScenarioFile& sf) {
  const Scenario& sc = sf.scenario;
  Json j;
  j["dimension"] = sc.dimension();
  Json blocks = Json::array();
  for (const auto& b : sc.blocks()) blocks.push_back(Json::array({b.begin + 1, b.end}));
  j["blocks"] = std::move(blocks);
  Json gens = Json::array();
  for (const auto& g : sc.m_generators()) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < g.rows(); ++i) rows.push_back(rat_list(g.row(i)));
    gens.push_back(std::move(rows));
  }
  j["m_generators"] = std::move(gens);
  j["torus"] = "full-block-scalar";
  Json c;
  c["lambda_multiplier"] = to_string(sf.config.lambda_multiplier);
  c["eta0"] = sf.config.eta0_override ? Json(to_string(*sf.config.eta0_override)) : Json(nullptr);
  c["max_steps"] = sf.config.max_steps;
  c["vector_budget"] = sf.config.vector_budget;
  j["config"] = std::move(c);
  return dump(j);
}

std::string lattice_to_json(const UnimodularLattice& lat) { return dump(lattice_json(lat.basis())); }

std::string delta_to_json(const DeltaResult& d) { return dump(delta_json(d)); }

DeltaResult parse_delta(std::string_view json_text) { return delta_at(parse_json(json_text), "delta"); }

std::string certificate_to_json(const PushoutCertificate& cert, const Scenario& sc) {
  Json j;
  j["dimension"] = sc.dimension();
  Json dims = Json::array();
  for (auto d : sc.block_dims()) dims.push_back(d);
  j["block_dims"] = std::move(dims);
  j["exponent_l"] = cert.exponent_l;
  j["eta0_pow"] = to_string(cert.eta0_pow);
  j["eta0_float"] = cert.eta0_float;
  j["terminated"] = to_string(cert.terminated);
  j["incomplete_reason"] = cert.incomplete_reason;
  j["initial"] = delta_json(cert.initial);
  j["final"] = delta_json(cert.final_delta);
  j["composed_scalars"] = rat_list(cert.composed_scalars);
  j["final_lattice"] = lattice_json(cert.final_basis);
  j["mahler_proxy_sq"] = to_string(cert.mahler_proxy);
  j["step_bound"] = cert.step_bound ? Json(*cert.step_bound) : Json(nullptr);
  Json steps = Json::array();
  for (std::size_t i = 0; i < cert.steps.size(); ++i) {
    const StepRecord& s = cert.steps[i];
    Json r;
    r["step"] = i + 1;
    Json chain = Json::array();
    for (const auto& w : s.protection.chain) chain.push_back(int_rows(w.basis()));
    r["chain"] = std::move(chain);
    r["chain_covolume_sq"] = rat_list(s.protection.chain_covolume_sq);
    r["reached_whole_space"] = s.protection.reached_whole_space;
    r["expansion"] = expansion_json(s.expansion);
    r["c1c2_sq"] = to_string(s.c1c2_sq);
    r["delta_before"] = delta_json(s.delta_before);
    r["delta_after"] = delta_json(s.delta_after);
    r["growth_pow"] = to_string(s.growth_pow);
    r["ratio_pow"] = to_string(s.ratio_pow);
    r["certified"] = s.certified;
    r["growth_holds"] = s.growth_holds;
    r["case_tag"] = to_string(s.case_tag);
    steps.push_back(std::move(r));
  }
  j["steps"] = std::move(steps);
  return dump(j);
}

PushoutCertificate parse_certificate(std::string_view json_text) {
  const Json j = parse_json(json_text);
  const std::string w = "certificate";
  const std::size_t n = count_at(field(j, "dimension", w), "dimension");
  std::vector<std::size_t> dims;
  const Json& dj = array_at(field(j, "block_dims", w), "block_dims");
  for (std::size_t i = 0; i < dj.size(); ++i) dims.push_back(count_at(dj[i], idx("block_dims", i)));

  Termination term;
  const Json& tj = field(j, "terminated", w);
  if (tj == "ReachedEta0") term = Termination::ReachedEta0;
  else if (tj == "MaxSteps") term = Termination::MaxSteps;
  else if (tj == "Incomplete") term = Termination::Incomplete;
  else throw ValidationError("terminated", "unknown termination");

  const UnimodularLattice fin = lattice_at(field(j, "final_lattice", w), "final_lattice");
  if (fin.dimension() != n) throw ValidationError("final_lattice", "dimension mismatch");
  std::optional<unsigned long> bound;
  if (const Json& b = field(j, "step_bound", w); !b.is_null()) bound = count_at(b, "step_bound");
  const Json& reason = field(j, "incomplete_reason", w);
  if (!reason.is_string()) throw ValidationError("incomplete_reason", "expected a string");
  const Json& ef = field(j, "eta0_float", w);
  if (!ef.is_number()) throw ValidationError("eta0_float", "expected a number");

  PushoutCertificate cert{.steps = {},
                          .terminated = term,
                          .exponent_l = count_at(field(j, "exponent_l", w), "exponent_l"),
                          .eta0_pow = rational_at(field(j, "eta0_pow", w), "eta0_pow"),
                          .eta0_float = ef.get<double>(),
                          .initial = delta_at(field(j, "initial", w), "initial"),
                          .final_delta = delta_at(field(j, "final", w), "final"),
                          .composed_scalars = rat_list_at(field(j, "composed_scalars", w), "composed_scalars"),
                          .final_basis = fin.basis(),
                          .mahler_proxy = rational_at(field(j, "mahler_proxy_sq", w), "mahler_proxy_sq"),
                          .step_bound = bound,
                          .incomplete_reason = reason.get<std::string>()};
  try {
    TorusElement(cert.composed_scalars, dims);
  } catch (const InvalidTorusElement& e) {
    throw ValidationError("composed_scalars", e.what());
  }

  const Json& sj = array_at(field(j, "steps", w), "steps");
  for (std::size_t i = 0; i < sj.size(); ++i) {
    const std::string where = idx("steps", i);
    const Json& r = sj[i];
    if (count_at(field(r, "step", where), where + ".step") != i + 1) throw ValidationError(where + ".step", "out of order");
    ProtectResult prot;
    const Json& cj = array_at(field(r, "chain", where), where + ".chain");
    for (std::size_t k = 0; k < cj.size(); ++k) prot.chain.push_back(subspace_at(cj[k], idx(where + ".chain", k), n));
    if (prot.chain.empty()) throw ValidationError(where + ".chain", "empty chain");
    prot.chain_covolume_sq = rat_list_at(field(r, "chain_covolume_sq", where), where + ".chain_covolume_sq");
    if (prot.chain_covolume_sq.size() != prot.chain.size())
      throw ValidationError(where + ".chain_covolume_sq", "length differs from the chain");
    prot.reached_whole_space = bool_at(field(r, "reached_whole_space", where), where + ".reached_whole_space");
    CaseTag tag;
    const Json& ct = field(r, "case_tag", where);
    if (ct == "I") tag = CaseTag::I;
    else if (ct == "II") tag = CaseTag::II;
    else if (ct == "none") tag = CaseTag::None;
    else throw ValidationError(where + ".case_tag", "unknown case tag");
    auto rat = [&](const char* key) { return rational_at(field(r, key, where), where + "." + key); };
    StepRecord rec{std::move(prot),
                   expansion_at(field(r, "expansion", where), where + ".expansion", dims),
                   rat("c1c2_sq"),
                   delta_at(field(r, "delta_before", where), where + ".delta_before"),
                   delta_at(field(r, "delta_after", where), where + ".delta_after"),
                   rat("growth_pow"),
                   rat("ratio_pow"),
                   bool_at(field(r, "certified", where), where + ".certified"),
                   bool_at(field(r, "growth_holds", where), where + ".growth_holds"),
                   tag};
    if (rec.ratio_pow != rec.delta_after.delta_sq_pow / rec.delta_before.delta_sq_pow)
      throw ValidationError(where + ".ratio_pow", "inconsistent with the recorded deltas");
    if (rec.growth_holds != (rec.ratio_pow >= rec.growth_pow))
      throw ValidationError(where + ".growth_holds", "inconsistent with the recorded ratio");
    cert.steps.push_back(std::move(rec));
  }
  return cert;
}

std::string hnf_to_text(const IntMatrix& m) {
  std::string out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (i) out += ';';
    for (std::size_t k = 0; k < m.cols(); ++k) {
      if (k) out += ' ';
      out += to_string(m(i, k));
    }
  }
  return out;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string certificate_to_csv(const PushoutCertificate& cert) {
  std::ostringstream os;
  os << "step,delta_num,delta_den_pow,delta_float,case_tag,torus_scalars,witness_hnf\r\n";
  os.precision(17);
  for (std::size_t i = 0; i < cert.steps.size(); ++i) {
    const StepRecord& s = cert.steps[i];
    const Rational& q = s.delta_after.delta_sq_pow;
    std::string scalars;
    for (const auto& x : s.expansion.s.scalars()) scalars += (scalars.empty() ? "" : ";") + to_string(x);
    os << (i + 1) << ',' << csv_escape(to_string(q.get_num())) << ',' << csv_escape(to_string(q.get_den())) << ','
       << s.delta_after.delta_float << ',' << to_string(s.case_tag) << ',' << csv_escape(scalars) << ','
       << csv_escape(hnf_to_text(s.delta_after.witness.basis())) << "\r\n";
  }
  return os.str();
}

}  // namespace nondiv
