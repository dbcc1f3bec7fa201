#include "nondiv_cli/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "nondiv/io.hpp"

namespace nondiv::cli {

namespace {

struct Options {
  std::string scenario_path;
  std::string lattice_path;
  std::string output_path;
  std::string format = "json";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> vector_budget;
  std::optional<std::size_t> max_steps;
  std::string eta0;
  unsigned hnf_bound = 2;
  std::string bound = "1";
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(path, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Inputs {
  ScenarioFile scenario;
  UnimodularLattice lattice;
};

Inputs load(const Options& o) {
  std::optional<UnimodularLattice> lat;
  if (!o.lattice_path.empty()) {
    try {
      lat = parse_lattice(read_file(o.lattice_path));
    } catch (const ValidationError& e) {
      throw ValidationError(o.lattice_path + ": " + e.where(), std::string(e.what()).substr(e.where().size() + 2));
    }
  }
  std::optional<ScenarioFile> sf;
  if (!o.scenario_path.empty()) {
    try {
      sf = parse_scenario(read_file(o.scenario_path));
    } catch (const ValidationError& e) {
      throw ValidationError(o.scenario_path + ": " + e.where(), std::string(e.what()).substr(e.where().size() + 2));
    }
  }
  if (!lat) {
    if (!o.seed) throw ValidationError("--lattice", "required unless --seed is given");
    const std::size_t n = sf ? sf->scenario.dimension() : 3;
    lat = random_lattice(n, *o.seed);
  }
  if (!sf) sf = ScenarioFile{Scenario::diagonal(lat->dimension()), PushoutConfig{}};
  if (sf->scenario.dimension() != lat->dimension())
    throw ValidationError("dimension", "scenario has dimension " + std::to_string(sf->scenario.dimension()) +
                                           ", lattice has " + std::to_string(lat->dimension()));
  if (const char* env = std::getenv("NONDIV_VECTOR_BUDGET"); env && *env) {
    try {
      sf->config.vector_budget = std::stoull(env);
    } catch (const std::exception&) {
      throw ValidationError("NONDIV_VECTOR_BUDGET", "not a count");
    }
  }
  if (o.vector_budget) sf->config.vector_budget = *o.vector_budget;
  if (o.max_steps) sf->config.max_steps = *o.max_steps;
  if (!o.eta0.empty()) {
    try {
      sf->config.eta0_override = parse_rational(o.eta0);
    } catch (const std::exception& e) {
      throw ValidationError("--eta0", e.what());
    }
  }
  try {
    sf->config.validate();
  } catch (const Error& e) {
    throw ValidationError("config", e.what());
  }
  return Inputs{std::move(*sf), std::move(*lat)};
}

void emit(const Options& o, const std::string& text, std::ostream& out) {
  if (o.output_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.output_path, std::ios::binary);
  if (!f) throw ValidationError(o.output_path, "cannot write file");
  f << text;
}

int cmd_delta(const Options& o, std::ostream& out, std::ostream& err) {
  const Inputs in = load(o);
  const DeltaResult d = delta_m(in.lattice, in.scenario.scenario, in.scenario.config.vector_budget);
  emit(o, delta_to_json(d), out);
  if (!d.complete) {
    err << "warning: vector budget exceeded; delta_M is only an upper bound\n";
    return kBudgetExceeded;
  }
  return kOk;
}

int cmd_drive(const Options& o, std::ostream& out, std::ostream&) {
  const Inputs in = load(o);
  const PushoutCertificate cert = drive(in.lattice, in.scenario.scenario, in.scenario.config);
  emit(o, o.format == "csv" ? certificate_to_csv(cert) : certificate_to_json(cert, in.scenario.scenario), out);
  switch (cert.terminated) {
    case Termination::ReachedEta0: return kOk;
    case Termination::MaxSteps: return kMaxSteps;
    default: return kIncompleteSearch;
  }
}

int cmd_oracle(const Options& o, std::ostream& out, std::ostream&) {
  const Inputs in = load(o);
  if (in.lattice.dimension() > 5) throw ValidationError("dimension", "the oracle is limited to N <= 5");
  const DeltaResult fast = delta_m(in.lattice, in.scenario.scenario, in.scenario.config.vector_budget);
  const DeltaResult slow = oracle_delta_m(in.lattice, in.scenario.scenario, o.hnf_bound);
  const bool agree = fast.complete && fast.delta_sq_pow == slow.delta_sq_pow && fast.witness == slow.witness;
  nlohmann::ordered_json j;
  j["delta_m"] = nlohmann::ordered_json::parse(delta_to_json(fast));
  j["oracle"] = nlohmann::ordered_json::parse(delta_to_json(slow));
  j["hnf_bound"] = o.hnf_bound;
  j["verdict"] = agree ? "AGREE" : "DISAGREE";
  emit(o, j.dump(2) + "\n", out);
  if (!fast.complete) return kBudgetExceeded;
  return agree ? kOk : kDisagree;
}

int cmd_shortvec(const Options& o, std::ostream& out, std::ostream&) {
  const Inputs in = load(o);
  Rational bound;
  try {
    bound = parse_rational(o.bound);
  } catch (const std::exception& e) {
    throw ValidationError("--bound", e.what());
  }
  const auto vecs = short_vectors(in.lattice, bound, in.scenario.config.vector_budget);
  nlohmann::ordered_json j;
  j["bound_sq"] = to_string(bound);
  j["shortest_sq"] = to_string(shortest_vector_sq(in.lattice));
  auto arr = nlohmann::ordered_json::array();
  for (const auto& v : vecs) {
    nlohmann::ordered_json e;
    auto c = nlohmann::ordered_json::array();
    for (const auto& x : v.coords) c.push_back(to_string(x));
    e["coords"] = std::move(c);
    e["norm_sq"] = to_string(v.norm_sq);
    arr.push_back(std::move(e));
  }
  j["vectors"] = std::move(arr);
  emit(o, j.dump(2) + "\n", out);
  return kOk;
}

}  // namespace

UnimodularLattice random_lattice(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::uniform_int_distribution<long> num(-4, 4), den(1, 4);
  RatMatrix b = RatMatrix::identity(n);
  for (std::size_t k = 0; k < 2 * n; ++k) {
    const std::size_t i = pick(rng), j = pick(rng);
    if (i == j) continue;
    const Rational r = make_rational(Integer(num(rng)), Integer(den(rng)));
    for (std::size_t c = 0; c < n; ++c) b(i, c) += r * b(j, c);
  }
  return UnimodularLattice(std::move(b));
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact delta_M computation and push-out driver for unimodular lattices", "nondiv"};
  app.require_subcommand(1);
  Options o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--scenario", o.scenario_path, "Scenario JSON (default: trivial M, diagonal torus)");
    sub->add_option("--lattice", o.lattice_path, "Lattice JSON");
    sub->add_option("--output", o.output_path, "Write the result here instead of stdout");
    sub->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", o.seed, "Random lattice seed, used when --lattice is absent");
    sub->add_option("--vector-budget", o.vector_budget, "Enumeration cap");
  };
  auto* delta = app.add_subcommand("delta", "Compute delta_M with a witness");
  auto* drv = app.add_subcommand("drive", "Push the lattice until delta_M >= eta0");
  auto* oracle = app.add_subcommand("oracle", "Cross-check delta_M against brute force (N <= 5)");
  auto* sv = app.add_subcommand("shortvec", "List short lattice vectors");
  for (auto* s : {delta, drv, oracle, sv}) add_common(s);
  drv->add_option("--max-steps", o.max_steps, "Step cap");
  drv->add_option("--eta0", o.eta0, "eta0 override, p/q");
  oracle->add_option("--hnf-bound", o.hnf_bound, "Entry bound of the brute-force HNF search");
  sv->add_option("--bound", o.bound, "Squared length bound, p/q");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  }

  try {
    if (*delta) return cmd_delta(o, out, err);
    if (*drv) return cmd_drive(o, out, err);
    if (*oracle) return cmd_oracle(o, out, err);
    return cmd_shortvec(o, out, err);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kBudgetExceeded;
  } catch (const IncompleteSearch& e) {
    err << "error: " << e.what() << "\n";
    return kIncompleteSearch;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
}

}  // namespace nondiv::cli
