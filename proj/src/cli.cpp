#include "margo/cli.hpp"

#include "margo/amalgam.hpp"
#include "margo/error.hpp"
#include "margo/generate.hpp"
#include "margo/oracle.hpp"
#include "margo/positive.hpp"
#include "margo/signed.hpp"
#include "margo/square.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <future>
#include <iostream>
#include <iterator>
#include <sstream>

namespace margo::cli {

using io::Json;
using io::Node;

namespace {

constexpr long long kVersion = 1;

const std::vector<std::string> kKinds = {"consistency",     "signed",        "positive",    "bounded",
                                         "amalgamate-maps", "amalgamate-l1", "close-square"};
const std::vector<std::string> kFamilyKinds = {"consistency", "signed", "positive", "bounded"};

struct Options {
  std::string input = "-";
  std::string output = "-";
  bool check = false;
  bool oracle = false;
  std::size_t oracle_cap = 12;
  bool via_variation = false;
  std::uint64_t seed = 0;
  std::string kind = "positive";
};

struct Outcome {
  int code = kSolved;
  Json body;
};

class Checks {
 public:
  void add(const std::string& name, bool ok) {
    body_[name] = ok ? "pass" : "fail";
    ok_ = ok_ && ok;
  }
  bool ok() const { return ok_; }
  const Json& json() const { return body_; }

 private:
  Json body_ = Json::object();
  bool ok_ = true;
};

// Marks the outcome as an invariant violation when a recomputed check fails.
void attach(Outcome& outcome, const Checks& checks) {
  outcome.body["checks"] = checks.json();
  if (!checks.ok()) outcome.code = kInvariantViolation;
}

Json begin(const std::string& command, const std::string& status) {
  Json out = Json::object();
  out["command"] = command;
  out["status"] = status;
  return out;
}

Json load(const std::string& path) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open input file \"" + path + "\"");
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  return io::parse(text);
}

// Validates the envelope and returns the kind.
std::string envelope(const Node& root, const std::string& command, const std::vector<std::string>& accepted) {
  root.object();
  Node version = root.at("version");
  if (version.integer() != kVersion) version.fail("unsupported version " + std::to_string(version.integer()));
  Node kind_node = root.at("kind");
  std::string kind = kind_node.string();
  if (std::find(kKinds.begin(), kKinds.end(), kind) == kKinds.end()) kind_node.fail("unknown kind \"" + kind + "\"");
  if (std::find(accepted.begin(), accepted.end(), kind) == accepted.end()) {
    kind_node.fail("kind \"" + kind + "\" cannot be used with " + command);
  }
  return kind;
}

Json violations_json(const std::vector<Violation>& violations) {
  Json out = Json::array();
  for (const auto& v : violations) {
    Json entry = Json::object();
    entry["members"] = {v.first, v.second};
    entry["overlap"] = v.overlap.indices();
    entry["atom"] = v.atom_label;
    entry["masses"] = {to_string(v.first_mass), to_string(v.second_mass)};
    out.push_back(std::move(entry));
  }
  return out;
}

Json measure_with_space(const Measure& m) {
  Json out = Json::object();
  out["space"] = io::write_space(m.space().only_space());
  out["weights"] = io::write_weights(m);
  return out;
}

bool matches_marginals(const MarginalFamily& family, const Measure& joint) {
  return std::all_of(family.members().begin(), family.members().end(),
                     [&](const Member& m) { return marginalize(joint, m.coords) == m.measure; });
}

bool within(const Measure& lower, const Measure& x, const std::optional<Measure>& upper) {
  for (std::size_t a = 0; a < x.size(); ++a) {
    if (x[a] < lower[a] || (upper && x[a] > (*upper)[a])) return false;
  }
  return true;
}

// ---------------------------------------------------------------- oracle

class OracleRun {
 public:
  OracleRun(const Options& opts, const MarginalFamily& family, const Measure& lower, const std::optional<Measure>& upper)
      : columns_(oracle::column_count(family, upper)), cap_(opts.oracle_cap) {
    if (!opts.oracle) return;
    requested_ = true;
    if (columns_ > cap_) return;
    result_ = std::async(std::launch::async, [family, lower, upper] {
      return oracle::bounded_feasible(family, lower, upper);
    });
  }

  // Adds the oracle report; a disagreement is an invariant violation.
  void finish(Outcome& outcome, bool feasible) {
    if (!requested_) return;
    Json report = Json::object();
    report["columns"] = columns_;
    report["cap"] = cap_;
    if (!result_.valid()) {
      report["status"] = "skipped";
    } else {
      bool agrees = result_.get() == feasible;
      report["status"] = agrees ? "agree" : "disagree";
      if (!agrees) outcome.code = kInvariantViolation;
    }
    outcome.body["oracle"] = std::move(report);
  }

 private:
  std::size_t columns_;
  std::size_t cap_;
  bool requested_ = false;
  std::future<bool> result_;
};

// ---------------------------------------------------------------- family commands

Outcome inconsistent(const std::string& command, const MarginalFamily& family,
                     const std::vector<Violation>& violations, const Options& opts) {
  Outcome out{kNegative, begin(command, "inconsistent")};
  out.body["violations"] = violations_json(violations);
  DualCertificate cert = certificate_from_violation(family, violations.front());
  out.body["certificate"] = io::write_certificate(cert);
  if (opts.check) {
    Checks checks;
    checks.add("certificate_violates_dual",
               verify_certificate(cert, family, Measure::zero(family.index_set()), std::nullopt));
    attach(out, checks);
  }
  return out;
}

Outcome check_consistency(const Node& root, const Options& opts) {
  envelope(root, "check-consistency", kFamilyKinds);
  MarginalFamily family = io::read_family(root.at("family"));
  auto violations = check_pairwise_consistency(family);
  if (!violations.empty()) return inconsistent("check-consistency", family, violations, opts);
  return Outcome{kSolved, begin("check-consistency", "consistent")};
}

SignedOptions read_references(const Node& root, const MarginalFamily& family) {
  SignedOptions options;
  if (!root.has("references")) return options;
  Node refs = root.at("references");
  const Json& obj = refs.object();
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    Node entry = refs.at(it.key());
    Coord c = 0;
    try {
      std::size_t used = 0;
      c = std::stoi(it.key(), &used);
      if (used != it.key().size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      entry.fail("reference keys must be coordinates");
    }
    if (!family.index_set().has(c)) entry.fail("coordinate " + it.key() + " is not in index_set");
    options.references.emplace(c, io::read_weights(entry, ProductSpace::single(c, family.index_set().space(c))));
  }
  return options;
}

Outcome solve_signed_cmd(const Node& root, const Options& opts) {
  envelope(root, "solve-signed", kFamilyKinds);
  MarginalFamily family = io::read_family(root.at("family"));
  SignedOptions options = read_references(root, family);
  auto violations = check_pairwise_consistency(family);
  if (!violations.empty()) return inconsistent("solve-signed", family, violations, opts);
  Measure nu = solve_signed(family, options);
  Outcome out{kSolved, begin("solve-signed", "solved")};
  out.body["measure"] = io::write_measure(nu);
  if (opts.check) {
    Checks checks;
    checks.add("marginals", matches_marginals(family, nu));
    attach(out, checks);
  }
  return out;
}

Outcome report_verdict(const std::string& command, const Verdict& verdict, const MarginalFamily& family,
                       const Measure& lower, const std::optional<Measure>& upper, const Options& opts,
                       OracleRun& oracle_run) {
  Outcome out;
  Checks checks;
  if (const auto* feasible = std::get_if<Feasible>(&verdict)) {
    out = Outcome{kSolved, begin(command, "feasible")};
    out.body["measure"] = io::write_measure(feasible->measure);
    checks.add("marginals", matches_marginals(family, feasible->measure));
    checks.add("bounds", within(lower, feasible->measure, upper));
  } else {
    const DualCertificate& cert = std::get<Infeasible>(verdict).certificate;
    out = Outcome{kNegative, begin(command, "infeasible")};
    out.body["certificate"] = io::write_certificate(cert);
    CertificateSides sides = evaluate_certificate(cert.functions, family, lower, upper);
    checks.add("certificate_violates_dual", verify_certificate(cert, family, lower, upper));
    checks.add("certificate_sides", sides.lhs == cert.lhs && sides.rhs && *sides.rhs == cert.rhs);
  }
  if (opts.check) attach(out, checks);
  oracle_run.finish(out, is_feasible(verdict));
  return out;
}

Outcome solve_positive_cmd(const Node& root, const Options& opts) {
  envelope(root, "solve-positive", kFamilyKinds);
  MarginalFamily family = io::read_family(root.at("family"));
  Measure lower = Measure::zero(family.index_set());
  OracleRun oracle_run(opts, family, lower, std::nullopt);
  Verdict verdict = opts.via_variation ? solve_positive_via_variation(family) : solve_positive(family);
  return report_verdict("solve-positive", verdict, family, lower, std::nullopt, opts, oracle_run);
}

struct Bounds {
  Measure lower;
  std::optional<Measure> upper;
};

Bounds read_bounds(const Node& root, const MarginalFamily& family) {
  const ProductSpace& joint = family.index_set();
  Bounds b{root.has("lower") ? io::read_weights(root.at("lower"), joint) : Measure::zero(joint), std::nullopt};
  if (root.has("upper")) b.upper = io::read_weights(root.at("upper"), joint);
  return b;
}

Outcome solve_bounded_cmd(const Node& root, const Options& opts) {
  envelope(root, "solve-bounded", kFamilyKinds);
  MarginalFamily family = io::read_family(root.at("family"));
  Bounds b = read_bounds(root, family);
  OracleRun oracle_run(opts, family, b.lower, b.upper);
  Verdict verdict = solve_bounded(family, b.lower, b.upper);
  return report_verdict("solve-bounded", verdict, family, b.lower, b.upper, opts, oracle_run);
}

Outcome verify_certificate_cmd(const Node& root, const Options&) {
  envelope(root, "verify-certificate", kFamilyKinds);
  MarginalFamily family = io::read_family(root.at("family"));
  Bounds b = read_bounds(root, family);
  auto functions = io::read_certificate(root.at("certificate"), family);
  CertificateSides sides = evaluate_certificate(functions, family, b.lower, b.upper);
  bool violated = sides.violated();
  Outcome out{violated ? kSolved : kNegative, begin("verify-certificate", violated ? "valid" : "invalid")};
  out.body["lhs"] = to_string(sides.lhs);
  out.body["rhs"] = sides.rhs ? Json(to_string(*sides.rhs)) : Json(nullptr);
  return out;
}

// ---------------------------------------------------------------- constructions

Outcome amalgamate_maps_cmd(const Node& root, const Options&) {
  envelope(root, "amalgamate-maps", {"amalgamate-maps"});
  Measure nu0 = io::read_measure(root.at("nu0"));
  Measure nu1 = io::read_measure(root.at("nu1"));
  Measure nu2 = io::read_measure(root.at("nu2"));
  std::vector<FiniteSpace> known{nu0.space().only_space(), nu1.space().only_space(), nu2.space().only_space()};
  AtomMap f1 = io::read_map(root.at("f1"), known);
  AtomMap f2 = io::read_map(root.at("f2"), known);
  AmalgamResult r = amalgamate_maps(nu0, nu1, nu2, f1, f2);

  Outcome out{kSolved, begin("amalgamate-maps", "constructed")};
  out.body["space3"] = io::write_space(r.space3);
  out.body["nu3"] = Json{{"weights", io::write_weights(r.nu3)}};
  out.body["g1"] = io::write_map(r.g1);
  out.body["g2"] = io::write_map(r.g2);
  out.body["full_joint"] = io::write_measure(r.full_joint);

  Checks checks;
  checks.add("g1_measure_preserving", bool(is_measure_preserving(r.g1, r.nu3, nu1)));
  checks.add("g2_measure_preserving", bool(is_measure_preserving(r.g2, r.nu3, nu2)));
  checks.add("commutes", compose(f1, r.g1) == compose(f2, r.g2));
  bool off_fiber_zero = true;
  Rational fiber_mass;
  const ProductSpace& joint = r.full_joint.space();
  for (std::size_t a = 0; a < joint.size(); ++a) {
    auto t = joint.decode(a);
    if (f1(t[1]) == t[0] && f2(t[2]) == t[0]) {
      fiber_mass += r.full_joint[a];
    } else if (sgn(r.full_joint[a]) != 0) {
      off_fiber_zero = false;
    }
  }
  checks.add("joint_vanishes_off_fiber", off_fiber_zero && fiber_mass == r.nu3.total_mass());
  attach(out, checks);
  return out;
}

Json blocks_json(const std::vector<Block>& blocks) {
  Json out = Json::array();
  for (const auto& b : blocks) out.push_back(Json{{"name", b.name}, {"offset", b.offset}, {"size", b.size}});
  return out;
}

Outcome amalgamate_l1_cmd(const Node& root, const Options&) {
  envelope(root, "amalgamate-l1", {"amalgamate-l1"});
  AtomicL1 x0 = io::read_lattice(root.at("x0"));
  AtomicL1 x1 = io::read_lattice(root.at("x1"));
  AtomicL1 x2 = io::read_lattice(root.at("x2"));
  LatticeMap u1 = io::read_lattice_map(root.at("u1"), x0, x1);
  LatticeMap u2 = io::read_lattice_map(root.at("u2"), x0, x2);
  L1AmalgamResult r = amalgamate_l1(u1, u2);

  Outcome out{kSolved, begin("amalgamate-l1", "constructed")};
  out.body["target"] = io::write_lattice(r.target);
  out.body["v1"] = io::write_matrix(r.v1.matrix());
  out.body["v2"] = io::write_matrix(r.v2.matrix());
  out.body["blocks"] = blocks_json(r.blocks);
  out.body["scale"] = to_string(r.scale);
  out.body["glue"] = Json{{"space3", io::write_space(r.glue.space3)}, {"nu3", io::write_weights(r.glue.nu3)}};

  Checks checks;
  checks.add("commutes", r.v1.matrix() * u1.matrix() == r.v2.matrix() * u2.matrix());
  checks.add("v1_isometric_embedding", bool(is_isometric_embedding(r.v1)));
  checks.add("v2_isometric_embedding", bool(is_isometric_embedding(r.v2)));
  Rational leftover;
  for (std::size_t k = r.blocks[0].size; k < r.target.dim(); ++k) leftover += r.target.weights()[k];
  checks.add("mass_decomposition", r.target.total_mass() == r.glue.nu3.total_mass() / r.scale + leftover);
  attach(out, checks);
  return out;
}

Outcome close_square_cmd(const Node& root, const Options&) {
  envelope(root, "close-square", {"close-square"});
  AtomicL1 x0 = io::read_lattice(root.at("x0"));
  AtomicL1 x1 = io::read_lattice(root.at("x1"));
  AtomicL1 x2 = io::read_lattice(root.at("x2"));
  LatticeMap t1 = io::read_lattice_map(root.at("t1"), x0, x1);
  LatticeMap t2 = io::read_lattice_map(root.at("t2"), x0, x2);
  Vector witness = io::read_vector(root.at("witness"), x1);
  SquareClosure r = close_square(t1, t2, witness);

  Outcome out{kSolved, begin("close-square", "constructed")};
  out.body["degenerate"] = r.degenerate;
  out.body["target"] = io::write_lattice(r.target);
  out.body["s1"] = io::write_matrix(r.s1.matrix());
  out.body["s2"] = io::write_matrix(r.s2.matrix());
  out.body["blocks"] = blocks_json(r.amalgam.blocks);
  out.body["functionals"] = Json{{"x0", io::write_vector(x0, r.x0.coeffs())},
                                 {"x1", io::write_vector(x1, r.x1.coeffs())},
                                 {"x2", io::write_vector(x2, r.x2.coeffs())}};

  Checks checks;
  checks.add("commutes", r.s1.matrix() * t1.matrix() == r.s2.matrix() * t2.matrix());
  checks.add("s1_contraction", operator_norm(r.s1) <= 1);
  checks.add("s2_contraction", operator_norm(r.s2) <= 1);
  checks.add("witness_norm_preserved", norm(r.target, r.s1(witness)) == norm(x1, witness));
  attach(out, checks);
  return out;
}

// ---------------------------------------------------------------- generate

Json envelope_json(const std::string& kind) { return Json{{"version", kVersion}, {"kind", kind}}; }

Json family_instance(const std::string& kind, const MarginalFamily& family) {
  Json out = envelope_json(kind);
  out["family"] = io::write_family(family);
  return out;
}

Json map_by_name(const AtomMap& f) {
  Json image = Json::object();
  for (std::size_t a = 0; a < f.source().size(); ++a) image[f.source().label(a)] = f.target().label(f(a));
  return Json{{"source", f.source().name()}, {"target", f.target().name()}, {"image", std::move(image)}};
}

}  // namespace

const std::vector<std::string>& generator_kinds() {
  static const std::vector<std::string> kinds = {"consistent", "inconsistent", "decomposable", "positive",
                                                 "anticorrelated", "bounded", "maps", "l1", "square"};
  return kinds;
}

Json generate_instance(const std::string& kind, std::uint64_t seed) {
  gen::Rng rng(seed);
  if (kind == "consistent") return family_instance("signed", gen::consistent_signed_family(rng));
  if (kind == "inconsistent") return family_instance("consistency", gen::inconsistent_family(rng));
  if (kind == "decomposable") return family_instance("positive", gen::decomposable_family(rng));
  if (kind == "positive") return family_instance("positive", gen::random_positive_family(rng));
  if (kind == "anticorrelated") return family_instance("positive", gen::anticorrelated_family());
  if (kind == "bounded") {
    MarginalFamily family = gen::random_positive_family(rng);
    Json out = family_instance("bounded", family);
    out["upper"] = Json{{"weights", io::write_weights(gen::random_positive_measure(rng, family.index_set()))}};
    return out;
  }
  if (kind == "maps") {
    gen::Cospan c = gen::random_cospan(rng);
    Json out = envelope_json("amalgamate-maps");
    out["nu0"] = measure_with_space(c.nu0);
    out["nu1"] = measure_with_space(c.nu1);
    out["nu2"] = measure_with_space(c.nu2);
    out["f1"] = map_by_name(c.f1);
    out["f2"] = map_by_name(c.f2);
    return out;
  }
  if (kind == "l1") {
    AtomicL1 x0 = gen::random_lattice(rng, 3, "p");
    LatticeMap u1 = gen::random_embedding(rng, x0, 6, "a");
    LatticeMap u2 = gen::random_embedding(rng, x0, 6, "b");
    Json out = envelope_json("amalgamate-l1");
    out["x0"] = io::write_lattice(x0);
    out["x1"] = io::write_lattice(u1.target());
    out["x2"] = io::write_lattice(u2.target());
    out["u1"] = io::write_matrix(u1.matrix());
    out["u2"] = io::write_matrix(u2.matrix());
    return out;
  }
  if (kind == "square") {
    gen::SquareInstance s = gen::random_square(rng);
    Json out = envelope_json("close-square");
    out["x0"] = io::write_lattice(s.t1.source());
    out["x1"] = io::write_lattice(s.t1.target());
    out["x2"] = io::write_lattice(s.t2.target());
    out["t1"] = io::write_matrix(s.t1.matrix());
    out["t2"] = io::write_matrix(s.t2.matrix());
    out["witness"] = io::write_vector(s.t1.target(), s.x1);
    return out;
  }
  throw SchemaError("unknown generator kind \"" + kind + "\"");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact marginal problems and L1 amalgamation", "margo"};
  app.require_subcommand(1);
  Options opts;

  using Handler = Outcome (*)(const Node&, const Options&);
  std::vector<std::pair<CLI::App*, Handler>> commands;
  auto add = [&](const std::string& name, const std::string& about, Handler handler) {
    CLI::App* sub = app.add_subcommand(name, about);
    sub->add_option("--input", opts.input, "instance file, - for stdin")->required();
    sub->add_option("--output", opts.output, "result file, - for stdout");
    sub->add_flag("--check", opts.check, "recompute every invariant on the result");
    commands.emplace_back(sub, handler);
    return sub;
  };
  add("check-consistency", "pairwise consistency of a marginal family", check_consistency);
  add("solve-signed", "signed joint measure by inclusion-exclusion", solve_signed_cmd);
  for (auto* sub : {add("solve-positive", "positive joint measure or dual certificate", solve_positive_cmd),
                    add("solve-bounded", "joint measure between bounds or dual certificate", solve_bounded_cmd)}) {
    sub->add_flag("--oracle", opts.oracle, "cross-check against exhaustive feasibility");
    sub->add_option("--oracle-cap", opts.oracle_cap, "largest LP column count the oracle will attempt");
  }
  commands[2].first->add_flag("--via-variation", opts.via_variation,
                              "bound by the variation of the signed solution before solving");
  add("verify-certificate", "evaluate a dual certificate against a family", verify_certificate_cmd);
  add("amalgamate-maps", "coupling space over two measure-preserving maps", amalgamate_maps_cmd);
  add("amalgamate-l1", "amalgam of two isometric lattice embeddings", amalgamate_l1_cmd);
  add("close-square", "close a contraction / embedding square", close_square_cmd);

  CLI::App* generate = app.add_subcommand("generate", "emit a random instance file");
  generate->add_option("--kind", opts.kind, "instance family")->check(CLI::IsMember(generator_kinds()));
  generate->add_option("--seed", opts.seed, "random seed");
  generate->add_option("--output", opts.output, "result file, - for stdout");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kSolved : kInputError;
  }

  Outcome outcome;
  try {
    if (generate->parsed()) {
      outcome = Outcome{kSolved, generate_instance(opts.kind, opts.seed)};
    } else {
      Json doc = load(opts.input);
      Node root(doc);
      for (const auto& [sub, handler] : commands) {
        if (sub->parsed()) outcome = handler(root, opts);
      }
    }
  } catch (const InvariantViolation& e) {
    err << "invariant violation: " << e.what() << '\n';
    return kInvariantViolation;
  } catch (const ConsistencyError& e) {
    err << "invariant violation: " << e.what() << '\n';
    return kInvariantViolation;
  } catch (const Error& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInvariantViolation;
  }

  std::string text = outcome.body.dump(2) + "\n";
  if (opts.output == "-") {
    out << text;
  } else {
    std::ofstream file(opts.output);
    if (!file || !(file << text)) {
      err << "input error: cannot write \"" << opts.output << "\"\n";
      return kInputError;
    }
  }
  if (outcome.code == kInvariantViolation) err << "invariant violation: a recomputed check failed\n";
  return outcome.code;
}

}  // namespace margo::cli
