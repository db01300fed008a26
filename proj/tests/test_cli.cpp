#include "margo/cli.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using margo::io::Json;
namespace cli = margo::cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "margo_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string write(const std::string& name, const std::string& text) {
  auto path = scratch(name);
  std::ofstream(path) << text;
  return path.string();
}

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

Run run_on(const std::string& command, const Json& instance, std::vector<std::string> extra = {}) {
  std::string path = write(command + ".json", instance.dump());
  std::vector<std::string> args{command, "--input", path};
  args.insert(args.end(), extra.begin(), extra.end());
  return run(args);
}

const char* kSpace = R"({"name": "B", "atoms": ["0", "1"]})";

Json single_member() {
  return Json::parse(std::string(R"({"version": 1, "kind": "consistency", "family": {
    "index_set": [0, 1], "spaces": {"0": )") + kSpace + R"(, "1": )" + kSpace + R"(},
    "members": [{"coords": [0, 1], "measure": {"weights": {"0|0": "1/4", "1|1": "3/4"}}}]}})");
}

Json identity_maps() {
  std::string m = std::string(R"({"space": {"name": "X", "atoms": ["a", "b"]}, "weights": {"a": "1/2", "b": "1/2"}})");
  return Json::parse(R"({"version": 1, "kind": "amalgamate-maps", "nu0": )" + m + R"(, "nu1": )" + m +
                     R"(, "nu2": )" + m + R"(,
    "f1": {"source": "X", "target": "X", "image": {"a": "a", "b": "b"}},
    "f2": {"source": "X", "target": "X", "image": {"a": "a", "b": "b"}}})");
}

void all_pass(const Json& checks) {
  REQUIRE(checks.is_object());
  CHECK(!checks.empty());
  for (const auto& [name, value] : checks.items()) {
    CAPTURE(name);
    CHECK(value == "pass");
  }
}

}  // namespace

TEST_CASE("check-consistency") {
  Run r = run_on("check-consistency", single_member());
  CHECK(r.code == cli::kSolved);
  CHECK(r.json()["status"] == "consistent");

  Run bad = run_on("check-consistency", cli::generate_instance("inconsistent", 3));
  CHECK(bad.code == cli::kNegative);
  Json j = bad.json();
  CHECK(j["status"] == "inconsistent");
  CHECK(!j["violations"].empty());
}

TEST_CASE("solve-signed") {
  Run r = run_on("solve-signed", cli::generate_instance("anticorrelated", 0), {"--check"});
  REQUIRE(r.code == cli::kSolved);
  Json w = r.json()["measure"]["weights"];
  CHECK(w["0|0|0"] == "-1/4");
  CHECK(w["1|1|1"] == "-1/4");
  CHECK(w["0|1|0"] == "1/4");
  all_pass(r.json()["checks"]);
}

TEST_CASE("solve-positive on the anticorrelated family") {
  Json instance = cli::generate_instance("anticorrelated", 0);
  Run r = run_on("solve-positive", instance, {"--check", "--oracle"});
  REQUIRE(r.code == cli::kNegative);
  Json j = r.json();
  CHECK(j["status"] == "infeasible");
  CHECK(j["oracle"]["status"] == "agree");
  all_pass(j["checks"]);

  // the emitted certificate verifies through the separate subcommand
  instance["certificate"] = j["certificate"];
  Run v = run_on("verify-certificate", instance);
  CHECK(v.code == cli::kSolved);
  CHECK(v.json()["status"] == "valid");
  CHECK(v.json()["lhs"] == j["certificate"]["lhs"]);
}

TEST_CASE("verify-certificate with the reference certificate") {
  Json instance = cli::generate_instance("anticorrelated", 0);
  Json upper = Json::object();
  for (const char* atom : {"0|0|0", "0|0|1", "0|1|0", "0|1|1", "1|0|0", "1|0|1", "1|1|0", "1|1|1"}) {
    upper[atom] = "1/4";
  }
  instance["upper"] = {{"weights", upper}};
  instance["certificate"] = Json::parse(R"({"g": {
    "{0,1}": {"0|1": "1/1", "1|0": "1/1"},
    "{1,2}": {"0|1": "1/1", "1|0": "1/1"},
    "{0,2}": {"0|0": "-2/1", "1|1": "-2/1"}}})");
  Run v = run_on("verify-certificate", instance);
  CHECK(v.code == cli::kSolved);
  CHECK(v.json()["lhs"] == "2/1");
  CHECK(v.json()["rhs"] == "1/1");

  instance["certificate"] = Json::parse(R"({"g": {}})");
  v = run_on("verify-certificate", instance);
  CHECK(v.code == cli::kNegative);
  CHECK(v.json()["status"] == "invalid");

  instance["certificate"] = Json::parse(R"({"g": {"{0,1}": {"2|2": "1/1"}}})");
  CHECK(run_on("verify-certificate", instance).code == cli::kInputError);
  instance["certificate"] = Json::parse(R"({"g": {"{0}": {}}})");
  CHECK(run_on("verify-certificate", instance).code == cli::kInputError);

  Json plain = cli::generate_instance("anticorrelated", 0);
  plain["upper"] = instance["upper"];
  Run b = run_on("solve-bounded", plain, {"--check"});
  CHECK(b.code == cli::kNegative);
  all_pass(b.json()["checks"]);
}

TEST_CASE("amalgamate-maps --check on the identity") {
  Run r = run_on("amalgamate-maps", identity_maps(), {"--check"});
  REQUIRE(r.code == cli::kSolved);
  Json j = r.json();
  all_pass(j["checks"]);
  CHECK(j["space3"]["atoms"] == Json::parse(R"(["a|a|a", "b|b|b"])"));

  Json broken = identity_maps();
  broken["nu1"]["weights"] = {{"a", "1/4"}, {"b", "3/4"}};
  Run e = run_on("amalgamate-maps", broken);
  CHECK(e.code == cli::kInputError);
  CHECK(e.err.find("measure-preserving") != std::string::npos);
}

TEST_CASE("input errors") {
  std::string path = write("malformed.json", "{\"version\": 1,\n \"kind\": }");
  Run r = run({"check-consistency", "--input", path});
  CHECK(r.code == cli::kInputError);
  CHECK(r.err.find("byte") != std::string::npos);

  Json unknown = single_member();
  unknown["kind"] = "teleport";
  r = run_on("check-consistency", unknown);
  CHECK(r.code == cli::kInputError);
  CHECK(r.err.find("/kind") != std::string::npos);

  Json wrong = single_member();
  wrong["kind"] = "amalgamate-l1";
  CHECK(run_on("check-consistency", wrong).code == cli::kInputError);

  Json version = single_member();
  version["version"] = 2;
  CHECK(run_on("check-consistency", version).code == cli::kInputError);

  Json bad_rational = single_member();
  bad_rational["family"]["members"][0]["measure"]["weights"]["0|0"] = "0.25";
  r = run_on("check-consistency", bad_rational);
  CHECK(r.code == cli::kInputError);
  CHECK(r.err.find("/family/members/0/measure/weights/0|0") != std::string::npos);

  Json label = single_member();
  label["family"]["members"][0]["measure"]["weights"]["0|7"] = "1/4";
  CHECK(run_on("check-consistency", label).code == cli::kInputError);

  CHECK(run({"check-consistency"}).code == cli::kInputError);
  CHECK(run({"no-such-command", "--input", "x"}).code == cli::kInputError);
  CHECK(run({"check-consistency", "--input", scratch("missing.json").string()}).code == cli::kInputError);
  CHECK(run({"generate", "--kind", "nonsense"}).code == cli::kInputError);
}

TEST_CASE("output file") {
  auto target = scratch("result.json");
  std::filesystem::remove(target);
  std::string in = write("single.json", single_member().dump());
  Run r = run({"check-consistency", "--input", in, "--output", target.string()});
  CHECK(r.code == cli::kSolved);
  CHECK(r.out.empty());
  std::ifstream file(target);
  std::string text((std::istreambuf_iterator<char>(file)), {});
  CHECK(Json::parse(text)["status"] == "consistent");
}

TEST_CASE("generated instances run cleanly and deterministically") {
  const std::vector<std::pair<std::string, std::vector<std::string>>> commands{
      {"consistent", {"check-consistency", "solve-signed"}},
      {"inconsistent", {"check-consistency", "solve-positive"}},
      {"decomposable", {"solve-positive"}},
      {"positive", {"solve-positive"}},
      {"anticorrelated", {"solve-positive"}},
      {"bounded", {"solve-bounded"}},
      {"maps", {"amalgamate-maps"}},
      {"l1", {"amalgamate-l1"}},
      {"square", {"close-square"}},
  };
  CHECK(commands.size() == cli::generator_kinds().size());
  for (const auto& [kind, subcommands] : commands) {
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
      CAPTURE(kind);
      CAPTURE(seed);
      Run a = run({"generate", "--kind", kind, "--seed", std::to_string(seed)});
      Run b = run({"generate", "--kind", kind, "--seed", std::to_string(seed)});
      REQUIRE(a.code == cli::kSolved);
      CHECK(a.out == b.out);
      std::string path = write("gen.json", a.out);
      for (const auto& command : subcommands) {
        CAPTURE(command);
        std::vector<std::string> args{command, "--input", path, "--check"};
        if (command == "solve-positive" || command == "solve-bounded") args.push_back("--oracle");
        Run first = run(args);
        Run second = run(args);
        CHECK((first.code == cli::kSolved || first.code == cli::kNegative));
        CHECK(first.out == second.out);
        CHECK(first.err.empty());
      }
    }
  }
  CHECK(run({"generate", "--kind", "positive", "--seed", "1"}).out !=
        run({"generate", "--kind", "positive", "--seed", "2"}).out);
}
