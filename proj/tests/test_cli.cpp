#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

struct CommandResult {
  int exit_code = -1;
  std::string stdout_text;
};

CommandResult run_cli(const std::string& args) {
  std::string cmd = std::string(CAQC_LAB_BIN) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CommandResult res;
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) {
    res.stdout_text.append(buf, got);
  }
  int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("classify emits the documented JSON") {
  CommandResult res = run_cli("cqca classify --rule cluster --n 8");
  REQUIRE(res.exit_code == 0);
  nlohmann::json j = nlohmann::json::parse(res.stdout_text);
  CHECK(j["simple"] == true);
  CHECK(j["entangling"] == true);
  CHECK(j["kind"] == "glider");

  res = run_cli("cqca classify --rule fractal-cluster --n 8");
  REQUIRE(res.exit_code == 0);
  j = nlohmann::json::parse(res.stdout_text);
  CHECK(j["kind"] == "fractal");
  CHECK(j["simple"] == false);
}

TEST_CASE("rules load from JSON files") {
  std::ofstream rule("/tmp/caqc_cli_rule.json");
  rule << R"({"name": "my-cluster",
              "x_image": {"phase": 0, "letters": {"-1": "X", "0": "Z", "1": "X"}},
              "z_image": {"phase": 0, "letters": {"0": "X"}}})";
  rule.close();
  CommandResult res =
      run_cli("cqca classify --rule /tmp/caqc_cli_rule.json --n 6");
  REQUIRE(res.exit_code == 0);
  nlohmann::json j = nlohmann::json::parse(res.stdout_text);
  CHECK(j["rule"] == "my-cluster");
  CHECK(j["kind"] == "glider");

  CHECK(run_cli("cqca classify --rule /no/such/file --n 6").exit_code == 1);
}

TEST_CASE("period and lemma2 subcommands") {
  CommandResult res = run_cli("cqca period --rule periodic-cluster --n 6");
  REQUIRE(res.exit_code == 0);
  CHECK(nlohmann::json::parse(res.stdout_text)["period"] == 2);

  res = run_cli("cqca lemma2 --rule fractal-cluster --n 9");
  REQUIRE(res.exit_code == 0);
  nlohmann::json j = nlohmann::json::parse(res.stdout_text);
  CHECK(j["m"] == 1);
  CHECK(j["alpha"][0] == 1);
  CHECK(j["beta"] == 1);

  // period cap exceeded surfaces as a domain error
  res = run_cli("cqca period --rule fractal-cluster --n 9");
  CHECK(res.exit_code == 1);
}

TEST_CASE("compile emits the program schema") {
  CommandResult res = run_cli("compile --rule cluster --n 3 --blocks 1");
  REQUIRE(res.exit_code == 0);
  nlohmann::json j = nlohmann::json::parse(res.stdout_text);
  CHECK(j["n"] == 3);
  CHECK(j["rule"] == "cluster");
  CHECK(j["rotations"].size() == j["param_count"].get<size_t>());
  CHECK(j["rotations"][0].contains("generator"));
  CHECK(j["rotations"][0].contains("param"));
}

TEST_CASE("mbqc run reports theorem-2 fidelity and byproducts") {
  CommandResult res = run_cli(
      "--seed 5 mbqc run --rule cluster --n 2 --depth 2 --angles random:9");
  REQUIRE(res.exit_code == 0);
  nlohmann::json j = nlohmann::json::parse(res.stdout_text);
  CHECK(j["fidelity_vs_theorem2"].get<double>() >= 1.0 - 1e-9);
  CHECK(j["outcomes"].size() == 2);

  res = run_cli(
      "--seed 5 mbqc run --rule cluster --n 2 --depth 2 --angles random:9 "
      "--uncorrected");
  REQUIRE(res.exit_code == 0);
  j = nlohmann::json::parse(res.stdout_text);
  CHECK(j["fidelity_vs_theorem2"].get<double>() >= 1.0 - 1e-9);
  CHECK(j.contains("byproduct_tail"));
}

TEST_CASE("resource build and the GHZ redirect") {
  CommandResult res = run_cli("resource build --rule cluster --n 2 --depth 2");
  REQUIRE(res.exit_code == 0);
  nlohmann::json j = nlohmann::json::parse(res.stdout_text);
  CHECK(j["generators"].size() == 6);
  CHECK(j["graph"].is_object());

  // rules fixing Z are redirected with a domain error
  res = run_cli("resource build --rule periodic-cluster --n 4 --depth 2");
  CHECK(res.exit_code == 1);

  // the dedicated builder and the extended construction succeed
  res = run_cli("resource build --rule periodic-cluster --n 4 --depth 2 --ghz");
  CHECK(res.exit_code == 0);
  res = run_cli(
      "resource build --rule periodic-cluster --n 2 --depth 2 --extended");
  CHECK(res.exit_code == 0);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("cqca").exit_code == 2);
  CHECK(run_cli("no-such-command").exit_code == 2);
  CHECK(run_cli("cqca classify").exit_code == 2);  // missing --n
}

TEST_CASE("identical command and seed give byte-identical outputs") {
  std::string dir1 = "/tmp/caqc_cli_test_a";
  std::string dir2 = "/tmp/caqc_cli_test_b";
  [[maybe_unused]] int rc = std::system(("rm -rf " + dir1 + " " + dir2).c_str());
  std::string args =
      " --seed 7 mbqc run --rule cluster --n 2 --depth 2 --angles random:3";
  CHECK(run_cli("--out-dir " + dir1 + args).exit_code == 0);
  CHECK(run_cli("--out-dir " + dir2 + args).exit_code == 0);
  CHECK(slurp(dir1 + "/mbqc.json") == slurp(dir2 + "/mbqc.json"));
  CHECK(!slurp(dir1 + "/mbqc.json").empty());
  nlohmann::json manifest = nlohmann::json::parse(slurp(dir1 + "/manifest.json"));
  CHECK(manifest["seed"] == 7);
  CHECK(manifest.contains("command"));
  CHECK(manifest.contains("version"));
}

TEST_CASE("pqc label and train round-trip") {
  std::string dir = "/tmp/caqc_cli_test_pqc";
  [[maybe_unused]] int rc = std::system(("rm -rf " + dir).c_str());
  CommandResult res = run_cli("--out-dir " + dir +
                              " --seed 3 pqc label --rule cluster --n 2 "
                              "--depth 2 --samples 10");
  REQUIRE(res.exit_code == 0);
  nlohmann::json ds = nlohmann::json::parse(res.stdout_text);
  CHECK(ds["inputs"].size() == 10);
  CHECK(ds["labels"].size() == 10);

  res = run_cli("--seed 4 pqc train --rule cluster --n 2 --depth 2 --data " +
                dir + "/dataset.json --epochs 3");
  REQUIRE(res.exit_code == 0);
  nlohmann::json log = nlohmann::json::parse(res.stdout_text);
  CHECK(log["epoch_loss"].size() == 4);
  CHECK(log["final_loss"].is_number());
}

TEST_CASE("pqc experiment with a config file") {
  std::string dir = "/tmp/caqc_cli_test_exp";
  [[maybe_unused]] int rc = std::system(("rm -rf " + dir).c_str());
  std::ofstream cfg("/tmp/caqc_cli_exp_config.json");
  cfg << R"({"rules": ["cluster"], "n": 2, "depth": 2, "samples": 8,
             "seeds": [0], "restarts": 1, "stage_epochs": 5,
             "refine_epochs": 0, "polish_epochs": 0,
             "optimizer": {"epochs": 5, "threads": 2}})";
  cfg.close();
  CommandResult res = run_cli("--out-dir " + dir +
                              " pqc experiment --config "
                              "/tmp/caqc_cli_exp_config.json");
  REQUIRE(res.exit_code == 0);
  nlohmann::json summary = nlohmann::json::parse(res.stdout_text);
  CHECK(summary["grid"].size() == 1);
  std::string csv = slurp(dir + "/results.csv");
  CHECK(csv.rfind("labeler,learner,seed,epoch,loss", 0) == 0);
  CHECK(!slurp(dir + "/summary.json").empty());
}

TEST_CASE("text format resource output renders the lattice") {
  CommandResult res =
      run_cli("--format text resource build --rule cluster --n 2 --depth 1");
  REQUIRE(res.exit_code == 0);
  CHECK(res.stdout_text.find("generator 1") != std::string::npos);
  CHECK(res.stdout_text.find("graph resource {") != std::string::npos);
}
