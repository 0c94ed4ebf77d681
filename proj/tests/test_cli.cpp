#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "treespec/cli.hpp"

using namespace treespec::cli;
using nlohmann::json;

namespace {

const std::string kData = TREESPEC_TEST_DATA;

JobConfig job(std::string command, std::string input = "") {
  JobConfig cfg;
  cfg.command = std::move(command);
  if (!input.empty()) cfg.input_path = kData + "/" + input;
  return cfg;
}

int exit_status(const std::string& args) {
  const std::string cmd = std::string(TREESPEC_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

}  // namespace

TEST_CASE("csv quoting") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(2.0) == "2");
}

TEST_CASE("examples all pass") {
  JobConfig cfg = job("examples");
  cfg.format = "csv";
  const RunResult r = run(cfg);
  CHECK(r.exit_code == 0);
  std::istringstream lines(r.output);
  std::string line;
  std::getline(lines, line);
  CHECK(line.rfind("status,example,detail", 0) == 0);
  int n = 0;
  while (std::getline(lines, line)) {
    CHECK(line.rfind("PASS,", 0) == 0);
    ++n;
  }
  CHECK(n >= 4);
}

TEST_CASE("bands on the free chain is a single band") {
  JobConfig cfg = job("bands", "free_chain.json");
  cfg.emax = 40.0;
  cfg.format = "csv";
  const RunResult r = run(cfg);
  REQUIRE(r.exit_code == 0);
  CHECK(r.output == "lower,upper\r\n0,40\r\n");
}

TEST_CASE("compare reports PASS with the mismatch") {
  JobConfig cfg = job("compare", "standard_binary.json");
  cfg.emax = 100.0;
  const RunResult r = run(cfg);
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.output);
  CHECK(j.at("status") == "PASS");
  CHECK(j.at("max_mismatch").get<double>() < 1e-6);
  CHECK(j.at("tree_count") == 21);
}

TEST_CASE("output is deterministic across runs and thread counts") {
  JobConfig cfg = job("bands", "kronig_penney.json");
  cfg.emax = 100.0;
  cfg.threads = 1;
  const RunResult a = run(cfg);
  cfg.threads = 4;
  const RunResult b = run(cfg);
  const RunResult c = run(cfg);
  REQUIRE(a.exit_code == 0);
  CHECK(a.output == b.output);
  CHECK(b.output == c.output);

  JobConfig eigs = job("eigs-tree", "standard_binary.json");
  eigs.emax = 60.0;
  eigs.format = "csv";
  eigs.threads = 1;
  const RunResult e1 = run(eigs);
  eigs.threads = 3;
  CHECK(e1.output == run(eigs).output);
}

TEST_CASE("gen-seq output round-trips through check and reduce") {
  const RunResult gen = run(job("gen-seq", "power2_gamma.json"));
  REQUIRE(gen.exit_code == 0);
  const json tree = json::parse(gen.output);
  CHECK(tree.at("eventual_period").is_null());

  JobConfig check = job("check");
  check.input = tree;
  const RunResult r1 = run(check);
  const RunResult r2 = run(check);
  REQUIRE(r1.exit_code == 0);
  CHECK(r1.output == r2.output);
  const json report = json::parse(r1.output);
  CHECK(report.at("d").at("holds") == false);
  CHECK(report.at("c").at("holds") == true);

  // Feeding the emitted file back gives the same bytes as the in-memory spec.
  const std::string path = "gen_seq_roundtrip.json";
  std::ofstream(path) << gen.output;
  JobConfig reduce_mem = job("reduce");
  reduce_mem.input = tree;
  JobConfig reduce_file = job("reduce");
  reduce_file.input_path = path;
  const RunResult m = run(reduce_mem);
  const RunResult f = run(reduce_file);
  REQUIRE(m.exit_code == 0);
  CHECK(m.output == f.output);
  for (const json& row : json::parse(m.output).at("reduced")) {
    CHECK(std::abs(row.at("interface").at("c").at("re").get<double>()) < 1e-12);
  }
}

TEST_CASE("weyl and reflectionless") {
  JobConfig w = job("weyl", "free_chain.json");
  w.energy = 1.0;
  w.extrapolate = true;
  const json j = json::parse(run(w).output);
  CHECK(std::abs(j.at("m_plus").at("im").get<double>() - 1.0) < 1e-7);

  JobConfig r = job("reflectionless", "kronig_penney.json");
  r.emin = 1.0;
  r.emax = 9.0;
  r.grid = 5;
  const json d = json::parse(run(r).output);
  CHECK(d.at("samples").size() == 5);
  CHECK(d.at("samples")[1][1].get<double>() < 1e-5);
}

TEST_CASE("mathematical errors exit with 2 and carry the generation") {
  JobConfig cfg = job("reduce");
  cfg.input = json::parse(R"({"gaps": [1, 1, 1], "generations": [
      {"b": 2}, {"alpha": 6, "beta": -6, "b": 4}]})");
  const RunResult r = run(cfg);
  CHECK(r.exit_code == kExitMath);
  const json e = json::parse(r.error);
  CHECK(e.at("error") == "DegenerateDenominator");
  CHECK(e.at("generation") == 2);

  JobConfig t = job("transfer", "separating_interface.json");
  const RunResult tr = run(t);
  CHECK(tr.exit_code == kExitMath);
  CHECK(json::parse(tr.error).at("error") == "Decoupled");
}

TEST_CASE("validation errors exit with 1") {
  CHECK(run(job("bands", "kronig_penney.json")).exit_code == kExitValidation);  // no --emax
  CHECK(run(job("nonsense")).exit_code == kExitValidation);
  CHECK(run(job("check")).exit_code == kExitValidation);
  CHECK(run(job("check", "missing.json")).exit_code == kExitValidation);
  JobConfig bad = job("check");
  bad.input = json::parse(R"({"gaps": [1, 1], "generations": [{"b": 2, "eigenphases": [1, 2]}]})");
  const RunResult r = run(bad);
  CHECK(r.exit_code == kExitValidation);
  CHECK(json::parse(r.error).at("generation") == 1);
  JobConfig fmt = job("examples");
  fmt.format = "xml";
  CHECK(run(fmt).exit_code == kExitValidation);
}

TEST_CASE("executable exit codes") {
  CHECK(exit_status("examples") == 0);
  CHECK(exit_status("transfer --input " + kData + "/separating_interface.json") == 2);
  CHECK(exit_status("bands --input " + kData + "/kronig_penney.json") == 1);
  CHECK(exit_status("--command bands --input " + kData + "/kronig_penney.json --emax 20 --format csv") == 0);
  CHECK(exit_status("frobnicate") == 1);
  CHECK(exit_status("examples --threads 2") == 0);
}

TEST_CASE("thread count from the environment") {
  ::setenv("TREESPEC_THREADS", "2", 1);
  CHECK(run(job("examples")).exit_code == 0);
  ::setenv("TREESPEC_THREADS", "many", 1);
  CHECK(run(job("examples")).exit_code == kExitValidation);
  ::unsetenv("TREESPEC_THREADS");
}
