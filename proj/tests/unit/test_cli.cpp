#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "subgauss/cli.hpp"

using namespace subgauss::cli;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) { return fs::temp_directory_path() / ("sg_cli_" + name); }

int tool(const std::string& args) {
  const std::string cmd = std::string(SUBGAUSS_TOOL_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("parse_args") {
  const RunConfig c = parse_args({"psi", "dist=rademacher", "alpha=2", "--seed", "5", "--threads", "3",
                                  "--no-timestamp", "--format", "csv"});
  CHECK(c.command == "psi");
  CHECK(c.params.at("dist") == "rademacher");
  CHECK(c.seed == 5);
  CHECK(c.threads == 3);
  CHECK_FALSE(c.timestamp);
  CHECK(c.format == Format::Csv);
  CHECK(parse_args({"binom"}).seed == subgauss::kDefaultSeed);
  CHECK_THROWS_AS(parse_args({"nope"}), UsageError);
  CHECK_THROWS_AS(parse_args({"psi", "novalue"}), UsageError);
  CHECK_THROWS_AS(parse_args({"psi", "--format", "xml"}), UsageError);
}

TEST_CASE("config file with command-line overrides") {
  const fs::path cfg = scratch("cfg.txt");
  std::ofstream(cfg) << "# run\ncommand=binom\nm=200\np=0.05\nk=20\nseed=9\n";
  const RunConfig c = parse_args({"binom", "k=30", "--config", cfg.string()});
  CHECK(c.params.at("m") == "200");
  CHECK(c.params.at("k") == "30");
  CHECK(c.seed == 9);
}

TEST_CASE("unknown keys are named") {
  RunConfig c = parse_args({"psi", "dist=gaussian", "colour=red"});
  try {
    dispatch(c);
    FAIL("expected a usage error");
  } catch (const UsageError& e) {
    CHECK(std::string(e.what()).find("colour") != std::string::npos);
  }
}

TEST_CASE("psi and binom reports") {
  const fs::path out = scratch("psi.json");
  RunConfig c = parse_args({"psi", "dist=rademacher", "alpha=2", "--no-timestamp", "--out", out.string()});
  CHECK(dispatch(c) == kExitOk);
  const auto j = nlohmann::json::parse(slurp(out));
  CHECK(j["value"].get<double>() == doctest::Approx(1.201122).epsilon(1e-6));
  CHECK(j["method"] == "analytic");
  CHECK_FALSE(j.contains("timestamp"));

  c = parse_args({"binom", "m=50", "p=0.1", "k=10", "--out", out.string()});
  CHECK(dispatch(c) == kExitOk);
  const auto b = nlohmann::json::parse(slurp(out));
  CHECK(b["bound"].get<double>() == doctest::Approx(0.01357).epsilon(1e-3));
  CHECK(b["exact_tail"].get<double>() >= b["bound"].get<double>());
  CHECK(b["holds"] == true);
  CHECK(b.contains("timestamp"));
}

TEST_CASE("csv output") {
  const fs::path out = scratch("ac.csv");
  RunConfig c = parse_args({"appendixc", "grid=1000", "--format", "csv", "--no-timestamp", "--out", out.string()});
  CHECK(dispatch(c) == kExitOk);
  const std::string text = slurp(out);
  CHECK(text.rfind("name,max_slack,argmax,points,holds\n", 0) == 0);
}

TEST_CASE("re-runs are byte identical across thread counts") {
  const fs::path a = scratch("a.json"), b = scratch("b.json");
  for (const std::string cmd : {"tail", "nsp"}) {
    CHECK(dispatch(parse_args({cmd, "--trials", "20000", "--no-timestamp", "--threads", "1", "--out", a.string()})) == kExitOk);
    CHECK(dispatch(parse_args({cmd, "--trials", "20000", "--no-timestamp", "--threads", "4", "--out", b.string()})) == kExitOk);
    CHECK(slurp(a) == slurp(b));
  }
}

TEST_CASE("exit codes of the tool") {
  CHECK(tool("binom m=50 p=0.1 k=10 --no-timestamp") == kExitOk);
  CHECK(tool("binom m=50 p=0.1 k=10 bogus=1") == kExitUsage);
  CHECK(tool("frobnicate") == kExitUsage);
  // An absurd tail exponent makes the bound fail against the data.
  CHECK(tool("hw dist=gaussian c=1000 --trials 20000 --no-timestamp") == kExitCheckFailed);
}
