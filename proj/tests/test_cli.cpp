#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(LHVLAB_EXE) + " " + args + " 2>cli_stderr.txt";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path write(const std::string& name, const std::string& text) {
  const fs::path p = fs::current_path() / name;
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

const char* kSimulate = R"({
  "angle_unit": "deg",
  "beam_splitter": {"r_sq": 1, "t_sq": 2},
  "C": 1.0,
  "epsilon": [0.2, 0.1],
  "settings": [[30, 60], [0, 0], [45, -63.43494882292201]],
  "monte_carlo": {"n_samples": 200000, "seed": 11, "n_chunks": 8}
})";

}  // namespace

TEST_CASE("simulate output is byte-identical across runs") {
  const auto cfg = write("sim.json", kSimulate);
  for (const char* fmt : {"csv", "json"}) {
    const std::string ext = fmt;
    REQUIRE(run("simulate --config " + cfg.string() + " --format " + ext + " --out a." + ext) == 0);
    REQUIRE(run("simulate --config " + cfg.string() + " --format " + ext + " --out b." + ext) == 0);
    CHECK(slurp("a." + ext) == slurp("b." + ext));
    CHECK(!slurp("a." + ext).empty());
  }
  REQUIRE(run("simulate --config " + cfg.string() + " --seed 12 --out c.csv") == 0);
  CHECK(slurp("a.csv") != slurp("c.csv"));
  CHECK(slurp("c.csv").find("# seed: 12\n") != std::string::npos);
}

TEST_CASE("simulate json carries metadata, schema and oracle-consistent rows") {
  const auto cfg = write("sim.json", kSimulate);
  REQUIRE(run("simulate --config " + cfg.string() + " --format json --out s.json") == 0);
  const auto doc = nlohmann::json::parse(slurp("s.json"));
  CHECK(doc["metadata"]["gamma"] == 0.5);
  CHECK(doc["metadata"]["seed"] == 11);
  CHECK(doc["schema"].size() == 13);
  REQUIRE(doc["rows"].size() == 6);
  for (const auto& row : doc["rows"]) {
    CHECK(std::abs(row[7].get<double>() - row[8].get<double>()) <= 1e-10);
  }
  const std::string text = slurp("s.json");
  CHECK(text.find('\r') == std::string::npos);
}

TEST_CASE("predict matches the golden file") {
  REQUIRE(run(std::string("predict --config ") + LHV_GOLDEN_DIR + "/predict_config.json --out p.csv") == 0);
  CHECK(slurp("p.csv") == slurp(std::string(LHV_GOLDEN_DIR) + "/predict.csv"));
}

TEST_CASE("analysis subcommands") {
  const auto cfg = write("an.json", R"({
    "angle_unit": "deg",
    "beam_splitter": {"r_sq": 1, "t_sq": 2},
    "epsilon": [0.1, 0.05, 0.025],
    "hardy": {"theta1": 30, "theta2": 36, "theta10": 60, "theta20": 72},
    "fair_sampling": {"tuples": [[30, 36, 60], [30, 36, 36]]}
  })");
  REQUIRE(run("fair-sampling --config " + cfg.string() + " --format json --out f.json") == 0);
  const auto f = nlohmann::json::parse(slurp("f.json"));
  REQUIRE(f["rows"].size() == 6);
  CHECK(f["rows"][3][4] == true);  // theta2 == theta20 tuple flagged trivial

  REQUIRE(run("factorization --config " + cfg.string() + " --format json --out x.json") == 0);
  const auto x = nlohmann::json::parse(slurp("x.json"));
  REQUIRE(x["rows"].size() == 6);
  CHECK(x["rows"][0][1] == "raw");
  CHECK(x["rows"][1][1] == "renormalized");
  CHECK(x["rows"][0][11].get<double>() < 0.1);

  REQUIRE(run("hardy --config " + cfg.string() + " --out h.csv") == 0);
  const auto h = slurp("h.csv");
  CHECK(h.find("# layout: hardy") != std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(run("predict") == 2);
  CHECK(run("frobnicate --config x") == 2);
  CHECK(run("predict --config /nonexistent.json") == 2);
  const auto bad = write("bad.json", R"({"epsilon": 5})");
  CHECK(run("predict --config " + bad.string()) == 2);
  CHECK(slurp("cli_stderr.txt").find("/epsilon") != std::string::npos);
  const auto unknown = write("unknown.json", R"({"monte_carlo": {"samples": 5}})");
  CHECK(run("simulate --config " + unknown.string()) == 2);
  const auto missing = write("nohardy.json", "{}");
  CHECK(run("hardy --config " + missing.string()) == 2);
  CHECK(run("predict --config " + missing.string() + " --format xml") == 2);
  CHECK(run("predict --config " + missing.string() + " --out p0.csv") == 0);
}

TEST_CASE("large caps warn on stderr") {
  const auto cfg = write("big.json", R"({"epsilon": 0.5, "settings": [[0, 0]]})");
  REQUIRE(run("predict --config " + cfg.string() + " --out big.csv") == 0);
  CHECK(slurp("cli_stderr.txt").find("warning") != std::string::npos);
  CHECK(slurp("big.csv").find("# small_cap_warning: true") != std::string::npos);
}
