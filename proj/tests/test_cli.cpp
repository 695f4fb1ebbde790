#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using json = nlohmann::json;
using doctest::Approx;

namespace {

struct Run {
  int code;
  std::string out;
};

std::string cli() {
  const char* p = std::getenv("AHVOL_CLI");
  REQUIRE_MESSAGE(p != nullptr, "AHVOL_CLI must point at the ahvol executable");
  return p;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("ahvol_cli_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + "'" + cli() + "' " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string out_flag(const fs::path& dir) { return "--out-dir '" + dir.string() + "' "; }

}  // namespace

TEST_CASE("constants as JSON") {
  const auto dir = scratch("constants");
  const auto r = run(out_flag(dir) + "constants --n 3 --gamma 0.5 --json");
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["schema_version"] == 1);
  CHECK(j["inputs"]["n"] == 3);
  CHECK(j["d_gamma"].get<double>() == Approx(-1.0).epsilon(1e-12));
  CHECK(j["Q"].get<double>() == Approx(1.0).epsilon(1e-12));
  CHECK(j["Y"].get<double>() == Approx(2.7025676900634901886).epsilon(1e-12));
  CHECK(j["pass"] == true);
  CHECK(json::parse(slurp(dir / "constants.json")) == j);
}

TEST_CASE("multiplier CSV") {
  const auto dir = scratch("multiplier");
  const auto r = run(out_flag(dir) + "multiplier --n 3 --gamma 0.5 --kmax 3");
  REQUIRE(r.code == 0);
  std::istringstream in(slurp(dir / "multiplier.csv"));
  std::string line;
  int row = 0;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      CHECK(line == "k,numeric,closed_form,abs_deviation,rel_deviation,error_estimate");
      header = true;
      continue;
    }
    std::istringstream fields(line);
    std::string k, numeric, exact;
    std::getline(fields, k, ',');
    std::getline(fields, numeric, ',');
    std::getline(fields, exact, ',');
    CHECK(std::stoi(k) == row);
    CHECK(std::stod(exact) == Approx(row + 1.0).epsilon(1e-13));
    CHECK(std::stod(numeric) == Approx(row + 1.0).epsilon(1e-8));
    ++row;
  }
  CHECK(row == 4);
  CHECK(r.out.find("k,numeric,closed_form") != std::string::npos);
}

TEST_CASE("chain on the model passes") {
  const auto dir = scratch("chain");
  REQUIRE(run(out_flag(dir) + "chain --n 3 --gamma 0.5").code == 0);
  const auto j = json::parse(slurp(dir / "chain.json"));
  CHECK(j["pass"] == true);
  CHECK(j["verdict"] == "pass");
  CHECK(fs::exists(dir / "chain.csv"));
}

TEST_CASE("other subcommands write their artifacts") {
  const auto dir = scratch("others");
  CHECK(run(out_flag(dir) + "adapted --n 3 --gamma 0.5").code == 0);
  CHECK(run(out_flag(dir) + "volume --n 3 --warp perturbed --eps 0.02").code == 0);
  CHECK(run(out_flag(dir) + "rayleigh --n 3 --gamma 0.25 --kmax 6 --restarts 3").code == 0);
  CHECK(run(out_flag(dir) + "escobar --n 3").code == 0);
  for (const char* f : {"adapted.json", "adapted_profile.csv", "adapted_solution.csv", "compactification.csv",
                        "volume.csv", "volume.json", "rayleigh.json", "rayleigh_argmin.csv", "escobar.json",
                        "escobar_ratio.csv"})
    CHECK_MESSAGE(fs::exists(dir / f), f);
  const auto v = json::parse(slurp(dir / "volume.json"));
  CHECK(v["inputs"]["eps"].get<double>() == 0.02);
  CHECK(v["ricci_gate"] == false);
  CHECK(slurp(dir / "compactification.csv").find("t,rho,J_weighted,H_weighted") != std::string::npos);
}

TEST_CASE("usage errors exit with 1") {
  const auto dir = scratch("usage");
  CHECK(run(out_flag(dir)).code == 1);
  CHECK(run(out_flag(dir) + "frobnicate").code == 1);
  CHECK(run(out_flag(dir) + "constants --n three").code == 1);
  CHECK(run(out_flag(dir) + "constants --gamma 1.5").code == 1);
  CHECK(run(out_flag(dir) + "volume --warp bumpy").code == 1);
  CHECK(run(out_flag(dir) + "volume --warp perturbed --decay 1").code == 1);
  CHECK(run("--help").code == 0);
}

TEST_CASE("verification failures exit with 2") {
  const auto dir = scratch("verify");
  CHECK(run(out_flag(dir) + "multiplier --rel-tol 1e-4 --kmax 2").code == 2);
  CHECK(json::parse(slurp(dir / "multiplier.json"))["pass"] == false);
  CHECK(run(out_flag(dir) + "multiplier --t-max 6").code == 2);
}

TEST_CASE("config file values yield to flags and are echoed") {
  const auto dir = scratch("config");
  {
    std::ofstream cfg(dir / "run.toml");
    cfg << "[rayleigh]\nn = 4\ngamma = 0.25\nkmax = 8\nrestarts = 2\n";
  }
  const auto r = run(out_flag(dir) + "--config '" + (dir / "run.toml").string() + "' rayleigh --kmax 5 --json");
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["inputs"]["n"] == 4);
  CHECK(j["inputs"]["gamma"].get<double>() == 0.25);
  CHECK(j["inputs"]["kmax"] == 5);
  CHECK(j["inputs"]["restarts"] == 2);
  CHECK(j["restarts"].size() == 2);
}

TEST_CASE("output directory from the environment") {
  const auto dir = scratch("env");
  REQUIRE(run("constants", "AHVOL_OUTPUT_DIR='" + dir.string() + "'").code == 0);
  CHECK(fs::exists(dir / "constants.json"));
}

TEST_CASE("identical runs give identical bytes") {
  const auto a = scratch("det_a"), b = scratch("det_b");
  for (const auto& d : {a, b}) {
    REQUIRE(run(out_flag(d) + "multiplier --n 4 --gamma 0.25 --kmax 4").code == 0);
    REQUIRE(run(out_flag(d) + "rayleigh --n 3 --gamma 0.75 --kmax 6 --restarts 4 --seed 99").code == 0);
    REQUIRE(run(out_flag(d) + "adapted --n 5 --gamma 0.75").code == 0);
  }
  for (const char* f : {"multiplier.csv", "multiplier.json", "rayleigh.json", "rayleigh_argmin.csv",
                        "adapted_profile.csv", "adapted.json", "compactification.csv"})
    CHECK_MESSAGE(slurp(a / f) == slurp(b / f), f);
}

TEST_CASE("verify-all report") {
  const auto dir = scratch("verify_all");
  const auto r = run(out_flag(dir) + "verify-all");
  CHECK(r.code == 0);
  const auto j = json::parse(slurp(dir / "verify_all.json"));
  REQUIRE(j["criteria"].size() == 10);
  for (const auto& c : j["criteria"]) {
    CHECK(c["pass"] == true);
    CHECK(c.contains("measured"));
    CHECK(c.contains("tolerance"));
    CHECK(c["seconds"].get<double>() >= 0.0);
  }
  int lines = 0;
  std::istringstream in(r.out);
  for (std::string l; std::getline(in, l);) lines += l.rfind("PASS", 0) == 0;
  CHECK(lines == 10);
}
