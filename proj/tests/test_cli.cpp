#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#ifndef UAVCOV_CLI_PATH
#error "UAVCOV_CLI_PATH must point at the uavcov executable"
#endif

namespace fs = std::filesystem;
using doctest::Approx;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("uavcov_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

int run(const std::string& args, const fs::path& stdout_file = "/dev/null") {
  const std::string cmd = std::string(UAVCOV_CLI_PATH) + " " + args + " > " +
                          stdout_file.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

int data_rows(const std::string& csv) {
  std::istringstream in(csv);
  int n = 0;
  for (std::string line; std::getline(in, line);) n += !line.empty() && line[0] != '#';
  return n - 1;  // minus the column header
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("eval with tau = 0 harvests nothing") {
    const fs::path dir = scratch("tau0");
    REQUIRE(run("eval --tau 0 --gamma-h 1e-9 --out-dir " + dir.string()) == 0);
    const json j = read_json(dir / "eval.json");
    CHECK(j["p_h_exact"]["value"].get<double>() == 0.0);
    CHECK(j["p_jc"]["value"].get<double>() == 0.0);
  }

  TEST_CASE("eval with a zero energy threshold") {
    const fs::path dir = scratch("gh0");
    REQUIRE(run("eval --gamma-h 0 --out-dir " + dir.string()) == 0);
    const json j = read_json(dir / "eval.json");
    CHECK(j["p_h_exact"]["value"].get<double>() == 1.0);
    CHECK(j["p_jc"]["value"].get<double>() == Approx(j["p_c"]["value"].get<double>()).epsilon(1e-12));
  }

  TEST_CASE("eval at the defaults") {
    const fs::path dir = scratch("defaults");
    REQUIRE(run("eval --out-dir " + dir.string()) == 0);
    const json j = read_json(dir / "eval.json");
    for (const char* k : {"p_h_exact", "p_h_approx", "p_c", "p_jc"}) {
      const double v = j[k]["value"].get<double>();
      CHECK(v >= 0);
      CHECK(v <= 1);
    }
    const double exact = j["p_h_exact"]["value"].get<double>();
    const double approx = j["p_h_approx"]["value"].get<double>();
    CAPTURE(exact);
    CAPTURE(approx);
    CHECK(std::abs(exact - approx) <= 0.02);
  }

  TEST_CASE("dBm input is converted to watts") {
    const fs::path dir = scratch("dbm");
    REQUIRE(run("eval --tx-power-dbm 32 --gamma-h 0 --out-dir " + dir.string()) == 0);
    const json m = read_json(dir / "manifest.json");
    CHECK(m["config"]["tx_power_w"].get<double>() == Approx(1.5849).epsilon(1e-4));
  }

  TEST_CASE("tau sweep writes twenty rows with the config echo") {
    const fs::path dir = scratch("sweep");
    REQUIRE(run("sweep --variable tau --no-analytic --mc --mc-slots 4000 --out-dir " + dir.string()) == 0);
    const std::string csv = slurp(dir / "sweep.csv");
    CHECK(data_rows(csv) == 20);
    CHECK(csv.find("# config {") != std::string::npos);
    CHECK(csv.find("mc_hw_h") != std::string::npos);
    CHECK(csv.find("mc_hw_jc") != std::string::npos);
  }

  TEST_CASE("manifest checksums match the outputs") {
    const fs::path dir = scratch("manifest");
    REQUIRE(run("mc --slots 5000 --seed 3 --out-dir " + dir.string()) == 0);
    const json m = read_json(dir / "manifest.json");
    REQUIRE(m["outputs"].size() >= 2u);
    for (const json& o : m["outputs"]) {
      const fs::path f = dir / o["file"].get<std::string>();
      REQUIRE(fs::exists(f));
      CHECK(o["bytes"].get<std::uintmax_t>() == fs::file_size(f));
      CHECK(o["sha256"].get<std::string>().size() == 64u);
    }
    CHECK(m["seed"].get<int>() == 3);
  }

  TEST_CASE("mc with the same seed twice is byte-identical") {
    const fs::path a = scratch("mc_a");
    const fs::path b = scratch("mc_b");
    REQUIRE(run("mc --slots 20000 --seed 9 --dump-slots --out-dir " + a.string()) == 0);
    REQUIRE(run("mc --slots 20000 --seed 9 --threads 1 --dump-slots --out-dir " + b.string()) == 0);
    CHECK(slurp(a / "mc.csv") == slurp(b / "mc.csv"));
    CHECK(slurp(a / "slots.csv") == slurp(b / "slots.csv"));
    const json ma = read_json(a / "manifest.json");
    const json mb = read_json(b / "manifest.json");
    CHECK(ma["outputs"] == mb["outputs"]);
  }

  TEST_CASE("config echo feeds back as a config file") {
    const fs::path dir = scratch("echo");
    REQUIRE(run("sweep --variable n_uavs --grid 4 --no-exact --altitude 120 --gamma-c 0.3 --out-dir " +
                dir.string()) == 0);
    std::istringstream in(slurp(dir / "sweep.csv"));
    std::string line, echo;
    while (std::getline(in, line))
      if (line.rfind("# config ", 0) == 0) echo = line.substr(9);
    REQUIRE_FALSE(echo.empty());
    const fs::path cfg = dir / "echo.json";
    std::ofstream(cfg) << echo;
    const fs::path d1 = scratch("echo_1"), d2 = scratch("echo_2");
    REQUIRE(run("eval --config " + cfg.string() + " --n-uavs 4 --out-dir " + d1.string()) == 0);
    REQUIRE(run("eval --altitude 120 --gamma-c 0.3 --n-uavs 4 --out-dir " + d2.string()) == 0);
    const json j1 = read_json(d1 / "eval.json"), j2 = read_json(d2 / "eval.json");
    for (const char* k : {"p_h_exact", "p_h_approx", "p_c", "p_jc"})
      CHECK(j1[k]["value"].get<double>() == j2[k]["value"].get<double>());
  }

  TEST_CASE("usage errors exit with 1") {
    CHECK(run("") == 1);
    CHECK(run("eval --no-such-flag") == 1);
    CHECK(run("eval --tau 2") == 1);
    CHECK(run("sweep --variable bogus") == 1);
    const fs::path dir = scratch("badcfg");
    fs::create_directories(dir);
    std::ofstream(dir / "bad.json") << R"({"n_uavs": 3, "colour": 1})";
    CHECK(run("eval --config " + (dir / "bad.json").string()) == 1);
  }

  TEST_CASE("degraded sweeps exit with 3") {
    const fs::path dir = scratch("degraded");
    CHECK(run("sweep --variable n_uavs --grid 1,2 --no-exact --shadow-q 1.5 --shadow-gamma 0.5 --out-dir " +
              dir.string()) == 3);
    CHECK(slurp(dir / "sweep.csv").find("failed") != std::string::npos);
  }
}
