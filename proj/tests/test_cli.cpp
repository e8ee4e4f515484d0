#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "agewave/cli.hpp"

using namespace agewave;
using doctest::Approx;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("agewave_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string str(const std::string& name = "") const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spit(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  out << body;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream in(line);
  std::string field;
  while (std::getline(in, field, ',')) fields.push_back(field);
  return fields;
}

const char* kReferenceConfig = R"([model]
a_max = 1.0
n_a = 101
mu = 0.0
beta = auto
kappa = 1.0
kernel = gaussian
sigma = 1.0
)";

}  // namespace

TEST_CASE("validate accepts the reference configuration") {
  TempDir tmp;
  spit(tmp.str("R1.cfg"), kReferenceConfig);
  int rc = cli_main({"validate", tmp.str("R1.cfg"), "--out", tmp.str("out")});
  CHECK(rc == 0);
  json report = json::parse(slurp(tmp.str("out/validate_report.json")));
  CHECK(report["ok"].get<bool>());
  CHECK(report["checks"].size() >= 4);
  json manifest = json::parse(slurp(tmp.str("out/validate_manifest.json")));
  CHECK(manifest["subcommand"] == "validate");
  CHECK(manifest["config_hash"].get<std::string>().size() == 16);
}

TEST_CASE("speed emits the dispersion table and closed-form constants") {
  TempDir tmp;
  spit(tmp.str("R1.cfg"), kReferenceConfig);
  int rc = cli_main({"speed", tmp.str("R1.cfg"), "--out", tmp.str("out")});
  CHECK(rc == 0);
  json report = json::parse(slurp(tmp.str("out/speed_report.json")));
  CHECK(report["s0"].get<double>() == Approx(-1.0).epsilon(1e-8));
  CHECK(report["c_star"].get<double>() == Approx(1.6487212707).epsilon(1e-5));
  CHECK(report["phi"].size() == 101);
  std::string csv = slurp(tmp.str("out/speed_dispersion.csv"));
  CHECK(csv.rfind("c,lambda1,lambda2,lambda_of_c,big_lambda_at_tangency\n", 0) == 0);
  json manifest = json::parse(slurp(tmp.str("out/speed_manifest.json")));
  std::vector<std::string> outputs = manifest["outputs"];
  CHECK(outputs ==
        std::vector<std::string>{"speed_dispersion.csv", "speed_report.json"});
}

TEST_CASE("identical configs reproduce byte-identical csv bodies") {
  TempDir tmp;
  spit(tmp.str("R1.cfg"), kReferenceConfig);
  CHECK(cli_main({"speed", tmp.str("R1.cfg"), "--out", tmp.str("a")}) == 0);
  CHECK(cli_main({"speed", tmp.str("R1.cfg"), "--out", tmp.str("b")}) == 0);
  CHECK(slurp(tmp.str("a/speed_dispersion.csv")) == slurp(tmp.str("b/speed_dispersion.csv")));
  CHECK(slurp(tmp.str("a/speed_report.json")) == slurp(tmp.str("b/speed_report.json")));
}

TEST_CASE("unknown configuration keys are hard errors") {
  TempDir tmp;
  spit(tmp.str("typo.cfg"), "[model]\nn_a = 101\nsgima = 2.0\n");
  CHECK(cli_main({"validate", tmp.str("typo.cfg")}) == 2);
}

TEST_CASE("unknown flags are usage errors") {
  TempDir tmp;
  spit(tmp.str("R1.cfg"), kReferenceConfig);
  CHECK(cli_main({"speed", tmp.str("R1.cfg"), "--bogus"}) == 1);
  CHECK(cli_main({"nonsense"}) == 1);
}

TEST_CASE("missing config files surface as io errors") {
  TempDir tmp;
  CHECK(cli_main({"validate", tmp.str("absent.cfg")}) == 4);
}

TEST_CASE("asymmetric tabulated dispersal is rejected") {
  TempDir tmp;
  spit(tmp.str("kernel.csv"), "y,J\n-1.0,0.2\n0.0,1.0\n1.0,0.6\n");
  spit(tmp.str("lopsided.cfg"),
       "[model]\nn_a = 41\nkernel = tabulated\ntable = kernel.csv\n");
  CHECK(cli_main({"speed", tmp.str("lopsided.cfg"), "--out", tmp.str("out")}) == 2);
}

TEST_CASE("wave runs at loose tolerance and reports diagnostics") {
  TempDir tmp;
  spit(tmp.str("R1.cfg"), kReferenceConfig);
  int rc = cli_main({"wave", tmp.str("R1.cfg"), "--out", tmp.str("out"), "--c", "2.0",
                     "--L-xi", "15", "--n-xi", "601", "--tol", "0.05", "--max-iter", "50"});
  CHECK(rc == 0);
  json report = json::parse(slurp(tmp.str("out/wave_report.json")));
  CHECK(report["mode"] == "fixed_speed");
  CHECK(report["c"].get<double>() == 2.0);
  CHECK(report["iterations"].get<int>() == 6);
  CHECK(report["residual"].get<double>() < 0.05);
  CHECK(report["edges"]["ok"].get<bool>());
  std::string csv = slurp(tmp.str("out/wave_profile.csv"));
  CHECK(csv.rfind("a,xi,w\n", 0) == 0);
}

TEST_CASE("wave requires a speed or the critical flag") {
  TempDir tmp;
  spit(tmp.str("R1.cfg"), kReferenceConfig);
  CHECK(cli_main({"wave", tmp.str("R1.cfg"), "--out", tmp.str("out")}) == 2);
}

TEST_CASE("manifest-only resolves without writing data files") {
  TempDir tmp;
  spit(tmp.str("R1.cfg"), kReferenceConfig);
  int rc = cli_main({"wave", tmp.str("R1.cfg"), "--out", tmp.str("out"), "--c", "2.0",
                     "--manifest-only"});
  CHECK(rc == 0);
  CHECK(fs::exists(tmp.str("out/wave_manifest.json")));
  CHECK_FALSE(fs::exists(tmp.str("out/wave_profile.csv")));
  json manifest = json::parse(slurp(tmp.str("out/wave_manifest.json")));
  CHECK(manifest["dry_run"].get<bool>());
  CHECK(manifest["outputs"].size() == 2);
}

TEST_CASE("manifest fields round-trip through serialization") {
  TempDir tmp;
  spit(tmp.str("R1.cfg"), kReferenceConfig);
  CHECK(cli_main({"speed", tmp.str("R1.cfg"), "--out", tmp.str("out")}) == 0);
  std::string text = slurp(tmp.str("out/speed_manifest.json"));
  json manifest = json::parse(text);
  CHECK(json::parse(manifest.dump(2) + "\n") == manifest);
  for (const char* key : {"tool", "version", "subcommand", "config_path", "config_hash",
                          "dry_run", "grids", "tolerances", "margins", "wall_clock_s",
                          "outputs"})
    CHECK(manifest.contains(key));
}

TEST_CASE("simulate validates the time step against the age grid") {
  TempDir tmp;
  spit(tmp.str("R1.cfg"), kReferenceConfig);
  CHECK(cli_main({"simulate", tmp.str("R1.cfg"), "--out", tmp.str("out"), "--T", "0.2",
                  "--dt", "0.02"}) == 2);
}

TEST_CASE("simulate writes one csv per snapshot plus invariance margins") {
  TempDir tmp;
  spit(tmp.str("sim.cfg"), std::string(kReferenceConfig) +
                               "\n[simulate]\ndomain = 5.0\nn_x = 51\nclosure = edge\n");
  int rc = cli_main({"simulate", tmp.str("sim.cfg"), "--out", tmp.str("out"), "--T", "0.5",
                     "--dt", "0.01", "--snapshots", "0.25,0.5"});
  CHECK(rc == 0);
  CHECK(fs::exists(tmp.str("out/simulate_snap0.csv")));
  CHECK(fs::exists(tmp.str("out/simulate_snap1.csv")));
  json manifest = json::parse(slurp(tmp.str("out/simulate_manifest.json")));
  CHECK(manifest["margins"]["range_low"].get<double>() >= 0.0);
  CHECK(manifest["margins"]["range_high"].get<double>() <= 1.0);
  CHECK(manifest["grids"]["closure"] == "edge");
}

TEST_CASE("spread hair experiment reports the trigger verdict") {
  TempDir tmp;
  spit(tmp.str("sp.cfg"), std::string(kReferenceConfig) +
                              "\n[spread]\ndomain = 10.0\nn_x = 101\nrho0 = 0.1\n");
  int rc = cli_main({"spread", tmp.str("sp.cfg"), "--out", tmp.str("out"), "--experiment",
                     "hair", "--rho", "0.9", "--T", "3"});
  CHECK(rc == 0);
  json verdict = json::parse(slurp(tmp.str("out/spread_verdict.json")));
  CHECK(verdict["experiment"] == "hair");
  CHECK(verdict.contains("reached"));
  CHECK(verdict["margins"]["worst_margin"].get<double>() >= -1e-10);
}

TEST_CASE("spread rejects an unknown experiment") {
  TempDir tmp;
  spit(tmp.str("R1.cfg"), kReferenceConfig);
  CHECK(cli_main({"spread", tmp.str("R1.cfg"), "--out", tmp.str("out"), "--experiment",
                  "warp"}) == 2);
}

TEST_CASE("sweep tabulates closed-form exponents across kappa") {
  TempDir tmp;
  spit(tmp.str("sw.cfg"), "[model]\nn_a = 101\n\n[sweep]\nkappa = 1, 2\n");
  ::setenv("AGEWAVE_THREADS", "2", 1);
  int rc = cli_main({"sweep", tmp.str("sw.cfg"), "--out", tmp.str("out")});
  ::unsetenv("AGEWAVE_THREADS");
  CHECK(rc == 0);
  std::string csv = slurp(tmp.str("out/sweep_summary.csv"));
  std::istringstream lines(csv);
  std::string header, row1, row2;
  std::getline(lines, header);
  std::getline(lines, row1);
  std::getline(lines, row2);
  CHECK(header == "kappa,sigma,a_max,s0,c_star,lambda_star,ok");
  auto f1 = split_csv(row1);
  auto f2 = split_csv(row2);
  REQUIRE(f1.size() == 7);
  REQUIRE(f2.size() == 7);
  CHECK(std::stod(f1[0]) == 1.0);
  CHECK(std::stod(f2[0]) == 2.0);
  CHECK(std::stod(f1[3]) == Approx(-1.0).epsilon(1e-8));
  CHECK(std::stod(f2[3]) == Approx(-2.0).epsilon(1e-8));
  CHECK(f1[6] == "1");
  CHECK(f2[6] == "1");
}

TEST_CASE("sweep with no axes emits only the header") {
  TempDir tmp;
  spit(tmp.str("sw.cfg"), "[model]\nn_a = 51\n");
  CHECK(cli_main({"sweep", tmp.str("sw.cfg"), "--out", tmp.str("out")}) == 0);
  CHECK(slurp(tmp.str("out/sweep_summary.csv")) ==
        "kappa,sigma,a_max,s0,c_star,lambda_star,ok\n");
}
