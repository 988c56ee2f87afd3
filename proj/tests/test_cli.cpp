#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#ifndef GVLAB_CLI_PATH
#define GVLAB_CLI_PATH "gvlab"
#endif

namespace {

struct CliResult {
  int exit_code = -1;
  std::string output;
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(GVLAB_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult r;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof(buf), pipe))
    r.output.append(buf, n);
  const int status = pclose(pipe);
  r.exit_code = WEXITSTATUS(status);
  return r;
}

}  // namespace

TEST_CASE("list-scenarios prints the catalog and exits 0") {
  CliResult r = run_cli("list-scenarios");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("contact_t3") != std::string::npos);
  CHECK(r.output.find("tilted") != std::string::npos);
  CHECK(r.output.find("jacobi_chart") != std::string::npos);
}

TEST_CASE("gv verb on a passing scenario exits 0 with schema fields") {
  CliResult r = run_cli("gv --scenario contact_t3 --grid 24 --no-timestamp");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("\"scenario\": \"contact_t3\"") != std::string::npos);
  CHECK(r.output.find("\"grid\": [24, 24, 24]") != std::string::npos);
  CHECK(r.output.find("\"all_pass\": true") != std::string::npos);
}

TEST_CASE("unknown scenario and unknown check give usage errors") {
  CHECK(run_cli("gv --scenario no_such_thing").exit_code == 1);
  CHECK(run_cli("run --scenario tilted --checks bogus --grid 16").exit_code ==
        1);
  CHECK(run_cli("").exit_code == 1);
}

TEST_CASE("numerical check failure exits 2") {
  // The gv integral gap tolerance is calibrated for the default grid; a
  // very coarse grid fails it honestly.
  CliResult r = run_cli("gv --scenario tilted --grid 16 --no-timestamp");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("\"all_pass\": false") != std::string::npos);
}

TEST_CASE("config file provides defaults, flags override") {
  const std::string path = "/tmp/gvlab_test_config.txt";
  {
    std::ofstream out(path);
    out << "# gvlab config\n"
        << "scenario = contact_t3\n"
        << "grid = 16,16,16\n"
        << "checks = eta\n"
        << "no_timestamp = true\n";
  }
  CliResult r = run_cli("run --config " + path);
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("\"grid\": [16, 16, 16]") != std::string::npos);
  CHECK(r.output.find("\"name\": \"eta\"") != std::string::npos);
  CHECK(r.output.find("timestamp") == std::string::npos);

  CliResult r2 = run_cli("run --config " + path + " --grid 24");
  CHECK(r2.exit_code == 0);
  CHECK(r2.output.find("\"grid\": [24, 24, 24]") != std::string::npos);
}

TEST_CASE("sweep emits a CSV convergence table") {
  CliResult r = run_cli(
      "sweep --scenario tilted --axis grid --values 16,24,32 "
      "--check rwood_pointwise");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("scenario,check,axis,error,observed_order") !=
        std::string::npos);
  std::istringstream ss(r.output);
  std::string line;
  int rows = 0;
  while (std::getline(ss, line))
    if (line.rfind("tilted,", 0) == 0) ++rows;
  CHECK(rows == 3);
}

TEST_CASE("sweep with fewer than 3 values is rejected") {
  CliResult r = run_cli(
      "sweep --scenario tilted --axis grid --values 16,24 --check stokes");
  CHECK(r.exit_code == 1);
}

TEST_CASE("timestamp suppression controls byte reproducibility") {
  CliResult a = run_cli("gv --scenario foliation_flat --grid 16 --no-timestamp");
  CliResult b = run_cli("gv --scenario foliation_flat --grid 16 --no-timestamp");
  CHECK(a.output == b.output);
}
