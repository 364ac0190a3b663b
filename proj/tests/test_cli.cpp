#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "hallmhd/cli.hpp"
#include "hallmhd/io.hpp"

using namespace hallmhd;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "hallmhd");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path write_file(const std::string& name, const std::string& text) {
  const fs::path p = fs::temp_directory_path() / ("hallmhd_cli_" + name);
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("help on the tool and every subcommand") {
  const auto top = cli({"--help"});
  CHECK(top.code == 0);
  for (const char* sub : {"run", "verify", "mms", "oracle", "lp"}) {
    CHECK(top.out.find(sub) != std::string::npos);
    const auto r = cli({sub, "--help"});
    INFO(sub);
    CHECK(r.code == 0);
    CHECK(r.out.find("Usage") != std::string::npos);
  }
}

TEST_CASE("usage errors exit 2") {
  CHECK(cli({}).code == kExitConfig);
  CHECK(cli({"fly"}).code == kExitConfig);
  CHECK(cli({"run"}).code == kExitConfig);
  CHECK(cli({"lp", "--n", "abc"}).code == kExitConfig);
}

TEST_CASE("run with T = 0 writes one record") {
  const fs::path csv = fs::temp_directory_path() / "hallmhd_cli_t0.csv";
  const auto cfg = write_file("t0.cfg", "nr=16\nnz=16\nR=4\nLz=4\nT=0\ndiagnostics=" + csv.string() + "\n");
  const auto r = cli({"run", "-q", cfg.string()});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("records=1") != std::string::npos);
  CHECK(read_diagnostics(csv.string()).size() == 1);
  fs::remove(csv);
  fs::remove(cfg);
}

TEST_CASE("bad configs exit 2 and name the problem") {
  const auto bad = cli({"run", std::string(HALLMHD_CONFIG_DIR) + "/../tests/data/bad.cfg"});
  CHECK(bad.code == kExitConfig);
  CHECK(bad.err.find("line 3") != std::string::npos);
  CHECK(bad.err.find("foo") != std::string::npos);
  CHECK(cli({"verify", "/nonexistent.cfg"}).code == kExitConfig);
  const auto cfg = write_file("sigma.cfg", "nr=16\nnz=16\nR=4\nLz=4\nT=0\nsigma=2\n");
  CHECK(cli({"run", cfg.string()}).code == kExitConfig);
  fs::remove(cfg);
}

TEST_CASE("numerical blow-up exits 3") {
  const auto cfg = write_file("blowup.cfg",
                              "nr=32\nnz=32\nR=4\nLz=4\nT=0.5\ncfl_advect=40\ncfl_hall=40\ndt_max=0.05\n"
                              "b_amp=40\nw_amp=400\n");
  const auto r = cli({"run", "-q", cfg.string()});
  CHECK(r.code == kExitNumerical);
  CHECK(r.err.find("numerical abort") != std::string::npos);
  fs::remove(cfg);
}

TEST_CASE("verify reports every monitor") {
  const auto cfg = write_file("verify.cfg", "nr=32\nnz=32\nR=4\nLz=4\nT=0.03\nadvection=upwind1\nformulation=scaled\n");
  const auto r = cli({"verify", "--no-write", cfg.string()});
  CHECK(r.code == kExitOk);
  for (const char* name : {"divergence", "energy_inequality", "pi_max_principle", "pi_l8_monotone", "btheta_gronwall_p4",
                           "growth_envelope"})
    CHECK(r.out.find(name) != std::string::npos);
  CHECK(r.out.find("FAIL") == std::string::npos);
  fs::remove(cfg);
}

TEST_CASE("verify exits 1 on a monitor violation") {
  // The monitors assume unit viscosity and resistivity; with both off the
  // credited dissipation never happens and the energy balance breaks.
  const auto cfg = write_file("violate.cfg", "nr=32\nnz=32\nR=4\nLz=4\nT=0.05\nnu=0\neta=0\n");
  const auto r = cli({"verify", "--no-write", cfg.string()});
  CHECK(r.code == kExitMonitor);
  CHECK(r.out.find("FAIL") != std::string::npos);
  fs::remove(cfg);
}

TEST_CASE("mms, oracle and lp batteries") {
  const auto m = cli({"mms", "--sizes", "32,64"});
  CHECK(m.code == kExitOk);
  CHECK(m.out.find("rhs_scaled") != std::string::npos);
  const auto o = cli({"oracle", "--sizes", "32,64"});
  CHECK(o.out.find("norm_h1") != std::string::npos);
  CHECK((o.code == kExitOk || o.code == kExitMonitor));
  const auto l = cli({"lp", "--n", "16", "--samples", "3"});
  CHECK(l.code == kExitOk);
  CHECK(l.out.find("bernstein q=1 k=1 p=2") != std::string::npos);
}
