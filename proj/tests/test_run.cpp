#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>

#include "hallmhd/run.hpp"

using namespace hallmhd;
namespace fs = std::filesystem;

namespace {

RunConfig small(const std::string& extra = {}, double T = 0.05) {
  return parse_config("nr=32\nnz=32\nR=4\nLz=4\nT=" + std::to_string(T) + "\n" + extra);
}

RunOptions quiet(bool trace = false) {
  RunOptions o;
  o.write_outputs = false;
  o.trace = trace;
  return o;
}

const CheckResult* find(const VerifyReport& rep, const std::string& name) {
  for (const auto& c : rep.checks)
    if (c.name == name) return &c;
  return nullptr;
}

}  // namespace

TEST_CASE("T = 0 gives the initial state and one record") {
  RunConfig c0 = small();
  c0.T = 0.0;
  const RunResult r = run_simulation(c0, quiet(true));
  CHECK(r.steps == 0);
  REQUIRE(r.records.size() == 1);
  CHECK(r.records[0].t == 0.0);
  CHECK(r.trace.size() == 1);
  const State s0 = initial_state(c0);
  CHECK(std::memcmp(r.state.b.values().data(), s0.b.values().data(), s0.grid().size() * 8) == 0);
  const VerifyReport v = verify_run(c0, r);
  CHECK(v.passed());
  CHECK(find(v, "energy_balance")->skipped);
}

TEST_CASE("records land on the output times and at T") {
  RunConfig cfg = small("", 0.025);
  const RunResult r = run_simulation(cfg, quiet());
  REQUIRE(r.records.size() == 4);
  CHECK(r.records[1].t == 0.01);
  CHECK(r.records[2].t == 0.02);
  CHECK(r.records[3].t == 0.025);
  CHECK(r.state.t == 0.025);
  CHECK(r.steps >= 25);
}

TEST_CASE("runs are deterministic") {
  const RunConfig cfg = small();
  const auto a = run_simulation(cfg, quiet());
  const auto b = run_simulation(cfg, quiet());
  CHECK(format_diagnostics(a.records, serialize_config(cfg)) == format_diagnostics(b.records, serialize_config(cfg)));
  CHECK(std::memcmp(a.state.omega.values().data(), b.state.omega.values().data(), cfg.grid().size() * 8) == 0);
}

TEST_CASE("scaled initial state and the scheme-dependent checks") {
  const RunConfig c = small("formulation=scaled\nadvection=upwind1\n");
  const State s = initial_state(c);
  CHECK(s.formulation == Formulation::Scaled);
  CHECK(s.b.parity() == Parity::Even);
  CHECK(collect_options(c).hall_flux == HallFlux::LocalLaxFriedrichs);
  CHECK(collect_options(small()).hall_flux == HallFlux::Central);

  const RunResult r = run_simulation(c, quiet(true));
  CHECK(r.trace.size() == static_cast<std::size_t>(r.steps) + 1);
  const VerifyReport v = verify_run(c, r);
  for (const auto& chk : v.checks) {
    INFO(chk.name << " = " << chk.value);
    CHECK(chk.passed);
  }
  CHECK(find(v, "pi_max_principle")->tolerance == 1e-12);
  CHECK(find(v, "pi_l4_monotone")->tolerance == 1e-8);
  CHECK(find(v, "energy_inequality") != nullptr);
  CHECK(find(v, "energy_balance") == nullptr);
}

TEST_CASE("centered run passes the exact energy checks") {
  // the balance residual is a discretization error; 32 cells leave it near 1e-3
  const RunConfig c = parse_config("nr=64\nnz=64\nR=4\nLz=4\nT=0.05\ndt_max=2e-4\n");
  const VerifyReport v = verify_run(c, run_simulation(c, quiet(true)));
  for (const auto& chk : v.checks) {
    INFO(chk.name << " = " << chk.value);
    CHECK(chk.passed);
  }
  CHECK(find(v, "energy_balance")->tolerance == 1e-3);
  CHECK(find(v, "hall_energy")->tolerance == 1e-6);
  CHECK(find(v, "pi_max_principle")->tolerance == 1e-3);
}

TEST_CASE("without the Hall term the maximum principle still holds") {
  const RunConfig c = small("formulation=scaled\nadvection=upwind1\ntoggles=advection,stretching,lorentz\n");
  const VerifyReport v = verify_run(c, run_simulation(c, quiet(true)));
  CHECK(find(v, "pi_max_principle")->passed);
  CHECK(find(v, "pi_l8_monotone")->passed);
  CHECK(find(v, "energy_inequality")->passed);
}

TEST_CASE("outputs named in the config are written") {
  const fs::path dir = fs::temp_directory_path() / "hallmhd_run_outputs";
  fs::create_directories(dir);
  RunConfig c = small("", 0.02);
  c.diagnostics = (dir / "d.csv").string();
  c.snapshot = (dir / "s.bin").string();
  c.snapshot_every = 1;
  const RunResult r = run_simulation(c);
  const auto recs = read_diagnostics(c.diagnostics);
  REQUIRE(recs.size() == r.records.size());
  CHECK(recs.back() == r.records.back());
  const Snapshot snap = read_snapshot(c.snapshot);
  CHECK(snap.state.t == r.state.t);
  CHECK(parse_config(snap.config_echo) == c);
  CHECK(std::memcmp(snap.state.b.values().data(), r.state.b.values().data(), c.grid().size() * 8) == 0);
  for (int k = 0; k < 3; ++k) CHECK(fs::exists(c.snapshot + "." + std::to_string(k)));
  CHECK(read_snapshot(c.snapshot + ".0").state.t == 0.0);
  fs::remove_all(dir);
}

TEST_CASE("a blow-up aborts with the records gathered so far") {
  // CFL far beyond stability on strong data
  RunConfig c = small("cfl_advect=40\ncfl_hall=40\ndt_max=0.05\nb_amp=40\nw_amp=400\n", 0.5);
  try {
    run_simulation(c, quiet());
    FAIL("expected RunAbort");
  } catch (const RunAbort& e) {
    CHECK(e.partial().records.size() >= 1);
    CHECK(e.partial().state.b.all_finite());
    CHECK(std::string(e.what()).find("t = ") != std::string::npos);
  }
}
