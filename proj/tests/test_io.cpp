#include <doctest.h>

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>

#include "hallmhd/errors.hpp"
#include "hallmhd/io.hpp"

using namespace hallmhd;
namespace fs = std::filesystem;

namespace {

fs::path tmp(const std::string& name) { return fs::temp_directory_path() / ("hallmhd_test_" + name); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

const char* kMinimal = "nr=32\nnz=16\nR=4\nLz=2\nT=0.1\n";

}  // namespace

TEST_CASE("minimal config takes the defaults") {
  const RunConfig c = parse_config(kMinimal);
  CHECK(c.nr == 32);
  CHECK(c.nz == 16);
  CHECK(c.Lz == 2.0);
  CHECK(c.T == 0.1);
  const RunConfig d;
  CHECK(c.dt_out == d.dt_out);
  CHECK(c.sigma == 4.0);
  CHECK(c.formulation == Formulation::Primal);
  CHECK(c.step.advection == AdvectionScheme::Centered);
  CHECK(c.step.hall_flux == HallFlux::Auto);
  CHECK(c.step.dt_max == StepParams{}.dt_max);
  CHECK(c.b_ring.amplitude == 4.0);
  CHECK(c.omega_ring.amplitude == 20.0);
  CHECK(c.step.toggles.hall);
  CHECK(c.diagnostics.empty());
}

TEST_CASE("config syntax: comments, spacing, enums and toggles") {
  const RunConfig c = parse_config(
      "# header\n"
      "  nr = 16   # trailing\n"
      "nz=16\r\n"
      "R=3\nLz=1.5\nT=0\n\n"
      "advection = upwind1\nhall_flux=llf\nformulation=scaled\n"
      "toggles = hall, lorentz\n"
      "b_r0 = 1\nb_w = 0.5\nw_r0=0.5\nw_w=0.4\n"
      "diagnostics = out/diag.csv\n");
  CHECK(c.step.advection == AdvectionScheme::Upwind1);
  CHECK(c.step.hall_flux == HallFlux::LocalLaxFriedrichs);
  CHECK(c.formulation == Formulation::Scaled);
  CHECK_FALSE(c.step.toggles.advection);
  CHECK_FALSE(c.step.toggles.stretching);
  CHECK(c.step.toggles.hall);
  CHECK(c.step.toggles.lorentz);
  CHECK(c.diagnostics == "out/diag.csv");
  const RunConfig n = parse_config(std::string(kMinimal) + "toggles=none\n");
  CHECK_FALSE(n.step.toggles.hall);
  CHECK(serialize_config(n).find("toggles=none") != std::string::npos);
}

TEST_CASE("config errors carry line numbers") {
  auto line_of = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return e.line();
    }
    return -1;
  };
  try {
    parse_config("nr=16\nfoo=1\n");
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("foo") != std::string::npos);
  }
  CHECK(line_of("nr=16\nnz=16\nR=4\nLz=4\nT=1\nnr=32\n") == 6);  // duplicate
  CHECK(line_of("nr=16\njust text\n") == 2);
  CHECK(line_of("nr=sixteen\n") == 1);
  CHECK(line_of("nr=16.5\n") == 1);
  CHECK(line_of("nr=16\nR=4x\n") == 2);
  CHECK(line_of("nr=16\nadvection=weno\n") == 2);
  CHECK(line_of("nr=16\ntoggles=hall,swirl\n") == 2);
  CHECK(line_of("nr=16\n=3\n") == 2);
  CHECK(line_of("nr=16\nT=\n") == 2);
  // whole-file problems: missing keys and invariants
  CHECK(line_of("nr=16\nnz=16\nR=4\nLz=4\n") == 0);
  CHECK_THROWS_WITH_AS(parse_config("nr=16\nnz=16\nR=4\nLz=4\n"), doctest::Contains("'T'"), ConfigError);
  const std::string base(kMinimal);
  CHECK_THROWS_AS(parse_config(base + "sigma=3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config(base + "sigma=inf\n"), ConfigError);
  CHECK_THROWS_AS(parse_config(base + "dt_out=0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("nr=32\nnz=16\nR=4\nLz=2\nT=-1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config(base + "b_r0=2\nb_w=0.7\n"), ConfigError);  // 2 + 2.1 > R
  CHECK_THROWS_AS(parse_config(base + "w_w=0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("nr=4\nnz=16\nR=4\nLz=2\nT=0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config(base + "snapshot_every=2\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/hallmhd.cfg"), ConfigError);
}

TEST_CASE("config round trip") {
  for (const char* name : {"acceptance.cfg", "acceptance_upwind.cfg", "minimal.cfg"}) {
    INFO(name);
    const RunConfig c = load_config(std::string(HALLMHD_CONFIG_DIR) + "/" + name);
    const std::string echo = serialize_config(c);
    const RunConfig back = parse_config(echo);
    CHECK(back == c);
    CHECK(serialize_config(back) == echo);
  }
  RunConfig c = parse_config(kMinimal);
  c.b_ring.width = 0.1 + 0.2;  // not representable in short decimal
  c.step.dt_max = 1.0 / 3.0;
  CHECK(parse_config(serialize_config(c)) == c);
  CHECK(parse_config(serialize_config(c)).step.dt_max == 1.0 / 3.0);
  for (const auto& k : config_keys()) CHECK(serialize_config(c).find(k + "=") != std::string::npos);
}

TEST_CASE("diagnostics CSV") {
  SUBCASE("empty list gives a header-only table") {
    const std::string text = format_diagnostics({});
    const std::string first = text.substr(0, text.find('\n'));
    std::string expect;
    for (const auto& c : diag_columns()) expect += (expect.empty() ? "" : ",") + std::string(c.name);
    CHECK(first == expect);
    CHECK(parse_diagnostics(text).empty());
  }
  SUBCASE("zero record round trips") {
    const auto p = tmp("zero.csv");
    write_diagnostics({DiagRecord{}}, p.string());
    const auto back = read_diagnostics(p.string());
    REQUIRE(back.size() == 1);
    CHECK(back[0] == DiagRecord{});
    fs::remove(p);
  }
  SUBCASE("awkward values are bit-exact") {
    DiagRecord r;
    double x = 0.1;
    for (const auto& c : diag_columns()) {
      r.*(c.member) = x;
      x = x * -3.7 + 1e-300;
    }
    r.E = std::numeric_limits<double>::denorm_min();
    r.D = std::numeric_limits<double>::max();
    r.div_rel = std::numeric_limits<double>::infinity();
    r.pi_l2 = -0.0;
    const auto back = parse_diagnostics(format_diagnostics({r, DiagRecord{}, r}, "nr=1\n"));
    REQUIRE(back.size() == 3);
    for (const auto& c : diag_columns()) CHECK(same_bits(back[2].*(c.member), r.*(c.member)));
  }
  SUBCASE("config echo and version are embedded") {
    const std::string text = format_diagnostics({}, serialize_config(parse_config(kMinimal)));
    CHECK(text.find("# format hallmhd-diagnostics 1") != std::string::npos);
    CHECK(text.find("# config nr=32") != std::string::npos);
  }
  SUBCASE("malformed input") {
    CHECK_THROWS_AS(parse_diagnostics(""), FormatError);
    CHECK_THROWS_AS(parse_diagnostics("t,E\n1,2\n"), FormatError);
    std::string text = format_diagnostics({DiagRecord{}});
    const auto row = text.find("\n0,") + 1;
    text.replace(row, 1, "x");
    CHECK_THROWS_AS(parse_diagnostics(text), FormatError);
    CHECK_THROWS_AS(read_diagnostics("/nonexistent/d.csv"), FormatError);
  }
}

TEST_CASE("snapshots") {
  const GridSpec g = build_grid(16, 24, 4.0, 4.0);
  const auto p = tmp("snap.bin");
  SUBCASE("zero state") {
    const State s{0.0, Formulation::Primal, ScalarField(g, Parity::Odd), ScalarField(g, Parity::Odd)};
    write_snapshot(s, p.string());
    const Snapshot back = read_snapshot(p.string());
    CHECK(back.state.t == 0.0);
    CHECK(back.state.grid() == g);
    CHECK(back.state.omega.max_abs() == 0.0);
    CHECK(back.config_echo.empty());
  }
  SUBCASE("gaussian ring, both formulations, bit-identical") {
    State s = initial_gaussian_ring(g, {4.0, 1.5, 2.0, 0.8}, {20.0, 1.5, 2.0, 0.8});
    s.t = 0.1 + 0.2;
    for (const State& st : {s, to_scaled(s)}) {
      const std::string echo = serialize_config(parse_config(kMinimal));
      write_snapshot(st, p.string(), echo);
      const Snapshot back = read_snapshot(p.string());
      CHECK(back.config_echo == echo);
      CHECK(same_bits(back.state.t, st.t));
      CHECK(back.state.formulation == st.formulation);
      CHECK(back.state.omega.parity() == st.omega.parity());
      CHECK(back.state.b.parity() == st.b.parity());
      CHECK(std::memcmp(back.state.omega.values().data(), st.omega.values().data(), g.size() * 8) == 0);
      CHECK(std::memcmp(back.state.b.values().data(), st.b.values().data(), g.size() * 8) == 0);
    }
    // little-endian layout: the last 8 bytes are b(nr-1, nz-1)
    const std::string bytes = slurp(p);
    const double last = to_scaled(s).b(g.nr - 1, g.nz - 1);
    std::uint64_t bits = 0;
    for (int k = 0; k < 8; ++k) bits |= std::uint64_t(static_cast<unsigned char>(bytes[bytes.size() - 8 + k])) << (8 * k);
    CHECK(same_bits(std::bit_cast<double>(bits), last));
  }
  SUBCASE("corrupted files") {
    const State s{0.0, Formulation::Primal, ScalarField(g, Parity::Odd), ScalarField(g, Parity::Odd)};
    write_snapshot(s, p.string());
    std::string bytes = slurp(p);
    auto rewrite = [&](const std::string& b) { std::ofstream(p, std::ios::binary) << b; };
    rewrite("X" + bytes.substr(1));
    CHECK_THROWS_WITH_AS(read_snapshot(p.string()), doctest::Contains("magic"), FormatError);
    rewrite(bytes.substr(0, bytes.size() - 3));
    CHECK_THROWS_AS(read_snapshot(p.string()), FormatError);
    rewrite(bytes + "extra");
    CHECK_THROWS_AS(read_snapshot(p.string()), FormatError);
    CHECK_THROWS_AS(read_snapshot("/nonexistent/s.bin"), FormatError);
  }
  fs::remove(p);
}
