#include "hallmhd/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <ostream>

#include "hallmhd/lpbox.hpp"
#include "hallmhd/mms.hpp"
#include "hallmhd/oracle3d.hpp"
#include "hallmhd/run.hpp"

namespace hallmhd {
namespace {

std::string num(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

void print_identity(std::ostream& out, const std::string& name, const oracle::IdentityReport& r) {
  out << name;
  for (std::size_t k = 0; k < r.sizes.size(); ++k) out << "  n=" << r.sizes[k] << " err=" << num("%.3e", r.errors[k]);
  out << "  order=" << num("%.3f", r.order) << "\n";
}

int cmd_run(const std::string& path, bool quiet, std::ostream& out) {
  const RunConfig cfg = load_config(path);
  RunOptions o;
  if (!quiet)
    o.on_record = [&out](const State&, const DiagRecord& d) {
      out << "t=" << num("%.6g", d.t) << " E=" << num("%.6e", d.E) << " D=" << num("%.6e", d.D)
          << " pi_inf=" << num("%.6e", d.pi_inf) << "\n";
    };
  const RunResult r = run_simulation(cfg, o);
  out << "steps=" << r.steps << " records=" << r.records.size() << " t=" << num("%.6g", r.state.t) << "\n";
  if (!cfg.diagnostics.empty()) out << "diagnostics: " << cfg.diagnostics << "\n";
  if (!cfg.snapshot.empty()) out << "snapshot: " << cfg.snapshot << "\n";
  return kExitOk;
}

int cmd_verify(const std::string& path, bool write, std::ostream& out) {
  const RunConfig cfg = load_config(path);
  RunOptions o;
  o.trace = true;
  o.write_outputs = write;
  const auto t0 = std::chrono::steady_clock::now();
  const RunResult r = run_simulation(cfg, o);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const VerifyReport rep = verify_run(cfg, r);
  out << "advection=" << to_string(cfg.step.advection) << " hall_flux=" << to_string(cfg.step.resolved_hall_flux())
      << " formulation=" << to_string(cfg.formulation) << " steps=" << r.steps << " records=" << r.records.size()
      << " (" << num("%.1f", secs) << " s)\n";
  for (const auto& c : rep.checks) {
    char line[160];
    std::snprintf(line, sizeof line, "%-6s %-26s %12.4e  tol %.0e  t=%.4g\n",
                  c.skipped ? "SKIP" : c.passed ? "PASS" : "FAIL", c.name.c_str(), c.value, c.tolerance, c.t);
    out << line;
  }
  out << (rep.passed() ? "all monitors passed\n" : "monitor violation\n");
  return rep.passed() ? kExitOk : kExitMonitor;
}

int cmd_mms(const std::vector<int>& sizes, std::ostream& out) {
  MmsOptions o;
  o.sizes = sizes;
  const MmsReport rep = run_mms(o);
  for (const auto& s : rep.series) {
    out << s.name;
    for (std::size_t k = 0; k < s.sizes.size(); ++k) out << "  n=" << s.sizes[k] << " err=" << num("%.3e", s.errors[k]);
    out << "  order=" << num("%.3f", s.order) << "\n";
  }
  out << "R sensitivity " << num("%.3e", rep.r_sensitivity) << "\n";
  out << (rep.passed() ? "orders ok\n" : "order below 1.9\n");
  return rep.passed() ? kExitOk : kExitMonitor;
}

int cmd_oracle(const std::vector<int>& sizes, std::ostream& out) {
  oracle::OracleSetup setup;
  setup.sizes = sizes;
  const auto b = oracle::run_oracle_battery(setup);
  print_identity(out, "hall", b.hall);
  print_identity(out, "vorticity", b.vorticity);
  print_identity(out, "norm_l2", b.norms.l2);
  print_identity(out, "norm_h1", b.norms.h1);
  out << (b.passed() ? "identities ok\n" : "identity check failed\n");
  return b.passed() ? kExitOk : kExitMonitor;
}

int cmd_lp(const lp::LpBatteryOptions& o, std::ostream& out) {
  const auto rep = lp::run_lp_battery(o);
  out << "partition residual " << num("%.3e", rep.partition_residual) << "\n";
  out << "reconstruction residual " << num("%.3e", rep.reconstruction_residual) << "\n";
  for (const auto& c : rep.checks) {
    char line[160];
    std::snprintf(line, sizeof line, "%-30s C*=%.4e  ratios [%.4e, %.4e]  violations %d/%d\n", c.name.c_str(), c.c_star,
                  c.sweep.min_ratio, c.sweep.max_ratio, c.sweep.violations, c.sweep.samples);
    out << line;
  }
  out << (rep.passed() ? "battery ok\n" : "battery failed\n");
  return rep.passed() ? kExitOk : kExitMonitor;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Axisymmetric Hall-MHD simulator and verification harness", "hallmhd"};
  app.require_subcommand(1);

  std::string config;
  bool quiet = false, no_write = false;
  auto* run = app.add_subcommand("run", "Integrate a configuration and write diagnostics/snapshots");
  run->add_option("config", config, "key=value configuration file")->required();
  run->add_flag("-q,--quiet", quiet, "Only print the summary line");

  auto* verify = app.add_subcommand("verify", "Run a configuration and check every monitor (exit 1 on violation)");
  verify->add_option("config", config, "key=value configuration file")->required();
  verify->add_flag("--no-write", no_write, "Skip the diagnostics and snapshot files");

  std::vector<int> mms_sizes{64, 128, 256};
  auto* mms = app.add_subcommand("mms", "Manufactured-solution convergence study");
  mms->add_option("--sizes", mms_sizes, "Grid sizes (nr = nz)")->delimiter(',')->capture_default_str();

  std::vector<int> oracle_sizes{64, 128};
  auto* orc = app.add_subcommand("oracle", "Cartesian-box identity battery");
  orc->add_option("--sizes", oracle_sizes, "Box lattice sizes")->delimiter(',')->capture_default_str();

  lp::LpBatteryOptions lpo;
  auto* lpc = app.add_subcommand("lp", "Littlewood-Paley property battery on the periodic box");
  lpc->add_option("--n", lpo.n, "Lattice size")->capture_default_str();
  lpc->add_option("--samples", lpo.samples, "Random fields per check")->capture_default_str();
  lpc->add_option("--seed", lpo.seed, "Seed of the tested family")->capture_default_str();
  lpc->add_option("--calibration-seed", lpo.calibration_seed, "Seed of the calibration family")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) return cmd_run(config, quiet, out);
    if (*verify) return cmd_verify(config, !no_write, out);
    if (*mms) return cmd_mms(mms_sizes, out);
    if (*orc) return cmd_oracle(oracle_sizes, out);
    if (*lpc) return cmd_lp(lpo, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const RunAbort& e) {
    err << "numerical abort: " << e.what() << " (" << e.partial().records.size() << " records kept)\n";
    return kExitNumerical;
  } catch (const NumericalError& e) {
    err << "numerical abort: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const FormatError& e) {
    err << "output error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "invalid argument: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace hallmhd
