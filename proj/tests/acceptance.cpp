// Acceptance suite: one PASS/FAIL line per criterion on the desk-scale runs.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "hallmhd/lpbox.hpp"
#include "hallmhd/mms.hpp"
#include "hallmhd/oracle3d.hpp"
#include "hallmhd/run.hpp"

using namespace hallmhd;

namespace {

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
  std::printf("%s [%2d] %-28s %s\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

bool identity_ok(const oracle::IdentityReport& r) { return !r.errors.empty() && r.errors.back() <= 1e-3 && r.order >= 1.9; }

const CheckResult& find(const VerifyReport& rep, const std::string& name) {
  for (const auto& c : rep.checks)
    if (c.name == name) return c;
  static const CheckResult missing{"missing"};
  return missing;
}

double sup_rel(const ScalarField& a, const ScalarField& b) {
  return (a - b).max_abs() / std::max(b.max_abs(), 1e-300);
}

}  // namespace

int main() {
  const auto t_start = std::chrono::steady_clock::now();
  const std::string dir = HALLMHD_CONFIG_DIR;
  RunConfig centered = load_config(dir + "/acceptance.cfg");
  RunConfig upwind = load_config(dir + "/acceptance_upwind.cfg");

  // 1-2: Cartesian oracle
  const auto oracle = oracle::run_oracle_battery();
  report(1, "hall identity", identity_ok(oracle.hall),
         fmt("err(n=128)=%.2e order=%.2f", oracle.hall.errors.back(), oracle.hall.order));
  const bool norms_ok = identity_ok(oracle.vorticity) && identity_ok(oracle.norms.l2) && identity_ok(oracle.norms.h1);
  report(2, "vorticity and norm identities", norms_ok,
         fmt("vort %.2e/%.2f  l2 %.2e/%.2f", oracle.vorticity.errors.back(), oracle.vorticity.order,
             oracle.norms.l2.errors.back(), oracle.norms.l2.order) +
             fmt("  h1 %.2e/%.2f", oracle.norms.h1.errors.back(), oracle.norms.h1.order));

  // The two acceptance runs; the PRIMAL state at t = 0.25 is kept for 9.
  RunOptions opts;
  opts.trace = true;
  opts.write_outputs = false;
  const double t_mid = 0.25;
  State primal_mid;
  opts.on_record = [&](const State& s, const DiagRecord& d) {
    if (std::abs(d.t - t_mid) < 1e-12) primal_mid = s;
  };
  const RunResult rc = run_simulation(centered, opts);
  opts.on_record = nullptr;
  const RunResult ru = run_simulation(upwind, opts);
  const VerifyReport vc = verify_run(centered, rc);
  const VerifyReport vu = verify_run(upwind, ru);

  // 3
  const double div = std::max(find(vc, "divergence").value, find(vu, "divergence").value);
  report(3, "discrete incompressibility", div <= 1e-12,
         fmt("max div_rel over %.0f steps = %.2e", double(rc.steps + ru.steps), div));

  // 4
  const auto& eb = find(vc, "energy_balance");
  const auto& he = find(vc, "hall_energy");
  report(4, "energy balance", eb.passed && he.passed && eb.tolerance == 1e-3 && he.tolerance == 1e-6,
         fmt("residual %.2e (tol 1e-3), hall/D %.2e (tol 1e-6)", eb.value, he.value));

  // 5: strict bounds on the UPWIND1 run, documented overshoot bound on CENTERED
  bool ok5 = true;
  double up_lp = -1e300, ce_lp = -1e300;
  for (const char* p : {"pi_l2_monotone", "pi_l4_monotone", "pi_l8_monotone"}) {
    ok5 = ok5 && find(vu, p).passed && find(vu, p).tolerance == 1e-8 && find(vc, p).passed;
    up_lp = std::max(up_lp, find(vu, p).value);
    ce_lp = std::max(ce_lp, find(vc, p).value);
  }
  const auto& pu = find(vu, "pi_max_principle");
  const auto& pc = find(vc, "pi_max_principle");
  ok5 = ok5 && pu.passed && pu.tolerance == 1e-12 && pc.passed;
  report(5, "pi maximum principle", ok5,
         fmt("upwind: sup %.2e, step Lp %.2e; centered: sup %.2e, step Lp %.2e", pu.value, up_lp, pc.value, ce_lp));

  // 6-8 on both runs
  auto both = [&](const std::string& name) {
    return std::pair{find(vc, name), find(vu, name)};
  };
  {
    auto [c, u] = both("omega_scaled_inequality");
    report(6, "omega differential inequality", c.passed && u.passed,
           fmt("worst residual %.3f / %.3f (tol 0.05)", c.value, u.value));
  }
  {
    auto [c2, u2] = both("btheta_gronwall_p2");
    auto [c4, u4] = both("btheta_gronwall_p4");
    report(7, "btheta gronwall", c2.passed && u2.passed && c4.passed && u4.passed,
           fmt("p=2 %.3f/%.3f  p=4 %.3f/%.3f (tol 0.05)", c2.value, u2.value, c4.value, u4.value));
  }
  {
    auto [c, u] = both("growth_envelope");
    report(8, "growth envelope", c.passed && u.passed, fmt("max ratio %.3f / %.3f with C0 = 10x calibration", c.value, u.value));
  }

  // 9: SCALED run of the centered configuration to t = 0.25
  {
    RunConfig sc = centered;
    sc.formulation = Formulation::Scaled;
    sc.T = t_mid;
    RunOptions o;
    o.write_outputs = false;
    const State s = to_primal(run_simulation(sc, o).state);
    bool ok = primal_mid.omega.values().size() == s.omega.values().size();
    double d = INFINITY;
    if (ok) d = std::max(sup_rel(s.omega, primal_mid.omega), sup_rel(s.b, primal_mid.b));
    report(9, "formulation equivalence", ok && d <= 5e-3, fmt("sup relative difference at t=0.25: %.2e (tol 5e-3)", d));
  }

  // 10
  {
    const MmsReport m = run_mms();
    std::string detail;
    for (const auto& s : m.series) detail += s.name + fmt(" %.3f  ", s.order);
    report(10, "mms convergence", m.passed(1.9), detail);
  }

  // 11
  {
    const auto lp = lp::run_lp_battery();
    int viol = 0, samples = 0;
    for (const auto& c : lp.checks) {
      viol += c.sweep.violations;
      samples += c.sweep.samples;
    }
    report(11, "harmonic-analysis battery", lp.passed(1e-10) && viol == 0,
           fmt("partition %.1e reconstruction %.1e, %.0f checks, %.0f violations", lp.partition_residual,
               lp.reconstruction_residual, double(lp.checks.size()), double(viol)) +
               " in " + std::to_string(samples) + " samples");
  }

  // 12: ratio boundedness over eight ring shapes, and scale invariance
  {
    struct Shape {
      double r0, z0, w;
    };
    const std::vector<Shape> shapes{{1.5, 2.0, 0.8}, {1.0, 2.0, 0.5}, {2.0, 1.0, 0.6}, {0.8, 3.0, 0.4},
                                    {1.2, 2.0, 0.9}, {2.2, 2.5, 0.5}, {0.6, 1.5, 0.3}, {1.8, 0.5, 0.7}};
    const GridSpec g = centered.grid();
    std::vector<std::vector<double>> ratios(4);
    double scale_err = 0.0;
    bool finite = true;
    for (const auto& sh : shapes) {
      const State s = initial_gaussian_ring(g, {1.0, sh.r0, sh.z0, sh.w}, {10.0, sh.r0, sh.z0, sh.w});
      auto eval = [&](const State& st) {
        const VelocityField u = velocity_of(st);
        const auto [bs, bs_scaled] = biot_savart_ratios(st, u);
        return std::vector<double>{bs, bs_scaled, grad_curl_ratio(st, u, 2.0), grad_curl_ratio(st, u, 4.0)};
      };
      const auto v = eval(s);
      State big = s;
      big.omega *= 37.5;
      big.b *= 37.5;
      const auto w = eval(big);
      for (std::size_t k = 0; k < v.size(); ++k) {
        finite = finite && std::isfinite(v[k]) && v[k] > 0.0;
        ratios[k].push_back(v[k]);
        scale_err = std::max(scale_err, std::abs(w[k] - v[k]) / v[k]);
      }
    }
    double spread = 0.0;
    for (auto r : ratios) {
      std::vector<double> sorted = r;
      std::sort(sorted.begin(), sorted.end());
      const double median = 0.5 * (sorted[3] + sorted[4]);
      for (double x : r) spread = std::max(spread, std::max(x / median, median / x));
    }
    report(12, "biot-savart / grad-curl ratios", finite && spread <= 10.0 && scale_err <= 1e-12,
           fmt("max deviation from median %.2fx (tol 10x), scaling error %.1e (tol 1e-12)", spread, scale_err));
  }

  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  std::printf("%d/12 criteria passed in %.1f s\n", 12 - failures, secs);
  return failures == 0 ? 0 : 1;
}
