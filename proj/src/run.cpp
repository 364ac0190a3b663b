#include "hallmhd/run.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hallmhd {
namespace {

StepTrace trace_of(const State& s, double dt, double div_rel) {
  const ScalarField pi = pi_field(s);
  return {s.t, dt, div_rel, lp_norm(pi, 2), lp_norm(pi, 4), lp_norm(pi, 8), pi.max_abs()};
}

void write_outputs(const RunConfig& cfg, const RunResult& r) {
  if (!cfg.diagnostics.empty()) write_diagnostics(r.records, cfg.diagnostics, serialize_config(cfg));
  if (!cfg.snapshot.empty()) write_snapshot(r.state, cfg.snapshot, serialize_config(cfg));
}

}  // namespace

StepParams step_params(const RunConfig& cfg) { return cfg.step; }

State initial_state(const RunConfig& cfg) {
  State s = initial_gaussian_ring(cfg.grid(), cfg.b_ring, cfg.omega_ring);
  return cfg.formulation == Formulation::Scaled ? to_scaled(s) : s;
}

CollectOptions collect_options(const RunConfig& cfg) {
  return {cfg.sigma, cfg.step.resolved_hall_flux()};
}

RunResult run_simulation(const RunConfig& cfg, const RunOptions& opts) {
  validate(cfg);
  const StepParams p = step_params(cfg);
  const CollectOptions co = collect_options(cfg);
  const std::string echo = serialize_config(cfg);

  RunResult r;
  r.state = initial_state(cfg);
  auto record = [&](double div_rel) {
    DiagRecord d = collect(r.state, velocity_of(r.state), co);
    d.div_rel = std::max(d.div_rel, div_rel);
    r.records.push_back(d);
    if (opts.on_record) opts.on_record(r.state, d);
    const int k = static_cast<int>(r.records.size()) - 1;
    if (opts.write_outputs && cfg.snapshot_every > 0 && k % cfg.snapshot_every == 0)
      write_snapshot(r.state, cfg.snapshot + "." + std::to_string(k), echo);
  };

  record(0.0);
  if (opts.trace) r.trace.push_back(trace_of(r.state, 0.0, r.records.back().div_rel));

  const double eps = 1e-12 * std::max(1.0, cfg.T);
  int k = 1;
  double worst_div = 0.0;
  try {
    while (r.state.t < cfg.T - eps) {
      double next = k * cfg.dt_out;
      if (next > cfg.T - eps) next = cfg.T;
      StepInfo info;
      State s = step_imex(r.state, p, next - r.state.t, &info);
      ++r.steps;
      worst_div = std::max(worst_div, info.div_rel);
      const bool lands = std::abs(s.t - next) <= eps;
      if (lands) s.t = next;
      r.state = std::move(s);
      if (opts.trace) r.trace.push_back(trace_of(r.state, info.dt, info.div_rel));
      if (lands) {
        record(worst_div);
        worst_div = 0.0;
        ++k;
      }
    }
  } catch (const NumericalError& e) {
    if (opts.write_outputs && !cfg.diagnostics.empty()) write_diagnostics(r.records, cfg.diagnostics, echo);
    throw RunAbort(std::string(e.what()) + " at t = " + std::to_string(r.state.t), std::move(r));
  }
  if (opts.write_outputs) write_outputs(cfg, r);
  return r;
}

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed || c.skipped; });
}

VerifyReport verify_run(const RunConfig& cfg, const RunResult& run) {
  VerifyReport rep;
  const auto& recs = run.records;
  const bool pairs = recs.size() >= 2;
  auto add = [&](std::string name, MonitorResult m, double tol, bool needs_pairs = false) {
    CheckResult c{std::move(name), m.value, tol, m.t, false, needs_pairs && !pairs};
    c.passed = !c.skipped && m.value <= tol;
    rep.checks.push_back(c);
  };
  auto pair_monitor = [&](auto&& f) { return pairs ? f() : MonitorResult{}; };

  const bool exact = cfg.step.advection == AdvectionScheme::Centered && cfg.step.resolved_hall_flux() == HallFlux::Central;
  const bool monotone =
      cfg.step.advection == AdvectionScheme::Upwind1 && cfg.step.resolved_hall_flux() == HallFlux::LocalLaxFriedrichs;

  // every step, not only the records
  MonitorResult div = divergence_monitor(recs);
  for (const auto& s : run.trace)
    if (s.div_rel > div.value) div = {s.div_rel, s.t};
  add("divergence", div, 1e-12);

  if (exact) {
    add("energy_balance", pair_monitor([&] { return energy_balance(recs); }), 1e-3, true);
    add("hall_energy", hall_energy_ratio(recs), 1e-6);
  } else {
    add("energy_inequality", pair_monitor([&] { return energy_excess(recs); }), 1e-3, true);
    add("hall_energy_sign", hall_energy_signed(recs), 1e-6);
  }

  const double pi_tol = monotone ? 1e-12 : 1e-3;
  const double lp_tol = monotone ? 1e-8 : 1e-3;
  MonitorResult pimax = pi_maximum_principle(recs);
  if (!run.trace.empty()) {
    const double p0 = run.trace.front().pi_inf;
    for (const auto& s : run.trace) {
      const double v = p0 > 0.0 ? (s.pi_inf - p0) / p0 : s.pi_inf;
      if (v > pimax.value) pimax = {v, s.t};
    }
  }
  add("pi_max_principle", pimax, pi_tol);
  for (double p : {2.0, 4.0, 8.0}) {
    MonitorResult m = pair_monitor([&] { return pi_lp_monotone(recs, p); });
    if (run.trace.size() >= 2) {
      m = {-std::numeric_limits<double>::infinity(), 0.0};
      for (std::size_t k = 1; k < run.trace.size(); ++k) {
        const auto norm = [p](const StepTrace& s) { return p == 2.0 ? s.pi_l2 : p == 4.0 ? s.pi_l4 : s.pi_l8; };
        const double a = norm(run.trace[k - 1]), b = norm(run.trace[k]);
        const double v = a > 0.0 ? (b - a) / a : b;
        if (v > m.value) m = {v, run.trace[k].t};
      }
    }
    add("pi_l" + std::to_string(static_cast<int>(p)) + "_monotone", m, lp_tol, run.trace.size() < 2);
  }

  add("omega_scaled_inequality", pair_monitor([&] { return omega_scaled_inequality(recs); }), 0.05, true);
  add("btheta_gronwall_p2", pair_monitor([&] { return btheta_gronwall(recs, 2); }), 0.05, true);
  add("btheta_gronwall_p4", pair_monitor([&] { return btheta_gronwall(recs, 4); }), 0.05, true);
  add("growth_envelope", growth_envelope_ratio(recs, calibrate_envelope_constant(recs)), 1.0);
  return rep;
}

}  // namespace hallmhd
