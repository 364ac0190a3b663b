#pragma once

// Time integration driven by a RunConfig, and the monitor verdict on a run.

#include <functional>
#include <string>
#include <vector>

#include "hallmhd/errors.hpp"
#include "hallmhd/io.hpp"

namespace hallmhd {

StepParams step_params(const RunConfig& cfg);
/// Gaussian-ring data in the configured formulation.
State initial_state(const RunConfig& cfg);
CollectOptions collect_options(const RunConfig& cfg);

/// Per-step quantities that the record cadence would hide.
struct StepTrace {
  double t = 0.0;
  double dt = 0.0;
  double div_rel = 0.0;
  double pi_l2 = 0.0;
  double pi_l4 = 0.0;
  double pi_l8 = 0.0;
  double pi_inf = 0.0;
};

struct RunOptions {
  bool trace = false;         // fill RunResult::trace (entry 0 is t = 0)
  bool write_outputs = true;  // diagnostics CSV and snapshots named in the config
  std::function<void(const State&, const DiagRecord&)> on_record;
};

struct RunResult {
  State state;
  std::vector<DiagRecord> records;
  std::vector<StepTrace> trace;
  int steps = 0;
};

/// Thrown when a step produces non-finite values; carries everything up to
/// the last good state. Diagnostics gathered so far are still written.
class RunAbort : public NumericalError {
 public:
  RunAbort(const std::string& msg, RunResult partial) : NumericalError(msg), partial_(std::move(partial)) {}
  const RunResult& partial() const { return partial_; }

 private:
  RunResult partial_;
};

/// Integrates from t = 0 to T, recording at t = 0, every dt_out and at T
/// (steps are shortened to land on each output time). Deterministic.
RunResult run_simulation(const RunConfig& cfg, const RunOptions& opts = {});

struct CheckResult {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  double t = 0.0;
  bool passed = false;
  bool skipped = false;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool passed() const;
};

/// Evaluates every monitor on a run made with trace = true. Tolerances follow
/// the scheme: exact energy and Hall neutrality need CENTERED advection with
/// the central Hall flux (otherwise the one-sided inequalities are checked),
/// and the strict Pi bounds need UPWIND1 with the LLF flux.
VerifyReport verify_run(const RunConfig& cfg, const RunResult& run);

}  // namespace hallmhd
