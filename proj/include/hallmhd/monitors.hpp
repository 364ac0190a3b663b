#pragma once

// Per-output-time diagnostics and the a priori identities/inequalities
// checked on them. Every monitor is a pure function of its inputs.

#include <span>
#include <utility>
#include <vector>

#include "hallmhd/dynamics.hpp"

namespace hallmhd {

/// Norms use the measure 2 pi r dr dz. Columns ending in _l2 for the scaled
/// variables and their gradients hold squared norms (see README).
struct DiagRecord {
  double t = 0.0;
  double E = 0.0;  // (||u||^2 + ||B||^2) / 2
  double D = 0.0;  // ||grad u||^2 + ||grad B||^2
  double pi_l2 = 0.0;
  double pi_l4 = 0.0;
  double pi_l8 = 0.0;
  double pi_inf = 0.0;
  double grad_pi_l2 = 0.0;            // ||grad Pi||^2
  double omega_scaled_l2 = 0.0;       // ||Omega||^2
  double grad_omega_scaled_l2 = 0.0;  // ||grad Omega||^2
  double btheta_l2 = 0.0;
  double btheta_l4 = 0.0;
  double btheta_inf = 0.0;
  double ur_over_r_inf = 0.0;
  double omega_l2 = 0.0;         // ||omega^theta||
  double omega_lsigma = 0.0;     // ||omega^theta||_{L^sigma}
  double grad_omega_l2sq = 0.0;  // ||grad(omega^theta e^theta)||^2
  double grad_u_inf = 0.0;
  double grad_b_inf = 0.0;
  double hall_energy_residual = 0.0;  // sum B . hall_flux_div(B) 2 pi r dr dz
  double div_rel = 0.0;               // worst max|div u|/(max|u|/dr) since the previous record

  bool operator==(const DiagRecord&) const = default;
};

struct DiagColumn {
  const char* name;
  double DiagRecord::*member;
};
/// CSV column order.
std::span<const DiagColumn> diag_columns();

struct CollectOptions {
  double sigma = 4.0;
  HallFlux hall_flux = HallFlux::Central;
};

DiagRecord collect(const State& s, const VelocityField& u, const CollectOptions& opts = {});

/// Worst value of a monitor and the record time at which it occurs.
struct MonitorResult {
  double value = 0.0;
  double t = 0.0;
};

/// max_t |E(t) + int_0^t D - E(0)| / E(0) (trapezoid in time); absolute if
/// E(0) = 0. Needs at least two records.
MonitorResult energy_balance(std::span<const DiagRecord> records);

/// Signed version of energy_balance: max_t (E(t) + int_0^t D - E(0)) / E(0).
/// Dissipative discretizations satisfy the energy inequality, i.e. <= 0.
MonitorResult energy_excess(std::span<const DiagRecord> records);

/// max_t hall_energy_residual / D; an LLF Hall flux only removes energy.
MonitorResult hall_energy_signed(std::span<const DiagRecord> records);

/// max_t |hall_energy_residual| / D (absolute where D = 0).
MonitorResult hall_energy_ratio(std::span<const DiagRecord> records);

/// max_t (pi_inf(t) - pi_inf(0)) / pi_inf(0).
MonitorResult pi_maximum_principle(std::span<const DiagRecord> records);

/// Largest relative increase of ||Pi||_{L^p} between consecutive records,
/// p in {2, 4, 8, inf}.
MonitorResult pi_lp_monotone(std::span<const DiagRecord> records, double p);

/// max over record pairs of
///   [d/dt ||Omega||^2 + ||grad Omega||^2 - ||Pi_0||_{L^4}^4] / ||Pi_0||_{L^4}^4.
/// Negative means the inequality holds.
MonitorResult omega_scaled_inequality(std::span<const DiagRecord> records);

/// max over record pairs of (lhs - rhs)/(|lhs| + |rhs|) for
///   (1/p) d/dt ||B||_p^p <= ||B||_p^p ||u^r/r||_inf,  p in {2, 4}.
MonitorResult btheta_gronwall(std::span<const DiagRecord> records, int p);

/// 10 x (||omega_0||^2) -- the envelope equals 1 at t = 0.
double calibrate_envelope_constant(std::span<const DiagRecord> records);
/// max_t [||omega(t)||^2 + int_0^t ||grad omega||^2] / (C0 (1+t) exp(t^{3/4} + t^{5/4})).
MonitorResult growth_envelope_ratio(std::span<const DiagRecord> records, double C0);
/// True when growth_envelope_ratio <= 1.
bool growth_envelope(std::span<const DiagRecord> records, double C0);

/// Largest div_rel over the records.
MonitorResult divergence_monitor(std::span<const DiagRecord> records);

/// int_0^T ||grad u||_inf dt and int_0^T ||grad B||_inf^2 dt (trapezoid).
std::pair<double, double> gradient_integrals(std::span<const DiagRecord> records);

/// ||u||_inf / (||omega||^{1/2} ||grad omega||^{1/2}) and
/// ||u^r/r||_inf / (||Omega||^{1/2} ||grad Omega||^{1/2}); zero fields give 0.
std::pair<double, double> biot_savart_ratios(const State& s, const VelocityField& u);

/// ||grad u||_{L^p} / ||omega^theta||_{L^p}; zero fields give 0.
double grad_curl_ratio(const State& s, const VelocityField& u, double p);

}  // namespace hallmhd
