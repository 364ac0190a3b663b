#include "hallmhd/monitors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "hallmhd/errors.hpp"

namespace hallmhd {
namespace {

constexpr std::array<DiagColumn, 21> kColumns{{
    {"t", &DiagRecord::t},
    {"E", &DiagRecord::E},
    {"D", &DiagRecord::D},
    {"pi_l2", &DiagRecord::pi_l2},
    {"pi_l4", &DiagRecord::pi_l4},
    {"pi_l8", &DiagRecord::pi_l8},
    {"pi_inf", &DiagRecord::pi_inf},
    {"grad_pi_l2", &DiagRecord::grad_pi_l2},
    {"omega_scaled_l2", &DiagRecord::omega_scaled_l2},
    {"grad_omega_scaled_l2", &DiagRecord::grad_omega_scaled_l2},
    {"btheta_l2", &DiagRecord::btheta_l2},
    {"btheta_l4", &DiagRecord::btheta_l4},
    {"btheta_inf", &DiagRecord::btheta_inf},
    {"ur_over_r_inf", &DiagRecord::ur_over_r_inf},
    {"omega_l2", &DiagRecord::omega_l2},
    {"omega_lsigma", &DiagRecord::omega_lsigma},
    {"grad_omega_l2sq", &DiagRecord::grad_omega_l2sq},
    {"grad_u_inf", &DiagRecord::grad_u_inf},
    {"grad_b_inf", &DiagRecord::grad_b_inf},
    {"hall_energy_residual", &DiagRecord::hall_energy_residual},
    {"div_rel", &DiagRecord::div_rel},
}};

double sq(double x) { return x * x; }

// Pointwise max of sqrt(sum_k f_k^2).
double max_magnitude(std::initializer_list<const ScalarField*> parts) {
  const std::size_t n = (*parts.begin())->values().size();
  double m = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double s = 0.0;
    for (const ScalarField* f : parts) s += sq(f->values()[k]);
    m = std::max(m, s);
  }
  return std::sqrt(m);
}

// L^p norm of the pointwise magnitude sqrt(sum_k f_k^2).
double lp_magnitude(std::initializer_list<const ScalarField*> parts, double p) {
  const ScalarField& first = **parts.begin();
  ScalarField mag(first.grid(), Parity::Even);
  auto out = mag.values();
  for (std::size_t k = 0; k < out.size(); ++k) {
    double s = 0.0;
    for (const ScalarField* f : parts) s += sq(f->values()[k]);
    out[k] = std::sqrt(s);
  }
  return lp_norm(mag, p);
}

struct VelocityGradient {
  ScalarField ur_r, ur_z, ur_over_r, uz_r, uz_z;
};

VelocityGradient velocity_gradient(const VelocityField& u) {
  return {ddr(u.ur), ddz(u.ur), divide_by_r(u.ur), ddr(u.uz), ddz(u.uz)};
}

void require_records(std::span<const DiagRecord> records, std::size_t n) {
  if (records.size() < n) throw DomainError("monitor needs at least " + std::to_string(n) + " records");
}

double relative_to(double value, double scale) { return scale > 0.0 ? value / scale : value; }

}  // namespace

std::span<const DiagColumn> diag_columns() { return kColumns; }

DiagRecord collect(const State& s, const VelocityField& u, const CollectOptions& opts) {
  const ScalarField B = b_theta(s);
  const ScalarField w = omega_theta(s);
  const ScalarField Pi = pi_field(s);
  const ScalarField Om = omega_scaled(s);

  DiagRecord d;
  d.t = s.t;
  d.E = 0.5 * (sq(lp_norm(u.ur, 2)) + sq(lp_norm(u.uz, 2)) + sq(lp_norm(B, 2)));

  const VelocityGradient gu = velocity_gradient(u);
  const double grad_u_sq = sq(lp_norm(gu.ur_r, 2)) + sq(lp_norm(gu.ur_z, 2)) + sq(lp_norm(gu.ur_over_r, 2)) +
                           sq(lp_norm(gu.uz_r, 2)) + sq(lp_norm(gu.uz_z, 2));
  d.D = grad_u_sq + theta_h1_seminorm_sq(B);

  d.pi_l2 = lp_norm(Pi, 2);
  d.pi_l4 = lp_norm(Pi, 4);
  d.pi_l8 = lp_norm(Pi, 8);
  d.pi_inf = lp_norm(Pi, std::numeric_limits<double>::infinity());
  d.grad_pi_l2 = scalar_h1_seminorm_sq(Pi);
  d.omega_scaled_l2 = sq(lp_norm(Om, 2));
  d.grad_omega_scaled_l2 = scalar_h1_seminorm_sq(Om);
  d.btheta_l2 = lp_norm(B, 2);
  d.btheta_l4 = lp_norm(B, 4);
  d.btheta_inf = B.max_abs();
  d.ur_over_r_inf = gu.ur_over_r.max_abs();
  d.omega_l2 = lp_norm(w, 2);
  d.omega_lsigma = lp_norm(w, opts.sigma);
  d.grad_omega_l2sq = theta_h1_seminorm_sq(w);
  d.grad_u_inf = max_magnitude({&gu.ur_r, &gu.ur_z, &gu.ur_over_r, &gu.uz_r, &gu.uz_z});
  const ScalarField br = ddr(B);
  const ScalarField bz = ddz(B);
  const ScalarField bor = divide_by_r(B);
  d.grad_b_inf = max_magnitude({&br, &bz, &bor});
  const HallFlux flux = opts.hall_flux == HallFlux::Auto ? HallFlux::Central : opts.hall_flux;
  d.hall_energy_residual = inner(B, hall_flux_div(B, flux));
  const double umax = max_speed(u);
  d.div_rel = umax > 0.0 ? discrete_divergence(u).max_abs() / (umax / s.grid().dr) : 0.0;
  return d;
}

MonitorResult energy_balance(std::span<const DiagRecord> records) {
  require_records(records, 2);
  const double e0 = records.front().E;
  MonitorResult worst;
  double integral = 0.0;
  for (std::size_t k = 1; k < records.size(); ++k) {
    const auto& a = records[k - 1];
    const auto& b = records[k];
    integral += 0.5 * (b.t - a.t) * (a.D + b.D);
    const double res = relative_to(std::abs(b.E + integral - e0), e0);
    if (res > worst.value) worst = {res, b.t};
  }
  return worst;
}

MonitorResult energy_excess(std::span<const DiagRecord> records) {
  require_records(records, 2);
  const double e0 = records.front().E;
  MonitorResult worst{-std::numeric_limits<double>::infinity(), records.front().t};
  double integral = 0.0;
  for (std::size_t k = 1; k < records.size(); ++k) {
    const auto& a = records[k - 1];
    const auto& b = records[k];
    integral += 0.5 * (b.t - a.t) * (a.D + b.D);
    const double res = relative_to(b.E + integral - e0, e0);
    if (res > worst.value) worst = {res, b.t};
  }
  return worst;
}

MonitorResult hall_energy_signed(std::span<const DiagRecord> records) {
  MonitorResult worst{-std::numeric_limits<double>::infinity(), 0.0};
  for (const auto& r : records) {
    const double v = relative_to(r.hall_energy_residual, r.D);
    if (v > worst.value) worst = {v, r.t};
  }
  return worst;
}

MonitorResult hall_energy_ratio(std::span<const DiagRecord> records) {
  MonitorResult worst;
  for (const auto& r : records) {
    const double v = relative_to(std::abs(r.hall_energy_residual), r.D);
    if (v > worst.value) worst = {v, r.t};
  }
  return worst;
}

MonitorResult pi_maximum_principle(std::span<const DiagRecord> records) {
  require_records(records, 1);
  const double p0 = records.front().pi_inf;
  MonitorResult worst{-std::numeric_limits<double>::infinity(), records.front().t};
  for (const auto& r : records) {
    const double v = relative_to(r.pi_inf - p0, p0);
    if (v > worst.value) worst = {v, r.t};
  }
  return worst;
}

namespace {

double pi_norm(const DiagRecord& r, double p) {
  if (std::isinf(p)) return r.pi_inf;
  if (p == 2.0) return r.pi_l2;
  if (p == 4.0) return r.pi_l4;
  if (p == 8.0) return r.pi_l8;
  throw DomainError("pi_lp_monotone supports p in {2, 4, 8, inf}");
}

}  // namespace

MonitorResult pi_lp_monotone(std::span<const DiagRecord> records, double p) {
  require_records(records, 2);
  MonitorResult worst{-std::numeric_limits<double>::infinity(), records.front().t};
  for (std::size_t k = 1; k < records.size(); ++k) {
    const double a = pi_norm(records[k - 1], p);
    const double b = pi_norm(records[k], p);
    const double v = relative_to(b - a, a);
    if (v > worst.value) worst = {v, records[k].t};
  }
  return worst;
}

MonitorResult omega_scaled_inequality(std::span<const DiagRecord> records) {
  require_records(records, 2);
  const double bound = std::pow(records.front().pi_l4, 4);
  MonitorResult worst{-std::numeric_limits<double>::infinity(), records.front().t};
  for (std::size_t k = 1; k < records.size(); ++k) {
    const auto& a = records[k - 1];
    const auto& b = records[k];
    const double dt = b.t - a.t;
    if (!(dt > 0.0)) continue;
    const double lhs = (b.omega_scaled_l2 - a.omega_scaled_l2) / dt +
                       0.5 * (a.grad_omega_scaled_l2 + b.grad_omega_scaled_l2);
    const double v = relative_to(lhs - bound, bound);
    if (v > worst.value) worst = {v, b.t};
  }
  return worst;
}

MonitorResult btheta_gronwall(std::span<const DiagRecord> records, int p) {
  require_records(records, 2);
  if (p != 2 && p != 4) throw DomainError("btheta_gronwall supports p in {2, 4}");
  auto power = [p](const DiagRecord& r) { return p == 2 ? sq(r.btheta_l2) : sq(sq(r.btheta_l4)); };
  MonitorResult worst{-std::numeric_limits<double>::infinity(), records.front().t};
  for (std::size_t k = 1; k < records.size(); ++k) {
    const auto& a = records[k - 1];
    const auto& b = records[k];
    const double dt = b.t - a.t;
    if (!(dt > 0.0)) continue;
    const double lhs = (power(b) - power(a)) / (p * dt);
    const double rhs = 0.25 * (power(a) + power(b)) * (a.ur_over_r_inf + b.ur_over_r_inf);
    const double scale = std::abs(lhs) + std::abs(rhs);
    const double v = scale > 0.0 ? (lhs - rhs) / scale : 0.0;
    if (v > worst.value) worst = {v, b.t};
  }
  return worst;
}

double calibrate_envelope_constant(std::span<const DiagRecord> records) {
  require_records(records, 1);
  return 10.0 * sq(records.front().omega_l2);
}

MonitorResult growth_envelope_ratio(std::span<const DiagRecord> records, double C0) {
  require_records(records, 1);
  MonitorResult worst{0.0, records.front().t};
  double integral = 0.0;
  for (std::size_t k = 0; k < records.size(); ++k) {
    const auto& r = records[k];
    if (k > 0) integral += 0.5 * (r.t - records[k - 1].t) * (r.grad_omega_l2sq + records[k - 1].grad_omega_l2sq);
    const double lhs = sq(r.omega_l2) + integral;
    const double env = C0 * (1.0 + r.t) * std::exp(std::pow(r.t, 0.75) + std::pow(r.t, 1.25));
    double v;
    if (env > 0.0) {
      v = lhs / env;
    } else {
      v = lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    }
    if (v > worst.value) worst = {v, r.t};
  }
  return worst;
}

bool growth_envelope(std::span<const DiagRecord> records, double C0) {
  return growth_envelope_ratio(records, C0).value <= 1.0;
}

MonitorResult divergence_monitor(std::span<const DiagRecord> records) {
  MonitorResult worst;
  for (const auto& r : records) {
    if (r.div_rel > worst.value) worst = {r.div_rel, r.t};
  }
  return worst;
}

std::pair<double, double> gradient_integrals(std::span<const DiagRecord> records) {
  double iu = 0.0;
  double ib = 0.0;
  for (std::size_t k = 1; k < records.size(); ++k) {
    const auto& a = records[k - 1];
    const auto& b = records[k];
    const double dt = b.t - a.t;
    iu += 0.5 * dt * (a.grad_u_inf + b.grad_u_inf);
    ib += 0.5 * dt * (sq(a.grad_b_inf) + sq(b.grad_b_inf));
  }
  return {iu, ib};
}

std::pair<double, double> biot_savart_ratios(const State& s, const VelocityField& u) {
  const ScalarField w = omega_theta(s);
  const ScalarField Om = omega_scaled(s);
  const double uinf = max_speed(u);
  const double d1 = std::sqrt(lp_norm(w, 2)) * std::pow(theta_h1_seminorm_sq(w), 0.25);
  const double urr = divide_by_r(u.ur).max_abs();
  const double d2 = std::sqrt(lp_norm(Om, 2)) * std::pow(scalar_h1_seminorm_sq(Om), 0.25);
  return {d1 > 0.0 ? uinf / d1 : 0.0, d2 > 0.0 ? urr / d2 : 0.0};
}

double grad_curl_ratio(const State& s, const VelocityField& u, double p) {
  const VelocityGradient gu = velocity_gradient(u);
  const double num = lp_magnitude({&gu.ur_r, &gu.ur_z, &gu.ur_over_r, &gu.uz_r, &gu.uz_z}, p);
  const double den = lp_norm(omega_theta(s), p);
  return den > 0.0 ? num / den : 0.0;
}

}  // namespace hallmhd
