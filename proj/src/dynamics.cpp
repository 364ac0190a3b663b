#include "hallmhd/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hallmhd/errors.hpp"

namespace hallmhd {

HallFlux StepParams::resolved_hall_flux() const {
  if (hall_flux != HallFlux::Auto) return hall_flux;
  return advection == AdvectionScheme::Upwind1 ? HallFlux::LocalLaxFriedrichs : HallFlux::Central;
}

State to_scaled(const State& s) {
  if (s.formulation == Formulation::Scaled) return s;
  return {s.t, Formulation::Scaled, divide_by_r(s.omega), divide_by_r(s.b)};
}

State to_primal(const State& s) {
  if (s.formulation == Formulation::Primal) return s;
  return {s.t, Formulation::Primal, multiply_by_r(s.omega), multiply_by_r(s.b)};
}

ScalarField omega_theta(const State& s) {
  return s.formulation == Formulation::Primal ? s.omega : multiply_by_r(s.omega);
}
ScalarField b_theta(const State& s) { return s.formulation == Formulation::Primal ? s.b : multiply_by_r(s.b); }
ScalarField pi_field(const State& s) { return s.formulation == Formulation::Scaled ? s.b : divide_by_r(s.b); }
ScalarField omega_scaled(const State& s) {
  return s.formulation == Formulation::Scaled ? s.omega : divide_by_r(s.omega);
}

VelocityField velocity_of(const State& s) { return velocity_from_vorticity(omega_theta(s)); }

ScalarField advect(const ScalarField& f, const VelocityField& u, AdvectionScheme scheme) {
  const auto& g = f.grid();
  ScalarField out(g, f.parity());
  if (scheme == AdvectionScheme::Centered) {
    const ScalarField fr = ddr(f);
    const ScalarField fz = ddz(f);
    auto o = out.values();
    auto a = fr.values();
    auto b = fz.values();
    auto ur = u.ur.values();
    auto uz = u.uz.values();
    for (std::size_t k = 0; k < o.size(); ++k) o[k] = ur[k] * a[k] + uz[k] * b[k];
    return out;
  }
  const double idr = 1.0 / g.dr;
  const double idz = 1.0 / g.dz;
  const int nz = g.nz;
  for (int i = 0; i < g.nr; ++i) {
    for (int j = 0; j < nz; ++j) {
      const double c = f(i, j);
      const double vr = u.ur(i, j);
      const double vz = u.uz(i, j);
      const double dfr = vr > 0.0 ? (c - f.at(i - 1, j)) * idr : (f.at(i + 1, j) - c) * idr;
      const int jm = j == 0 ? nz - 1 : j - 1;
      const int jp = j == nz - 1 ? 0 : j + 1;
      const double dfz = vz > 0.0 ? (c - f(i, jm)) * idz : (f(i, jp) - c) * idz;
      out(i, j) = vr * dfr + vz * dfz;
    }
  }
  return out;
}

ScalarField burgers_flux_div(const ScalarField& pi, HallFlux flux) {
  if (pi.parity() != Parity::Even) throw DomainError("burgers_flux_div requires an EVEN field");
  const auto& g = pi.grid();
  const bool llf = flux == HallFlux::LocalLaxFriedrichs;
  const double idz = 1.0 / g.dz;
  const int nz = g.nz;
  ScalarField out(g, Parity::Even);
  std::vector<double> face(nz);
  for (int i = 0; i < g.nr; ++i) {
    auto p = pi.row(i);
    // face[j] sits between cells j and j+1
    for (int j = 0; j < nz; ++j) {
      const double a = p[j];
      const double b = p[j + 1 == nz ? 0 : j + 1];
      double f = (a * a + a * b + b * b) / 3.0;
      if (llf) f += std::max(std::abs(a), std::abs(b)) * (b - a);  // (speed/2) jump, speed = 2 max|Pi|
      face[j] = f;
    }
    auto o = out.row(i);
    o[0] = (face[0] - face[nz - 1]) * idz;
    for (int j = 1; j < nz; ++j) o[j] = (face[j] - face[j - 1]) * idz;
  }
  return out;
}

ScalarField hall_flux_div(const ScalarField& b, HallFlux flux) {
  if (b.parity() != Parity::Odd) throw DomainError("hall_flux_div requires an ODD field");
  if (flux == HallFlux::Auto) flux = HallFlux::LocalLaxFriedrichs;
  return multiply_by_r(burgers_flux_div(divide_by_r(b), flux));
}

namespace {

// -d_z g with arithmetic interface averages, i.e. -(g_{j+1} - g_{j-1}) / (2 dz).
ScalarField negative_centered_dz(const ScalarField& gfield) {
  ScalarField out = ddz(gfield);
  out *= -1.0;
  return out;
}

ScalarField ur_over_r(const VelocityField& u) { return divide_by_r(u.ur); }

void require(const State& s, Formulation f, const char* what) {
  if (s.formulation != f) throw DomainError(std::string(what) + ": wrong state formulation");
}

}  // namespace

ScalarField lorentz_source(const ScalarField& b) {
  if (b.parity() != Parity::Odd) throw DomainError("lorentz_source requires an ODD field");
  return negative_centered_dz(divide_by_r(multiply(b, b)));
}

ScalarField lorentz_source_scaled(const ScalarField& pi) {
  if (pi.parity() != Parity::Even) throw DomainError("lorentz_source_scaled requires an EVEN field");
  return negative_centered_dz(multiply(pi, pi));
}

ScalarField rhs_btheta(const State& s, const VelocityField& u, const StepParams& p) {
  require(s, Formulation::Primal, "rhs_btheta");
  const ScalarField& b = s.b;
  ScalarField out(b.grid(), Parity::Odd);
  if (p.toggles.advection) out -= advect(b, u, p.advection);
  if (p.toggles.stretching) out += multiply(ur_over_r(u), b);
  if (p.toggles.hall) out += hall_flux_div(b, p.resolved_hall_flux());
  return out;
}

ScalarField rhs_omega(const State& s, const VelocityField& u, const StepParams& p) {
  require(s, Formulation::Primal, "rhs_omega");
  const ScalarField& w = s.omega;
  ScalarField out(w.grid(), Parity::Odd);
  if (p.toggles.advection) out -= advect(w, u, p.advection);
  if (p.toggles.stretching) out += multiply(ur_over_r(u), w);
  if (p.toggles.lorentz) out += lorentz_source(s.b);
  return out;
}

ScaledRhs rhs_scaled(const State& s, const VelocityField& u, const StepParams& p) {
  require(s, Formulation::Scaled, "rhs_scaled");
  const ScalarField& om = s.omega;
  const ScalarField& pi = s.b;
  ScaledRhs out{ScalarField(om.grid(), Parity::Even), ScalarField(pi.grid(), Parity::Even)};
  if (p.toggles.advection) {
    out.omega -= advect(om, u, p.advection);
    out.pi -= advect(pi, u, p.advection);
  }
  if (!p.toggles.stretching) {
    // the scaled variables absorb the stretching terms; switching them off
    // leaves -(u^r/r) f behind
    const ScalarField q = ur_over_r(u);
    out.omega -= multiply(q, om);
    out.pi -= multiply(q, pi);
  }
  if (p.toggles.lorentz) out.omega += lorentz_source_scaled(pi);
  if (p.toggles.hall) out.pi += burgers_flux_div(pi, p.resolved_hall_flux());
  return out;
}

double cfl_dt(const State& s, const VelocityField& u, const StepParams& p) {
  const auto& g = s.grid();
  double dt = p.dt_max;
  const double umax = max_speed(u);
  if (umax > 0.0) dt = std::min(dt, p.cfl_advect * std::min(g.dr, g.dz) / umax);
  const double pimax = pi_field(s).max_abs();
  if (pimax > 0.0) dt = std::min(dt, p.cfl_hall * g.dz / (2.0 * pimax));
  return dt;
}

namespace {

struct Increment {
  ScalarField omega;
  ScalarField b;
};

Increment explicit_rhs(const State& s, const VelocityField& u, const StepParams& p) {
  if (s.formulation == Formulation::Primal) return {rhs_omega(s, u, p), rhs_btheta(s, u, p)};
  auto r = rhs_scaled(s, u, p);
  return {std::move(r.omega), std::move(r.pi)};
}

void check_finite(const State& s) {
  if (!s.omega.all_finite() || !s.b.all_finite()) {
    throw NumericalError("non-finite field values at t = " + std::to_string(s.t));
  }
}

}  // namespace

State step_imex(const State& s, const StepParams& p, double dt_cap, StepInfo* info) {
  const auto& g = s.grid();
  const VelocityField u0 = velocity_of(s);
  const double dt = std::min(cfl_dt(s, u0, p), dt_cap);
  if (!(dt > 0.0)) throw NumericalError("non-positive time step");
  if (info) {
    info->dt = dt;
    const double umax = max_speed(u0);
    info->div_rel = umax > 0.0 ? discrete_divergence(u0).max_abs() / (umax / g.dr) : 0.0;
  }

  // Heun: X1 = X + dt F(X); X2 = (X + X1 + dt F(X1)) / 2
  const Increment k0 = explicit_rhs(s, u0, p);
  State s1 = s;
  s1.omega.axpy(dt, k0.omega);
  s1.b.axpy(dt, k0.b);

  const VelocityField u1 = velocity_of(s1);
  const Increment k1 = explicit_rhs(s1, u1, p);
  State s2 = s1;
  s2.omega.axpy(dt, k1.omega);
  s2.b.axpy(dt, k1.b);
  s2.omega += s.omega;
  s2.b += s.b;
  s2.omega *= 0.5;
  s2.b *= 0.5;

  const auto variant = s.formulation == Formulation::Primal ? HelmholtzVariant::Theta : HelmholtzVariant::Scaled;
  State next{s.t + dt, s.formulation, helmholtz_solve(s2.omega, dt * p.nu, variant),
             helmholtz_solve(s2.b, dt * p.eta, variant)};
  check_finite(next);
  return next;
}

State step_imex(const State& s, const StepParams& p, StepInfo* info) {
  return step_imex(s, p, p.dt_max, info);
}

double gaussian_ring_profile(const RingParams& ring, double Lz, double r, double z) {
  if (ring.amplitude == 0.0) return 0.0;
  const double w2 = ring.width * ring.width;
  const double gm = std::exp(-(r - ring.r0) * (r - ring.r0) / w2);
  const double gp = std::exp(-(r + ring.r0) * (r + ring.r0) / w2);
  double gz = 0.0;
  for (int m = -3; m <= 3; ++m) {
    const double d = z - ring.z0 - m * Lz;
    gz += std::exp(-d * d / w2);
  }
  return ring.amplitude * r * (gm + gp) * gz;
}

State initial_gaussian_ring(const GridSpec& grid, const RingParams& b_ring, const RingParams& omega_ring) {
  for (const RingParams* ring : {&b_ring, &omega_ring}) {
    if (!(ring->width > 0.0)) throw DomainError("ring width must be positive");
    if (!(ring->r0 >= 0.0) || !(ring->r0 + 3.0 * ring->width < grid.R)) {
      throw DomainError("ring profile overflows the radial domain (need r0 + 3w < R)");
    }
  }
  const double Lz = grid.Lz;
  State s;
  s.t = 0.0;
  s.formulation = Formulation::Primal;
  s.b = ScalarField::from_function(grid, Parity::Odd,
                                   [&](double r, double z) { return gaussian_ring_profile(b_ring, Lz, r, z); });
  s.omega = ScalarField::from_function(
      grid, Parity::Odd, [&](double r, double z) { return gaussian_ring_profile(omega_ring, Lz, r, z); });
  return s;
}

}  // namespace hallmhd
