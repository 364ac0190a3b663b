#pragma once

// Time integration of the swirl-free axisymmetric Hall-MHD system.
//
// PRIMAL evolves (omega^theta, B^theta):
//   d_t B + u.grad B   = (Delta - 1/r^2) B + (u^r/r) B + (1/r) d_z (B^2)
//   d_t w + u.grad w   = (Delta - 1/r^2) w + (u^r/r) w - d_z (B^2 / r)
// SCALED evolves (Omega, Pi) = (w/r, B/r):
//   d_t Pi    + u.grad Pi    = (Delta + (2/r) d_r) Pi    + d_z (Pi^2)
//   d_t Omega + u.grad Omega = (Delta + (2/r) d_r) Omega - d_z (Pi^2)
// with unit viscosity and resistivity. The velocity is recovered from the
// vorticity through the stream function at every Runge-Kutta stage.

#include <utility>

#include "hallmhd/grid.hpp"
#include "hallmhd/poisson.hpp"

namespace hallmhd {

enum class Formulation { Primal, Scaled };
enum class AdvectionScheme { Centered, Upwind1 };

/// Interface flux for the Hall (Burgers-type) term.
///  Central: entropy-conservative average (a^2 + a b + b^2)/3, energy neutral.
///  LocalLaxFriedrichs: Central plus the LLF viscosity with speed 2 max|Pi|.
///  Auto: Central for CENTERED advection, LLF for UPWIND1.
enum class HallFlux { Auto, Central, LocalLaxFriedrichs };

struct TermToggles {
  bool advection = true;
  bool stretching = true;  // the (u^r/r) terms
  bool hall = true;
  bool lorentz = true;  // -d_z((B^theta)^2/r) in the vorticity equation
};

struct StepParams {
  double cfl_advect = 0.4;
  double cfl_hall = 0.4;
  double dt_max = 1e-3;
  double nu = 1.0;
  double eta = 1.0;
  AdvectionScheme advection = AdvectionScheme::Centered;
  HallFlux hall_flux = HallFlux::Auto;
  TermToggles toggles{};

  HallFlux resolved_hall_flux() const;
};

/// PRIMAL: omega = omega^theta (ODD), b = B^theta (ODD).
/// SCALED: omega = Omega (EVEN), b = Pi (EVEN).
struct State {
  double t = 0.0;
  Formulation formulation = Formulation::Primal;
  ScalarField omega;
  ScalarField b;

  const GridSpec& grid() const { return omega.grid(); }
};

State to_scaled(const State& s);
State to_primal(const State& s);

ScalarField omega_theta(const State& s);
ScalarField b_theta(const State& s);
/// Pi = B^theta / r.
ScalarField pi_field(const State& s);
/// Omega = omega^theta / r.
ScalarField omega_scaled(const State& s);
/// Velocity recovered from the state's vorticity.
VelocityField velocity_of(const State& s);

/// u.grad f with centered or first-order upwind differences.
ScalarField advect(const ScalarField& f, const VelocityField& u, AdvectionScheme scheme);

/// d_z(Pi^2) in conservative form for an EVEN Pi.
ScalarField burgers_flux_div(const ScalarField& pi, HallFlux flux);

/// Hall term (1/r) d_z (B^theta)^2 in conservative form for an ODD B^theta;
/// identical to r * burgers_flux_div(B/r).
ScalarField hall_flux_div(const ScalarField& b, HallFlux flux = HallFlux::LocalLaxFriedrichs);

/// -d_z((B^theta)^2/r), arithmetic-mean interface flux.
ScalarField lorentz_source(const ScalarField& b);
/// -d_z(Pi^2), arithmetic-mean interface flux.
ScalarField lorentz_source_scaled(const ScalarField& pi);

/// Explicit part of the B^theta equation. PRIMAL state only.
ScalarField rhs_btheta(const State& s, const VelocityField& u, const StepParams& p);
/// Explicit part of the omega^theta equation. PRIMAL state only.
ScalarField rhs_omega(const State& s, const VelocityField& u, const StepParams& p);

struct ScaledRhs {
  ScalarField omega;  // d_t Omega
  ScalarField pi;     // d_t Pi
};
/// Explicit parts of the (Omega, Pi) equations. SCALED state only.
ScaledRhs rhs_scaled(const State& s, const VelocityField& u, const StepParams& p);

/// min(dt_max, cfl_advect min(dr,dz)/max|u|, cfl_hall dz/(2 max|Pi|)).
double cfl_dt(const State& s, const VelocityField& u, const StepParams& p);

struct StepInfo {
  double dt = 0.0;
  /// max|div u| / (max|u|/dr) for the velocity at the start of the step.
  double div_rel = 0.0;
};

/// One IMEX step: Heun (SSP-RK2) on the explicit terms with the velocity
/// re-solved at each stage, then backward-Euler diffusion. The step size is
/// cfl_dt capped by dt_cap. Throws NumericalError on non-finite values.
State step_imex(const State& s, const StepParams& p, double dt_cap, StepInfo* info = nullptr);
State step_imex(const State& s, const StepParams& p, StepInfo* info = nullptr);

struct RingParams {
  double amplitude = 0.0;
  double r0 = 1.0;
  double z0 = 0.0;
  double width = 0.5;
};

/// A r [exp(-((r-r0)^2+(z-z0)^2)/w^2) + exp(-((r+r0)^2+(z-z0)^2)/w^2)],
/// summed over periodic images in z. The mirror term keeps f/r smooth and
/// even across the axis.
double gaussian_ring_profile(const RingParams& ring, double Lz, double r, double z);

/// PRIMAL state at t = 0 with B^theta and omega^theta Gaussian rings.
/// Throws DomainError unless width > 0 and r0 + 3 width < R.
State initial_gaussian_ring(const GridSpec& grid, const RingParams& b_ring, const RingParams& omega_ring);

}  // namespace hallmhd
