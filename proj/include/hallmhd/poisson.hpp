#pragma once

// Elliptic solves on the (r,z) grid: the stream function of the meridional
// flow and the implicit diffusion (Helmholtz) step. Both diagonalise z with a
// real DFT (modes k = 0..nz/2, wavenumber 2 pi k / Lz) and run one Thomas
// solve in r per mode against the exact discrete operators of grid.hpp.

#include "hallmhd/grid.hpp"

namespace hallmhd {

/// Meridional velocity; u^theta is identically zero and never stored.
struct VelocityField {
  ScalarField ur;  // ODD, Dirichlet at r = R
  ScalarField uz;  // EVEN, extrapolated at r = R
};

struct StreamFunction {
  ScalarField psi;  // ODD, Dirichlet at r = R
};

/// Solves (Delta - 1/r^2) psi = -omega for an ODD omega.
StreamFunction solve_stream(const ScalarField& omega);

/// u^r = -d_z psi, u^z = d_r psi + psi/r with the grid stencils, which makes
/// discrete_divergence vanish to round-off.
VelocityField velocity_from_stream(const StreamFunction& psi);

/// d_r u^r + u^r/r + d_z u^z.
ScalarField discrete_divergence(const VelocityField& u);

/// Convenience: velocity_from_stream(solve_stream(omega)).
VelocityField velocity_from_vorticity(const ScalarField& omega);

/// Pointwise sqrt((u^r)^2 + (u^z)^2) maximum.
double max_speed(const VelocityField& u);

enum class HelmholtzVariant {
  Theta,   // L = Delta - 1/r^2, ODD fields
  Scaled,  // L = Delta + (2/r) d_r, EVEN fields
};

/// Solves (I - tau L) x = b. Throws DomainError for tau < 0 or a parity
/// that does not match the variant.
ScalarField helmholtz_solve(const ScalarField& b, double tau, HelmholtzVariant variant);

}  // namespace hallmhd
