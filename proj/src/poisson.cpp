#include "hallmhd/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "hallmhd/errors.hpp"
#include "ztransform.hpp"

namespace hallmhd {
namespace {

using detail::Complex;

// Solves (c0 I + c1 (S + mu_k I)) x = rhs for every z-mode of rhs in place,
// with S the radial stencil of laplacian_scaled.
void solve_modes(detail::ZSpectrum& rhs, const GridSpec& g, double c0, double c1) {
  const RadialStencil s = scaled_radial_stencil(g);
  const int nr = g.nr;
  std::vector<double> cprime(nr);
  std::vector<Complex> dprime(nr);
  for (int k = 0; k < rhs.nmodes; ++k) {
    const double mu = dzz_eigenvalue(g, k);
    auto diag = [&](int i) { return c0 + c1 * (s.diag[i] + mu); };
    auto lower = [&](int i) { return c1 * s.lower[i]; };
    auto upper = [&](int i) { return c1 * s.upper[i]; };

    double pivot = diag(0);
    if (!(std::abs(pivot) > 0.0) || !std::isfinite(pivot)) throw NumericalError("singular tridiagonal pivot");
    cprime[0] = upper(0) / pivot;
    dprime[0] = rhs(0, k) / pivot;
    for (int i = 1; i < nr; ++i) {
      pivot = diag(i) - lower(i) * cprime[i - 1];
      if (!(std::abs(pivot) > 0.0) || !std::isfinite(pivot)) throw NumericalError("singular tridiagonal pivot");
      cprime[i] = upper(i) / pivot;
      dprime[i] = (rhs(i, k) - lower(i) * dprime[i - 1]) / pivot;
    }
    rhs(nr - 1, k) = dprime[nr - 1];
    for (int i = nr - 2; i >= 0; --i) rhs(i, k) = dprime[i] - cprime[i] * rhs(i + 1, k);
  }
}

ScalarField solve_scaled(const ScalarField& rhs_even, double c0, double c1) {
  auto spec = detail::forward_z(rhs_even);
  solve_modes(spec, rhs_even.grid(), c0, c1);
  return detail::inverse_z(spec, rhs_even.grid(), Parity::Even);
}

}  // namespace

StreamFunction solve_stream(const ScalarField& omega) {
  if (omega.parity() != Parity::Odd) throw DomainError("solve_stream requires an ODD vorticity");
  // r (S + d_zz)(psi/r) = -omega  <=>  (S + d_zz) Pi = -omega/r,  psi = r Pi
  ScalarField rhs = divide_by_r(omega);
  rhs *= -1.0;
  StreamFunction out{multiply_by_r(solve_scaled(rhs, 0.0, 1.0))};
  return out;
}

VelocityField velocity_from_stream(const StreamFunction& s) {
  const ScalarField& psi = s.psi;
  ScalarField ur = ddz(psi);
  ur *= -1.0;
  ur.set_outer_bc(OuterBc::Dirichlet);
  ScalarField uz = ddr(psi) + divide_by_r(psi);
  uz.set_outer_bc(OuterBc::Extrapolate);
  return {std::move(ur), std::move(uz)};
}

ScalarField discrete_divergence(const VelocityField& u) {
  ScalarField div = ddr(u.ur);
  div += divide_by_r(u.ur);
  div += ddz(u.uz);
  return div;
}

VelocityField velocity_from_vorticity(const ScalarField& omega) {
  return velocity_from_stream(solve_stream(omega));
}

double max_speed(const VelocityField& u) {
  double m2 = 0.0;
  auto a = u.ur.values();
  auto b = u.uz.values();
  for (std::size_t k = 0; k < a.size(); ++k) m2 = std::max(m2, a[k] * a[k] + b[k] * b[k]);
  return std::sqrt(m2);
}

ScalarField helmholtz_solve(const ScalarField& b, double tau, HelmholtzVariant variant) {
  if (!(tau >= 0.0)) throw DomainError("helmholtz_solve requires tau >= 0");
  if (variant == HelmholtzVariant::Theta) {
    if (b.parity() != Parity::Odd) throw DomainError("THETA Helmholtz solve requires an ODD field");
    if (tau == 0.0) return b;
    return multiply_by_r(solve_scaled(divide_by_r(b), 1.0, -tau));
  }
  if (b.parity() != Parity::Even) throw DomainError("SCALED Helmholtz solve requires an EVEN field");
  if (tau == 0.0) return b;
  return solve_scaled(b, 1.0, -tau);
}

}  // namespace hallmhd
