#pragma once

// Independent Cartesian check of the cylindrical reductions. Fields are
// sampled from ScalarFields onto a uniform 3D lattice and differentiated with
// fourth-order centred stencils; nothing here reuses the (r,z) difference
// operators.

#include <array>
#include <functional>
#include <vector>

#include "hallmhd/grid.hpp"

namespace hallmhd::oracle {

/// Lattice x_i = -L + i h, y_j likewise, z_k = z_center - L + k h,
/// i,j,k = 0..n-1 with h = 2L/n. For even n the axis x = y = 0 is a lattice
/// line.
struct BoxSpec {
  int n = 64;
  double L = 1.0;
  double z_center = 0.0;

  double h() const { return 2.0 * L / n; }
  double x(int i) const { return -L + i * h(); }
  double z(int k) const { return z_center - L + k * h(); }
  std::size_t size() const { return static_cast<std::size_t>(n) * n * n; }
  std::size_t index(int i, int j, int k) const { return (static_cast<std::size_t>(i) * n + j) * n + k; }
};

struct ScalarBox {
  BoxSpec spec;
  std::vector<double> v;
};

struct CartesianBox {
  BoxSpec spec;
  std::array<std::vector<double>, 3> c;
};

ScalarBox make_scalar_box(const BoxSpec& spec);
CartesianBox make_box(const BoxSpec& spec);

enum class Interpolation { Bilinear, Cubic };

/// f(r,z) e^theta on the lattice, interpolating f in (r,z). Throws
/// DomainError for an EVEN field or a box whose corners leave the cylinder.
CartesianBox sample_theta_field(const ScalarField& f, const BoxSpec& spec,
                                Interpolation interp = Interpolation::Bilinear);
/// u^r e^r + u^z e^z on the lattice (u^r ODD, u^z EVEN).
CartesianBox sample_meridional_field(const ScalarField& ur, const ScalarField& uz, const BoxSpec& spec,
                                     Interpolation interp = Interpolation::Bilinear);
/// Interpolated value of f at (r,z), r >= 0.
double interpolate(const ScalarField& f, double r, double z, Interpolation interp);

/// Stencil reach of curl3/div3/grad3: outputs are zero within this many
/// points of a face.
inline constexpr int kMargin = 2;

CartesianBox curl3(const CartesianBox& v);
ScalarBox div3(const CartesianBox& v);
/// Gradient of one component.
CartesianBox grad3(const ScalarBox& f);
CartesianBox cross(const CartesianBox& a, const CartesianBox& b);

/// sqrt(sum |v|^2 h^3) over lattice points at least `margin` from every face.
double l2_norm(const CartesianBox& v, int margin = 0);
double l2_norm(const ScalarBox& v, int margin = 0);
/// l2_norm(a - b, margin).
double l2_distance(const CartesianBox& a, const CartesianBox& b, int margin = 0);

using Profile = std::function<double(double r, double z)>;

/// Cylinder that hosts the sampled fields. Each lattice of size n reads from
/// a fresh cylinder grid with dr = dz = h / refine.
struct OracleSetup {
  std::vector<int> sizes{64, 128};
  double L = 1.5;
  double z_center = 1.5;
  double R = 2.2;
  double Lz = 3.0;
  int refine = 4;
  Interpolation interp = Interpolation::Cubic;
};

struct IdentityReport {
  std::vector<int> sizes;
  std::vector<double> errors;  // relative L^2 errors, one per size
  double order = 0.0;          // least-squares slope of log(error) vs log(h); 0 if undefined
};

/// Cylinder grid used for lattice size n.
GridSpec cylinder_for(const OracleSetup& setup, int n);

/// curl(curl B x B) against -(2/r) B d_z B e^theta, single lattice.
double hall_identity_error(const ScalarField& btheta, const BoxSpec& spec, Interpolation interp);
IdentityReport check_hall_identity(const Profile& btheta, const OracleSetup& setup);

/// curl of the sampled stream-solver velocity against omega e^theta.
double vorticity_identity_error(const ScalarField& omega, const BoxSpec& spec, Interpolation interp);
IdentityReport check_vorticity_identity(const Profile& omega, const OracleSetup& setup);

/// Relative differences of box quadratures against the cylindrical values
/// (the box runs on the largest lattice size for every cylinder):
/// (||w e^theta||^2 vs lp_norm(w,2)^2, ||grad(w e^theta)||^2 vs theta_h1_seminorm_sq(w)).
std::pair<double, double> norm_identity_errors(const ScalarField& omega, const BoxSpec& spec, Interpolation interp);
struct NormIdentityReport {
  IdentityReport l2;
  IdentityReport h1;
};
NormIdentityReport check_norm_identities(const Profile& omega, const OracleSetup& setup);

/// max |div u| / (max |u| / h) of the sampled stream-solver velocity over the
/// interior points.
double sampled_divergence(const ScalarField& omega, const BoxSpec& spec, Interpolation interp);

/// Ring of width 0.25 around r0 = 0.35 centred in the default box, small
/// enough to vanish (below 1e-8 of its peak) on the box faces.
Profile default_ring(const OracleSetup& setup = {});

struct OracleBattery {
  IdentityReport hall;
  IdentityReport vorticity;
  NormIdentityReport norms;
  /// Largest error at the finest size must be <= tol and every order >= min_order.
  bool passed(double tol = 1e-3, double min_order = 1.9) const;
};
OracleBattery run_oracle_battery(const OracleSetup& setup = {});

/// Slope of log(error) against log(1/n); 0 when fewer than two positive errors.
double fit_order(const std::vector<int>& sizes, const std::vector<double>& errors);

}  // namespace hallmhd::oracle
