#include "hallmhd/oracle3d.hpp"

#include <algorithm>
#include <cmath>

#include "hallmhd/dynamics.hpp"
#include "hallmhd/errors.hpp"
#include "hallmhd/poisson.hpp"

namespace hallmhd::oracle {
namespace {

// Interpolation weights along one direction: value = sum_a w[a] f[base + a].
struct Weights1D {
  int base = 0;
  int count = 0;
  double w[4] = {0, 0, 0, 0};
};

Weights1D weights(double s, Interpolation interp) {
  Weights1D out;
  const double fl = std::floor(s);
  const double x = s - fl;
  const int i0 = static_cast<int>(fl);
  if (interp == Interpolation::Bilinear) {
    out.base = i0;
    out.count = 2;
    out.w[0] = 1.0 - x;
    out.w[1] = x;
  } else {
    out.base = i0 - 1;
    out.count = 4;
    out.w[0] = -x * (x - 1.0) * (x - 2.0) / 6.0;
    out.w[1] = (x + 1.0) * (x - 1.0) * (x - 2.0) / 2.0;
    out.w[2] = -(x + 1.0) * x * (x - 2.0) / 2.0;
    out.w[3] = (x + 1.0) * x * (x - 1.0) / 6.0;
  }
  return out;
}

double apply(const ScalarField& f, const Weights1D& wr, const Weights1D& wz) {
  double v = 0.0;
  for (int a = 0; a < wr.count; ++a) {
    double row = 0.0;
    for (int b = 0; b < wz.count; ++b) row += wz.w[b] * f.at(wr.base + a, wz.base + b);
    v += wr.w[a] * row;
  }
  return v;
}

Weights1D radial_weights(const GridSpec& g, double r, Interpolation interp) { return weights(r / g.dr - 0.5, interp); }
Weights1D axial_weights(const GridSpec& g, double z, Interpolation interp) {
  // wrap into one period first so the integer base stays small
  double zz = std::fmod(z, g.Lz);
  if (zz < 0) zz += g.Lz;
  return weights(zz / g.dz, interp);
}

void check_fits(const GridSpec& g, const BoxSpec& spec) {
  if (spec.n < 8) throw DomainError("box needs at least 8 points per axis");
  if (!(spec.L > 0.0)) throw DomainError("box half-width must be positive");
  if (std::sqrt(2.0) * spec.L > g.R) throw DomainError("box corners leave the cylinder (need sqrt(2) L <= R)");
}

// Samples sum_c e_c(x,y) * f_c(r,z) with per-column basis coefficients.
template <class Fill>
void for_each_column(const BoxSpec& spec, Fill&& fill) {
  for (int i = 0; i < spec.n; ++i)
    for (int j = 0; j < spec.n; ++j) fill(i, j, spec.x(i), spec.x(j));
}

// Fourth-order centred first derivative along `axis` at (i,j,k).
inline double d4(const std::vector<double>& f, const BoxSpec& s, int axis, int i, int j, int k) {
  const std::size_t stride = axis == 0 ? static_cast<std::size_t>(s.n) * s.n : (axis == 1 ? s.n : 1);
  const std::size_t c = s.index(i, j, k);
  return (8.0 * (f[c + stride] - f[c - stride]) - (f[c + 2 * stride] - f[c - 2 * stride])) / (12.0 * s.h());
}

template <class Body>
void for_interior(const BoxSpec& s, int margin, Body&& body) {
  for (int i = margin; i < s.n - margin; ++i)
    for (int j = margin; j < s.n - margin; ++j)
      for (int k = margin; k < s.n - margin; ++k) body(i, j, k, s.index(i, j, k));
}

// Fourth-order periodic d/dz of a cylinder field, written out here so the
// oracle shares no stencil with the grid module.
ScalarField dz4(const ScalarField& f) {
  const auto& g = f.grid();
  ScalarField out(g, f.parity(), f.outer_bc());
  const int nz = g.nz;
  for (int i = 0; i < g.nr; ++i)
    for (int j = 0; j < nz; ++j) {
      auto at = [&](int jj) { return f(i, ((jj % nz) + nz) % nz); };
      out(i, j) = (8.0 * (at(j + 1) - at(j - 1)) - (at(j + 2) - at(j - 2))) / (12.0 * g.dz);
    }
  return out;
}

double relative(double err, double ref) { return ref > 0.0 ? err / ref : err; }

BoxSpec box_for(const OracleSetup& setup, int n) { return {n, setup.L, setup.z_center}; }

}  // namespace

ScalarBox make_scalar_box(const BoxSpec& spec) { return {spec, std::vector<double>(spec.size(), 0.0)}; }

CartesianBox make_box(const BoxSpec& spec) {
  CartesianBox b{spec, {}};
  for (auto& c : b.c) c.assign(spec.size(), 0.0);
  return b;
}

double interpolate(const ScalarField& f, double r, double z, Interpolation interp) {
  const auto& g = f.grid();
  return apply(f, radial_weights(g, r, interp), axial_weights(g, z, interp));
}

CartesianBox sample_theta_field(const ScalarField& f, const BoxSpec& spec, Interpolation interp) {
  if (f.parity() != Parity::Odd) throw DomainError("sample_theta_field requires an ODD field");
  const auto& g = f.grid();
  check_fits(g, spec);
  CartesianBox out = make_box(spec);
  std::vector<Weights1D> wz(spec.n);
  for (int k = 0; k < spec.n; ++k) wz[k] = axial_weights(g, spec.z(k), interp);
  for_each_column(spec, [&](int i, int j, double x, double y) {
    const double r = std::hypot(x, y);
    if (r == 0.0) return;  // ODD field: exactly zero on the axis
    const Weights1D wr = radial_weights(g, r, interp);
    for (int k = 0; k < spec.n; ++k) {
      const double v = apply(f, wr, wz[k]);
      const std::size_t c = spec.index(i, j, k);
      out.c[0][c] = -y / r * v;
      out.c[1][c] = x / r * v;
    }
  });
  return out;
}

CartesianBox sample_meridional_field(const ScalarField& ur, const ScalarField& uz, const BoxSpec& spec,
                                     Interpolation interp) {
  if (ur.parity() != Parity::Odd || uz.parity() != Parity::Even) {
    throw DomainError("sample_meridional_field requires ODD u^r and EVEN u^z");
  }
  const auto& g = ur.grid();
  check_fits(g, spec);
  CartesianBox out = make_box(spec);
  std::vector<Weights1D> wz(spec.n);
  for (int k = 0; k < spec.n; ++k) wz[k] = axial_weights(g, spec.z(k), interp);
  for_each_column(spec, [&](int i, int j, double x, double y) {
    const double r = std::hypot(x, y);
    const Weights1D wr = radial_weights(g, r, interp);
    for (int k = 0; k < spec.n; ++k) {
      const std::size_t c = spec.index(i, j, k);
      if (r > 0.0) {
        const double vr = apply(ur, wr, wz[k]);
        out.c[0][c] = x / r * vr;
        out.c[1][c] = y / r * vr;
      }
      out.c[2][c] = apply(uz, wr, wz[k]);
    }
  });
  return out;
}

CartesianBox curl3(const CartesianBox& v) {
  const BoxSpec& s = v.spec;
  CartesianBox out = make_box(s);
  for_interior(s, kMargin, [&](int i, int j, int k, std::size_t c) {
    out.c[0][c] = d4(v.c[2], s, 1, i, j, k) - d4(v.c[1], s, 2, i, j, k);
    out.c[1][c] = d4(v.c[0], s, 2, i, j, k) - d4(v.c[2], s, 0, i, j, k);
    out.c[2][c] = d4(v.c[1], s, 0, i, j, k) - d4(v.c[0], s, 1, i, j, k);
  });
  return out;
}

ScalarBox div3(const CartesianBox& v) {
  const BoxSpec& s = v.spec;
  ScalarBox out = make_scalar_box(s);
  for_interior(s, kMargin, [&](int i, int j, int k, std::size_t c) {
    out.v[c] = d4(v.c[0], s, 0, i, j, k) + d4(v.c[1], s, 1, i, j, k) + d4(v.c[2], s, 2, i, j, k);
  });
  return out;
}

CartesianBox grad3(const ScalarBox& f) {
  const BoxSpec& s = f.spec;
  CartesianBox out = make_box(s);
  for_interior(s, kMargin, [&](int i, int j, int k, std::size_t c) {
    for (int a = 0; a < 3; ++a) out.c[a][c] = d4(f.v, s, a, i, j, k);
  });
  return out;
}

CartesianBox cross(const CartesianBox& a, const CartesianBox& b) {
  CartesianBox out = make_box(a.spec);
  for (std::size_t c = 0; c < a.spec.size(); ++c) {
    out.c[0][c] = a.c[1][c] * b.c[2][c] - a.c[2][c] * b.c[1][c];
    out.c[1][c] = a.c[2][c] * b.c[0][c] - a.c[0][c] * b.c[2][c];
    out.c[2][c] = a.c[0][c] * b.c[1][c] - a.c[1][c] * b.c[0][c];
  }
  return out;
}

double l2_norm(const CartesianBox& v, int margin) {
  double s = 0.0;
  for_interior(v.spec, margin, [&](int, int, int, std::size_t c) {
    s += v.c[0][c] * v.c[0][c] + v.c[1][c] * v.c[1][c] + v.c[2][c] * v.c[2][c];
  });
  return std::sqrt(s * std::pow(v.spec.h(), 3));
}

double l2_norm(const ScalarBox& v, int margin) {
  double s = 0.0;
  for_interior(v.spec, margin, [&](int, int, int, std::size_t c) { s += v.v[c] * v.v[c]; });
  return std::sqrt(s * std::pow(v.spec.h(), 3));
}

double l2_distance(const CartesianBox& a, const CartesianBox& b, int margin) {
  double s = 0.0;
  for_interior(a.spec, margin, [&](int, int, int, std::size_t c) {
    for (int d = 0; d < 3; ++d) s += (a.c[d][c] - b.c[d][c]) * (a.c[d][c] - b.c[d][c]);
  });
  return std::sqrt(s * std::pow(a.spec.h(), 3));
}

GridSpec cylinder_for(const OracleSetup& setup, int n) {
  const double dr = 2.0 * setup.L / n / setup.refine;
  const int nr = static_cast<int>(std::ceil(setup.R / dr));
  const int nz = std::max(kMinCells, static_cast<int>(std::lround(setup.Lz / dr)));
  return build_grid(nr, nz, nr * dr, setup.Lz);
}

double fit_order(const std::vector<int>& sizes, const std::vector<double>& errors) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t k = 0; k < sizes.size() && k < errors.size(); ++k) {
    if (!(errors[k] > 0.0)) continue;
    const double x = std::log(static_cast<double>(sizes[k]));
    const double y = -std::log(errors[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 2) return 0.0;
  const double den = m * sxx - sx * sx;
  return den > 0.0 ? (m * sxy - sx * sy) / den : 0.0;
}

double hall_identity_error(const ScalarField& btheta, const BoxSpec& spec, Interpolation interp) {
  const CartesianBox B = sample_theta_field(btheta, spec, interp);
  const CartesianBox lhs = curl3(cross(curl3(B), B));

  // -(2/r) B d_z B, evaluated on the cylinder nodes, then sampled
  const auto& g = btheta.grid();
  const ScalarField bz = dz4(btheta);
  ScalarField rhs_cyl(g, Parity::Odd);
  for (int i = 0; i < g.nr; ++i)
    for (int j = 0; j < g.nz; ++j) rhs_cyl(i, j) = -2.0 * btheta(i, j) * bz(i, j) / g.r(i);
  const CartesianBox rhs = sample_theta_field(rhs_cyl, spec, interp);

  const int margin = 2 * kMargin;
  const double ref = l2_norm(rhs, margin);
  return relative(l2_distance(lhs, rhs, margin), ref);
}

double vorticity_identity_error(const ScalarField& omega, const BoxSpec& spec, Interpolation interp) {
  const VelocityField u = velocity_from_vorticity(omega);
  const CartesianBox U = sample_meridional_field(u.ur, u.uz, spec, interp);
  const CartesianBox W = sample_theta_field(omega, spec, interp);
  const CartesianBox cu = curl3(U);
  return relative(l2_distance(cu, W, kMargin), l2_norm(W, kMargin));
}

std::pair<double, double> norm_identity_errors(const ScalarField& omega, const BoxSpec& spec,
                                               Interpolation interp) {
  const CartesianBox W = sample_theta_field(omega, spec, interp);
  const double l2_box = std::pow(l2_norm(W), 2);
  double h1_box = 0.0;
  for (int c = 0; c < 3; ++c) {
    const ScalarBox comp{spec, W.c[c]};
    h1_box += std::pow(l2_norm(grad3(comp), kMargin), 2);
  }
  const double l2_cyl = std::pow(lp_norm(omega, 2), 2);
  const double h1_cyl = theta_h1_seminorm_sq(omega);
  return {relative(std::abs(l2_box - l2_cyl), l2_cyl), relative(std::abs(h1_box - h1_cyl), h1_cyl)};
}

double sampled_divergence(const ScalarField& omega, const BoxSpec& spec, Interpolation interp) {
  const VelocityField u = velocity_from_vorticity(omega);
  const CartesianBox U = sample_meridional_field(u.ur, u.uz, spec, interp);
  const ScalarBox d = div3(U);
  double dmax = 0.0, umax = 0.0;
  for_interior(spec, kMargin, [&](int, int, int, std::size_t c) {
    dmax = std::max(dmax, std::abs(d.v[c]));
    umax = std::max(umax, std::sqrt(U.c[0][c] * U.c[0][c] + U.c[1][c] * U.c[1][c] + U.c[2][c] * U.c[2][c]));
  });
  return umax > 0.0 ? dmax / (umax / spec.h()) : 0.0;
}

namespace {

template <class ErrorFn>
IdentityReport sweep(const Profile& profile, const OracleSetup& setup, ErrorFn&& err) {
  IdentityReport rep;
  rep.sizes = setup.sizes;
  for (int n : setup.sizes) {
    const GridSpec g = cylinder_for(setup, n);
    const ScalarField f = ScalarField::from_function(g, Parity::Odd, profile);
    rep.errors.push_back(err(f, box_for(setup, n)));
  }
  rep.order = fit_order(rep.sizes, rep.errors);
  return rep;
}

}  // namespace

IdentityReport check_hall_identity(const Profile& btheta, const OracleSetup& setup) {
  return sweep(btheta, setup,
               [&](const ScalarField& f, const BoxSpec& b) { return hall_identity_error(f, b, setup.interp); });
}

IdentityReport check_vorticity_identity(const Profile& omega, const OracleSetup& setup) {
  return sweep(omega, setup,
               [&](const ScalarField& f, const BoxSpec& b) { return vorticity_identity_error(f, b, setup.interp); });
}

NormIdentityReport check_norm_identities(const Profile& omega, const OracleSetup& setup) {
  // The box quadrature is the reference here, so it always runs on the finest
  // lattice; only the cylinder resolution follows n.
  NormIdentityReport rep;
  rep.l2.sizes = rep.h1.sizes = setup.sizes;
  const int nbox = *std::max_element(setup.sizes.begin(), setup.sizes.end());
  for (int n : setup.sizes) {
    const GridSpec g = cylinder_for(setup, n);
    const ScalarField f = ScalarField::from_function(g, Parity::Odd, omega);
    const auto [e1, e2] = norm_identity_errors(f, box_for(setup, nbox), setup.interp);
    rep.l2.errors.push_back(e1);
    rep.h1.errors.push_back(e2);
  }
  rep.l2.order = fit_order(rep.l2.sizes, rep.l2.errors);
  rep.h1.order = fit_order(rep.h1.sizes, rep.h1.errors);
  return rep;
}

Profile default_ring(const OracleSetup& setup) {
  const RingParams ring{1.0, 0.35, setup.z_center, 0.25};
  const double Lz = setup.Lz;
  return [ring, Lz](double r, double z) { return gaussian_ring_profile(ring, Lz, r, z); };
}

bool OracleBattery::passed(double tol, double min_order) const {
  for (const IdentityReport* r : {&hall, &vorticity, &norms.l2, &norms.h1})
    if (r->errors.empty() || !(r->errors.back() <= tol) || !(r->order >= min_order)) return false;
  return true;
}

OracleBattery run_oracle_battery(const OracleSetup& setup) {
  const Profile ring = default_ring(setup);
  return {check_hall_identity(ring, setup), check_vorticity_identity(ring, setup), check_norm_identities(ring, setup)};
}

}  // namespace hallmhd::oracle
