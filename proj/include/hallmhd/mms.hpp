#pragma once

// Manufactured-solution convergence study. Exact derivatives of the
// manufactured fields come from hyper-dual arithmetic, so the reference
// values share nothing with the grid stencils.

#include <cmath>
#include <string>
#include <vector>

namespace hallmhd {

/// a + b e1 + c e2 + d e1 e2 with e1^2 = e2^2 = 0. Seeding x + e1 + e2 gives
/// f, f', f', f'' in the four slots.
struct HyperDual {
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;

  HyperDual() = default;
  HyperDual(double v) : a(v) {}  // NOLINT: implicit from constants
  HyperDual(double a_, double b_, double c_, double d_) : a(a_), b(b_), c(c_), d(d_) {}

  static HyperDual variable(double x) { return {x, 1.0, 1.0, 0.0}; }
};

inline HyperDual operator+(HyperDual x, HyperDual y) { return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d}; }
inline HyperDual operator-(HyperDual x, HyperDual y) { return {x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d}; }
inline HyperDual operator-(HyperDual x) { return {-x.a, -x.b, -x.c, -x.d}; }
inline HyperDual operator*(HyperDual x, HyperDual y) {
  return {x.a * y.a, x.a * y.b + x.b * y.a, x.a * y.c + x.c * y.a, x.a * y.d + x.b * y.c + x.c * y.b + x.d * y.a};
}
// Chain rule for a scalar function with value f0, slope f1 and curvature f2.
inline HyperDual lift(HyperDual x, double f0, double f1, double f2) {
  return {f0, f1 * x.b, f1 * x.c, f1 * x.d + f2 * x.b * x.c};
}
inline HyperDual operator/(HyperDual x, HyperDual y) {
  const double inv = 1.0 / y.a;
  return x * lift(y, inv, -inv * inv, 2.0 * inv * inv * inv);
}
inline HyperDual exp(HyperDual x) {
  const double e = std::exp(x.a);
  return lift(x, e, e, e);
}
inline HyperDual sin(HyperDual x) { return lift(x, std::sin(x.a), std::cos(x.a), -std::sin(x.a)); }
inline HyperDual cos(HyperDual x) { return lift(x, std::cos(x.a), -std::sin(x.a), -std::cos(x.a)); }

/// Value, first and second partial derivatives of f(r, z) at a point.
struct Jet2 {
  double f = 0.0, f_r = 0.0, f_z = 0.0, f_rr = 0.0, f_zz = 0.0;
};

template <class F>
Jet2 jet(F&& f, double r, double z) {
  const HyperDual in_r = f(HyperDual::variable(r), HyperDual(z));
  const HyperDual in_z = f(HyperDual(r), HyperDual::variable(z));
  return {in_r.a, in_r.b, in_z.b, in_r.d, in_z.d};
}

struct MmsOptions {
  std::vector<int> sizes{64, 128, 256};
  double R = 4.0;
  double Lz = 4.0;
  double psi_amp = 1.0;
  double b_amp = 1.0;
};

struct MmsSeries {
  std::string name;
  std::vector<int> sizes;
  std::vector<double> errors;  // relative errors
  double order = 0.0;
};

struct MmsReport {
  std::vector<MmsSeries> series;
  /// Relative change of the middle-size stream error when R grows by half
  /// at fixed dr; small values mean the wall truncation is irrelevant.
  double r_sensitivity = 0.0;
  bool passed(double min_order = 1.9) const;
};

/// Stream solve, PRIMAL right-hand sides (B^theta, omega^theta) and SCALED
/// right-hand sides (Pi, Omega) on manufactured Gaussian fields, CENTERED
/// advection with the central Hall flux.
MmsReport run_mms(const MmsOptions& opts = {});

}  // namespace hallmhd
