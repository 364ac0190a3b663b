#include "hallmhd/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "hallmhd/errors.hpp"

namespace hallmhd {

GridSpec build_grid(int nr, int nz, double R, double Lz) {
  if (nr < kMinCells || nz < kMinCells) {
    throw DomainError("grid needs at least " + std::to_string(kMinCells) + " cells per direction, got nr=" +
                      std::to_string(nr) + " nz=" + std::to_string(nz));
  }
  if (!(R > 0.0) || !(Lz > 0.0)) throw DomainError("grid extents R and Lz must be positive");
  GridSpec g;
  g.nr = nr;
  g.nz = nz;
  g.R = R;
  g.Lz = Lz;
  g.dr = R / nr;
  g.dz = Lz / nz;
  return g;
}

const char* to_string(Parity p) { return p == Parity::Odd ? "ODD" : "EVEN"; }

ScalarField::ScalarField(const GridSpec& grid, Parity parity, OuterBc outer)
    : grid_(grid), parity_(parity), outer_(outer), values_(grid.size(), 0.0) {}

ScalarField ScalarField::from_function(const GridSpec& grid, Parity parity,
                                       const std::function<double(double, double)>& f, OuterBc outer) {
  ScalarField out(grid, parity, outer);
  for (int i = 0; i < grid.nr; ++i) {
    const double r = grid.r(i);
    for (int j = 0; j < grid.nz; ++j) out(i, j) = f(r, grid.z(j));
  }
  return out;
}

double ScalarField::at(int i, int j) const {
  const int nz = grid_.nz;
  j %= nz;
  if (j < 0) j += nz;
  if (i < 0) {
    // reflection across the axis: ghost -1-m mirrors cell m
    const double v = (*this)(-1 - i, j);
    return parity_ == Parity::Odd ? -v : v;
  }
  const int nr = grid_.nr;
  if (i >= nr) {
    const int m = i - nr;  // ghost m sits at r_{nr+m}
    if (outer_ == OuterBc::Dirichlet) return -(*this)(nr - 1 - m, j);
    const double last = (*this)(nr - 1, j);
    const double prev = (*this)(nr - 2, j);
    return last + (m + 1) * (last - prev);
  }
  return (*this)(i, j);
}

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool ScalarField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

void ScalarField::check_compatible(const ScalarField& other) const {
  if (!(grid_ == other.grid_)) throw DomainError("fields live on different grids");
  if (parity_ != other.parity_) throw DomainError("cannot combine fields of different parity");
}

ScalarField& ScalarField::operator+=(const ScalarField& other) { return axpy(1.0, other); }
ScalarField& ScalarField::operator-=(const ScalarField& other) { return axpy(-1.0, other); }

ScalarField& ScalarField::operator*=(double c) {
  for (double& v : values_) v *= c;
  return *this;
}

ScalarField& ScalarField::axpy(double c, const ScalarField& other) {
  check_compatible(other);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += c * other.values_[k];
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double c, ScalarField a) { return a *= c; }

ScalarField divide_by_r(const ScalarField& f) {
  const auto& g = f.grid();
  ScalarField out(g, flip(f.parity()));
  for (int i = 0; i < g.nr; ++i) {
    const double inv = 1.0 / g.r(i);
    for (int j = 0; j < g.nz; ++j) out(i, j) = f(i, j) * inv;
  }
  return out;
}

ScalarField multiply_by_r(const ScalarField& f) {
  const auto& g = f.grid();
  ScalarField out(g, flip(f.parity()));
  for (int i = 0; i < g.nr; ++i) {
    const double r = g.r(i);
    for (int j = 0; j < g.nz; ++j) out(i, j) = f(i, j) * r;
  }
  return out;
}

ScalarField multiply(const ScalarField& a, const ScalarField& b) {
  if (!(a.grid() == b.grid())) throw DomainError("fields live on different grids");
  const Parity p = a.parity() == b.parity() ? Parity::Even : Parity::Odd;
  ScalarField out(a.grid(), p);
  auto va = a.values();
  auto vb = b.values();
  auto vo = out.values();
  for (std::size_t k = 0; k < vo.size(); ++k) vo[k] = va[k] * vb[k];
  return out;
}

ScalarField ddr(const ScalarField& f) {
  const auto& g = f.grid();
  ScalarField out(g, flip(f.parity()));
  const double c = 0.5 / g.dr;
  for (int i = 0; i < g.nr; ++i) {
    const bool interior = i > 0 && i < g.nr - 1;
    for (int j = 0; j < g.nz; ++j) {
      const double up = interior ? f(i + 1, j) : f.at(i + 1, j);
      const double dn = interior ? f(i - 1, j) : f.at(i - 1, j);
      out(i, j) = (up - dn) * c;
    }
  }
  return out;
}

ScalarField ddz(const ScalarField& f) {
  const auto& g = f.grid();
  ScalarField out(g, f.parity());
  const double c = 0.5 / g.dz;
  const int nz = g.nz;
  for (int i = 0; i < g.nr; ++i) {
    auto in = f.row(i);
    auto o = out.row(i);
    o[0] = (in[1] - in[nz - 1]) * c;
    for (int j = 1; j < nz - 1; ++j) o[j] = (in[j + 1] - in[j - 1]) * c;
    o[nz - 1] = (in[0] - in[nz - 2]) * c;
  }
  return out;
}

RadialStencil scaled_radial_stencil(const GridSpec& g) {
  RadialStencil s;
  s.lower.resize(g.nr);
  s.diag.resize(g.nr);
  s.upper.resize(g.nr);
  const double dr2 = g.dr * g.dr;
  for (int i = 0; i < g.nr; ++i) {
    const double rm = g.r_face(i);
    const double rp = g.r_face(i + 1);
    // exact r^3-weighted cell volume divided by dr
    const double vol = (rp * rp * rp * rp - rm * rm * rm * rm) / (4.0 * g.dr);
    const double am = rm * rm * rm / (dr2 * vol);
    const double ap = rp * rp * rp / (dr2 * vol);
    s.lower[i] = am;
    s.upper[i] = ap;
    s.diag[i] = -(am + ap);
  }
  // Dirichlet ghost f_nr = -f_{nr-1}
  s.diag[g.nr - 1] -= s.upper[g.nr - 1];
  s.upper[g.nr - 1] = 0.0;
  return s;
}

double dzz_eigenvalue(const GridSpec& g, int k) {
  const double s = std::sin(std::numbers::pi * k / g.nz);
  return -4.0 * s * s / (g.dz * g.dz);
}

namespace {

void add_dzz(const ScalarField& f, ScalarField& out) {
  const auto& g = f.grid();
  const double c = 1.0 / (g.dz * g.dz);
  const int nz = g.nz;
  for (int i = 0; i < g.nr; ++i) {
    auto in = f.row(i);
    auto o = out.row(i);
    o[0] += (in[1] - 2.0 * in[0] + in[nz - 1]) * c;
    for (int j = 1; j < nz - 1; ++j) o[j] += (in[j + 1] - 2.0 * in[j] + in[j - 1]) * c;
    o[nz - 1] += (in[0] - 2.0 * in[nz - 1] + in[nz - 2]) * c;
  }
}

// Radial part of laplacian_scaled applied to an even field.
void apply_scaled_radial(const ScalarField& f, const RadialStencil& s, ScalarField& out) {
  const auto& g = f.grid();
  for (int i = 0; i < g.nr; ++i) {
    auto o = out.row(i);
    auto c = f.row(i);
    for (int j = 0; j < g.nz; ++j) {
      double v = s.diag[i] * c[j];
      if (i > 0) v += s.lower[i] * f(i - 1, j);
      if (i < g.nr - 1) v += s.upper[i] * f(i + 1, j);
      o[j] = v;
    }
  }
}

}  // namespace

ScalarField laplacian_scaled(const ScalarField& f) {
  if (f.parity() != Parity::Even) throw DomainError("laplacian_scaled requires an EVEN field");
  ScalarField out(f.grid(), Parity::Even);
  apply_scaled_radial(f, scaled_radial_stencil(f.grid()), out);
  add_dzz(f, out);
  return out;
}

ScalarField laplacian_theta(const ScalarField& f) {
  if (f.parity() != Parity::Odd) throw DomainError("laplacian_theta requires an ODD field");
  // (Delta - 1/r^2) f = r (d_rr + (3/r) d_r + d_zz)(f/r)
  return multiply_by_r(laplacian_scaled(divide_by_r(f)));
}

double lp_norm(const ScalarField& f, double p) {
  if (!(p >= 1.0)) throw DomainError("lp_norm requires p >= 1");
  if (std::isinf(p)) return f.max_abs();
  const auto& g = f.grid();
  const double cell = 2.0 * std::numbers::pi * g.dr * g.dz;
  double sum = 0.0;
  for (int i = 0; i < g.nr; ++i) {
    double row = 0.0;
    for (double v : f.row(i)) {
      const double a = std::abs(v);
      row += p == 2.0 ? a * a : std::pow(a, p);
    }
    sum += row * g.r(i);
  }
  return std::pow(sum * cell, 1.0 / p);
}

double inner(const ScalarField& f, const ScalarField& g) {
  if (!(f.grid() == g.grid())) throw DomainError("fields live on different grids");
  const auto& gr = f.grid();
  double sum = 0.0;
  for (int i = 0; i < gr.nr; ++i) {
    auto a = f.row(i);
    auto b = g.row(i);
    double row = 0.0;
    for (int j = 0; j < gr.nz; ++j) row += a[j] * b[j];
    sum += row * gr.r(i);
  }
  return sum * 2.0 * std::numbers::pi * gr.dr * gr.dz;
}

double scalar_h1_seminorm_sq(const ScalarField& f) {
  const double a = lp_norm(ddr(f), 2.0);
  const double b = lp_norm(ddz(f), 2.0);
  return a * a + b * b;
}

double theta_h1_seminorm_sq(const ScalarField& f) {
  const double c = lp_norm(divide_by_r(f), 2.0);
  return scalar_h1_seminorm_sq(f) + c * c;
}

}  // namespace hallmhd
