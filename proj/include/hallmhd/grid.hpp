#pragma once

// Cylindrical (r,z) grid, parity-tagged axisymmetric fields and the
// difference/quadrature operators built on them.
//
// Radial nodes are cell centred, r_i = (i + 1/2) dr, so no field is ever
// sampled on the axis. Across r = 0 the ghost value follows the field's
// parity; at r = R the ghost follows its OuterBc; z is periodic.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace hallmhd {

struct GridSpec {
  int nr = 0;
  int nz = 0;
  double R = 0.0;
  double Lz = 0.0;
  double dr = 0.0;
  double dz = 0.0;

  double r(int i) const { return (i + 0.5) * dr; }
  double z(int j) const { return j * dz; }
  /// Radius of the face between cells i-1 and i (face 0 is the axis).
  double r_face(int i) const { return i * dr; }
  std::size_t size() const { return static_cast<std::size_t>(nr) * static_cast<std::size_t>(nz); }

  bool operator==(const GridSpec&) const = default;
};

inline constexpr int kMinCells = 8;

/// Throws DomainError unless nr, nz >= 8 and R, Lz > 0.
GridSpec build_grid(int nr, int nz, double R, double Lz);

/// Behaviour under the reflection r -> -r.
enum class Parity { Odd, Even };

inline Parity flip(Parity p) { return p == Parity::Odd ? Parity::Even : Parity::Odd; }
const char* to_string(Parity p);

/// Ghost rule at r = R. Evolved fields and psi are Dirichlet; u^z, which
/// does not vanish at the outer wall, is linearly extrapolated.
enum class OuterBc { Dirichlet, Extrapolate };

class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(const GridSpec& grid, Parity parity, OuterBc outer = OuterBc::Dirichlet);

  static ScalarField from_function(const GridSpec& grid, Parity parity,
                                   const std::function<double(double, double)>& f,
                                   OuterBc outer = OuterBc::Dirichlet);

  const GridSpec& grid() const { return grid_; }
  Parity parity() const { return parity_; }
  OuterBc outer_bc() const { return outer_; }
  void set_outer_bc(OuterBc bc) { outer_ = bc; }

  double& operator()(int i, int j) { return values_[index(i, j)]; }
  double operator()(int i, int j) const { return values_[index(i, j)]; }

  /// Value with ghost extension: i in [-nr, 2nr), any j.
  double at(int i, int j) const;

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  std::span<double> row(int i) { return {values_.data() + index(i, 0), static_cast<std::size_t>(grid_.nz)}; }
  std::span<const double> row(int i) const {
    return {values_.data() + index(i, 0), static_cast<std::size_t>(grid_.nz)};
  }

  double max_abs() const;
  bool all_finite() const;

  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);
  ScalarField& operator*=(double c);
  /// this += c * other
  ScalarField& axpy(double c, const ScalarField& other);

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(grid_.nz) + static_cast<std::size_t>(j);
  }
  void check_compatible(const ScalarField& other) const;

  GridSpec grid_{};
  Parity parity_ = Parity::Odd;
  OuterBc outer_ = OuterBc::Dirichlet;
  std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double c, ScalarField a);

/// Pointwise f/r (parity flips).
ScalarField divide_by_r(const ScalarField& f);
/// Pointwise r*f (parity flips).
ScalarField multiply_by_r(const ScalarField& f);
/// Pointwise product; parities combine (odd*odd = even, ...).
ScalarField multiply(const ScalarField& a, const ScalarField& b);

/// Centered d/dr with parity ghosts; result parity flips.
ScalarField ddr(const ScalarField& f);
/// Periodic centered d/dz; parity preserved.
ScalarField ddz(const ScalarField& f);

/// (Delta - 1/r^2) f for the theta component of a vector field. ODD input.
ScalarField laplacian_theta(const ScalarField& f);
/// (Delta + (2/r) d_r) f, i.e. d_rr + (3/r) d_r + d_zz. EVEN input.
ScalarField laplacian_scaled(const ScalarField& f);

/// Tridiagonal radial part of laplacian_scaled with the homogeneous
/// Dirichlet ghost folded into the last row. Row i acts as
/// lower[i] f_{i-1} + diag[i] f_i + upper[i] f_{i+1}; lower[0] = 0 because
/// the axis face carries no flux.
struct RadialStencil {
  std::vector<double> lower;
  std::vector<double> diag;
  std::vector<double> upper;
};
RadialStencil scaled_radial_stencil(const GridSpec& grid);

/// Eigenvalue of the periodic second difference for z-mode k:
/// -(4/dz^2) sin^2(pi k / nz).
double dzz_eigenvalue(const GridSpec& grid, int k);

/// Weighted L^p norm with measure 2 pi r dr dz (midpoint rule); p = inf
/// returns the grid maximum of |f|. Throws DomainError for p < 1.
double lp_norm(const ScalarField& f, double p);

/// ||grad (f e^theta)||^2_{L^2(R^3)} = ||d_r f||^2 + ||d_z f||^2 + ||f/r||^2.
double theta_h1_seminorm_sq(const ScalarField& f);

/// ||grad f||^2 for an axisymmetric scalar: ||d_r f||^2 + ||d_z f||^2.
double scalar_h1_seminorm_sq(const ScalarField& f);

/// Weighted inner product sum f g 2 pi r dr dz.
double inner(const ScalarField& f, const ScalarField& g);

}  // namespace hallmhd
