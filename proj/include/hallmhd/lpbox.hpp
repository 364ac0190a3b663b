#pragma once

// Littlewood-Paley toolkit on the periodic box [0, 2 pi)^3. Frequencies are
// the integer lattice, so the decomposition is inhomogeneous: everything
// below the first annulus lands in the low block q = -1.

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace hallmhd::lp {

class PeriodicField3D {
 public:
  PeriodicField3D() = default;
  explicit PeriodicField3D(int n);

  static PeriodicField3D from_function(int n, const std::function<double(double, double, double)>& f);

  int n() const { return n_; }
  double h() const;
  double x(int i) const { return i * h(); }
  std::size_t size() const { return values_.size(); }
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n_ + j) * n_ + k;
  }

  double& operator()(int i, int j, int k) { return values_[index(i, j, k)]; }
  double operator()(int i, int j, int k) const { return values_[index(i, j, k)]; }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  double mean() const;
  double max_abs() const;

  PeriodicField3D& operator+=(const PeriodicField3D& o);
  PeriodicField3D& operator-=(const PeriodicField3D& o);
  PeriodicField3D& operator*=(double c);

 private:
  int n_ = 0;
  std::vector<double> values_;
};

PeriodicField3D operator+(PeriodicField3D a, const PeriodicField3D& b);
PeriodicField3D operator-(PeriodicField3D a, const PeriodicField3D& b);
PeriodicField3D operator*(double c, PeriodicField3D a);
/// Pointwise product. Callers keep the bands low enough that it does not alias.
PeriodicField3D multiply(const PeriodicField3D& a, const PeriodicField3D& b);

/// Smooth radial cutoffs: chi = 1 on |xi| <= 3/4, 0 on |xi| >= 4/3;
/// phi(xi) = chi(xi/2) - chi(xi), supported in 3/4 <= |xi| <= 8/3.
class DyadicFilterBank {
 public:
  explicit DyadicFilterBank(int n);

  int n() const { return n_; }
  /// Highest block index Q: the smallest Q with (3/4) 2^{Q+1} >= max lattice |k|.
  int max_block() const { return q_max_; }

  static double chi(double xi);
  static double phi(double xi);
  /// Symbol of block q at |k|: chi for q = -1, phi(2^-q |k|) for 0 <= q <= Q,
  /// zero outside the bank.
  double multiplier(int q, double kmag) const;
  /// multiplier(q, sqrt(k2)) from a table, for integer |k|^2 up to 3 (n/2)^2.
  double lattice_multiplier(int q, int k2) const;
  /// max over lattice frequencies of |sum_q multiplier(q, |k|) - 1|.
  double partition_residual() const;

 private:
  int n_;
  int q_max_;
  std::vector<std::vector<double>> table_;
};

/// Spectral multiplier m(kx, ky, kz). On Nyquist planes only Re m is applied
/// so that real fields stay real.
using Multiplier = std::function<std::complex<double>(double, double, double)>;
PeriodicField3D apply_multiplier(const PeriodicField3D& u, const Multiplier& m);

PeriodicField3D dyadic_block(const PeriodicField3D& u, const DyadicFilterBank& bank, int q);
/// sum over every block; equals u up to round-off.
PeriodicField3D reconstruct(const PeriodicField3D& u, const DyadicFilterBank& bank);

/// Lambda^s = |k|^s (zero at k = 0). Throws DomainError when s < 0 and u does
/// not have zero mean.
PeriodicField3D frac_laplacian(const PeriodicField3D& u, double s);
/// d^alpha u, exact on the lattice modes.
PeriodicField3D derivative(const PeriodicField3D& u, std::array<int, 3> alpha);

/// (sum |u|^p h^3)^{1/p}; p = inf gives max |u|.
double lp_norm(const PeriodicField3D& u, double p);
/// max over lattice points of the Euclidean |grad u|.
double grad_inf(const PeriodicField3D& u);

/// || (2^{qs} ||Delta_q u||_{L^p})_q ||_{l^r}, q = -1..Q; r = inf allowed.
double besov_norm(const PeriodicField3D& u, const DyadicFilterBank& bank, double s, double p, double r);

/// Real field with Gaussian random coefficients on kmin <= |k| <= kmax,
/// weighted by (1 + |k|)^-decay. Deterministic in the seed.
PeriodicField3D random_band_field(int n, double kmin, double kmax, double decay, std::uint64_t seed,
                                  bool zero_mean = false);

/// All multi-indices with |alpha| = k.
std::vector<std::array<int, 3>> multi_indices(int k);

/// sup_{|alpha| = k} ||d^alpha u||_p / (2^{qk} ||u||_p); 0 for u = 0.
double bernstein_ratio(const PeriodicField3D& u, int q, int k, double p);

/// Young's-inequality constants for fields supported in the annulus 2^q C
/// (or the ball 2^q B with ball = true, where only the upper bound exists).
struct BernsteinConstants {
  double upper = 0.0;  // ratio <= upper
  double lower = 0.0;  // ratio >= lower (0 for the ball)
  double c_star() const;
};
BernsteinConstants bernstein_constants(int n, int q, int k, bool ball = false);

struct RatioSweep {
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  int violations = 0;
  int samples = 0;
};

/// Ratios of a field set against [1/C*, C*] with C* from bernstein_constants.
RatioSweep bernstein_check(std::span<const PeriodicField3D> fields, int q, int k, double p);
/// Same, against a precomputed C*.
RatioSweep bernstein_check(std::span<const PeriodicField3D> fields, int q, int k, double p, double c_star);

/// ||fg||_{B^s_{p,1}} / (||f||_inf ||g||_{B^s_{p,1}} + ||g||_inf ||f||_{B^s_{p,1}}); 0 when the
/// denominator vanishes.
double tame_check(const PeriodicField3D& f, const PeriodicField3D& g, const DyadicFilterBank& bank, double s,
                  double p);
/// ||Lambda^s(fg) - f Lambda^s g||_p / (||grad f||_inf ||Lambda^{s-1} g||_p + ||Lambda^s f||_p ||g||_inf);
/// 0 when the denominator vanishes.
double commutator_check(const PeriodicField3D& f, const PeriodicField3D& g, double s, double p);

struct LpBatteryOptions {
  int n = 32;
  int samples = 20;
  std::uint64_t seed = 1;
  std::uint64_t calibration_seed = 1000;
  std::vector<int> bernstein_blocks{1, 2};
  std::vector<int> bernstein_orders{1, 2};
  std::vector<double> exponents{2.0, 4.0, std::numeric_limits<double>::infinity()};
  std::vector<double> smoothness{0.5, 1.0, 2.0};
  double calibration_factor = 10.0;
};

struct LpCheck {
  std::string name;
  double c_star = 0.0;
  RatioSweep sweep;
};

struct LpBatteryReport {
  double partition_residual = 0.0;
  double reconstruction_residual = 0.0;
  std::vector<LpCheck> checks;
  bool passed(double tol = 1e-10) const;
};

LpBatteryReport run_lp_battery(const LpBatteryOptions& opts = {});

}  // namespace hallmhd::lp
