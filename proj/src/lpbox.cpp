#include "hallmhd/lpbox.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "hallmhd/errors.hpp"

namespace hallmhd::lp {
namespace {

using cplx = std::complex<double>;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// r2c layout: n x n x (n/2 + 1)
struct Spectrum {
  int n = 0;
  std::vector<cplx> c;
  int nh() const { return n / 2 + 1; }
  std::size_t index(int i, int j, int k) const { return (static_cast<std::size_t>(i) * n + j) * nh() + k; }
};

double wavenumber(int i, int n) { return i <= n / 2 ? i : i - n; }

bool on_nyquist(int i, int j, int k, int n) {
  return n % 2 == 0 && (i == n / 2 || j == n / 2 || k == n / 2);
}

Spectrum forward(const PeriodicField3D& u) {
  const int n = u.n();
  Spectrum s{n, std::vector<cplx>(static_cast<std::size_t>(n) * n * (n / 2 + 1))};
  std::vector<double> in(u.values().begin(), u.values().end());
  fftw_plan plan = fftw_plan_dft_r2c_3d(n, n, n, in.data(), reinterpret_cast<fftw_complex*>(s.c.data()),
                                        FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  return s;
}

// Consumes the spectrum (c2r overwrites its input).
PeriodicField3D inverse(Spectrum s) {
  const int n = s.n;
  PeriodicField3D out(n);
  fftw_plan plan = fftw_plan_dft_c2r_3d(n, n, n, reinterpret_cast<fftw_complex*>(s.c.data()), out.values().data(),
                                        FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  out *= 1.0 / (static_cast<double>(n) * n * n);
  return out;
}

template <class Fn>
void for_each_mode(const Spectrum& s, Fn&& fn) {
  for (int i = 0; i < s.n; ++i)
    for (int j = 0; j < s.n; ++j)
      for (int k = 0; k < s.nh(); ++k) fn(i, j, k, wavenumber(i, s.n), wavenumber(j, s.n), static_cast<double>(k));
}

template <class M>
Spectrum filtered(const Spectrum& s, M&& m) {
  Spectrum out = s;
  for_each_mode(out, [&](int i, int j, int k, double kx, double ky, double kz) {
    cplx v = m(kx, ky, kz);
    if (on_nyquist(i, j, k, out.n)) v = v.real();
    out.c[out.index(i, j, k)] *= v;
  });
  return out;
}

// Radial bank symbol at an integer lattice frequency.
Spectrum block_filtered(const Spectrum& s, const DyadicFilterBank& bank, int q) {
  Spectrum out = s;
  for_each_mode(out, [&](int i, int j, int k, double kx, double ky, double kz) {
    out.c[out.index(i, j, k)] *= bank.lattice_multiplier(q, static_cast<int>(kx * kx + ky * ky + kz * kz));
  });
  return out;
}

// Smooth step: 0 for t <= 0, 1 for t >= 1, C-infinity in between.
double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

double kmag(double kx, double ky, double kz) { return std::sqrt(kx * kx + ky * ky + kz * kz); }

cplx monomial(std::array<int, 3> alpha, double kx, double ky, double kz, cplx unit) {
  const double k[3] = {kx, ky, kz};
  cplx v = 1.0;
  for (int a = 0; a < 3; ++a)
    for (int e = 0; e < alpha[a]; ++e) v *= unit * k[a];
  return v;
}

// ||F^-1 m||_{L^1} on the lattice: with the unit-normalised inverse the h^3
// weight and the (2 pi)^-3 cancel, leaving the plain sum of |values|.
double kernel_l1(int n, const Multiplier& m) {
  Spectrum s{n, std::vector<cplx>(static_cast<std::size_t>(n) * n * (n / 2 + 1), cplx(1.0))};
  const PeriodicField3D k = inverse(filtered(s, m));
  double sum = 0.0;
  for (double v : k.values()) sum += std::abs(v);
  return sum;
}

double factorial(int m) {
  double f = 1.0;
  for (int i = 2; i <= m; ++i) f *= i;
  return f;
}

}  // namespace

PeriodicField3D::PeriodicField3D(int n) : n_(n) {
  if (n < 4) throw DomainError("periodic field needs n >= 4");
  values_.assign(static_cast<std::size_t>(n) * n * n, 0.0);
}

PeriodicField3D PeriodicField3D::from_function(int n, const std::function<double(double, double, double)>& f) {
  PeriodicField3D u(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) u(i, j, k) = f(u.x(i), u.x(j), u.x(k));
  return u;
}

double PeriodicField3D::h() const { return kTwoPi / n_; }

double PeriodicField3D::mean() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return values_.empty() ? 0.0 : s / static_cast<double>(values_.size());
}

double PeriodicField3D::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

PeriodicField3D& PeriodicField3D::operator+=(const PeriodicField3D& o) {
  if (o.n_ != n_) throw DomainError("periodic fields on different lattices");
  for (std::size_t c = 0; c < values_.size(); ++c) values_[c] += o.values_[c];
  return *this;
}

PeriodicField3D& PeriodicField3D::operator-=(const PeriodicField3D& o) {
  if (o.n_ != n_) throw DomainError("periodic fields on different lattices");
  for (std::size_t c = 0; c < values_.size(); ++c) values_[c] -= o.values_[c];
  return *this;
}

PeriodicField3D& PeriodicField3D::operator*=(double c) {
  for (double& v : values_) v *= c;
  return *this;
}

PeriodicField3D operator+(PeriodicField3D a, const PeriodicField3D& b) { return a += b; }
PeriodicField3D operator-(PeriodicField3D a, const PeriodicField3D& b) { return a -= b; }
PeriodicField3D operator*(double c, PeriodicField3D a) { return a *= c; }

PeriodicField3D multiply(const PeriodicField3D& a, const PeriodicField3D& b) {
  if (a.n() != b.n()) throw DomainError("periodic fields on different lattices");
  PeriodicField3D out = a;
  for (std::size_t c = 0; c < out.size(); ++c) out.values()[c] *= b.values()[c];
  return out;
}

DyadicFilterBank::DyadicFilterBank(int n) : n_(n), q_max_(0) {
  if (n < 4) throw DomainError("filter bank needs n >= 4");
  const double kmax = std::sqrt(3.0) * (n / 2);
  while (0.75 * std::ldexp(1.0, q_max_ + 1) < kmax) ++q_max_;
  const int k2max = 3 * (n / 2) * (n / 2);
  table_.assign(q_max_ + 2, std::vector<double>(k2max + 1));
  for (int q = -1; q <= q_max_; ++q)
    for (int k2 = 0; k2 <= k2max; ++k2) table_[q + 1][k2] = multiplier(q, std::sqrt(static_cast<double>(k2)));
}

double DyadicFilterBank::lattice_multiplier(int q, int k2) const {
  if (q < -1 || q > q_max_ || k2 < 0 || k2 >= static_cast<int>(table_[0].size())) return 0.0;
  return table_[q + 1][k2];
}

double DyadicFilterBank::chi(double xi) { return 1.0 - smooth_step((std::abs(xi) - 0.75) / (4.0 / 3.0 - 0.75)); }

double DyadicFilterBank::phi(double xi) { return chi(xi / 2.0) - chi(xi); }

double DyadicFilterBank::multiplier(int q, double k) const {
  if (q == -1) return chi(k);
  if (q < -1 || q > q_max_) return 0.0;
  return phi(std::ldexp(k, -q));
}

double DyadicFilterBank::partition_residual() const {
  double worst = 0.0;
  const int h = n_ / 2;
  for (int a = 0; a <= h; ++a)
    for (int b = 0; b <= a; ++b)
      for (int c = 0; c <= b; ++c) {
        const double k = kmag(a, b, c);
        double s = 0.0;
        for (int q = -1; q <= q_max_; ++q) s += multiplier(q, k);
        worst = std::max(worst, std::abs(s - 1.0));
      }
  return worst;
}

PeriodicField3D apply_multiplier(const PeriodicField3D& u, const Multiplier& m) {
  return inverse(filtered(forward(u), m));
}

PeriodicField3D dyadic_block(const PeriodicField3D& u, const DyadicFilterBank& bank, int q) {
  if (u.n() != bank.n()) throw DomainError("filter bank built for a different lattice");
  if (q < -1 || q > bank.max_block()) return PeriodicField3D(u.n());
  return inverse(block_filtered(forward(u), bank, q));
}

PeriodicField3D reconstruct(const PeriodicField3D& u, const DyadicFilterBank& bank) {
  PeriodicField3D sum(u.n());
  for (int q = -1; q <= bank.max_block(); ++q) sum += dyadic_block(u, bank, q);
  return sum;
}

PeriodicField3D frac_laplacian(const PeriodicField3D& u, double s) {
  if (s < 0.0 && std::abs(u.mean()) > 1e-12 * std::max(u.max_abs(), 1e-300)) {
    throw DomainError("Lambda^s with s < 0 needs a zero-mean field");
  }
  return apply_multiplier(u, [s](double kx, double ky, double kz) {
    const double k = kmag(kx, ky, kz);
    return cplx(k > 0.0 ? std::pow(k, s) : 0.0);
  });
}

PeriodicField3D derivative(const PeriodicField3D& u, std::array<int, 3> alpha) {
  return apply_multiplier(u, [alpha](double kx, double ky, double kz) {
    return monomial(alpha, kx, ky, kz, cplx(0.0, 1.0));
  });
}

double lp_norm(const PeriodicField3D& u, double p) {
  if (!(p >= 1.0)) throw DomainError("lp_norm needs p >= 1");
  if (std::isinf(p)) return u.max_abs();
  double s = 0.0;
  const int ip = static_cast<int>(p);
  if (ip == p && ip <= 16) {
    // integer exponents are the common case and pow() dominates otherwise
    for (double v : u.values()) {
      const double a = std::abs(v);
      double t = 1.0;
      for (int e = 0; e < ip; ++e) t *= a;
      s += t;
    }
  } else {
    for (double v : u.values()) s += std::pow(std::abs(v), p);
  }
  return std::pow(s * std::pow(u.h(), 3), 1.0 / p);
}

double grad_inf(const PeriodicField3D& u) {
  const auto dx = derivative(u, {1, 0, 0});
  const auto dy = derivative(u, {0, 1, 0});
  const auto dz = derivative(u, {0, 0, 1});
  double m = 0.0;
  for (std::size_t c = 0; c < u.size(); ++c) {
    const double g = std::sqrt(dx.values()[c] * dx.values()[c] + dy.values()[c] * dy.values()[c] +
                               dz.values()[c] * dz.values()[c]);
    m = std::max(m, g);
  }
  return m;
}

double besov_norm(const PeriodicField3D& u, const DyadicFilterBank& bank, double s, double p, double r) {
  if (u.n() != bank.n()) throw DomainError("filter bank built for a different lattice");
  if (!(r >= 1.0)) throw DomainError("besov_norm needs r >= 1");
  const Spectrum spec = forward(u);
  double acc = 0.0;
  for (int q = -1; q <= bank.max_block(); ++q) {
    const PeriodicField3D block = inverse(block_filtered(spec, bank, q));
    const double term = std::pow(2.0, q * s) * lp_norm(block, p);
    acc = std::isinf(r) ? std::max(acc, term) : acc + std::pow(term, r);
  }
  return std::isinf(r) ? acc : std::pow(acc, 1.0 / r);
}

PeriodicField3D random_band_field(int n, double kmin, double kmax, double decay, std::uint64_t seed,
                                  bool zero_mean) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Spectrum s{n, std::vector<cplx>(static_cast<std::size_t>(n) * n * (n / 2 + 1))};
  for_each_mode(s, [&](int i, int j, int k, double kx, double ky, double kz) {
    const double a = normal(rng), b = normal(rng);
    const double km = kmag(kx, ky, kz);
    if (on_nyquist(i, j, k, n) || km < kmin || km > kmax || (zero_mean && km == 0.0)) return;
    s.c[s.index(i, j, k)] = cplx(a, b) * std::pow(1.0 + km, -decay);
  });
  // the kz = 0 and kz = n/2 planes hold both k and -k: make them conjugate
  for (int k : {0, n / 2}) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const int ii = (n - i) % n, jj = (n - j) % n;
        auto& here = s.c[s.index(i, j, k)];
        if (ii == i && jj == j) {
          here = here.real();
        } else if (std::pair(i, j) < std::pair(ii, jj)) {
          s.c[s.index(ii, jj, k)] = std::conj(here);
        }
      }
  }
  PeriodicField3D u = inverse(std::move(s));
  const double m = u.max_abs();
  if (m > 0.0) u *= 1.0 / m;
  return u;
}

std::vector<std::array<int, 3>> multi_indices(int k) {
  std::vector<std::array<int, 3>> out;
  for (int a = k; a >= 0; --a)
    for (int b = k - a; b >= 0; --b) out.push_back({a, b, k - a - b});
  return out;
}

double bernstein_ratio(const PeriodicField3D& u, int q, int k, double p) {
  const double base = lp_norm(u, p);
  if (base == 0.0) return 0.0;
  double sup = 0.0;
  for (const auto& alpha : multi_indices(k)) sup = std::max(sup, lp_norm(derivative(u, alpha), p));
  return sup / (std::ldexp(1.0, q * k) * base);
}

double BernsteinConstants::c_star() const { return std::max(upper, lower > 0.0 ? 1.0 / lower : upper); }

BernsteinConstants bernstein_constants(int n, int q, int k, bool ball) {
  // psi = 1 on the support of the fields, vanishing near the origin for the annulus
  auto psi = [q, ball](double km) {
    const double xi = std::ldexp(km, -q);
    const double outer = 1.0 - smooth_step((xi - 8.0 / 3.0) / (4.0 - 8.0 / 3.0));
    return ball ? outer : outer * smooth_step((xi - 0.5) / 0.25);
  };
  const double scale = std::ldexp(1.0, q * k);
  BernsteinConstants c;
  for (const auto& alpha : multi_indices(k)) {
    const double l1 = kernel_l1(n, [&](double kx, double ky, double kz) {
      return monomial(alpha, kx, ky, kz, cplx(0.0, 1.0)) * psi(kmag(kx, ky, kz));
    });
    c.upper = std::max(c.upper, l1 / scale);
  }
  if (ball) return c;
  // |xi|^{2k} = sum_beta k!/beta! xi^{2 beta}, so u = sum_beta k!/beta! K_beta * d^beta u
  double a = 0.0;
  for (const auto& beta : multi_indices(k)) {
    const double w = factorial(k) / (factorial(beta[0]) * factorial(beta[1]) * factorial(beta[2]));
    a += w * kernel_l1(n, [&](double kx, double ky, double kz) {
      const double km = kmag(kx, ky, kz);
      if (km == 0.0) return cplx(0.0);
      return monomial(beta, kx, ky, kz, cplx(0.0, -1.0)) * std::pow(km, -2.0 * k) * psi(km);
    });
  }
  c.lower = 1.0 / (a * scale);
  return c;
}

RatioSweep bernstein_check(std::span<const PeriodicField3D> fields, int q, int k, double p) {
  if (fields.empty()) return {};
  return bernstein_check(fields, q, k, p, bernstein_constants(fields.front().n(), q, k).c_star());
}

RatioSweep bernstein_check(std::span<const PeriodicField3D> fields, int q, int k, double p, double cs) {
  RatioSweep r;
  if (fields.empty()) return r;
  r.min_ratio = std::numeric_limits<double>::infinity();
  for (const auto& u : fields) {
    const double x = bernstein_ratio(u, q, k, p);
    r.min_ratio = std::min(r.min_ratio, x);
    r.max_ratio = std::max(r.max_ratio, x);
    if (x > cs || x < 1.0 / cs) ++r.violations;
    ++r.samples;
  }
  return r;
}

double tame_check(const PeriodicField3D& f, const PeriodicField3D& g, const DyadicFilterBank& bank, double s,
                  double p) {
  const double den = f.max_abs() * besov_norm(g, bank, s, p, 1.0) + g.max_abs() * besov_norm(f, bank, s, p, 1.0);
  if (den == 0.0) return 0.0;
  return besov_norm(multiply(f, g), bank, s, p, 1.0) / den;
}

double commutator_check(const PeriodicField3D& f, const PeriodicField3D& g, double s, double p) {
  const double den = grad_inf(f) * lp_norm(frac_laplacian(g, s - 1.0), p) + lp_norm(frac_laplacian(f, s), p) * g.max_abs();
  if (den == 0.0) return 0.0;
  PeriodicField3D lhs = frac_laplacian(multiply(f, g), s);
  lhs -= multiply(f, frac_laplacian(g, s));
  return lp_norm(lhs, p) / den;
}

bool LpBatteryReport::passed(double tol) const {
  if (!(partition_residual <= tol) || !(reconstruction_residual <= tol)) return false;
  return std::all_of(checks.begin(), checks.end(), [](const LpCheck& c) { return c.sweep.violations == 0; });
}

namespace {

struct Pair {
  PeriodicField3D f, g;
};

// Band-limited pairs whose products stay alias-free (|k_j| <= n/4 - 1 per factor).
Pair random_pair(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double band = n / 4 - 1;
  const double kf = 1.0 + uni(rng) * (band - 1.0);
  const double kg = 1.0 + uni(rng) * (band - 1.0);
  const double df = 3.0 * uni(rng), dg = 3.0 * uni(rng);
  const double offset = 2.0 * uni(rng) - 1.0;
  Pair p{random_band_field(n, 0.0, kf, df, rng()), random_band_field(n, 0.0, kg, dg, rng(), true)};
  for (double& v : p.f.values()) v += offset;
  return p;
}

std::string fmt_p(double p) { return std::isinf(p) ? "inf" : std::to_string(static_cast<int>(p)); }
std::string fmt_s(double s) {
  std::string t = std::to_string(s);
  t.erase(t.find_last_not_of('0') + 1);
  if (t.back() == '.') t.pop_back();
  return t;
}

template <class Ratio>
LpCheck calibrated(const std::string& name, const LpBatteryOptions& o, const std::vector<Pair>& calibration,
                   const std::vector<Pair>& family, Ratio&& ratio) {
  double cal = 0.0;
  for (const auto& pr : calibration) cal = std::max(cal, ratio(pr.f, pr.g));
  LpCheck c{name, o.calibration_factor * cal, {}};
  c.sweep.min_ratio = std::numeric_limits<double>::infinity();
  for (const auto& pr : family) {
    const double x = ratio(pr.f, pr.g);
    c.sweep.min_ratio = std::min(c.sweep.min_ratio, x);
    c.sweep.max_ratio = std::max(c.sweep.max_ratio, x);
    if (!(x <= c.c_star)) ++c.sweep.violations;
    ++c.sweep.samples;
  }
  return c;
}

}  // namespace

LpBatteryReport run_lp_battery(const LpBatteryOptions& o) {
  LpBatteryReport rep;
  const DyadicFilterBank bank(o.n);
  rep.partition_residual = bank.partition_residual();

  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int i = 0; i < o.samples; ++i) {
    const auto u = random_band_field(o.n, 0.0, o.n, 2.0 * uni(rng), rng());
    const auto back = reconstruct(u, bank) - u;
    rep.reconstruction_residual = std::max(rep.reconstruction_residual, back.max_abs() / u.max_abs());
  }

  for (int q : o.bernstein_blocks) {
    std::vector<PeriodicField3D> family;
    for (int i = 0; i < o.samples; ++i)
      family.push_back(random_band_field(o.n, 0.75 * std::ldexp(1.0, q), 8.0 / 3.0 * std::ldexp(1.0, q),
                                         2.0 * uni(rng), rng()));
    for (int k : o.bernstein_orders) {
      const double cs = bernstein_constants(o.n, q, k).c_star();
      for (double p : o.exponents)
        rep.checks.push_back({"bernstein q=" + std::to_string(q) + " k=" + std::to_string(k) + " p=" + fmt_p(p), cs,
                              bernstein_check(family, q, k, p, cs)});
    }
  }

  // calibration and tested families never share a seed
  std::vector<Pair> calibration, family;
  for (int i = 0; i < o.samples; ++i) {
    calibration.push_back(random_pair(o.n, o.calibration_seed + static_cast<std::uint64_t>(i)));
    family.push_back(random_pair(o.n, o.seed + static_cast<std::uint64_t>(i)));
  }
  for (double s : o.smoothness)
    for (double p : o.exponents) {
      rep.checks.push_back(calibrated("tame s=" + fmt_s(s) + " p=" + fmt_p(p), o, calibration, family,
                                      [&](const auto& f, const auto& g) { return tame_check(f, g, bank, s, p); }));
      rep.checks.push_back(calibrated("commutator s=" + fmt_s(s) + " p=" + fmt_p(p), o, calibration, family,
                                      [&](const auto& f, const auto& g) { return commutator_check(f, g, s, p); }));
    }
  return rep;
}

}  // namespace hallmhd::lp
