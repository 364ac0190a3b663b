#include "hallmhd/mms.hpp"

#include <algorithm>
#include <numbers>

#include "hallmhd/dynamics.hpp"
#include "hallmhd/oracle3d.hpp"

namespace hallmhd {
namespace {

// psi = r g_psi, B = r g_b, omega = -(Delta - 1/r^2) psi in closed form.
struct Manufactured {
  double A, Bamp, k;

  template <class T>
  T g_psi(T r, T z) const {
    using std::exp, std::sin;
    return A * exp(-(r * r)) * sin(k * z);
  }
  template <class T>
  T psi(T r, T z) const { return r * g_psi(r, z); }
  // Omega = omega / r
  template <class T>
  T Omega(T r, T z) const { return g_psi(r, z) * (T(8.0 + k * k) - 4.0 * (r * r)); }
  template <class T>
  T omega(T r, T z) const { return r * Omega(r, z); }
  template <class T>
  T Pi(T r, T z) const {
    using std::exp, std::cos;
    return Bamp * exp(-(r * r)) * (T(1.0) + 0.5 * cos(k * z));
  }
  template <class T>
  T B(T r, T z) const { return r * Pi(r, z); }
};

struct Exact {
  double ur, uz, rhs_b, rhs_w, rhs_pi, rhs_omega;
};

Exact exact_at(const Manufactured& m, double r, double z) {
  const Jet2 psi = jet([&](auto rr, auto zz) { return m.psi(rr, zz); }, r, z);
  const Jet2 b = jet([&](auto rr, auto zz) { return m.B(rr, zz); }, r, z);
  const Jet2 w = jet([&](auto rr, auto zz) { return m.omega(rr, zz); }, r, z);
  const Jet2 p = jet([&](auto rr, auto zz) { return m.Pi(rr, zz); }, r, z);
  const Jet2 o = jet([&](auto rr, auto zz) { return m.Omega(rr, zz); }, r, z);
  Exact e{};
  e.ur = -psi.f_z;
  e.uz = psi.f_r + psi.f / r;
  const double hall = 2.0 * b.f * b.f_z / r;
  e.rhs_b = -(e.ur * b.f_r + e.uz * b.f_z) + e.ur / r * b.f + hall;
  e.rhs_w = -(e.ur * w.f_r + e.uz * w.f_z) + e.ur / r * w.f - hall;
  const double burgers = 2.0 * p.f * p.f_z;
  e.rhs_pi = -(e.ur * p.f_r + e.uz * p.f_z) + burgers;
  e.rhs_omega = -(e.ur * o.f_r + e.uz * o.f_z) - burgers;
  return e;
}

// max |f - exact| / max |exact|
template <class Get>
double rel_max(const ScalarField& f, const std::vector<Exact>& ex, Get&& get) {
  double err = 0.0, ref = 0.0;
  for (std::size_t c = 0; c < ex.size(); ++c) {
    err = std::max(err, std::abs(f.values()[c] - get(ex[c])));
    ref = std::max(ref, std::abs(get(ex[c])));
  }
  return ref > 0.0 ? err / ref : err;
}

double stream_error(const Manufactured& m, int nr, int nz, double R, double Lz) {
  const GridSpec g = build_grid(nr, nz, R, Lz);
  const auto w = ScalarField::from_function(g, Parity::Odd, [&](double r, double z) { return m.omega(r, z); });
  auto err = solve_stream(w).psi;
  const auto exact = ScalarField::from_function(g, Parity::Odd, [&](double r, double z) { return m.psi(r, z); });
  err -= exact;
  return lp_norm(err, 2) / lp_norm(exact, 2);
}

}  // namespace

bool MmsReport::passed(double min_order) const {
  return !series.empty() &&
         std::all_of(series.begin(), series.end(), [&](const MmsSeries& s) { return s.order >= min_order; });
}

MmsReport run_mms(const MmsOptions& o) {
  const Manufactured m{o.psi_amp, o.b_amp, 2.0 * std::numbers::pi / o.Lz};
  MmsSeries stream{"stream", o.sizes, {}, 0.0};
  MmsSeries vel{"velocity", o.sizes, {}, 0.0};
  MmsSeries primal{"rhs_primal", o.sizes, {}, 0.0};
  MmsSeries scaled{"rhs_scaled", o.sizes, {}, 0.0};
  StepParams p;
  p.advection = AdvectionScheme::Centered;
  p.hall_flux = HallFlux::Central;

  for (int n : o.sizes) {
    const GridSpec g = build_grid(n, n, o.R, o.Lz);
    std::vector<Exact> ex;
    ex.reserve(g.size());
    for (int i = 0; i < g.nr; ++i)
      for (int j = 0; j < g.nz; ++j) ex.push_back(exact_at(m, g.r(i), g.z(j)));

    stream.errors.push_back(stream_error(m, n, n, o.R, o.Lz));

    const State s{0.0, Formulation::Primal,
                  ScalarField::from_function(g, Parity::Odd, [&](double r, double z) { return m.omega(r, z); }),
                  ScalarField::from_function(g, Parity::Odd, [&](double r, double z) { return m.B(r, z); })};
    const VelocityField u = velocity_of(s);
    vel.errors.push_back(std::max(rel_max(u.ur, ex, [](const Exact& e) { return e.ur; }),
                                  rel_max(u.uz, ex, [](const Exact& e) { return e.uz; })));
    primal.errors.push_back(
        std::max(rel_max(rhs_btheta(s, u, p), ex, [](const Exact& e) { return e.rhs_b; }),
                 rel_max(rhs_omega(s, u, p), ex, [](const Exact& e) { return e.rhs_w; })));

    const State sc = to_scaled(s);
    const ScaledRhs rs = rhs_scaled(sc, velocity_of(sc), p);
    scaled.errors.push_back(std::max(rel_max(rs.pi, ex, [](const Exact& e) { return e.rhs_pi; }),
                                     rel_max(rs.omega, ex, [](const Exact& e) { return e.rhs_omega; })));
  }

  MmsReport rep;
  for (MmsSeries* s : {&stream, &vel, &primal, &scaled}) {
    s->order = oracle::fit_order(s->sizes, s->errors);
    rep.series.push_back(*s);
  }
  if (!o.sizes.empty()) {
    const std::size_t mid = o.sizes.size() / 2;
    const int n = o.sizes[mid];
    const int n_wide = static_cast<int>(std::lround(1.5 * n));
    const double e_wide = stream_error(m, n_wide, n, o.R * n_wide / n, o.Lz);
    rep.r_sensitivity = std::abs(e_wide - stream.errors[mid]) / stream.errors[mid];
  }
  return rep;
}

}  // namespace hallmhd
