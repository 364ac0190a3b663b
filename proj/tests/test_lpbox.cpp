#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hallmhd/errors.hpp"
#include "hallmhd/lpbox.hpp"

using namespace hallmhd;
using namespace hallmhd::lp;
using std::numbers::pi;

namespace {

PeriodicField3D mode(int n, double kx, double ky, double kz, bool sine = false) {
  return PeriodicField3D::from_function(n, [=](double x, double y, double z) {
    const double a = kx * x + ky * y + kz * z;
    return sine ? std::sin(a) : std::cos(a);
  });
}

double rel(const PeriodicField3D& a, const PeriodicField3D& b) { return (a - b).max_abs() / std::max(b.max_abs(), 1e-300); }

}  // namespace

TEST_CASE("filter bank profiles and partition of unity") {
  DyadicFilterBank bank(32);
  // (3/4) 2^{Q+1} must reach sqrt(3) * 16 = 27.7
  CHECK(bank.max_block() == 5);
  CHECK(DyadicFilterBank::chi(0.0) == 1.0);
  CHECK(DyadicFilterBank::chi(0.75) == 1.0);
  CHECK(DyadicFilterBank::chi(4.0 / 3.0) == 0.0);
  CHECK(DyadicFilterBank::phi(0.74) == 0.0);
  CHECK(DyadicFilterBank::phi(8.0 / 3.0) == 0.0);
  for (double xi = 0.0; xi < 3.0; xi += 0.01) {
    CHECK(DyadicFilterBank::phi(xi) >= 0.0);
    CHECK(DyadicFilterBank::chi(xi) <= 1.0);
  }
  CHECK(bank.partition_residual() <= 1e-10);
  CHECK(bank.multiplier(-2, 1.0) == 0.0);
  CHECK(bank.multiplier(6, 40.0) == 0.0);
  CHECK(bank.lattice_multiplier(2, 36) == bank.multiplier(2, 6.0));
}

TEST_CASE("dyadic blocks of a constant and of a single mode") {
  const int n = 16;
  DyadicFilterBank bank(n);
  PeriodicField3D c(n);
  for (double& v : c.values()) v = 2.5;
  CHECK(rel(dyadic_block(c, bank, -1), c) <= 1e-14);
  for (int q = 0; q <= bank.max_block(); ++q) CHECK(dyadic_block(c, bank, q).max_abs() <= 1e-14);

  // |k| = 3 * 2^{q-1} with q = 2 sits where phi(2^-2 |k|) = 1
  auto u = mode(n, 6, 0, 0);
  CHECK(rel(dyadic_block(u, bank, 2), u) <= 1e-12);
  for (int q = -1; q <= bank.max_block(); ++q)
    if (q != 2) CHECK(dyadic_block(u, bank, q).max_abs() <= 1e-12);
  CHECK(dyadic_block(u, bank, bank.max_block() + 1).max_abs() == 0.0);
  CHECK(dyadic_block(u, bank, -2).max_abs() == 0.0);
  CHECK_THROWS_AS(dyadic_block(u, DyadicFilterBank(8), 0), DomainError);
}

TEST_CASE("reconstruction of random fields") {
  DyadicFilterBank bank(32);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto u = random_band_field(32, 0.0, 32.0, 1.0, seed);
    CHECK(rel(reconstruct(u, bank), u) <= 1e-10);
  }
}

TEST_CASE("random band fields") {
  auto a = random_band_field(16, 2.0, 5.0, 1.0, 7);
  auto b = random_band_field(16, 2.0, 5.0, 1.0, 7);
  CHECK(std::equal(a.values().begin(), a.values().end(), b.values().begin()));
  CHECK(a.max_abs() == doctest::Approx(1.0));
  CHECK(std::abs(a.mean()) <= 1e-14);
  // band limit: the blocks far outside 2..5 carry nothing
  DyadicFilterBank bank(16);
  CHECK(dyadic_block(a, bank, 4).max_abs() <= 1e-13);
  auto z = random_band_field(16, 0.0, 3.0, 0.0, 9, true);
  CHECK(std::abs(z.mean()) <= 1e-14);
}

TEST_CASE("fractional laplacian") {
  const int n = 16;
  auto s = mode(n, 1, 2, 2, true);  // |k| = 3
  auto l = frac_laplacian(s, 1.5);
  CHECK(rel(l, std::pow(3.0, 1.5) * s) <= 1e-12);
  CHECK(rel(frac_laplacian(s, 0.0), s) <= 1e-13);
  CHECK(rel(frac_laplacian(frac_laplacian(s, -0.7), 0.7), s) <= 1e-12);

  // Plancherel: ||Lambda u||_2^2 = sum_j ||d_j u||_2^2
  auto u = random_band_field(n, 0.0, 6.0, 0.5, 3);
  const double lhs = std::pow(lp_norm(frac_laplacian(u, 1.0), 2), 2);
  double rhs = 0.0;
  for (const auto& a : multi_indices(1)) rhs += std::pow(lp_norm(derivative(u, a), 2), 2);
  CHECK(std::abs(lhs - rhs) <= 1e-12 * rhs);

  PeriodicField3D c(n);
  for (double& v : c.values()) v = 1.0;
  CHECK_THROWS_AS(frac_laplacian(c + s, -1.0), DomainError);
  CHECK(frac_laplacian(c, 2.0).max_abs() <= 1e-14);
}

TEST_CASE("lattice norms") {
  const int n = 16;
  auto c = mode(n, 2, 0, 0);
  // ||cos(2x)||_2^2 = (2 pi)^3 / 2 and ||.||_4^4 = 3 (2 pi)^3 / 8, exact on the lattice
  CHECK(lp_norm(c, 2) == doctest::Approx(std::sqrt(std::pow(2 * pi, 3) / 2)).epsilon(1e-13));
  CHECK(lp_norm(c, 4) == doctest::Approx(std::pow(3 * std::pow(2 * pi, 3) / 8, 0.25)).epsilon(1e-13));
  CHECK(lp_norm(c, 3.0) > 0.0);
  CHECK(lp_norm(c, std::numeric_limits<double>::infinity()) == doctest::Approx(1.0));
  CHECK_THROWS_AS(lp_norm(c, 0.5), DomainError);
  CHECK(grad_inf(mode(n, 1, 1, 0, true)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("besov norm of a single mode") {
  const int n = 32;
  DyadicFilterBank bank(n);
  auto u = mode(n, 3, 4, 0);  // |k| = 5 straddles blocks 1 and 2
  const double s = 0.75;
  for (double p : {2.0, 4.0}) {
    for (double r : {1.0, 2.0, std::numeric_limits<double>::infinity()}) {
      double expect = 0.0;
      for (int q = -1; q <= bank.max_block(); ++q) {
        const double t = std::pow(2.0, q * s) * bank.multiplier(q, 5.0);
        expect = std::isinf(r) ? std::max(expect, t) : expect + std::pow(t, r);
      }
      if (!std::isinf(r)) expect = std::pow(expect, 1.0 / r);
      expect *= lp_norm(u, p);
      CHECK(besov_norm(u, bank, s, p, r) == doctest::Approx(expect).epsilon(1e-12));
    }
  }
  CHECK(besov_norm(PeriodicField3D(n), bank, s, 2, 1) == 0.0);
  CHECK(besov_norm(-3.0 * u, bank, s, 2, 1) == doctest::Approx(3.0 * besov_norm(u, bank, s, 2, 1)).epsilon(1e-12));
}

TEST_CASE("bernstein: single mode ratios are exact") {
  const int n = 32;
  for (int q : {1, 2})
    for (int k : {1, 2}) {
      const double m = 3 * std::ldexp(1.0, q - 1);
      auto u = mode(n, m, 0, 0);
      const double expect = std::pow(m, k) / std::ldexp(1.0, q * k);
      for (double p : {2.0, 4.0}) CHECK(bernstein_ratio(u, q, k, p) == doctest::Approx(expect).epsilon(1e-12));
      CHECK(expect >= std::pow(0.75, k));
      CHECK(expect <= std::pow(8.0 / 3.0, k));
    }
  CHECK(bernstein_ratio(PeriodicField3D(n), 1, 1, 2) == 0.0);
}

TEST_CASE("bernstein: annulus family within the Young constants") {
  const int n = 32;
  const int q = 2;
  std::vector<PeriodicField3D> family;
  for (std::uint64_t seed = 10; seed < 16; ++seed) family.push_back(random_band_field(n, 3.0, 32.0 / 3.0, 1.0, seed));
  for (int k : {1, 2}) {
    const auto c = bernstein_constants(n, q, k);
    CHECK(c.lower > 0.0);
    CHECK(c.upper >= c.lower);
    for (double p : {2.0, 4.0, std::numeric_limits<double>::infinity()}) {
      for (const auto& u : family) {
        const double x = bernstein_ratio(u, q, k, p);
        CHECK(x <= c.upper);
        CHECK(x >= c.lower);
        CHECK(std::abs(bernstein_ratio(4.25 * u, q, k, p) - x) <= 1e-12 * x);
      }
      const auto sweep = bernstein_check(family, q, k, p);
      CHECK(sweep.violations == 0);
      CHECK(sweep.samples == static_cast<int>(family.size()));
    }
  }
}

TEST_CASE("bernstein: ball-supported fields obey only the upper bound") {
  const int n = 32;
  const int q = 1;
  auto ball = bernstein_constants(n, q, 1, true);
  CHECK(ball.lower == 0.0);
  auto u = random_band_field(n, 0.0, 16.0 / 3.0, 0.0, 21);
  for (double& v : u.values()) v += 3.0;  // heavy k = 0 content
  const double x = bernstein_ratio(u, q, 1, 2);
  CHECK(x <= ball.upper);
  CHECK(x < bernstein_constants(n, q, 1).lower);
}

TEST_CASE("tame estimate") {
  const int n = 16;
  DyadicFilterBank bank(n);
  auto g = random_band_field(n, 0.0, 3.0, 1.0, 5);
  PeriodicField3D f(n);
  for (double& v : f.values()) v = 2.0;
  const double s = 1.0, p = 2.0;
  // fg = 2 g and the constant sits in the low block only
  const double gb = besov_norm(g, bank, s, p, 1);
  const double fb = 2.0 * std::pow(2.0, -s) * std::pow(2 * pi, 3 / p);
  const double expect = 2.0 * gb / (2.0 * gb + g.max_abs() * fb);
  CHECK(tame_check(f, g, bank, s, p) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(expect <= 1.0);
  CHECK(tame_check(f, PeriodicField3D(n), bank, s, p) == 0.0);
}

TEST_CASE("commutator estimate") {
  const int n = 16;
  auto g = random_band_field(n, 0.0, 3.0, 1.0, 6, true);
  PeriodicField3D f(n);
  for (double& v : f.values()) v = -1.5;
  CHECK(commutator_check(f, g, 1.5, 2) == 0.0);

  // f = g = cos x, s = 2: LHS = 1.5 cos 2x - 0.5, RHS = 2 ||cos x||_2
  auto c = mode(n, 1, 0, 0);
  CHECK(commutator_check(c, c, 2.0, 2.0) == doctest::Approx(std::sqrt(1.375 / 2.0)).epsilon(1e-12));
}

TEST_CASE("small battery") {
  LpBatteryOptions o;
  o.n = 16;
  o.samples = 4;
  o.bernstein_blocks = {1};
  o.exponents = {2.0, std::numeric_limits<double>::infinity()};
  o.smoothness = {1.0};
  auto rep = run_lp_battery(o);
  CHECK(rep.partition_residual <= 1e-10);
  CHECK(rep.reconstruction_residual <= 1e-10);
  CHECK(rep.checks.size() == 2 * 2 + 2 * 2);
  for (const auto& c : rep.checks) {
    INFO(c.name);
    CHECK(c.sweep.violations == 0);
    CHECK(c.sweep.samples == 4);
    CHECK(c.sweep.max_ratio <= c.c_star);
  }
  CHECK(rep.passed());
}
