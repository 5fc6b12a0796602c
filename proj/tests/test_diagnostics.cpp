#include <doctest.h>

#include <cmath>
#include <random>

#include "stoda/constants.hpp"
#include "stoda/diagnostics.hpp"
#include "stoda/oracle.hpp"

using namespace stoda;

TEST_CASE("slope fit recovers an exact logarithmic field") {
  const QuadratureGrid g = build_grid(2, {}, GridConfig{});
  std::vector<double> u(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) u[i] = -1.5 * 0.5 * std::log(g.r2[i]) + 0.3;
  const SlopeFit f = slope_fit_default(g, u);
  CHECK(f.slope == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(f.spread <= 1e-12);
}

TEST_CASE("slope fit on the bubble far field") {
  const QuadratureGrid g = build_grid(2, {}, GridConfig{});
  std::vector<double> u(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) u[i] = bubble_2d(g.point(i));
  const SlopeFit f = slope_fit(g, u, 2.0 * g.split_radius, 3.0 * g.split_radius);
  CHECK(std::abs(f.slope - 2.0) / 2.0 <= 0.05);
}

TEST_CASE("slope fit rejects an empty window") {
  const QuadratureGrid g = build_grid(2, {}, GridConfig{});
  std::vector<double> u(g.size(), 0.0);
  CHECK_THROWS(slope_fit(g, u, 1e6, 2e6));
}

TEST_CASE("pohozaev identity") {
  std::mt19937_64 rng(9);
  auto u01 = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  for (int k = 0; k < 20; ++k) {
    const double a = 2.0 * u01() - 1.0;  // alpha < 1
    const double s = 2.0 * (1.0 - a);
    CHECK(std::abs(pohozaev_residual(s, s, a, a)) <= 1e-12);
  }
  CHECK(pohozaev_residual(0.0, 0.0, 0.3, 0.7) == 0.0);

  // half blow-up: with sigma_2 = 0 the residual vanishes iff sigma_1 = 1 - alpha_1
  const double a1 = 0.25;
  CHECK(std::abs(pohozaev_residual(1.0 - a1, 0.0, a1, 0.6)) <= 1e-15);
  CHECK(pohozaev_residual(1.0 - a1 + 0.1, 0.0, a1, 0.6) > 0.0);
  CHECK(pohozaev_residual(1.0 - a1 - 0.1, 0.0, a1, 0.6) < 0.0);

  // exact swap symmetry
  for (int k = 0; k < 50; ++k) {
    const double s1 = 3.0 * u01(), s2 = 3.0 * u01(), b1 = u01(), b2 = u01();
    CHECK(pohozaev_residual(s1, s2, b1, b2) == pohozaev_residual(s2, s1, b2, b1));
  }

  const PohozaevCheck c = pohozaev_check(2.0 * (1.0 - 0.3), 2.0 * (1.0 - 0.3), 0.3, 0.3);
  CHECK(c.nonzero);
  CHECK(c.dichotomy_holds);
}

TEST_CASE("kelvin inversion: two-point identity and involution") {
  std::mt19937_64 rng(11);
  auto rnd = [&] { return -4.0 + 8.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    std::vector<double> x{rnd(), rnd()}, y{rnd(), rnd()};
    if (std::hypot(x[0], x[1]) < 1e-3 || std::hypot(y[0], y[1]) < 1e-3) continue;
    worst = std::max(worst, kelvin_two_point_gap(x, y));
  }
  CHECK(worst <= 1e-12);

  // double application returns the original smooth field values
  const FieldEval u = [](const std::vector<double>& x) { return bubble_2d(x); };
  const FieldEval uu = kelvin_transform(kelvin_transform(u, 0.0, 0.0), 0.0, 0.0);
  worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    std::vector<double> x{rnd(), rnd()};
    if (std::hypot(x[0], x[1]) < 1e-2) continue;
    worst = std::max(worst, std::abs(uu(x) - u(x)));
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("kelvin-transformed weight tends to one at the origin") {
  ProblemSpec p;
  p.sources.dimension = 2;
  p.sources.points = {{0.6, 0.0}, {-0.4, 0.5}, {0.0, -0.7}};
  p.sources.weights = {{0.3, 0.5, 0.4}};
  for (double r : {1e-3, 1e-4}) {
    const double k = kelvin_kbar(p, 0, {r, 0.5 * r});
    CHECK(std::abs(k - 1.0) <= 40.0 * r + 1e-10);
  }
}

TEST_CASE("sigma estimate of a planted concentrated bubble") {
  const double alpha = 0.3, mu = 60.0;
  const std::vector<double> P{0.8, -0.3};
  GridConfig cfg;
  const QuadratureGrid g = build_grid(2, {P}, cfg);
  // density of a width-1/mu bubble carrying mass 4 pi (1 - alpha)
  std::vector<double> dens(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double dx = g.coords[0][i] - P[0], dy = g.coords[1][i] - P[1];
    const double q = 1.0 + mu * mu * (dx * dx + dy * dy);
    dens[i] = (1.0 - alpha) * 4.0 * mu * mu / (q * q);
  }
  const SigmaTable tab = sigma_estimate(g, g.w, dens, P, {0.1, 0.2, 0.4});
  CHECK(tab.value == doctest::Approx(2.0 * (1.0 - alpha)).epsilon(0.02));
  CHECK(tab.settled);
  // local masses grow with the radius
  CHECK(tab.local_mass[0] <= tab.local_mass[1]);
  CHECK(tab.local_mass[1] <= tab.local_mass[2]);
}

TEST_CASE("sigma of a smooth density vanishes with the radius") {
  const QuadratureGrid g = build_grid(2, {}, GridConfig{});
  std::vector<double> dens(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) dens[i] = std::exp(-g.r2[i]);
  const SigmaTable tab = sigma_estimate(g, g.w, dens, {0.3, 0.1}, {0.05, 0.2, 0.8});
  CHECK(tab.local_mass[0] <= 0.01);
  CHECK_FALSE(tab.settled);
}

TEST_CASE("sigma rejects radii below the patch core resolution") {
  const std::vector<double> P{0.8, -0.3};
  const QuadratureGrid g = build_grid(2, {P}, GridConfig{});
  std::vector<double> dens(g.size(), 1.0);
  CHECK_THROWS(sigma_estimate(g, g.w, dens, P, {1e-9}));
}
