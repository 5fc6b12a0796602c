#include <doctest.h>

#include <cmath>
#include <random>

#include "stoda/constants.hpp"
#include "stoda/errors.hpp"
#include "stoda/problem.hpp"

using namespace stoda;

namespace {

SourceSet toda_equal_weights(int m, double b) {
  SourceSet s;
  s.dimension = 2;
  for (int l = 0; l < m; ++l) {
    const double a = 2.0 * kPi * l / m;
    s.points.push_back({2.0 * std::cos(a), 2.0 * std::sin(a)});
  }
  s.weights.assign(2, std::vector<double>(m, b));
  return s;
}

double u01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

TEST_CASE("derived exponents, Toda symmetric m=3 b=0.6") {
  const auto d = derived_exponents(toda_equal_weights(3, 0.6));
  CHECK(d.beta[0] == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(d.beta[1] == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(d.beta_bar[0] == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(d.target_mass[0] == doctest::Approx(0.4 * kPi).epsilon(1e-14));
  CHECK(d.target_mass[1] == doctest::Approx(0.4 * kPi).epsilon(1e-14));
}

TEST_CASE("symmetric weights give beta_bar = beta") {
  std::mt19937_64 rng(42);
  for (int k = 0; k < 100; ++k) {
    SourceSet s = toda_equal_weights(4, 0.0);
    for (int l = 0; l < 4; ++l) s.weights[0][l] = s.weights[1][l] = 0.9 * u01(rng);
    const auto d = derived_exponents(s);
    CHECK(d.beta_bar[0] == doctest::Approx(d.beta[0]).epsilon(1e-14));
    CHECK(d.beta_bar[1] == doctest::Approx(d.beta[1]).epsilon(1e-14));
  }
}

TEST_CASE("derived exponents, scalar n=2 b=0.5") {
  SourceSet s;
  s.dimension = 2;
  s.points = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  s.weights = {{0.5, 0.5, 0.5}};
  const auto d = derived_exponents(s);
  CHECK(d.beta[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(d.target_mass[0] == doctest::Approx(0.5 * 2.0 * kPi).epsilon(1e-14));
}

TEST_CASE("Cartan round-trip to 1e-14") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 1000; ++k) {
    const double bb1 = u01(rng), bb2 = u01(rng);
    const double b1 = 2.0 * bb1 - bb2, b2 = 2.0 * bb2 - bb1;  // beta = A bar-beta
    CHECK(std::abs((2.0 * b1 + b2) / 3.0 - bb1) <= 1e-14);
    CHECK(std::abs((2.0 * b2 + b1) / 3.0 - bb2) <= 1e-14);
  }
}

TEST_CASE("(cond-beta-toda) window for equal weights m=3 is (1/2, 2/3)") {
  for (double b : {0.55, 0.6, 0.65}) CHECK(check_conditions(toda_equal_weights(3, b)).toda_existence.holds);
  for (double b : {0.3, 0.4, 0.45, 0.7, 0.8}) CHECK_FALSE(check_conditions(toda_equal_weights(3, b)).toda_existence.holds);
  // margin hits the boundary exactly at b = 0.5
  const auto rep = check_conditions(toda_equal_weights(3, 0.5));
  CHECK_FALSE(rep.toda_existence.holds);
  CHECK(rep.toda_existence.indeterminate);
}

TEST_CASE("Luo-Tian condition for (0.5, 0.5, 0.5)") {
  SourceSet s;
  s.dimension = 2;
  s.points = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  s.weights = {{0.5, 0.5, 0.5}};
  const auto rep = check_conditions(s);
  REQUIRE(rep.luo_tian.applicable);
  CHECK(rep.luo_tian.holds);
  CHECK(rep.luo_tian.margins[0] == doctest::Approx(0.5).epsilon(1e-14));
  for (int j = 1; j <= 3; ++j) CHECK(rep.luo_tian.margins[j] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("epsilon family: A1-A6 and (cond-beta-like) hold, (cond-beta-toda) fails") {
  for (double eps : {0.05, 0.1, 0.15, 0.2}) {
    const auto fam = build_counterexample_family(eps);
    SourceSet s;
    s.dimension = 2;
    for (int l = 0; l < 7; ++l) s.points.push_back({static_cast<double>(l), 0.25 * l});
    s.weights = fam.weights;
    const auto rep = check_conditions(s);
    CHECK(rep.assumptions.all());
    CHECK(rep.beta_like.holds);
    CHECK_FALSE(rep.toda_existence.holds);
    // sum_l beta_{1,l} = (1 + beta_{1,1}) - eps/2
    double sum1 = 0.0;
    for (double b : fam.weights[0]) sum1 += b;
    CHECK(std::abs(sum1 - ((1.0 + fam.weights[0][0]) - 0.5 * eps)) <= 1e-12);
    // A1/A4 are exact balances
    CHECK(std::abs(rep.assumptions.margins[0]) <= 1e-12);
    CHECK(std::abs(rep.assumptions.margins[3]) <= 1e-12);
  }
}

TEST_CASE("epsilon family domain is the open interval (0, 2/9)") {
  CHECK_THROWS_AS(build_counterexample_family(0.0), ConfigError);
  CHECK_THROWS_AS(build_counterexample_family(2.0 / 9.0), ConfigError);
  CHECK_THROWS_AS(build_counterexample_family(-0.1), ConfigError);
  CHECK_NOTHROW(build_counterexample_family(0.21));
}

TEST_CASE("A1 and A2 imply A6 across the epsilon family") {
  for (double eps = 0.01; eps < 2.0 / 9.0; eps += 0.01) {
    const auto a = assumptions_A(build_counterexample_family(eps).beta7);
    REQUIRE(a.applicable);
    CHECK(a.holds[0]);  // A1
    CHECK(a.holds[1]);  // A2
    CHECK(a.holds[5]);  // A6 follows
  }
}

TEST_CASE("equivalence of (cond-beta-toda) and (barbeta) on random matrices") {
  std::mt19937_64 rng(2024);
  int disagreements = 0;
  for (int k = 0; k < 2000; ++k) {
    const int m = 1 + static_cast<int>(rng() % 8);
    SourceSet s = toda_equal_weights(m, 0.0);
    for (auto& row : s.weights)
      for (double& b : row) b = u01(rng);
    const auto rep = check_conditions(s);
    if (rep.toda_existence.holds != rep.barbeta_form.holds) ++disagreements;
  }
  CHECK(disagreements == 0);
}

TEST_CASE("raising one weight lowers exactly that clause margin") {
  std::mt19937_64 rng(5);
  SourceSet s = toda_equal_weights(4, 0.0);
  for (auto& row : s.weights)
    for (double& b : row) b = 0.8 * u01(rng);
  const auto rep0 = check_conditions(s);
  const double delta = 0.01;
  SourceSet s2 = s;
  s2.weights[0][2] += delta;
  const auto rep1 = check_conditions(s2);
  // margins of clause 1 are laid out (i=1: j=1..m), (i=2: j=1..m)
  CHECK(rep1.toda_existence.margins[2] ==
        doctest::Approx(rep0.toda_existence.margins[2] - delta).epsilon(1e-12));
  CHECK(rep1.toda_existence.margins[3] ==
        doctest::Approx(rep0.toda_existence.margins[3] + 2.0 * delta).epsilon(1e-12));
}

TEST_CASE("source set invariants") {
  SourceSet dup;
  dup.dimension = 2;
  dup.points = {{0.0, 0.0}, {0.0, 0.0}};
  dup.weights = {{0.1, 0.1}};
  CHECK_THROWS_AS(dup.validate(), ConfigError);

  SourceSet big;
  big.dimension = 2;
  big.points = {{0.0, 0.0}};
  big.weights = {{1.0}};
  CHECK_THROWS_AS(big.validate(), ConfigError);

  SourceSet toda3d;
  toda3d.dimension = 3;
  toda3d.points = {{0.0, 0.0, 0.0}};
  toda3d.weights = {{0.1}, {0.1}};
  CHECK_THROWS_AS(toda3d.validate(), ConfigError);
}

TEST_CASE("problem spec: overrides are scalar-only and alpha > -1") {
  ProblemSpec p;
  p.sources.dimension = 2;
  p.sources.weights = {{}};
  p.origin_alpha = 0.5;
  p.farfield_exponent = 3.0;
  CHECK_NOTHROW(p.validate());
  CHECK(p.farfield()[0] == doctest::Approx(3.0));
  CHECK(p.target_masses()[0] == doctest::Approx(3.0 * gamma_n(2)).epsilon(1e-14));

  p.farfield_exponent.reset();
  CHECK(p.farfield()[0] == doctest::Approx(2.5).epsilon(1e-14));  // 2 + alpha

  ProblemSpec bad = p;
  bad.origin_alpha = -1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  ProblemSpec toda;
  toda.sources = toda_equal_weights(3, 0.6);
  toda.origin_alpha = 0.5;
  CHECK_THROWS_AS(toda.validate(), ConfigError);
}
