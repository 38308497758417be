#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "calx/energy.hpp"
#include "calx/fields.hpp"
#include "calx/oracle.hpp"
#include "calx/potentials.hpp"
#include "calx/verifier.hpp"

using namespace calx;

TEST_CASE("one-dimensional search examples") {
  const auto jump = oracle_1d_best(0.0, 1.0, 1.0);
  CHECK(jump.jumps == 1);
  CHECK(jump.energy.total == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(jump.affine_energy == doctest::Approx(1.0));
  REQUIRE(jump.best.jumps().size() == 1);
  CHECK(jump.best.jumps()[0].x == 0.0);
  CHECK(jump.best.jumps()[0].plus == doctest::Approx(0.5));
  CHECK(jump.resolution == 1000);

  const auto flat = oracle_1d_best(0.3, 0.3, 1.0);
  CHECK(flat.jumps == 0);
  CHECK(flat.energy.total == 0.0);

  const auto affine = oracle_1d_best(0.8, 1.0, 3.0);
  CHECK(affine.jumps == 0);
  CHECK(affine.energy.total == doctest::Approx(0.04));

  CHECK_THROWS_AS(oracle_1d_best(0.9, 0.1, 1.0), DomainError);
}

TEST_CASE("one jump is enough and never at the right end") {
  std::mt19937_64 rng(314);
  std::uniform_real_distribution<double> unit(0.0, 1.0), beta_dist(0.2, 4.0);
  JumpSearchSpace space;
  space.resolution = 200;
  for (int trial = 0; trial < 50; ++trial) {
    double m = std::round(unit(rng) * 200) / 200, M = std::round(unit(rng) * 200) / 200;
    if (m > M) std::swap(m, M);
    if (m == M) M = std::min(1.0, m + 0.1);
    const auto r = oracle_1d_best(m, M, beta_dist(rng), space);
    CHECK(r.best_two_jump >= std::min(r.best_one_jump, r.affine_energy) - 1e-9);
    CHECK(r.jumps <= 1);
    for (const auto& j : r.best.jumps()) CHECK(j.x < 1.0);
  }
}

TEST_CASE("certificate and search agree") {
  // Feasible criterion: nothing beats the calibrated affine function.
  for (double beta : {1.0, 3.0, 6.0}) {
    const double m = 0.8, M = 1.0;
    const auto choice = choose_lambda(m, M, beta);
    REQUIRE(choice.feasible);
    const auto field = build_field_1d(CalibParams1D::make(m, M, beta));
    REQUIRE(verify_all(field, {}).passed());
    const auto r = oracle_1d_best(m, M, beta);
    CHECK(r.energy.total >= r.affine_energy - 1e-6);
  }
  // Strictly infeasible criterion: the search finds a better jump.
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> unit(0.0, 0.3), beta_dist(0.2, 1.5);
  int infeasible = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const double m = unit(rng), beta = beta_dist(rng);
    const auto choice = choose_lambda(m, 1.0, beta);
    if (choice.feasible) continue;
    ++infeasible;
    const auto r = oracle_1d_best(m, 1.0, beta);
    CHECK(r.energy.total < r.affine_energy);
    CHECK(r.jumps >= 1);
  }
  CHECK(infeasible > 10);
}

TEST_CASE("Robin shooting") {
  CHECK(oracle_robin_shooting(2, 3.0, 2.0) == doctest::Approx(0.19384040766994080).epsilon(1e-8));
  CHECK(std::abs(oracle_robin_shooting(1, 2.0, 2.5) - 0.25) < 1e-9);
  CHECK(oracle_robin_shooting(2, 3.0, 1.0) == 1.0);
  CHECK(std::abs(oracle_robin_shooting(3, 1.0, 1.0 + 1e-6) - 1.0) < 1e-5);
  CHECK_THROWS_AS(oracle_robin_shooting(2, 3.0, 0.5), DomainError);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> beta_dist(0.5, 5.0), R_dist(1.0, 5.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 3;
    const double beta = beta_dist(rng), R = R_dist(rng);
    CHECK(std::abs(oracle_robin_shooting(n, beta, R) - delta_robin(Dimension{n}, beta, R)) < 1e-6);
  }
}

TEST_CASE("radial sweep") {
  const auto R_grid = linspace(1.0, 4.0, 121);
  const auto d_grid = linspace(0.005, 1.0, 200);

  const auto ind = oracle_radial_sweep(2, 1.0, 0.5, R_grid, d_grid);
  CHECK(ind.indicator_wins());
  CHECK(ind.rows.front().R == 1.0);
  // R = 1 is represented by the indicator row alone.
  CHECK(ind.rows.size() == 1 + (R_grid.size() - 1) * d_grid.size());

  const double g = std::sqrt(0.210786275660651993131);
  const auto harm = oracle_radial_sweep(2, 2.0, g, R_grid, d_grid);
  CHECK_FALSE(harm.indicator_wins());
  CHECK(std::abs(harm.best.R - 2.0) <= 0.05);
  CHECK(std::abs(harm.best.delta - 0.265069975453433800838) <= 0.01);
  CHECK(harm.best.energy.total >= energy_radial_optimal(Dimension{2}, 2.0, g, 2.0) - 1e-12);

  CHECK(oracle_radial_sweep(3, 2.0, 5.0, R_grid, d_grid).indicator_wins());

  std::ostringstream a, b;
  write_sweep_csv(a, ind);
  write_sweep_csv(b, oracle_radial_sweep(2, 1.0, 0.5, R_grid, d_grid));
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("R,delta,dirichlet,jump,volume,total\n", 0) == 0);

  CHECK(linspace(0.0, 1.0, 5) == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
}
