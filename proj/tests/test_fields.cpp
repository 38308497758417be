#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "calx/energy.hpp"
#include "calx/fields.hpp"
#include "calx/verifier.hpp"

using namespace calx;

namespace {

constexpr double kRho_2_2_2_at_1 = 0.569261289888170073637;
constexpr double kDelta_2_2_2 = 0.265069975453433800838;

// Psi(., 0) = 0, Psi is continuous across every t-break, and Psi agrees with
// adaptive quadrature of phi^x.
void check_antiderivative(const PiecewiseField& f, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(f.pos_min(), f.pos_max()), t(0.0, f.t_max());
  for (int i = 0; i < 40; ++i) {
    const double p = pos(rng);
    CHECK(f.antiderivative(p, 0.0) == 0.0);
    for (double b : f.t_breaks(p)) {
      if (b <= 0.0 || b >= f.t_max()) continue;
      const double eps = 1e-11;
      CHECK(std::abs(f.antiderivative(p, b + eps) - f.antiderivative(p, b - eps)) < 1e-10);
    }
    const double r = t(rng), s = t(rng);
    const double closed = f.antiderivative(p, s) - f.antiderivative(p, r);
    CHECK(std::abs(closed - quadrature_integral(f, p, r, s)) < 1e-9);
  }
}

}  // namespace

TEST_CASE("choose_lambda examples") {
  const auto equal = choose_lambda(0.4, 0.4, 2.0);
  CHECK(equal.feasible);
  CHECK(equal.lambda == 0.0);

  const auto bad = choose_lambda(0.0, 1.0, 1.0);
  CHECK_FALSE(bad.feasible);
  CHECK(bad.integral == doctest::Approx(0.75));
  CHECK(bad.bound == doctest::Approx(0.25));
  CHECK(bad.reason == "criterion violated: 0.75 > 0.25");

  const auto trivial = choose_lambda(0.8, 1.0, 3.0);
  CHECK(trivial.feasible);
  CHECK(trivial.lambda == 0.0);
  CHECK(trivial.delta == doctest::Approx(0.25));

  const auto limit = choose_lambda(0.25, 1.0, 1.0);
  CHECK(limit.feasible);
  CHECK(limit.lambda == doctest::Approx(1.0));

  CHECK_THROWS_AS(choose_lambda(0.5, 0.4, 1.0), DomainError);
}

TEST_CASE("choose_lambda returns the smallest admissible lambda") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0), beta_dist(0.05, 5.0);
  int feasible = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const double M = 0.1 + unit(rng), m = M * unit(rng), beta0 = beta_dist(rng);
    const auto c = choose_lambda(m, M, beta0);
    if (!c.feasible) {
      CHECK(c.integral > c.bound);
      continue;
    }
    ++feasible;
    CHECK(c.lambda >= 0.0);
    CHECK(c.lambda <= beta0);
    CHECK(c.lambda * m <= (M - m) + 1e-12);
    CHECK(c.lambda * m <= beta0 * M / (1 + beta0) + 1e-12);
    if (m < c.delta) {
      CHECK(c.integral <= c.lambda * m * m + beta0 * c.delta * c.delta + 1e-12);
      if (c.lambda > 1e-9) CHECK(c.integral > (c.lambda - 1e-6) * m * m + beta0 * c.delta * c.delta);
    }
    const auto p = CalibParams1D::make(m, M, beta0);
    CHECK(p.sigma >= -1e-12);
    CHECK(p.sigma <= p.tau + 1e-12);
  }
  CHECK(feasible > 100);
}

TEST_CASE("one-dimensional field") {
  CHECK_THROWS_AS(CalibParams1D::make(0.0, 1.0, 1.0), HypothesisViolation);

  const auto f = build_field_1d(CalibParams1D::make(0.8, 1.0, 3.0));
  const auto v = f.eval(0.5, 0.4);
  CHECK(v.x == 0.0);
  CHECK(v.t == 0.0);
  // On the graph: phi = (2 (M - m), (M - m)^2). At x = 0 the graph touches t = m.
  for (int k = 1; k <= 8; ++k) {
    const double x = k / 8.0;
    const auto g = f.eval(x, 0.8 + 0.2 * x);
    CHECK(g.x == doctest::Approx(0.4));
    CHECK(g.t == doctest::Approx(0.04));
  }
  check_antiderivative(f, 1);
  CHECK(f.graph_interfaces().size() == 3);
  CHECK(f.region_names().size() == 4);
}

TEST_CASE("limit case calibrates both minimizers") {
  // beta = 1, M = 1, m = 1/4: delta = 1/2 and the criterion holds with equality.
  const auto p = CalibParams1D::make(0.25, 1.0, 1.0);
  CHECK(p.lambda == doctest::Approx(1.0));
  const auto f = build_field_1d(p);
  for (int k = 0; k < 10; ++k) {
    const double x = k / 10.0;
    const auto v = f.eval(x, 0.5 + 0.5 * x);
    CHECK(v.x == doctest::Approx(1.0));
    CHECK(v.t == doctest::Approx(0.25));
  }
  const auto affine = energy_1d(Competitor1D::affine(0, 1, 0.25, 1.0), 1.0);
  const Competitor1D jump(0, 1, 0.25, 1.0, {AffinePiece::through(0, 0.5, 1, 1.0)});
  CHECK(affine.total == doctest::Approx(0.5625));
  CHECK(energy_1d(jump, 1.0).total == doctest::Approx(0.5625));

  VerifyConfig cfg;
  const auto graphs = std::vector<CalibratedGraph>{f.jump_minimizer_graph()};
  CHECK(check_graph_conditions(f, graphs, cfg).status == Status::pass);
  CHECK(check_jump_conditions(f, graphs, cfg).status == Status::pass);
  check_antiderivative(f, 2);
}

TEST_CASE("harmonic field") {
  SUBCASE("affine profile reproduces the one-dimensional field") {
    const double m = 0.3, M = 0.9, beta = 2.0;
    const auto h = build_field_harmonic(HarmonicProfile::affine(0, 1, m, M), m, M, beta);
    const auto f = build_field_1d(CalibParams1D::make(m, M, beta));
    CHECK(h.lambda() == doctest::Approx(f.params().lambda));
    for (double x = 0.0; x <= 1.0; x += 0.05) {
      for (double t = 0.0; t <= M; t += 0.03) {
        const auto a = h.eval(x, t), b = f.eval(x, t);
        CHECK(a.x == doctest::Approx(b.x).epsilon(1e-12));
        CHECK(a.t == doctest::Approx(b.t).epsilon(1e-12));
        CHECK(h.antiderivative(x, t) == doctest::Approx(f.antiderivative(x, t)).epsilon(1e-12));
      }
    }
  }
  SUBCASE("radial profile on the annulus") {
    const int n = 2;
    const double beta = 3.0, R = 2.0;
    const double d = delta_robin(Dimension{n}, beta, R);
    const auto u = HarmonicProfile::euler_lagrange(n, beta, R);
    const auto h = build_field_harmonic(u, d, 1.0, beta);
    CHECK(h.beta0() == doctest::Approx(beta * radial_potential(Dimension{n}, R)));
    // r = R is excluded: there u = m and the point belongs to the region below.
    for (int i = 0; i < 1000; ++i) {
      const double r = 1.0 + (R - 1.0) * i / 1000.0;
      const auto v = h.eval(r, u.value(r));
      CHECK(std::abs(v.x - 2.0 * u.slope(r)) < 1e-10);
      CHECK(std::abs(v.t - u.slope(r) * u.slope(r)) < 1e-10);
    }
    check_antiderivative(h, 3);
  }
  SUBCASE("constant profile gives the zero field") {
    const auto h = build_field_harmonic(HarmonicProfile::affine(0, 1, 0.4, 0.4), 0.4, 0.4, 1.0);
    for (double t = 0.0; t <= 0.4; t += 0.1) {
      CHECK(h.eval(0.5, t).x == 0.0);
      CHECK(h.eval(0.5, t).t == 0.0);
    }
  }
  SUBCASE("infeasible hypothesis") {
    CHECK_THROWS_AS(build_field_harmonic(HarmonicProfile::affine(0, 1, 0, 1), 0, 1, 1), HypothesisViolation);
    CHECK_THROWS_AS(build_field_harmonic(HarmonicProfile::affine(0, 1, 0, 1), 0.2, 1, 5), DomainError);
  }
}

TEST_CASE("indicator field with the x/|x|^n extension") {
  const auto f = build_field_indicator_const(2, 0.3, 0.4);
  CHECK(std::abs(f.eval(2.0, 1.0).x) == doctest::Approx(0.3));
  CHECK(f.eval(2.0, 1.0).t == 0.0);
  CHECK(f.eval(1.4, 0.0).x == 0.0);
  const auto f3 = build_field_indicator_const(3, 0.3, 0.4);
  CHECK(std::abs(field_divergence(f3, 0, 1.7, 0.6, 1e-3)) <= 1e-6);
  CHECK_THROWS_AS(build_field_indicator_const(2, 0.5, 0.4), HypothesisViolation);
  check_antiderivative(f, 4);
}

TEST_CASE("two-piece indicator field") {
  const auto f = build_field_indicator_two_piece(2, 1.0, 0.4);
  for (double r = 1.0; r <= 4.0; r += 0.25) {
    const double d = delta_robin(Dimension{2}, 1.0, r);
    const auto lo = f.eval_region(0, r, d), hi = f.eval_region(1, r, d);
    CHECK(lo.x == doctest::Approx(hi.x).epsilon(1e-13));
    CHECK(lo.t == doctest::Approx(hi.t).epsilon(1e-13));
  }
  check_antiderivative(f, 5);

  try {
    build_field_indicator_two_piece(2, 1.0, 0.34);
    FAIL("expected a hypothesis violation");
  } catch (const HypothesisViolation& e) {
    REQUIRE(e.location().has_value());
    CHECK(*e.location() > 1.3);
    CHECK(*e.location() < 1.6);
  }

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> beta_dist(0.1, 3.0), bump(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const double beta = beta_dist(rng);
    CHECK_NOTHROW(build_field_indicator_two_piece(1 + trial % 3, beta, beta + bump(rng), 4.0, {20.0, 2000}));
  }
}

TEST_CASE("ball field, n = 1") {
  const auto f = build_field_ball_harmonic(1, 2.0, 0.5, 2.5);
  const auto& ball = dynamic_cast<const BallHarmonicField&>(*f);
  for (double r = 1.0; r < 2.5; r += 0.1) CHECK(ball.rho_at(r) == doctest::Approx(0.25));
  for (double r = 1.0; r <= f->pos_max(); r += 0.05) {
    for (double t = 0.0; t <= 1.0; t += 0.02) CHECK(std::abs(f->eval(r, t).x) <= 2.0 * 2.0 * t + 1e-12);
  }
  check_antiderivative(*f, 6);
}

TEST_CASE("ball field, n = 2") {
  const double gamma = *euler_lagrange_gamma(2, 2.0, 2.0);
  CHECK(gamma * gamma == doctest::Approx(0.210786275660651993131));
  const auto f = build_field_ball_harmonic(2, 2.0, gamma, 2.0);
  const auto& ball = dynamic_cast<const BallHarmonicField&>(*f);
  CHECK(ball.rho_at(1.0) == doctest::Approx(kRho_2_2_2_at_1).epsilon(1e-12));
  CHECK(ball.delta_R() == doctest::Approx(kDelta_2_2_2).epsilon(1e-13));
  // phi^x is continuous through r = R.
  for (double t = 0.0; t <= 1.0; t += 0.01) {
    CHECK(f->eval(2.0 - 1e-10, t).x == doctest::Approx(f->eval(2.0 + 1e-10, t).x).epsilon(1e-8));
  }
  // Jump condition at R: int_0^delta(R) phi^x = -beta delta(R)^2.
  CHECK(f->antiderivative(2.0, ball.delta_R()) == doctest::Approx(-2.0 * kDelta_2_2_2 * kDelta_2_2_2));
  check_antiderivative(*f, 7);

  const auto d = f->describe();
  CHECK(d["kind"] == "ball-harmonic");
  CHECK(d["regions"].size() == 6);
  CHECK(d["interfaces"].size() == 5);
}

TEST_CASE("ball field hypotheses") {
  const double g = *euler_lagrange_gamma(2, 1.3, 1.1);
  CHECK_THROWS_AS(build_field_ball_harmonic(2, 1.3, g, 1.1), HypothesisViolation);
  BallHarmonicOptions relaxed;
  relaxed.require_beta_bound = false;
  CHECK_NOTHROW(build_field_ball_harmonic(2, 1.3, g, 1.1, relaxed));
  CHECK_THROWS_AS(build_field_ball_harmonic(2, 2.0, 0.5, 2.0), HypothesisViolation);

  // R = 1 routes to the two-piece field.
  const auto f = build_field_ball_harmonic(1, 2.0, 2.0, 1.0);
  CHECK(f->kind() == "indicator-two-piece");
}
