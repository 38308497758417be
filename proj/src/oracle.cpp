#include "calx/oracle.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

namespace calx {

namespace {

struct SideBest {
  std::vector<double> cost;
  std::vector<double> trace;
};

// Best (affine piece + own trace) cost on the side of a jump at x_i = i / N,
// minimized over the value grid. Ties keep the smaller value.
SideBest left_side(double m, double beta, std::size_t N) {
  SideBest s{std::vector<double>(N + 1), std::vector<double>(N + 1)};
  s.cost[0] = beta * m * m;
  s.trace[0] = m;
  for (std::size_t i = 1; i <= N; ++i) {
    const double x = static_cast<double>(i) / N;
    double best = std::numeric_limits<double>::infinity(), arg = 0.0;
    for (std::size_t k = 0; k <= N; ++k) {
      const double a = static_cast<double>(k) / N;
      const double c = (a - m) * (a - m) / x + beta * a * a;
      if (c < best) {
        best = c;
        arg = a;
      }
    }
    s.cost[i] = best;
    s.trace[i] = arg;
  }
  return s;
}

SideBest right_side(double M, double beta, std::size_t N) {
  SideBest s{std::vector<double>(N + 1), std::vector<double>(N + 1)};
  s.cost[N] = beta * M * M;
  s.trace[N] = M;
  for (std::size_t i = 0; i < N; ++i) {
    const double len = 1.0 - static_cast<double>(i) / N;
    double best = std::numeric_limits<double>::infinity(), arg = 0.0;
    for (std::size_t k = 0; k <= N; ++k) {
      const double b = static_cast<double>(k) / N;
      const double c = (M - b) * (M - b) / len + beta * b * b;
      if (c < best) {
        best = c;
        arg = b;
      }
    }
    s.cost[i] = best;
    s.trace[i] = arg;
  }
  return s;
}

struct Knot {
  double x;
  double left;   // trace from the left
  double right;  // trace from the right
};

// Affine between knots, matching the data at 0 and 1 unless a knot sits there.
Competitor1D assemble(double m, double M, const std::vector<Knot>& knots) {
  std::vector<AffinePiece> pieces;
  double x0 = 0.0, v0 = m;
  for (const auto& k : knots) {
    if (k.x > x0) pieces.push_back(AffinePiece::through(x0, v0, k.x, k.left));
    x0 = k.x;
    v0 = k.right;
  }
  // A knot at x = 1 leaves the jump onto the data to Competitor1D.
  if (x0 < 1.0) pieces.push_back(AffinePiece::through(x0, v0, 1.0, M));
  return Competitor1D(0.0, 1.0, m, M, std::move(pieces));
}

}  // namespace

OracleResult1D oracle_1d_best(double m, double M, double beta, const JumpSearchSpace& space) {
  if (!(m >= 0.0 && m <= M && M <= 1.0)) throw DomainError("oracle_1d_best: requires 0 <= m <= M <= 1");
  if (!(beta > 0.0)) throw DomainError("oracle_1d_best: beta must be positive");
  if (space.resolution < 1) throw DomainError("oracle_1d_best: resolution must be >= 1");
  if (space.max_jumps < 0) throw DomainError("oracle_1d_best: max_jumps must be >= 0");
  const std::size_t N = space.resolution;

  const double affine = (M - m) * (M - m);
  const auto L = left_side(m, beta, N);
  const auto R = right_side(M, beta, N);
  const auto close = [](double a, double b) {
    return std::isfinite(b) && std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b));
  };

  double one = std::numeric_limits<double>::infinity();
  std::size_t one_at = 0;
  if (space.max_jumps >= 1) {
    for (std::size_t i = 0; i <= N; ++i) {
      const double c = L.cost[i] + R.cost[i];
      if (c < one && !close(c, one)) {
        one = c;
        one_at = i;
      }
    }
  }

  // Two jumps at x1 < x2: the middle piece is optimally 0, so the cost is
  // L[x1] + R[x2]. Keep the running prefix minimum of L.
  double two = std::numeric_limits<double>::infinity();
  std::size_t two_i = 0, two_j = 0;
  if (space.max_jumps >= 2) {
    double prefix = L.cost[0];
    std::size_t prefix_at = 0;
    for (std::size_t j = 1; j <= N; ++j) {
      const double c = prefix + R.cost[j];
      if ((c < two && !close(c, two)) || (close(c, two) && prefix_at < two_i)) {
        two = c;
        two_i = prefix_at;
        two_j = j;
      }
      if (L.cost[j] < prefix && !close(L.cost[j], prefix)) {
        prefix = L.cost[j];
        prefix_at = j;
      }
    }
  }

  int jumps = 0;
  double best = affine;
  if (one < best && !close(one, best)) {
    jumps = 1;
    best = one;
  }
  if (two < best && !close(two, best)) jumps = 2;

  const auto xs = [N](std::size_t i) { return static_cast<double>(i) / N; };
  Competitor1D c = Competitor1D::affine(0.0, 1.0, m, M);
  if (jumps == 1) {
    c = assemble(m, M, {{xs(one_at), L.trace[one_at], R.trace[one_at]}});
  } else if (jumps == 2) {
    c = assemble(m, M, {{xs(two_i), L.trace[two_i], 0.0}, {xs(two_j), 0.0, R.trace[two_j]}});
  }
  const EnergyBreakdown e = energy_1d(c, beta);
  return {c, e, jumps, affine, one, two, N};
}

double oracle_robin_shooting(int n, double beta, double R, double step) {
  const Dimension dim{n};
  if (!(beta > 0.0)) throw DomainError("oracle_robin_shooting: beta must be positive");
  if (!(R >= 1.0)) throw DomainError("oracle_robin_shooting: requires R >= 1");
  if (!(step > 0.0)) throw DomainError("oracle_robin_shooting: step must be positive");
  if (R == 1.0) return 1.0;

  const double nm1 = dim.value() - 1.0;
  const auto steps = static_cast<std::size_t>(std::ceil((R - 1.0) / step));
  const double hh = (R - 1.0) / static_cast<double>(steps);

  struct State {
    double u, v;
  };
  // u' = v, v' = -(n-1) v / r from r = 1 with u = 1, u' = -slope.
  const auto shoot = [&](double slope) {
    State y{1.0, -slope};
    double r = 1.0;
    const auto f = [nm1](double rr, State s) { return State{s.v, -nm1 * s.v / rr}; };
    for (std::size_t i = 0; i < steps; ++i) {
      const State k1 = f(r, y);
      const State k2 = f(r + 0.5 * hh, {y.u + 0.5 * hh * k1.u, y.v + 0.5 * hh * k1.v});
      const State k3 = f(r + 0.5 * hh, {y.u + 0.5 * hh * k2.u, y.v + 0.5 * hh * k2.v});
      const State k4 = f(r + hh, {y.u + hh * k3.u, y.v + hh * k3.v});
      y.u += hh / 6.0 * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u);
      y.v += hh / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
      r = 1.0 + hh * static_cast<double>(i + 1);
    }
    return y;
  };
  const auto robin = [&](double slope) {
    const State y = shoot(slope);
    return y.v + beta * y.u;
  };

  double lo = 0.0, hi = 1.0;
  int doublings = 0;
  while (robin(hi) > 0.0) {
    if (++doublings > 60) {
      throw NumericError("oracle_robin_shooting: no sign change of u'(R) + beta u(R) up to u'(1) = -" +
                         std::to_string(hi));
    }
    lo = hi;
    hi *= 2.0;
  }
  int iterations = 0;
  while (hi - lo > 1e-11 * std::max(1.0, hi)) {
    if (++iterations > 200) {
      throw NumericError("oracle_robin_shooting: bisection stalled at [" + std::to_string(lo) + ", " +
                         std::to_string(hi) + "]");
    }
    const double mid = 0.5 * (lo + hi);
    (robin(mid) > 0.0 ? lo : hi) = mid;
  }
  return shoot(0.5 * (lo + hi)).u;
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  if (count == 0) return {};
  if (count == 1) return {lo};
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = (i + 1 == count) ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return out;
}

RadialSweep oracle_radial_sweep(int n, double beta, double gamma, const std::vector<double>& R_grid,
                                const std::vector<double>& delta_grid) {
  RadialSweep sweep;
  const SweepRow indicator{1.0, 1.0, energy_radial_general({n, beta, gamma, 1.0, 1.0})};
  sweep.rows.push_back(indicator);
  sweep.best = indicator;
  for (double R : R_grid) {
    if (!(R > 1.0)) continue;
    for (double d : delta_grid) {
      if (!(d > 0.0 && d <= 1.0)) continue;
      SweepRow row{R, d, energy_radial_general({n, beta, gamma, R, d})};
      if (row.energy.total < sweep.best.energy.total) sweep.best = row;
      sweep.rows.push_back(row);
    }
  }
  return sweep;
}

void write_sweep_csv(std::ostream& os, const RadialSweep& sweep) {
  os << "R,delta,dirichlet,jump,volume,total\n";
  char line[256];
  for (const auto& r : sweep.rows) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.R, r.delta,
                  r.energy.dirichlet, r.energy.jump, r.energy.volume, r.energy.total);
    os << line;
  }
}

}  // namespace calx
