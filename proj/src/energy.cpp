#include "calx/energy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace calx {

namespace {

bool in_unit_range(double v) { return v >= -1e-12 && v <= 1.0 + 1e-12; }

bool traces_differ(double lhs, double rhs) {
  return std::abs(lhs - rhs) > 1e-12 * std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

}  // namespace

double unit_ball_volume(Dimension n) {
  if (n.value() > 10) throw DomainError("unit_ball_volume: n <= 10 supported");
  const double half = 0.5 * n.value();
  return std::pow(std::numbers::pi, half) / std::tgamma(half + 1.0);
}

AffinePiece AffinePiece::through(double x0, double v0, double x1, double v1) {
  if (!(x1 > x0)) throw ValidationError("AffinePiece::through: empty interval");
  const double slope = (v1 - v0) / (x1 - x0);
  return {x0, x1, slope, v0 - slope * x0};
}

Competitor1D::Competitor1D(double a, double b, double left_data, double right_data,
                           std::vector<AffinePiece> pieces)
    : a_(a), b_(b), left_data_(left_data), right_data_(right_data), pieces_(std::move(pieces)) {
  if (!(b_ > a_)) throw ValidationError("Competitor1D: requires a < b");
  if (pieces_.empty()) throw ValidationError("Competitor1D: no pieces");
  if (!in_unit_range(left_data_) || !in_unit_range(right_data_)) {
    throw ValidationError("Competitor1D: boundary data outside [0, 1]");
  }
  if (pieces_.front().x_begin != a_ || pieces_.back().x_end != b_) {
    throw ValidationError("Competitor1D: pieces do not cover [a, b]");
  }
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const auto& p = pieces_[i];
    if (!(p.x_end > p.x_begin)) throw ValidationError("Competitor1D: unsorted breakpoints");
    if (i + 1 < pieces_.size() && pieces_[i + 1].x_begin != p.x_end) {
      throw ValidationError("Competitor1D: pieces are not contiguous");
    }
    if (!in_unit_range(p.at(p.x_begin)) || !in_unit_range(p.at(p.x_end))) {
      throw ValidationError("Competitor1D: values outside [0, 1]");
    }
  }
}

Competitor1D Competitor1D::affine(double a, double b, double left_data, double right_data) {
  return Competitor1D(a, b, left_data, right_data,
                      {AffinePiece::through(a, left_data, b, right_data)});
}

std::vector<Jump> Competitor1D::jumps() const {
  std::vector<Jump> out;
  for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) {
    const double x = pieces_[i].x_end;
    const double minus = pieces_[i].at(x);
    const double plus = pieces_[i + 1].at(x);
    if (traces_differ(minus, plus)) out.push_back({x, minus, plus});
  }
  const double at_a = pieces_.front().at(a_);
  if (traces_differ(left_data_, at_a)) out.push_back({a_, left_data_, at_a});
  const double at_b = pieces_.back().at(b_);
  if (traces_differ(at_b, right_data_)) out.push_back({b_, at_b, right_data_});
  return out;
}

Competitor1D Competitor1D::scaled(double factor) const {
  auto pieces = pieces_;
  for (auto& p : pieces) {
    p.slope *= factor;
    p.intercept *= factor;
  }
  return Competitor1D(a_, b_, left_data_ * factor, right_data_ * factor, std::move(pieces));
}

Competitor1D Competitor1D::refined() const {
  std::vector<AffinePiece> pieces;
  pieces.reserve(2 * pieces_.size());
  for (const auto& p : pieces_) {
    const double mid = 0.5 * (p.x_begin + p.x_end);
    pieces.push_back({p.x_begin, mid, p.slope, p.intercept});
    pieces.push_back({mid, p.x_end, p.slope, p.intercept});
  }
  return Competitor1D(a_, b_, left_data_, right_data_, std::move(pieces));
}

EnergyBreakdown energy_1d(const Competitor1D& c, double beta) {
  EnergyBreakdown e;
  for (const auto& p : c.pieces()) e.dirichlet += p.slope * p.slope * (p.x_end - p.x_begin);
  for (const auto& j : c.jumps()) e.jump += beta * (j.minus * j.minus + j.plus * j.plus);
  e.total = e.dirichlet + e.jump + e.volume;
  return e;
}

void RadialProfile::validate() const {
  static_cast<void>(Dimension{n});
  if (!(beta > 0.0)) throw ValidationError("RadialProfile: beta must be positive");
  if (!(gamma >= 0.0)) throw ValidationError("RadialProfile: gamma must be non-negative");
  if (!(R >= 1.0)) throw ValidationError("RadialProfile: R must be >= 1");
  if (!(delta > 0.0 && delta <= 1.0)) throw ValidationError("RadialProfile: delta outside (0, 1]");
}

EnergyBreakdown energy_radial_general(const RadialProfile& p) {
  p.validate();
  const Dimension n{p.n};
  const double omega = unit_ball_volume(n);
  const double area = n.value() * omega;
  EnergyBreakdown e;
  if (p.R == 1.0) {
    e.jump = p.beta * area;
    e.volume = omega * p.gamma * p.gamma;
  } else {
    e.dirichlet = area * (1.0 - p.delta) * (1.0 - p.delta) / radial_potential(n, p.R);
    e.jump = p.beta * area * std::pow(p.R, n.value() - 1.0) * p.delta * p.delta;
    e.volume = omega * p.gamma * p.gamma * std::pow(p.R, n.value());
  }
  e.total = e.dirichlet + e.jump + e.volume;
  return e;
}

double energy_radial_optimal(Dimension n, double beta, double gamma, double R) {
  const double omega = unit_ball_volume(n);
  return n.value() * omega * beta * std::pow(R, n.value() - 1.0) * delta_robin(n, beta, R) +
         omega * gamma * gamma * std::pow(R, n.value());
}

double euler_lagrange_bracket(Dimension n, double beta, double r) {
  const double d = delta_robin(n, beta, r);
  return (beta * beta - (n.value() - 1.0) * beta / r) * d * d;
}

double dE_dR(Dimension n, double beta, double gamma, double R) {
  return n.value() * unit_ball_volume(n) * std::pow(R, n.value() - 1.0) *
         (gamma * gamma - euler_lagrange_bracket(n, beta, R));
}

std::vector<double> critical_radii(Dimension n, double beta, double gamma, double r_max,
                                   const RootScan& scan) {
  if (!(r_max > 1.0)) throw DomainError("critical_radii: requires Rmax > 1");
  if (scan.samples < 1) throw DomainError("critical_radii: requires at least one sample");
  const auto f = [&](double r) { return gamma * gamma - euler_lagrange_bracket(n, beta, r); };
  const double step = (r_max - 1.0) / static_cast<double>(scan.samples);

  std::vector<double> roots;
  double lo = 1.0;
  double f_lo = f(lo);
  for (std::size_t i = 1; i <= scan.samples; ++i) {
    const double hi = (i == scan.samples) ? r_max : 1.0 + step * static_cast<double>(i);
    const double f_hi = f(hi);
    if (f_hi == 0.0) {
      roots.push_back(hi);
    } else if (f_lo != 0.0 && std::signbit(f_lo) != std::signbit(f_hi)) {
      double a = lo, b = hi, fa = f_lo;
      while (b - a > scan.tolerance) {
        const double mid = 0.5 * (a + b);
        const double fm = f(mid);
        if (fm == 0.0) {
          a = b = mid;
          break;
        }
        if (std::signbit(fm) == std::signbit(fa)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    lo = hi;
    f_lo = f_hi;
  }
  return roots;
}

MonotonicityMargin indicator_monotonicity_margin(Dimension n, double beta, double gamma,
                                                 double r_max, std::size_t samples) {
  if (!(r_max > 1.0)) throw DomainError("indicator_monotonicity_margin: requires Rmax > 1");
  MonotonicityMargin best{gamma * gamma - euler_lagrange_bracket(n, beta, 1.0), 1.0};
  for (std::size_t i = 1; i <= samples; ++i) {
    const double r = 1.0 + (r_max - 1.0) * static_cast<double>(i) / static_cast<double>(samples);
    const double m = gamma * gamma - euler_lagrange_bracket(n, beta, r);
    if (m < best.margin) best = {m, r};
  }
  return best;
}

}  // namespace calx
