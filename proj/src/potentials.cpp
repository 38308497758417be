#include "calx/potentials.hpp"

#include <cmath>
#include <string>

namespace calx {

namespace {

// t^k - 1 without cancellation near t = 1.
double pow_minus_one(double t, double k) { return std::expm1(k * std::log(t)); }

void require_unit_exterior(double r, const char* what) {
  if (!(r >= 1.0)) {
    throw DomainError(std::string(what) + ": radius must be >= 1, got " + std::to_string(r));
  }
}

}  // namespace

Dimension::Dimension(int n) : n_(n) {
  if (n < 1) throw DomainError("dimension must be >= 1, got " + std::to_string(n));
}

double radial_potential(Dimension n, double r) {
  require_unit_exterior(r, "radial_potential");
  switch (n.value()) {
    case 1:
      return r - 1.0;
    case 2:
      return std::log(r);
    default: {
      const double k = n.value() - 2.0;
      return -std::expm1(-k * std::log(r)) / k;
    }
  }
}

double radial_potential_derivative(Dimension n, double r) {
  require_unit_exterior(r, "radial_potential_derivative");
  return std::pow(r, 1.0 - n.value());
}

std::pair<double, double> gamma_scaling_identity(Dimension n, double s, double t) {
  require_unit_exterior(s, "gamma_scaling_identity");
  if (t < s) throw DomainError("gamma_scaling_identity: requires t >= s");
  const double lhs = radial_potential(n, t) - radial_potential(n, s);
  const double rhs = std::pow(s, 2.0 - n.value()) * radial_potential(n, t / s);
  return {lhs, rhs};
}

double delta_robin(Dimension n, double beta, double R) {
  require_unit_exterior(R, "delta_robin");
  if (!(beta > 0.0)) throw DomainError("delta_robin: beta must be positive");
  return 1.0 / (1.0 + beta * std::pow(R, n.value() - 1.0) * radial_potential(n, R));
}

RadialValue u_radial(Dimension n, double beta, double R, double r) {
  require_unit_exterior(R, "u_radial");
  if (r < 0.0) throw DomainError("u_radial: negative radius");
  if (r <= 1.0) return {1.0, 0.0};
  if (r > R) return {0.0, 0.0};
  const double delta = delta_robin(n, beta, R);
  const double flux = beta * delta * std::pow(R, n.value() - 1.0);
  return {1.0 - flux * radial_potential(n, r), flux * std::pow(r, 1.0 - n.value())};
}

double u_radial_slope(Dimension n, double beta, double R, double r) {
  if (r < 1.0 || r > R) return 0.0;
  return -u_radial(n, beta, R, r).gradient_magnitude;
}

double gamma_ratio(Dimension n, double t) {
  if (n.value() < 2) throw DomainError("gamma_ratio: requires n >= 2");
  if (!(t > 1.0)) throw DomainError("gamma_ratio: requires t > 1");
  const double k = n.value() - 1.0;
  return std::exp(k * std::log(t)) * radial_potential(n, t) / pow_minus_one(t, k);
}

double rho_limit(Dimension n, double beta, double R) { return delta_robin(n, beta, R); }

double rho(Dimension n, double beta, double R, double r) {
  if (!(R > 1.0)) throw DomainError("rho: requires R > 1");
  if (r < 1.0 || r >= R) throw DomainError("rho: requires 1 <= r < R");
  const double delta = delta_robin(n, beta, R);
  if (n.value() == 1) return delta;

  const double t = R / r;
  const double eps = t - 1.0;
  if (eps < 1e-8) {
    // First-order expansion about r = R.
    return delta * (1.0 + 0.5 * (beta * R - 0.5) * eps);
  }
  const double nn = n.value();
  const double shape = std::exp((nn - 1.0) * std::log(t)) * gamma_ratio(n, t);
  const double quotient = pow_minus_one(t, nn) / pow_minus_one(t, nn - 1.0);
  return 0.5 * delta + 0.5 * beta * delta * r * shape -
         delta * r / (2.0 * nn) * (beta - (nn - 1.0) / R) * quotient;
}

double rho_closed(Dimension n, double beta, double R, double r) {
  if (r >= R) return rho_limit(n, beta, R);
  return rho(n, beta, R, r);
}

GammaBoundsCheck gamma_bounds_check(Dimension n, double t, double tol) {
  if (n.value() < 2) throw DomainError("gamma_bounds_check: requires n >= 2");
  if (!(t > 1.0)) throw DomainError("gamma_bounds_check: requires t > 1");
  const double nn = n.value();
  const double lt = std::log(t);
  const double g = radial_potential(n, t);

  GammaBoundsCheck out{};
  const double lower = -std::expm1(-(nn - 1.0) * lt) / (nn - 1.0);
  const double upper = std::expm1(nn * lt) * std::exp(-(nn - 1.0) * lt) / nn;
  out.lower_gap = g - lower;
  out.upper_gap = upper - g;
  out.lower_ok = out.lower_gap >= -tol;
  out.upper_ok = out.upper_gap >= -tol;

  const double h = 1e-6 * t;
  out.ratio_increment = gamma_ratio(n, t + h) - gamma_ratio(n, t);
  out.ratio_monotone_sample = out.ratio_increment >= -tol;

  const double tn1 = pow_minus_one(t, nn - 1.0);
  const double tn = pow_minus_one(t, nn);
  const double lhs = (nn - 0.5) * (std::exp((2.0 * nn - 2.0) * lt) * g / tn - 1.0 / nn);
  const double rhs = std::exp((nn - 1.0) * lt) * tn1 / tn - (nn - 1.0) / (nn * t);
  out.shifted_estimate_gap = lhs - rhs;
  out.shifted_estimate_ok = out.shifted_estimate_gap >= -tol;
  return out;
}

}  // namespace calx
