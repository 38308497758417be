#pragma once

// Closed-form radial potentials for the thermal insulation problem around the
// unit ball: the harmonic potential vanishing on the unit sphere, the Robin
// jump value, the Euler-Lagrange profile and the interface curve rho.

#include <stdexcept>
#include <utility>

namespace calx {

/// Raised when an argument lies outside the domain of a closed form.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Spatial dimension. Formula branches are n = 1, n = 2 and n >= 3.
class Dimension {
 public:
  explicit Dimension(int n);
  int value() const noexcept { return n_; }
  operator int() const noexcept { return n_; }

 private:
  int n_;
};

/// Harmonic radial potential with value 0 on the unit sphere:
/// r - 1 (n = 1), ln r (n = 2), (1 - r^(2-n)) / (n - 2) (n >= 3).
/// Requires r >= 1.
double radial_potential(Dimension n, double r);

/// d/dr of radial_potential, r^(1-n).
double radial_potential_derivative(Dimension n, double r);

/// Both sides of Gamma(t) - Gamma(s) = s^(2-n) Gamma(t/s), t >= s >= 1.
std::pair<double, double> gamma_scaling_identity(Dimension n, double s, double t);

/// Trace on the outer sphere r = R of the harmonic function equal to 1 on
/// the unit sphere and satisfying -du/dr = beta u at r = R.
double delta_robin(Dimension n, double beta, double R);

struct RadialValue {
  double value;
  double gradient_magnitude;
};

/// Euler-Lagrange profile: 1 inside the unit ball, harmonic on 1 <= r <= R
/// with trace delta_robin(R) at R, zero outside B_R.
RadialValue u_radial(Dimension n, double beta, double R, double r);

/// Signed radial derivative du/dr of u_radial on [1, R]; zero elsewhere.
double u_radial_slope(Dimension n, double beta, double R, double r);

/// Interface curve of the ball calibration, defined for 1 <= r < R.
/// Throws DomainError for r >= R; use rho_limit for the value at R.
double rho(Dimension n, double beta, double R, double r);

/// lim rho(r) as r -> R^-, equal to delta_robin(R).
double rho_limit(Dimension n, double beta, double R);

/// rho on the closed interval [1, R].
double rho_closed(Dimension n, double beta, double R, double r);

/// Pointwise evaluation of the four estimates on Gamma for n >= 2 and t > 1.
struct GammaBoundsCheck {
  bool lower_ok;               ///< (t^(n-1) - 1) / ((n-1) t^(n-1)) <= Gamma(t)
  bool upper_ok;               ///< Gamma(t) <= (t^n - 1) / (n t^(n-1))
  bool ratio_monotone_sample;  ///< t^(n-1) Gamma / (t^(n-1) - 1) increases at t
  bool shifted_estimate_ok;    ///< the (n - 1/2) estimate used for rho <= ... bounds
  double lower_gap;            ///< Gamma - lower bound
  double upper_gap;            ///< upper bound - Gamma
  double ratio_increment;      ///< forward difference of the ratio
  double shifted_estimate_gap;  ///< lhs - rhs of the (n - 1/2) estimate
};

GammaBoundsCheck gamma_bounds_check(Dimension n, double t, double tol = 1e-10);

/// t^(n-1) Gamma(t) / (t^(n-1) - 1) for t > 1, n >= 2.
double gamma_ratio(Dimension n, double t);

}  // namespace calx
