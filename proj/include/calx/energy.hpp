#pragma once

// Free-discontinuity energies: the one-dimensional Dirichlet problem energy
// and the radial thermal insulation energy around the unit ball.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "calx/potentials.hpp"

namespace calx {

class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Volume of the unit ball in R^n (omega_1 = 2). Supports 1 <= n <= 10.
double unit_ball_volume(Dimension n);

struct EnergyBreakdown {
  double dirichlet = 0.0;
  double jump = 0.0;
  double volume = 0.0;
  double total = 0.0;
};

/// Affine piece u(x) = slope * x + intercept on [x_begin, x_end].
struct AffinePiece {
  double x_begin;
  double x_end;
  double slope;
  double intercept;

  double at(double x) const noexcept { return slope * x + intercept; }
  static AffinePiece through(double x0, double v0, double x1, double v1);
};

/// One-sided traces at a discontinuity. `minus` is the value on the left.
struct Jump {
  double x;
  double minus;
  double plus;
};

/// Piecewise-affine competitor on [a, b] with Dirichlet data `left_data`
/// on x < a and `right_data` on x > b. The pieces tile [a, b]; a mismatch
/// between consecutive pieces, or between a piece and the data at a or b,
/// is a jump.
class Competitor1D {
 public:
  Competitor1D(double a, double b, double left_data, double right_data,
               std::vector<AffinePiece> pieces);

  /// Affine interpolation of the data, no jumps.
  static Competitor1D affine(double a, double b, double left_data, double right_data);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double left_data() const noexcept { return left_data_; }
  double right_data() const noexcept { return right_data_; }
  const std::vector<AffinePiece>& pieces() const noexcept { return pieces_; }

  /// Interior jumps followed by boundary jumps against the data.
  std::vector<Jump> jumps() const;

  /// Multiplies values and data by `factor`.
  Competitor1D scaled(double factor) const;

  /// Splits every piece at its midpoint; the represented function is unchanged.
  Competitor1D refined() const;

 private:
  double a_, b_, left_data_, right_data_;
  std::vector<AffinePiece> pieces_;
};

EnergyBreakdown energy_1d(const Competitor1D& c, double beta);

/// Radial competitor: 1 on the unit ball, harmonic on 1 < r < R with trace
/// `delta` at R, zero outside B_R. R = 1 is the indicator of the unit ball.
struct RadialProfile {
  int n;
  double beta;
  double gamma;
  double R;
  double delta;

  void validate() const;
};

EnergyBreakdown energy_radial_general(const RadialProfile& p);

/// Energy of the Euler-Lagrange profile with delta = delta_robin(R).
double energy_radial_optimal(Dimension n, double beta, double gamma, double R);

/// n omega_n R^(n-1) [gamma^2 - (beta^2 - (n-1) beta / R) delta(R)^2].
double dE_dR(Dimension n, double beta, double gamma, double R);

/// (beta^2 - (n-1) beta / r) delta(r)^2, the bracket compared against gamma^2.
double euler_lagrange_bracket(Dimension n, double beta, double r);

struct RootScan {
  std::size_t samples = 100000;
  double tolerance = 1e-9;
};

/// Sign changes of dE_dR on (1, Rmax], refined by bisection. Ascending.
std::vector<double> critical_radii(Dimension n, double beta, double gamma, double r_max,
                                   const RootScan& scan = {});

struct MonotonicityMargin {
  double margin;   ///< inf of gamma^2 - bracket over the scan
  double argmin;   ///< radius attaining it
};

/// Scan of gamma^2 - bracket(r) over [1, Rmax]. A non-negative margin
/// certifies that r -> E(r) is non-decreasing on the scanned range.
MonotonicityMargin indicator_monotonicity_margin(Dimension n, double beta, double gamma,
                                                 double r_max, std::size_t samples = 100000);

}  // namespace calx
