#pragma once

// Brute-force baselines that do not use any calibration field.

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "calx/energy.hpp"

namespace calx {

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct JumpSearchSpace {
  std::size_t resolution = 1000;  ///< jump locations and values on the grid k / resolution
  int max_jumps = 2;
};

struct OracleResult1D {
  Competitor1D best;
  EnergyBreakdown energy;
  int jumps = 0;
  double affine_energy = 0.0;
  double best_one_jump = 0.0;  ///< best energy with exactly one jump
  double best_two_jump = 0.0;  ///< best energy with exactly two jumps, +inf when not searched
  std::size_t resolution = 0;
};

/// Exhaustive search on [0, 1] with data m at 0 and M at 1, affine between
/// jumps. Ties go to fewer jumps, then to the smaller leftmost jump.
OracleResult1D oracle_1d_best(double m, double M, double beta, const JumpSearchSpace& space = {});

/// u(R) of the radial solution of u'' + (n-1) u' / r = 0, u(1) = 1,
/// u'(R) + beta u(R) = 0, by RK4 shooting and bisection on u'(1).
double oracle_robin_shooting(int n, double beta, double R, double step = 1e-4);

struct SweepRow {
  double R;
  double delta;
  EnergyBreakdown energy;
};

struct RadialSweep {
  std::vector<SweepRow> rows;  ///< indicator first, then the R x delta grid in row-major order
  SweepRow best;
  bool indicator_wins() const { return best.R == 1.0; }
};

/// Energies of the radial family over R_grid x delta_grid plus the indicator.
RadialSweep oracle_radial_sweep(int n, double beta, double gamma, const std::vector<double>& R_grid,
                                const std::vector<double>& delta_grid);

/// count equally spaced values on [lo, hi].
std::vector<double> linspace(double lo, double hi, std::size_t count);

/// CSV with header R,delta,dirichlet,jump,volume,total and 17 significant digits.
void write_sweep_csv(std::ostream& os, const RadialSweep& sweep);

}  // namespace calx
