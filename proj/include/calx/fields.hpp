#pragma once

// Explicit piecewise calibration fields phi = (phi^x, phi^t) on
// (space) x (value range). Every field here is directed along a single unit
// vector e (e_x on an interval, e_r around the unit ball), so phi^x is
// carried as its scalar component along e and the spatial position as a
// scalar coordinate (x or r = |x|).

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "calx/potentials.hpp"
#include "json.hpp"

namespace calx {

/// The hypothesis of a minimality criterion does not hold. This is a
/// mathematical outcome, not a program fault.
class HypothesisViolation : public std::runtime_error {
 public:
  explicit HypothesisViolation(const std::string& what, std::optional<double> location = {})
      : std::runtime_error(what), location_(location) {}
  std::optional<double> location() const noexcept { return location_; }

 private:
  std::optional<double> location_;
};

enum class Geometry {
  interval,  ///< a segment [a, b] of the real line, Dirichlet problem
  exterior,  ///< r = |x| >= 1 around the unit ball in R^n
};

struct FieldValue {
  double x;  ///< component of phi^x along e
  double t;  ///< phi^t
};

/// Interface t = height(pos) between two regions.
struct GraphInterface {
  std::string name;
  int below;
  int above;
  double pos_begin;
  double pos_end;
  std::function<double(double)> height;
};

/// Spatial interface pos = radius (normal (e, 0)).
struct SphereInterface {
  std::string name;
  double radius;
};

/// A function the field is meant to calibrate: smooth segments where the
/// graph t = u(pos) lies in the domain, plus its jump set.
struct CalibratedGraph {
  struct Segment {
    double pos_begin;
    double pos_end;
    std::function<double(double)> value;
    std::function<double(double)> slope;  ///< du/dpos along e
  };
  struct JumpPoint {
    double pos;
    double lower;        ///< u^-, the smaller trace
    double upper;        ///< u^+
    double normal_sign;  ///< nu_u = normal_sign * e, pointing toward the u^+ side
  };
  std::string name;
  std::vector<Segment> segments;
  std::vector<JumpPoint> jumps;
};

class PiecewiseField {
 public:
  PiecewiseField(std::string kind, Geometry geometry, int dimension, double beta,
                 double volume_coefficient, double pos_min, double pos_max, double t_max);
  virtual ~PiecewiseField() = default;

  const std::string& kind() const noexcept { return kind_; }
  Geometry geometry() const noexcept { return geometry_; }
  int dimension() const noexcept { return dimension_; }
  double beta() const noexcept { return beta_; }
  /// gamma^2 for the thermal insulation problem, 0 for the Dirichlet problem.
  double volume_coefficient() const noexcept { return volume_coefficient_; }
  double pos_min() const noexcept { return pos_min_; }
  double pos_max() const noexcept { return pos_max_; }
  double t_max() const noexcept { return t_max_; }

  virtual std::vector<std::string> region_names() const = 0;
  /// Region containing (pos, t). The lower region is closed above.
  virtual int region(double pos, double t) const = 0;
  /// Closed form of one region, evaluated at any (pos, t).
  virtual FieldValue eval_region(int region, double pos, double t) const = 0;
  FieldValue eval(double pos, double t) const { return eval_region(region(pos, t), pos, t); }

  /// Psi(pos, t) = integral of phi^x(pos, .) over [0, t], closed form.
  virtual double antiderivative(double pos, double t) const = 0;
  /// Heights of the graph interfaces crossing the fiber at pos.
  virtual std::vector<double> t_breaks(double pos) const = 0;

  virtual std::vector<GraphInterface> graph_interfaces() const { return {}; }
  virtual std::vector<SphereInterface> sphere_interfaces() const { return {}; }
  virtual std::vector<CalibratedGraph> calibrated_graphs() const = 0;

  /// True when phi^x = -|phi^x| e everywhere.
  virtual bool points_inward() const { return false; }

  virtual nlohmann::json parameters() const = 0;
  nlohmann::json describe() const;

 private:
  std::string kind_;
  Geometry geometry_;
  int dimension_;
  double beta_;
  double volume_coefficient_;
  double pos_min_;
  double pos_max_;
  double t_max_;
};

// ---------------------------------------------------------------------------
// Dirichlet problem on an interval

struct LambdaChoice {
  bool feasible = false;
  double lambda = 0.0;
  double delta = 0.0;     ///< M / (1 + beta0)
  double integral = 0.0;  ///< int_m^delta 2 (M - t) dt, zero when m >= delta
  double bound = 0.0;     ///< beta0 (m^2 + delta^2)
  std::string reason;
};

/// Smallest lambda in [0, beta0] with int_m^delta 2(M-t) dt <= lambda m^2 + beta0 delta^2.
LambdaChoice choose_lambda(double m, double M, double beta0);

struct CalibParams1D {
  double m;
  double M;
  double beta;
  double beta0;
  double delta;
  double lambda;
  double sigma;  ///< ((M - m) - lambda m) / 2
  double tau;    ///< M - m

  /// Throws HypothesisViolation when the criterion fails.
  static CalibParams1D make(double m, double M, double beta);
  void validate() const;
};

/// Four-piece field calibrating the affine function from (0, m) to (1, M).
class Field1D final : public PiecewiseField {
 public:
  explicit Field1D(const CalibParams1D& params);

  const CalibParams1D& params() const noexcept { return p_; }

  std::vector<std::string> region_names() const override;
  int region(double x, double t) const override;
  FieldValue eval_region(int region, double x, double t) const override;
  double antiderivative(double x, double t) const override;
  std::vector<double> t_breaks(double x) const override;
  std::vector<GraphInterface> graph_interfaces() const override;
  std::vector<CalibratedGraph> calibrated_graphs() const override;
  nlohmann::json parameters() const override;

  /// Graph of the competitor jumping at x = 0 from m to delta, then affine
  /// to M. Calibrated as well when the criterion holds with equality.
  CalibratedGraph jump_minimizer_graph() const;

 private:
  CalibParams1D p_;
};

Field1D build_field_1d(const CalibParams1D& params);

/// Harmonic function u = c0 + c1 * s (affine) or c0 + c1 * Gamma_n(s)
/// (radial, s = r >= 1) on [lo, hi].
struct HarmonicProfile {
  enum class Kind { affine, radial };
  Kind kind;
  int n;
  double lo;
  double hi;
  double c0;
  double c1;

  double value(double s) const;
  double slope(double s) const;
  double sup_gradient() const;
  double min_value() const;
  double max_value() const;

  static HarmonicProfile affine(double lo, double hi, double u_lo, double u_hi);
  static HarmonicProfile radial(int n, double r_in, double r_out, double u_in, double u_out);
  /// The Euler-Lagrange profile restricted to the annulus 1 <= r <= R.
  static HarmonicProfile euler_lagrange(int n, double beta, double R);
};

/// Field calibrating a non-negative harmonic u with m <= u <= M, built from
/// the one-dimensional field through the rescaling by grad u / (M - m).
class HarmonicField final : public PiecewiseField {
 public:
  HarmonicField(const HarmonicProfile& u, double m, double M, double beta, double lambda);

  const HarmonicProfile& profile() const noexcept { return u_; }
  double lambda() const noexcept { return lambda_; }
  double beta0() const noexcept { return beta0_; }
  /// sigma(pos) = m + (u - m)(1 - lambda m / (M - m)) / 2.
  double sigma(double pos) const;

  std::vector<std::string> region_names() const override;
  int region(double pos, double t) const override;
  FieldValue eval_region(int region, double pos, double t) const override;
  double antiderivative(double pos, double t) const override;
  std::vector<double> t_breaks(double pos) const override;
  std::vector<GraphInterface> graph_interfaces() const override;
  std::vector<CalibratedGraph> calibrated_graphs() const override;
  nlohmann::json parameters() const override;

 private:
  HarmonicProfile u_;
  double m_;
  double M_;
  double lambda_;
  double beta0_;
};

HarmonicField build_field_harmonic(const HarmonicProfile& u, double m, double M, double beta);

// ---------------------------------------------------------------------------
// Thermal insulation around the unit ball

/// phi = (-2 beta t nu, 0) with the divergence-free extension
/// nu = x / |x|^n of the outward normal.
class IndicatorConstField final : public PiecewiseField {
 public:
  IndicatorConstField(int n, double beta, double gamma, double r_max);

  std::vector<std::string> region_names() const override;
  int region(double r, double t) const override;
  FieldValue eval_region(int region, double r, double t) const override;
  double antiderivative(double r, double t) const override;
  std::vector<double> t_breaks(double r) const override;
  std::vector<CalibratedGraph> calibrated_graphs() const override;
  bool points_inward() const override { return true; }
  nlohmann::json parameters() const override;

 private:
  double gamma_;
};

IndicatorConstField build_field_indicator_const(int n, double beta, double gamma,
                                                double r_max = 4.0);

/// Two-piece field split along t = delta(r), nu = e_r.
class IndicatorTwoPieceField final : public PiecewiseField {
 public:
  IndicatorTwoPieceField(int n, double beta, double gamma, double r_max);

  std::vector<std::string> region_names() const override;
  int region(double r, double t) const override;
  FieldValue eval_region(int region, double r, double t) const override;
  double antiderivative(double r, double t) const override;
  std::vector<double> t_breaks(double r) const override;
  std::vector<GraphInterface> graph_interfaces() const override;
  std::vector<CalibratedGraph> calibrated_graphs() const override;
  bool points_inward() const override { return true; }
  nlohmann::json parameters() const override;

 private:
  double gamma_;
};

struct HypothesisScan {
  double r_max = 100.0;
  std::size_t samples = 100000;
};

IndicatorTwoPieceField build_field_indicator_two_piece(int n, double beta, double gamma,
                                                       double r_max = 4.0,
                                                       const HypothesisScan& scan = {});

/// Four pieces on 1 <= r < R split by t = delta(R), rho(r), u(r), and the
/// two-piece exterior field for r >= R.
class BallHarmonicField final : public PiecewiseField {
 public:
  BallHarmonicField(int n, double beta, double gamma, double R, double r_max);

  double R() const noexcept { return R_; }
  double delta_R() const noexcept { return delta_R_; }
  double rho_at(double r) const;

  std::vector<std::string> region_names() const override;
  int region(double r, double t) const override;
  FieldValue eval_region(int region, double r, double t) const override;
  double antiderivative(double r, double t) const override;
  std::vector<double> t_breaks(double r) const override;
  std::vector<GraphInterface> graph_interfaces() const override;
  std::vector<SphereInterface> sphere_interfaces() const override;
  std::vector<CalibratedGraph> calibrated_graphs() const override;
  bool points_inward() const override { return true; }
  nlohmann::json parameters() const override;

 private:
  double gamma_;
  double R_;
  double delta_R_;
};

struct BallHarmonicOptions {
  bool require_beta_bound = true;  ///< reject beta < n - 1/2
  double el_tolerance = 1e-9;      ///< |gamma^2 - bracket(R)| allowed
  double r_max = 0.0;              ///< verification extent, 0 selects max(2R, R + 1)
  HypothesisScan scan{};           ///< used when R = 1
};

/// gamma solving the Euler-Lagrange equation at radius R, if positive.
std::optional<double> euler_lagrange_gamma(int n, double beta, double R);

std::unique_ptr<PiecewiseField> build_field_ball_harmonic(int n, double beta, double gamma,
                                                          double R,
                                                          const BallHarmonicOptions& opts = {});

}  // namespace calx
