#pragma once

// Grid verification of the calibration axioms for a PiecewiseField.
//
//   a                phi^t >= |phi^x|^2 / 4 - gamma^2 1_{]0,1]}(t)
//   b                |int_r^s phi^x dt| <= beta (r^2 + s^2)
//   a_prime          phi^x = 2 grad u, phi^t = |grad u|^2 (- gamma^2) on the graph
//   b_prime          int_{u-}^{u+} phi^x dt = beta ((u-)^2 + (u+)^2) nu_u on the jump set
//   divergence_flux  piecewise divergence, normal flux across interfaces, boundedness

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "calx/fields.hpp"
#include "json.hpp"

namespace calx {

enum class Axiom { a, b, a_prime, b_prime, divergence_flux };

const char* axiom_id(Axiom a);
std::vector<Axiom> all_axioms();

struct VerifyConfig {
  std::size_t pos_nodes = 128;
  std::size_t t_nodes = 128;
  std::size_t pair_nodes = 128;   ///< t-grid for the (r, s) pairs of condition b
  std::size_t graph_samples = 1000;
  double h = 1e-3;                ///< finite-difference step, collar is 2h
  double tol_a = 1e-9;
  double tol_b = 1e-9;
  double tol_graph = 1e-9;
  double tol_div = 1e-5;
  double tol_flux = 1e-5;
  std::size_t max_recorded = 64;  ///< violations kept per axiom; the count is exact
  std::vector<Axiom> axioms = all_axioms();

  void validate() const;
  bool runs(Axiom a) const;
};

/// Node i of `count` equally spaced nodes on [lo, hi], endpoints included.
double grid_point(double lo, double hi, std::size_t i, std::size_t count);

struct Violation {
  std::string check;
  double pos = 0.0;
  double t = 0.0;  ///< t, or r for a pair
  double s = 0.0;  ///< s for a pair, otherwise unused
  double residual = 0.0;
  double tolerance = 0.0;
};

enum class Status { pass, fail, skipped };
const char* status_name(Status s);

struct AxiomResult {
  Axiom axiom = Axiom::a;
  Status status = Status::skipped;
  std::size_t checked = 0;
  std::size_t violation_count = 0;
  /// Smallest slack seen; a check fails when its slack drops below -tolerance.
  double worst_margin = std::numeric_limits<double>::infinity();
  std::vector<Violation> violations;
  nlohmann::json details = nlohmann::json::object();

  void finish();
};

struct VerificationReport {
  std::string field_kind;
  nlohmann::json field = nlohmann::json::object();
  nlohmann::json grid = nlohmann::json::object();
  std::string hypothesis_error;  ///< set when the field could not be built
  std::vector<AxiomResult> results;

  bool passed() const;
  const AxiomResult* result(Axiom a) const;
  nlohmann::json to_json() const;
  std::string summary_table() const;

  static VerificationReport construction_failed(std::string kind, std::string reason);
};

AxiomResult check_condition_a(const PiecewiseField& field, const VerifyConfig& cfg);
AxiomResult check_condition_b(const PiecewiseField& field, const VerifyConfig& cfg);
AxiomResult check_graph_conditions(const PiecewiseField& field,
                                   const std::vector<CalibratedGraph>& graphs,
                                   const VerifyConfig& cfg);
/// The b_prime half of check_graph_conditions.
AxiomResult check_jump_conditions(const PiecewiseField& field,
                                  const std::vector<CalibratedGraph>& graphs,
                                  const VerifyConfig& cfg);
AxiomResult check_divergence_and_flux(const PiecewiseField& field, const VerifyConfig& cfg);

/// Runs every enabled axiom against the field's own calibrated graphs.
VerificationReport verify_all(const PiecewiseField& field, const VerifyConfig& cfg = {});

/// int_r^s phi^x(pos, t) dt by adaptive Gauss-Kronrod, split at the t-breaks.
double quadrature_integral(const PiecewiseField& field, double pos, double r, double s);

/// Divergence of phi at (pos, t) using the closed form of `region` only.
double field_divergence(const PiecewiseField& field, int region, double pos, double t, double h);

}  // namespace calx
