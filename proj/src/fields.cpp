#include "calx/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "calx/energy.hpp"

namespace calx {

namespace {

constexpr double kRelTol = 1e-12;

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

/// (1 - t) / (1 - level), taken as 1 where the fiber above `level` is empty.
double fraction_above(double t, double level) {
  const double gap = 1.0 - level;
  return gap > 0.0 ? (1.0 - t) / gap : 1.0;
}

// Two-piece exterior field split at t = delta(r) with nu = e_r. Shared by the
// indicator field and the outer part of the ball field.
FieldValue exterior_piece(int n, double beta, double r, double t, bool lower) {
  const double nm1 = n - 1.0;
  if (lower) return {-2.0 * beta * t, nm1 * beta * t * t / r};
  const double d = delta_robin(Dimension{n}, beta, r);
  const double w = fraction_above(t, d);
  const double bracket = (beta * beta - nm1 * beta / r) * d * d;
  return {-2.0 * beta * d * w, beta * beta * d * d * w * w - bracket};
}

double exterior_antiderivative(int n, double beta, double r, double t) {
  const double d = delta_robin(Dimension{n}, beta, r);
  if (t <= d) return -beta * t * t;
  const double w = fraction_above(t, d);
  return -beta * d * d - beta * d * (1.0 - d) * (1.0 - w * w);
}

CalibratedGraph indicator_graph(double r_max) {
  CalibratedGraph g;
  g.name = "indicator of the unit ball";
  g.segments.push_back({1.0, r_max, [](double) { return 0.0; }, [](double) { return 0.0; }});
  g.jumps.push_back({1.0, 0.0, 1.0, -1.0});
  return g;
}

nlohmann::json interface_json(const GraphInterface& i) {
  return {{"name", i.name},  {"type", "graph"},  {"below", i.below},
          {"above", i.above}, {"pos_begin", i.pos_begin}, {"pos_end", i.pos_end}};
}

}  // namespace

// ---------------------------------------------------------------------------

PiecewiseField::PiecewiseField(std::string kind, Geometry geometry, int dimension, double beta,
                               double volume_coefficient, double pos_min, double pos_max,
                               double t_max)
    : kind_(std::move(kind)),
      geometry_(geometry),
      dimension_(Dimension{dimension}.value()),
      beta_(beta),
      volume_coefficient_(volume_coefficient),
      pos_min_(pos_min),
      pos_max_(pos_max),
      t_max_(t_max) {
  if (!(beta > 0.0)) throw DomainError("field: beta must be positive");
  if (!(pos_max > pos_min)) throw DomainError("field: empty spatial extent");
  if (!(t_max > 0.0)) throw DomainError("field: empty value range");
}

nlohmann::json PiecewiseField::describe() const {
  nlohmann::json j;
  j["kind"] = kind_;
  j["geometry"] = geometry_ == Geometry::interval ? "interval" : "exterior";
  j["dimension"] = dimension_;
  j["beta"] = beta_;
  j["volume_coefficient"] = volume_coefficient_;
  j["domain"] = {{"pos_min", pos_min_}, {"pos_max", pos_max_}, {"t_min", 0.0}, {"t_max", t_max_}};
  j["regions"] = region_names();
  auto interfaces = nlohmann::json::array();
  for (const auto& i : graph_interfaces()) interfaces.push_back(interface_json(i));
  for (const auto& s : sphere_interfaces()) {
    interfaces.push_back({{"name", s.name}, {"type", "sphere"}, {"radius", s.radius}});
  }
  j["interfaces"] = interfaces;
  j["points_inward"] = points_inward();
  j["parameters"] = parameters();
  return j;
}

// ---------------------------------------------------------------------------
// Dirichlet problem

LambdaChoice choose_lambda(double m, double M, double beta0) {
  if (!(m >= 0.0 && m <= M)) throw DomainError("choose_lambda: requires 0 <= m <= M");
  if (!(beta0 >= 0.0)) throw DomainError("choose_lambda: requires beta0 >= 0");

  LambdaChoice c;
  c.delta = M / (1.0 + beta0);
  c.integral = (M - m) * (M - m) - (M - c.delta) * (M - c.delta);
  c.bound = beta0 * (m * m + c.delta * c.delta);

  if (m >= c.delta) {
    c.feasible = true;
    c.lambda = 0.0;
    return c;
  }
  const double slack = kRelTol * std::max(1.0, c.bound);
  if (c.integral > c.bound + slack) {
    c.reason = "criterion violated: " + format_number(c.integral) + " > " + format_number(c.bound);
    return c;
  }
  if (m > 0.0) {
    c.lambda = std::clamp((c.integral - beta0 * c.delta * c.delta) / (m * m), 0.0, beta0);
  }
  const double lm = c.lambda * m;
  if (lm > (M - m) + slack || lm > beta0 * M / (1.0 + beta0) + slack) {
    c.reason = "side conditions on lambda fail";
    return c;
  }
  c.feasible = true;
  return c;
}

CalibParams1D CalibParams1D::make(double m, double M, double beta) {
  if (!(beta > 0.0)) throw DomainError("CalibParams1D: beta must be positive");
  if (!(M > 0.0)) throw DomainError("CalibParams1D: requires M > 0");
  // On [0, 1] the affine function has |u'| = M - m, so beta0 = beta.
  const LambdaChoice c = choose_lambda(m, M, beta);
  if (!c.feasible) throw HypothesisViolation(c.reason);
  CalibParams1D p{m, M, beta, beta, c.delta, c.lambda, 0.0, M - m};
  p.sigma = 0.5 * ((M - m) - c.lambda * m);
  p.validate();
  return p;
}

void CalibParams1D::validate() const {
  const double slack = kRelTol * std::max(1.0, M * M);
  if (!(m >= 0.0 && m <= M && M > 0.0)) throw DomainError("CalibParams1D: requires 0 <= m <= M");
  if (!(lambda >= 0.0 && lambda <= beta0 + slack)) {
    throw DomainError("CalibParams1D: lambda outside [0, beta0]");
  }
  if (sigma < -slack || sigma > tau + slack) throw DomainError("CalibParams1D: sigma outside [0, tau]");
  if (lambda * m > (M - m) + slack) throw DomainError("CalibParams1D: lambda m > M - m");
  if (lambda * m > beta0 * M / (1.0 + beta0) + slack) {
    throw DomainError("CalibParams1D: lambda m > beta0 M / (1 + beta0)");
  }
  if (m < delta) {
    const double integral = (M - m) * (M - m) - (M - delta) * (M - delta);
    if (integral > lambda * m * m + beta0 * delta * delta + slack) {
      throw HypothesisViolation("CalibParams1D: lambda too small for the criterion");
    }
  }
}

Field1D::Field1D(const CalibParams1D& params)
    : PiecewiseField("dirichlet-1d", Geometry::interval, 1, params.beta, 0.0, 0.0, 1.0, params.M),
      p_(params) {
  p_.validate();
}

std::vector<std::string> Field1D::region_names() const {
  return {"t <= m", "m < t <= m + sigma x", "m + sigma x < t <= m + tau x", "t > m + tau x"};
}

int Field1D::region(double x, double t) const {
  if (t <= p_.m) return 0;
  if (t <= p_.m + p_.sigma * x) return 1;
  if (t <= p_.m + p_.tau * x) return 2;
  return 3;
}

FieldValue Field1D::eval_region(int region, double x, double t) const {
  const double lm = p_.lambda * p_.m;
  switch (region) {
    case 0:
      return {-2.0 * p_.lambda * t, lm * lm};
    case 1:
      return {-2.0 * lm, lm * lm};
    case 2:
      return {2.0 * p_.tau, p_.tau * p_.tau};
    default: {
      const double q = x < 1.0 ? (p_.M - t) / (1.0 - x) : p_.tau;
      return {2.0 * q, q * q};
    }
  }
}

double Field1D::antiderivative(double x, double t) const {
  const double m = p_.m, lambda = p_.lambda;
  if (t <= m) return -lambda * t * t;
  double psi = -lambda * m * m;
  const double s1 = m + p_.sigma * x;
  if (t <= s1) return psi - 2.0 * lambda * m * (t - m);
  psi -= 2.0 * lambda * m * (s1 - m);
  const double s2 = m + p_.tau * x;
  if (t <= s2) return psi + 2.0 * p_.tau * (t - s1);
  psi += 2.0 * p_.tau * (s2 - s1);
  return psi + ((p_.M - s2) * (p_.M - s2) - (p_.M - t) * (p_.M - t)) / (1.0 - x);
}

std::vector<double> Field1D::t_breaks(double x) const {
  return {p_.m, p_.m + p_.sigma * x, p_.m + p_.tau * x};
}

std::vector<GraphInterface> Field1D::graph_interfaces() const {
  const auto p = p_;
  return {
      {"t = m", 0, 1, 0.0, 1.0, [p](double) { return p.m; }},
      {"t = m + sigma x", 1, 2, 0.0, 1.0, [p](double x) { return p.m + p.sigma * x; }},
      {"t = m + tau x", 2, 3, 0.0, 1.0, [p](double x) { return p.m + p.tau * x; }},
  };
}

std::vector<CalibratedGraph> Field1D::calibrated_graphs() const {
  const auto p = p_;
  CalibratedGraph g;
  g.name = "affine";
  g.segments.push_back({0.0, 1.0, [p](double x) { return p.m + p.tau * x; },
                        [p](double) { return p.tau; }});
  return {g};
}

CalibratedGraph Field1D::jump_minimizer_graph() const {
  const auto p = p_;
  CalibratedGraph g;
  g.name = "jump at 0 to delta";
  g.segments.push_back({0.0, 1.0, [p](double x) { return p.delta + (p.M - p.delta) * x; },
                        [p](double) { return p.M - p.delta; }});
  g.jumps.push_back({0.0, p.m, p.delta, 1.0});
  return g;
}

nlohmann::json Field1D::parameters() const {
  return {{"m", p_.m},         {"M", p_.M},       {"beta", p_.beta},   {"beta0", p_.beta0},
          {"delta", p_.delta}, {"lambda", p_.lambda}, {"sigma", p_.sigma}, {"tau", p_.tau}};
}

Field1D build_field_1d(const CalibParams1D& params) { return Field1D(params); }

// ---------------------------------------------------------------------------
// Harmonic functions

HarmonicProfile HarmonicProfile::affine(double lo, double hi, double u_lo, double u_hi) {
  if (!(hi > lo)) throw DomainError("HarmonicProfile: empty interval");
  const double c1 = (u_hi - u_lo) / (hi - lo);
  return {Kind::affine, 1, lo, hi, u_lo - c1 * lo, c1};
}

HarmonicProfile HarmonicProfile::radial(int n, double r_in, double r_out, double u_in,
                                        double u_out) {
  const Dimension dim{n};
  if (!(r_in >= 1.0 && r_out > r_in)) throw DomainError("HarmonicProfile: requires 1 <= r_in < r_out");
  const double g_in = radial_potential(dim, r_in);
  const double c1 = (u_out - u_in) / (radial_potential(dim, r_out) - g_in);
  return {Kind::radial, n, r_in, r_out, u_in - c1 * g_in, c1};
}

HarmonicProfile HarmonicProfile::euler_lagrange(int n, double beta, double R) {
  const Dimension dim{n};
  if (!(R > 1.0)) throw DomainError("HarmonicProfile: requires R > 1");
  const double flux = beta * delta_robin(dim, beta, R) * std::pow(R, n - 1.0);
  return {Kind::radial, n, 1.0, R, 1.0, -flux};
}

double HarmonicProfile::value(double s) const {
  if (kind == Kind::affine) return c0 + c1 * s;
  return c0 + c1 * radial_potential(Dimension{n}, s);
}

double HarmonicProfile::slope(double s) const {
  if (kind == Kind::affine) return c1;
  return c1 * std::pow(s, 1.0 - n);
}

double HarmonicProfile::sup_gradient() const {
  if (kind == Kind::affine) return std::abs(c1);
  return std::abs(c1) * std::pow(lo, 1.0 - n);
}

double HarmonicProfile::min_value() const { return std::min(value(lo), value(hi)); }
double HarmonicProfile::max_value() const { return std::max(value(lo), value(hi)); }

HarmonicField::HarmonicField(const HarmonicProfile& u, double m, double M, double beta,
                             double lambda)
    : PiecewiseField(u.kind == HarmonicProfile::Kind::affine ? "harmonic-affine" : "harmonic-radial",
                     u.kind == HarmonicProfile::Kind::affine ? Geometry::interval : Geometry::exterior,
                     u.n, beta, 0.0, u.lo, u.hi, M),
      u_(u),
      m_(m),
      M_(M),
      lambda_(lambda) {
  const double sup = u.sup_gradient();
  beta0_ = (sup > 0.0 && M > m) ? beta * (M - m) / sup : std::numeric_limits<double>::infinity();
}

double HarmonicField::sigma(double pos) const {
  if (M_ == m_) return m_;
  return m_ + 0.5 * (u_.value(pos) - m_) * (1.0 - lambda_ * m_ / (M_ - m_));
}

std::vector<std::string> HarmonicField::region_names() const {
  return {"t <= m", "m < t <= sigma(x)", "sigma(x) < t <= u(x)", "t > u(x)"};
}

int HarmonicField::region(double pos, double t) const {
  if (t <= m_) return 0;
  if (t <= sigma(pos)) return 1;
  if (t <= u_.value(pos)) return 2;
  return 3;
}

FieldValue HarmonicField::eval_region(int region, double pos, double t) const {
  if (M_ == m_) return {0.0, 0.0};
  const double span = M_ - m_;
  const double scale = u_.slope(pos) / span;
  const double lm = lambda_ * m_;
  double px = 0.0, pt = 0.0;
  switch (region) {
    case 0:
      px = -2.0 * lambda_ * t;
      pt = lm * lm;
      break;
    case 1:
      px = -2.0 * lm;
      pt = lm * lm;
      break;
    case 2:
      px = 2.0 * span;
      pt = span * span;
      break;
    default: {
      const double gap = M_ - u_.value(pos);
      const double q = gap > 0.0 ? span * (M_ - t) / gap : span;
      px = 2.0 * q;
      pt = q * q;
    }
  }
  return {px * scale, pt * scale * scale};
}

double HarmonicField::antiderivative(double pos, double t) const {
  if (M_ == m_) return 0.0;
  const double span = M_ - m_;
  const double scale = u_.slope(pos) / span;
  const double s = sigma(pos);
  const double u = u_.value(pos);
  double phi = 0.0;
  if (t <= m_) {
    phi = -lambda_ * t * t;
  } else if (t <= s) {
    phi = -lambda_ * m_ * m_ - 2.0 * lambda_ * m_ * (t - m_);
  } else {
    phi = -lambda_ * m_ * m_ - 2.0 * lambda_ * m_ * (s - m_);
    if (t <= u) {
      phi += 2.0 * span * (t - s);
    } else {
      phi += 2.0 * span * (u - s);
      phi += span * ((M_ - u) * (M_ - u) - (M_ - t) * (M_ - t)) / (M_ - u);
    }
  }
  return scale * phi;
}

std::vector<double> HarmonicField::t_breaks(double pos) const {
  return {m_, sigma(pos), u_.value(pos)};
}

std::vector<GraphInterface> HarmonicField::graph_interfaces() const {
  const HarmonicField self = *this;
  const double m = m_;
  const auto u = u_;
  return {
      {"t = m", 0, 1, u_.lo, u_.hi, [m](double) { return m; }},
      {"t = sigma(x)", 1, 2, u_.lo, u_.hi, [self](double p) { return self.sigma(p); }},
      {"t = u(x)", 2, 3, u_.lo, u_.hi, [u](double p) { return u.value(p); }},
  };
}

std::vector<CalibratedGraph> HarmonicField::calibrated_graphs() const {
  const auto u = u_;
  CalibratedGraph g;
  g.name = "harmonic";
  g.segments.push_back({u.lo, u.hi, [u](double p) { return u.value(p); },
                        [u](double p) { return u.slope(p); }});
  return {g};
}

nlohmann::json HarmonicField::parameters() const {
  nlohmann::json j = {{"m", m_},
                      {"M", M_},
                      {"beta", beta()},
                      {"lambda", lambda_},
                      {"profile",
                       {{"kind", u_.kind == HarmonicProfile::Kind::affine ? "affine" : "radial"},
                        {"n", u_.n},
                        {"lo", u_.lo},
                        {"hi", u_.hi},
                        {"c0", u_.c0},
                        {"c1", u_.c1},
                        {"sup_gradient", u_.sup_gradient()}}}};
  if (std::isfinite(beta0_)) j["beta0"] = beta0_;
  return j;
}

HarmonicField build_field_harmonic(const HarmonicProfile& u, double m, double M, double beta) {
  if (!(beta > 0.0)) throw DomainError("build_field_harmonic: beta must be positive");
  if (!(m >= 0.0 && m <= M && M > 0.0)) throw DomainError("build_field_harmonic: requires 0 <= m <= M, M > 0");
  const double slack = kRelTol * std::max(1.0, M);
  if (u.min_value() < m - slack || u.max_value() > M + slack) {
    throw DomainError("build_field_harmonic: u leaves [m, M]");
  }
  const double sup = u.sup_gradient();
  if (M == m || sup == 0.0) return HarmonicField(u, m, M, beta, 0.0);
  const LambdaChoice c = choose_lambda(m, M, beta * (M - m) / sup);
  if (!c.feasible) throw HypothesisViolation(c.reason);
  return HarmonicField(u, m, M, beta, c.lambda);
}

// ---------------------------------------------------------------------------
// Indicator of the unit ball

IndicatorConstField::IndicatorConstField(int n, double beta, double gamma, double r_max)
    : PiecewiseField("indicator-const", Geometry::exterior, n, beta, gamma * gamma, 1.0, r_max, 1.0),
      gamma_(gamma) {}

std::vector<std::string> IndicatorConstField::region_names() const { return {"0 <= t <= 1"}; }

int IndicatorConstField::region(double, double) const { return 0; }

FieldValue IndicatorConstField::eval_region(int, double r, double t) const {
  return {-2.0 * beta() * t * std::pow(r, 1.0 - dimension()), 0.0};
}

double IndicatorConstField::antiderivative(double r, double t) const {
  return -beta() * t * t * std::pow(r, 1.0 - dimension());
}

std::vector<double> IndicatorConstField::t_breaks(double) const { return {}; }

std::vector<CalibratedGraph> IndicatorConstField::calibrated_graphs() const {
  return {indicator_graph(pos_max())};
}

nlohmann::json IndicatorConstField::parameters() const {
  return {{"n", dimension()}, {"beta", beta()}, {"gamma", gamma_}, {"normal_extension", "x/|x|^n"}};
}

IndicatorConstField build_field_indicator_const(int n, double beta, double gamma, double r_max) {
  if (beta > gamma) {
    throw HypothesisViolation("beta > gamma: " + format_number(beta) + " > " + format_number(gamma));
  }
  return IndicatorConstField(n, beta, gamma, r_max);
}

IndicatorTwoPieceField::IndicatorTwoPieceField(int n, double beta, double gamma, double r_max)
    : PiecewiseField("indicator-two-piece", Geometry::exterior, n, beta, gamma * gamma, 1.0, r_max,
                     1.0),
      gamma_(gamma) {}

std::vector<std::string> IndicatorTwoPieceField::region_names() const {
  return {"t <= delta(r)", "t > delta(r)"};
}

int IndicatorTwoPieceField::region(double r, double t) const {
  return t <= delta_robin(Dimension{dimension()}, beta(), r) ? 0 : 1;
}

FieldValue IndicatorTwoPieceField::eval_region(int region, double r, double t) const {
  return exterior_piece(dimension(), beta(), r, t, region == 0);
}

double IndicatorTwoPieceField::antiderivative(double r, double t) const {
  return exterior_antiderivative(dimension(), beta(), r, t);
}

std::vector<double> IndicatorTwoPieceField::t_breaks(double r) const {
  return {delta_robin(Dimension{dimension()}, beta(), r)};
}

std::vector<GraphInterface> IndicatorTwoPieceField::graph_interfaces() const {
  const int n = dimension();
  const double beta = this->beta();
  return {{"t = delta(r)", 0, 1, pos_min(), pos_max(),
           [n, beta](double r) { return delta_robin(Dimension{n}, beta, r); }}};
}

std::vector<CalibratedGraph> IndicatorTwoPieceField::calibrated_graphs() const {
  return {indicator_graph(pos_max())};
}

nlohmann::json IndicatorTwoPieceField::parameters() const {
  return {{"n", dimension()}, {"beta", beta()}, {"gamma", gamma_}, {"normal_extension", "e_r"}};
}

IndicatorTwoPieceField build_field_indicator_two_piece(int n, double beta, double gamma,
                                                       double r_max, const HypothesisScan& scan) {
  const auto margin = indicator_monotonicity_margin(Dimension{n}, beta, gamma,
                                                    std::max(scan.r_max, r_max), scan.samples);
  if (margin.margin < 0.0) {
    throw HypothesisViolation("(beta^2 - beta (n-1)/r) delta(r)^2 > gamma^2 at r = " +
                                  format_number(margin.argmin) + " (margin " +
                                  format_number(margin.margin) + ")",
                              margin.argmin);
  }
  return IndicatorTwoPieceField(n, beta, gamma, r_max);
}

// ---------------------------------------------------------------------------
// Euler-Lagrange profile around the unit ball

BallHarmonicField::BallHarmonicField(int n, double beta, double gamma, double R, double r_max)
    : PiecewiseField("ball-harmonic", Geometry::exterior, n, beta, gamma * gamma, 1.0, r_max, 1.0),
      gamma_(gamma),
      R_(R),
      delta_R_(delta_robin(Dimension{n}, beta, R)) {
  if (!(R > 1.0)) throw DomainError("BallHarmonicField: requires R > 1");
  if (!(r_max > R)) throw DomainError("BallHarmonicField: requires r_max > R");
}

double BallHarmonicField::rho_at(double r) const {
  return rho_closed(Dimension{dimension()}, beta(), R_, r);
}

std::vector<std::string> BallHarmonicField::region_names() const {
  return {"r < R, t <= delta(R)", "r < R, delta(R) < t <= rho(r)", "r < R, rho(r) < t <= u(r)",
          "r < R, t > u(r)",      "r >= R, t <= delta(r)",         "r >= R, t > delta(r)"};
}

int BallHarmonicField::region(double r, double t) const {
  if (r >= R_) return t <= delta_robin(Dimension{dimension()}, beta(), r) ? 4 : 5;
  if (t <= delta_R_) return 0;
  if (t <= rho_at(r)) return 1;
  if (t <= u_radial(Dimension{dimension()}, beta(), R_, r).value) return 2;
  return 3;
}

FieldValue BallHarmonicField::eval_region(int region, double r, double t) const {
  const int n = dimension();
  const double nm1 = n - 1.0;
  const double b = beta();
  const double d = delta_R_;
  // du/dr and u continued from [1, R] by their closed forms.
  const double flux = b * d * std::pow(R_, nm1);
  const double slope = -flux * std::pow(r, -nm1);
  switch (region) {
    case 0:
      return {-2.0 * b * t, nm1 * b * t * t / r};
    case 1:
      return {-2.0 * b * d, nm1 * b * d * (2.0 * t - d) / r};
    case 2:
      return {2.0 * slope, slope * slope - gamma_ * gamma_};
    case 3: {
      const double u = 1.0 - flux * radial_potential(Dimension{n}, r);
      const double w = fraction_above(t, u);
      return {2.0 * slope * w, slope * slope * w * w - gamma_ * gamma_};
    }
    case 4:
      return exterior_piece(n, b, r, t, true);
    default:
      return exterior_piece(n, b, r, t, false);
  }
}

double BallHarmonicField::antiderivative(double r, double t) const {
  const int n = dimension();
  const double b = beta();
  if (r >= R_) return exterior_antiderivative(n, b, r, t);
  const double d = delta_R_;
  if (t <= d) return -b * t * t;
  double psi = -b * d * d;
  const double rh = rho_at(r);
  if (t <= rh) return psi - 2.0 * b * d * (t - d);
  psi -= 2.0 * b * d * (rh - d);
  const auto u = u_radial(Dimension{n}, b, R_, r);
  const double slope = -u.gradient_magnitude;
  if (t <= u.value) return psi + 2.0 * slope * (t - rh);
  psi += 2.0 * slope * (u.value - rh);
  const double w = fraction_above(t, u.value);
  return psi + slope * (1.0 - u.value) * (1.0 - w * w);
}

std::vector<double> BallHarmonicField::t_breaks(double r) const {
  if (r >= R_) return {delta_robin(Dimension{dimension()}, beta(), r)};
  return {delta_R_, rho_at(r), u_radial(Dimension{dimension()}, beta(), R_, r).value};
}

std::vector<GraphInterface> BallHarmonicField::graph_interfaces() const {
  const int n = dimension();
  const double b = beta(), R = R_, d = delta_R_;
  return {
      {"t = delta(R)", 0, 1, 1.0, R, [d](double) { return d; }},
      {"t = rho(r)", 1, 2, 1.0, R,
       [n, b, R](double r) { return rho_closed(Dimension{n}, b, R, r); }},
      {"t = u(r)", 2, 3, 1.0, R,
       [n, b, R](double r) { return u_radial(Dimension{n}, b, R, std::min(r, R)).value; }},
      {"t = delta(r)", 4, 5, R, pos_max(),
       [n, b](double r) { return delta_robin(Dimension{n}, b, r); }},
  };
}

std::vector<SphereInterface> BallHarmonicField::sphere_interfaces() const {
  return {{"r = R", R_}};
}

std::vector<CalibratedGraph> BallHarmonicField::calibrated_graphs() const {
  const int n = dimension();
  const double b = beta(), R = R_;
  CalibratedGraph g;
  g.name = "Euler-Lagrange profile";
  g.segments.push_back({1.0, R, [n, b, R](double r) { return u_radial(Dimension{n}, b, R, r).value; },
                        [n, b, R](double r) { return u_radial_slope(Dimension{n}, b, R, r); }});
  g.segments.push_back({R, pos_max(), [](double) { return 0.0; }, [](double) { return 0.0; }});
  g.jumps.push_back({R, 0.0, delta_R_, -1.0});
  return {g};
}

nlohmann::json BallHarmonicField::parameters() const {
  return {{"n", dimension()},
          {"beta", beta()},
          {"gamma", gamma_},
          {"R", R_},
          {"delta_R", delta_R_},
          {"rho_at_1", rho_at(1.0)},
          {"euler_lagrange_residual",
           gamma_ * gamma_ - euler_lagrange_bracket(Dimension{dimension()}, beta(), R_)}};
}

std::optional<double> euler_lagrange_gamma(int n, double beta, double R) {
  const double b = euler_lagrange_bracket(Dimension{n}, beta, R);
  if (!(b > 0.0)) return std::nullopt;
  return std::sqrt(b);
}

std::unique_ptr<PiecewiseField> build_field_ball_harmonic(int n, double beta, double gamma,
                                                          double R,
                                                          const BallHarmonicOptions& opts) {
  const Dimension dim{n};
  if (!(beta > 0.0)) throw DomainError("build_field_ball_harmonic: beta must be positive");
  if (!(R >= 1.0)) throw DomainError("build_field_ball_harmonic: requires R >= 1");
  if (opts.require_beta_bound && beta < n - 0.5) {
    throw HypothesisViolation("beta < n - 1/2: " + format_number(beta) + " < " +
                              format_number(n - 0.5));
  }
  const double residual = gamma * gamma - euler_lagrange_bracket(dim, beta, R);
  if (std::abs(residual) > opts.el_tolerance) {
    throw HypothesisViolation("R does not solve the Euler-Lagrange equation (residual " +
                                  format_number(residual) + ")",
                              R);
  }
  if (R == 1.0) {
    const double r_max = opts.r_max > 0.0 ? opts.r_max : 4.0;
    return std::make_unique<IndicatorTwoPieceField>(
        build_field_indicator_two_piece(n, beta, gamma, r_max, opts.scan));
  }
  const double r_max = opts.r_max > 0.0 ? opts.r_max : std::max(2.0 * R, R + 1.0);
  return std::make_unique<BallHarmonicField>(n, beta, gamma, R, r_max);
}

}  // namespace calx
