#include "calx/verifier.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "calx/parallel.hpp"

namespace calx {

namespace {

// Per-slice accumulator, merged in slice order so reports are deterministic.
struct Tally {
  std::size_t checked = 0;
  std::size_t count = 0;
  double worst = std::numeric_limits<double>::infinity();
  std::vector<Violation> kept;

  void record(double slack, double tol, std::size_t cap, const char* check, double pos, double t,
              double s = 0.0) {
    ++checked;
    worst = std::min(worst, slack);
    if (slack < -tol || !std::isfinite(slack)) {
      ++count;
      if (kept.size() < cap) kept.push_back({check, pos, t, s, -slack, tol});
    }
  }
};

void merge(AxiomResult& out, std::vector<Tally>& parts, std::size_t cap) {
  for (auto& p : parts) {
    out.checked += p.checked;
    out.violation_count += p.count;
    out.worst_margin = std::min(out.worst_margin, p.worst);
    for (auto& v : p.kept) {
      if (out.violations.size() < cap) out.violations.push_back(std::move(v));
    }
  }
}

// Ridders' polynomial extrapolation of central differences.
template <class F>
double ridders_derivative(F&& f, double x, double h) {
  constexpr int ntab = 10;
  constexpr double con = 1.4, con2 = con * con, safe = 2.0;
  std::array<std::array<double, ntab>, ntab> a{};
  double hh = h;
  a[0][0] = (f(x + hh) - f(x - hh)) / (2.0 * hh);
  double err = std::numeric_limits<double>::max();
  double ans = a[0][0];
  for (int i = 1; i < ntab; ++i) {
    hh /= con;
    a[0][i] = (f(x + hh) - f(x - hh)) / (2.0 * hh);
    double fac = con2;
    for (int j = 1; j <= i; ++j) {
      a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1.0);
      fac *= con2;
      const double errt = std::max(std::abs(a[j][i] - a[j - 1][i]), std::abs(a[j][i] - a[j - 1][i - 1]));
      if (errt <= err) {
        err = errt;
        ans = a[j][i];
      }
    }
    if (std::abs(a[i][i] - a[i - 1][i - 1]) >= safe * err) break;
  }
  return ans;
}

double volume_term(const PiecewiseField& f, double t) {
  return (t > 0.0 && t <= 1.0) ? f.volume_coefficient() : 0.0;
}

std::string fmt(double v, int precision = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

}  // namespace

const char* axiom_id(Axiom a) {
  switch (a) {
    case Axiom::a:
      return "a";
    case Axiom::b:
      return "b";
    case Axiom::a_prime:
      return "a_prime";
    case Axiom::b_prime:
      return "b_prime";
    case Axiom::divergence_flux:
      return "divergence_flux";
  }
  return "?";
}

std::vector<Axiom> all_axioms() {
  return {Axiom::a, Axiom::b, Axiom::a_prime, Axiom::b_prime, Axiom::divergence_flux};
}

const char* status_name(Status s) {
  switch (s) {
    case Status::pass:
      return "pass";
    case Status::fail:
      return "fail";
    case Status::skipped:
      return "skipped";
  }
  return "?";
}

void VerifyConfig::validate() const {
  if (pos_nodes < 16 || t_nodes < 16 || pair_nodes < 16 || graph_samples < 16) {
    throw DomainError("VerifyConfig: grid resolutions must be >= 16");
  }
  if (!(h > 0.0)) throw DomainError("VerifyConfig: step must be positive");
  for (double tol : {tol_a, tol_b, tol_graph, tol_div, tol_flux}) {
    if (!(tol > 0.0)) throw DomainError("VerifyConfig: tolerances must be positive");
  }
}

bool VerifyConfig::runs(Axiom a) const {
  return std::find(axioms.begin(), axioms.end(), a) != axioms.end();
}

double grid_point(double lo, double hi, std::size_t i, std::size_t count) {
  if (i + 1 == count) return hi;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
}

void AxiomResult::finish() {
  status = violation_count == 0 ? Status::pass : Status::fail;
}

// ---------------------------------------------------------------------------

AxiomResult check_condition_a(const PiecewiseField& field, const VerifyConfig& cfg) {
  cfg.validate();
  AxiomResult out;
  out.axiom = Axiom::a;
  std::vector<Tally> parts(cfg.pos_nodes);
  parallel_for(cfg.pos_nodes, [&](std::size_t i) {
    const double pos = grid_point(field.pos_min(), field.pos_max(), i, cfg.pos_nodes);
    for (std::size_t j = 0; j < cfg.t_nodes; ++j) {
      const double t = grid_point(0.0, field.t_max(), j, cfg.t_nodes);
      const FieldValue v = field.eval(pos, t);
      const double residual = v.t - 0.25 * v.x * v.x + volume_term(field, t);
      parts[i].record(residual, cfg.tol_a, cfg.max_recorded, "a", pos, t);
    }
  });
  merge(out, parts, cfg.max_recorded);
  out.details = {{"grid", {cfg.pos_nodes, cfg.t_nodes}}};
  out.finish();
  return out;
}

AxiomResult check_condition_b(const PiecewiseField& field, const VerifyConfig& cfg) {
  cfg.validate();
  AxiomResult out;
  out.axiom = Axiom::b;
  const double beta = field.beta();
  const bool reduced = field.points_inward();
  std::vector<double> ts(cfg.pair_nodes);
  for (std::size_t j = 0; j < cfg.pair_nodes; ++j) ts[j] = grid_point(0.0, field.t_max(), j, cfg.pair_nodes);

  std::vector<Tally> parts(cfg.pos_nodes);
  parallel_for(cfg.pos_nodes, [&](std::size_t i) {
    const double pos = grid_point(field.pos_min(), field.pos_max(), i, cfg.pos_nodes);
    std::vector<double> psi(cfg.pair_nodes);
    for (std::size_t j = 0; j < cfg.pair_nodes; ++j) psi[j] = field.antiderivative(pos, ts[j]);
    auto& tally = parts[i];
    for (std::size_t j = 0; j < cfg.pair_nodes; ++j) {
      for (std::size_t k = j; k < cfg.pair_nodes; ++k) {
        const double slack = beta * (ts[j] * ts[j] + ts[k] * ts[k]) - std::abs(psi[k] - psi[j]);
        tally.record(slack, cfg.tol_b, cfg.max_recorded, "b", pos, ts[j], ts[k]);
      }
    }
    if (reduced) {
      // phi^x points inward, so int_0^s |phi^x| = -Psi(s).
      for (std::size_t k = 0; k < cfg.pair_nodes; ++k) {
        tally.record(beta * ts[k] * ts[k] + psi[k], cfg.tol_b, cfg.max_recorded, "b-reduced", pos,
                     0.0, ts[k]);
      }
    }
  });
  merge(out, parts, cfg.max_recorded);
  out.details = {{"pos_nodes", cfg.pos_nodes}, {"pair_nodes", cfg.pair_nodes}, {"reduced_check", reduced}};
  out.finish();
  return out;
}

AxiomResult check_graph_conditions(const PiecewiseField& field,
                                   const std::vector<CalibratedGraph>& graphs,
                                   const VerifyConfig& cfg) {
  cfg.validate();
  AxiomResult out;
  out.axiom = Axiom::a_prime;
  Tally tally;
  for (const auto& g : graphs) {
    for (const auto& seg : g.segments) {
      const std::size_t n = cfg.graph_samples;
      for (std::size_t i = 0; i < n; ++i) {
        const double pos = seg.pos_begin + (seg.pos_end - seg.pos_begin) * (i + 0.5) / static_cast<double>(n);
        const double u = seg.value(pos);
        const double du = seg.slope(pos);
        const FieldValue v = field.eval(pos, u);
        tally.record(-std::abs(v.x - 2.0 * du), cfg.tol_graph, cfg.max_recorded, "a'-x", pos, u);
        tally.record(-std::abs(v.t - (du * du - volume_term(field, u))), cfg.tol_graph,
                     cfg.max_recorded, "a'-t", pos, u);
      }
    }
  }
  std::vector<Tally> parts{std::move(tally)};
  merge(out, parts, cfg.max_recorded);
  out.details = {{"graphs", graphs.size()}, {"samples_per_segment", cfg.graph_samples}};
  out.finish();
  return out;
}

AxiomResult check_jump_conditions(const PiecewiseField& field,
                                  const std::vector<CalibratedGraph>& graphs,
                                  const VerifyConfig& cfg) {
  cfg.validate();
  AxiomResult out;
  out.axiom = Axiom::b_prime;
  Tally tally;
  auto jumps = nlohmann::json::array();
  for (const auto& g : graphs) {
    for (const auto& j : g.jumps) {
      const double flux = field.antiderivative(j.pos, j.upper) - field.antiderivative(j.pos, j.lower);
      const double expected = field.beta() * (j.lower * j.lower + j.upper * j.upper) * j.normal_sign;
      tally.record(-std::abs(flux - expected), cfg.tol_graph, cfg.max_recorded, "b'", j.pos, j.lower,
                   j.upper);
      jumps.push_back({{"graph", g.name},
                       {"pos", j.pos},
                       {"integral", flux},
                       {"quadrature", quadrature_integral(field, j.pos, j.lower, j.upper)},
                       {"expected", expected}});
    }
  }
  std::vector<Tally> parts{std::move(tally)};
  merge(out, parts, cfg.max_recorded);
  out.details = {{"jumps", jumps}};
  if (out.checked == 0) {
    out.status = Status::pass;
    return out;
  }
  out.finish();
  return out;
}

double field_divergence(const PiecewiseField& field, int region, double pos, double t, double h) {
  const double dt = ridders_derivative([&](double s) { return field.eval_region(region, pos, s).t; }, t, h);
  const double dx = ridders_derivative([&](double p) { return field.eval_region(region, p, t).x; }, pos, h);
  double div = dt + dx;
  if (field.geometry() == Geometry::exterior && field.dimension() > 1) {
    div += (field.dimension() - 1.0) * field.eval_region(region, pos, t).x / pos;
  }
  return div;
}

AxiomResult check_divergence_and_flux(const PiecewiseField& field, const VerifyConfig& cfg) {
  cfg.validate();
  AxiomResult out;
  out.axiom = Axiom::divergence_flux;
  const double h = cfg.h;
  const double collar = 2.0 * h;
  const auto spheres = field.sphere_interfaces();

  // Interior divergence and boundedness on the node grid.
  std::vector<Tally> parts(cfg.pos_nodes);
  std::vector<std::size_t> skipped(cfg.pos_nodes, 0);
  std::vector<double> max_phi(cfg.pos_nodes, 0.0), max_div(cfg.pos_nodes, 0.0);
  parallel_for(cfg.pos_nodes, [&](std::size_t i) {
    const double pos = grid_point(field.pos_min(), field.pos_max(), i, cfg.pos_nodes);
    const bool near_edge = pos - field.pos_min() < collar || field.pos_max() - pos < collar;
    const bool near_sphere = std::any_of(spheres.begin(), spheres.end(),
                                         [&](const SphereInterface& s) { return std::abs(pos - s.radius) < collar; });
    for (std::size_t j = 0; j < cfg.t_nodes; ++j) {
      const double t = grid_point(0.0, field.t_max(), j, cfg.t_nodes);
      const int k = field.region(pos, t);
      const FieldValue v = field.eval_region(k, pos, t);
      const double mag = std::hypot(v.x, v.t);
      if (!std::isfinite(mag)) {
        parts[i].record(-std::numeric_limits<double>::infinity(), 0.0, cfg.max_recorded, "bounded", pos, t);
        continue;
      }
      max_phi[i] = std::max(max_phi[i], mag);
      bool interior = !near_edge && !near_sphere;
      for (int a = -1; interior && a <= 1; ++a) {
        for (int b = -1; interior && b <= 1; ++b) {
          interior = field.region(pos + a * collar, t + b * collar) == k;
        }
      }
      if (!interior) {
        ++skipped[i];
        continue;
      }
      const double div = field_divergence(field, k, pos, t, h);
      max_div[i] = std::max(max_div[i], std::abs(div));
      parts[i].record(-std::abs(div), cfg.tol_div, cfg.max_recorded, "divergence", pos, t);
    }
  });
  merge(out, parts, cfg.max_recorded);

  // Normal flux across the graph interfaces t = g(pos).
  auto interfaces = nlohmann::json::array();
  for (const auto& iface : field.graph_interfaces()) {
    Tally tally;
    double worst = 0.0;
    const std::size_t n = cfg.pos_nodes;
    for (std::size_t i = 0; i < n; ++i) {
      const double pos = iface.pos_begin + (iface.pos_end - iface.pos_begin) * (i + 0.5) / static_cast<double>(n);
      const double g = iface.height(pos);
      if (g < 0.0 || g > field.t_max()) continue;
      const double step = std::min(h, 0.5 * std::min(pos - iface.pos_begin, iface.pos_end - pos));
      const double dg = ridders_derivative(iface.height, pos, step);
      const FieldValue lo = field.eval_region(iface.below, pos, g);
      const FieldValue hi = field.eval_region(iface.above, pos, g);
      const double residual = std::abs((lo.t - hi.t) - dg * (lo.x - hi.x));
      worst = std::max(worst, residual);
      tally.record(-residual, cfg.tol_flux, cfg.max_recorded, "flux", pos, g);
    }
    interfaces.push_back({{"name", iface.name}, {"type", "graph"}, {"max_residual", worst}});
    std::vector<Tally> one{std::move(tally)};
    merge(out, one, cfg.max_recorded);
  }

  // Spherical interfaces pos = R, normal (e, 0): phi^x must match across.
  for (const auto& sphere : spheres) {
    Tally tally;
    double worst = 0.0;
    constexpr double eps = 1e-9;
    for (std::size_t j = 0; j < cfg.t_nodes; ++j) {
      const double t = grid_point(0.0, field.t_max(), j, cfg.t_nodes);
      const double residual = std::abs(field.eval(sphere.radius - eps, t).x - field.eval(sphere.radius + eps, t).x);
      worst = std::max(worst, residual);
      tally.record(-residual, cfg.tol_flux, cfg.max_recorded, "flux", sphere.radius, t);
    }
    interfaces.push_back({{"name", sphere.name}, {"type", "sphere"}, {"max_residual", worst}});
    std::vector<Tally> one{std::move(tally)};
    merge(out, one, cfg.max_recorded);
  }

  std::size_t skipped_total = 0;
  for (auto s : skipped) skipped_total += s;
  out.details = {{"h", h},
                 {"collar", collar},
                 {"nodes_in_collar", skipped_total},
                 {"max_abs_divergence", *std::max_element(max_div.begin(), max_div.end())},
                 {"max_abs_phi", *std::max_element(max_phi.begin(), max_phi.end())},
                 {"interfaces", interfaces}};
  out.finish();
  return out;
}

double quadrature_integral(const PiecewiseField& field, double pos, double r, double s) {
  if (s < r) return -quadrature_integral(field, pos, s, r);
  std::vector<double> cuts{r};
  for (double b : field.t_breaks(pos)) {
    if (b > r && b < s) cuts.push_back(b);
  }
  cuts.push_back(s);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    if (!(b > a)) continue;
    const int k = field.region(pos, 0.5 * (a + b));
    auto f = [&](double t) { return field.eval_region(k, pos, t).x; };
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, 1e-13);
  }
  return total;
}

// ---------------------------------------------------------------------------

VerificationReport verify_all(const PiecewiseField& field, const VerifyConfig& cfg) {
  cfg.validate();
  VerificationReport report;
  report.field_kind = field.kind();
  report.field = field.describe();
  report.grid = {{"pos_nodes", cfg.pos_nodes},     {"t_nodes", cfg.t_nodes},
                 {"pair_nodes", cfg.pair_nodes},   {"graph_samples", cfg.graph_samples},
                 {"h", cfg.h},                     {"tol_a", cfg.tol_a},
                 {"tol_b", cfg.tol_b},             {"tol_graph", cfg.tol_graph},
                 {"tol_div", cfg.tol_div},         {"tol_flux", cfg.tol_flux}};
  const auto graphs = field.calibrated_graphs();
  for (Axiom a : all_axioms()) {
    AxiomResult r;
    r.axiom = a;
    if (cfg.runs(a)) {
      switch (a) {
        case Axiom::a:
          r = check_condition_a(field, cfg);
          break;
        case Axiom::b:
          r = check_condition_b(field, cfg);
          break;
        case Axiom::a_prime:
          r = check_graph_conditions(field, graphs, cfg);
          break;
        case Axiom::b_prime:
          r = check_jump_conditions(field, graphs, cfg);
          break;
        case Axiom::divergence_flux:
          r = check_divergence_and_flux(field, cfg);
          break;
      }
    }
    report.results.push_back(std::move(r));
  }
  return report;
}

bool VerificationReport::passed() const {
  if (!hypothesis_error.empty()) return false;
  return std::none_of(results.begin(), results.end(),
                      [](const AxiomResult& r) { return r.status == Status::fail; });
}

const AxiomResult* VerificationReport::result(Axiom a) const {
  for (const auto& r : results) {
    if (r.axiom == a) return &r;
  }
  return nullptr;
}

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json j;
  j["field_kind"] = field_kind;
  j["passed"] = passed();
  if (!hypothesis_error.empty()) j["hypothesis_error"] = hypothesis_error;
  j["field"] = field;
  j["grid"] = grid;
  auto axioms = nlohmann::json::object();
  for (const auto& r : results) {
    auto violations = nlohmann::json::array();
    for (const auto& v : r.violations) {
      violations.push_back({{"check", v.check},
                            {"pos", v.pos},
                            {"t", v.t},
                            {"s", v.s},
                            {"residual", v.residual},
                            {"tolerance", v.tolerance}});
    }
    nlohmann::json entry = {{"status", status_name(r.status)},
                            {"checked", r.checked},
                            {"violation_count", r.violation_count},
                            {"violations", violations},
                            {"details", r.details}};
    entry["worst_margin"] = std::isfinite(r.worst_margin) ? nlohmann::json(r.worst_margin) : nlohmann::json();
    axioms[axiom_id(r.axiom)] = entry;
  }
  j["axioms"] = axioms;
  return j;
}

std::string VerificationReport::summary_table() const {
  std::ostringstream os;
  os << "field: " << field_kind << "\n";
  if (!hypothesis_error.empty()) {
    os << "construction impossible: " << hypothesis_error << "\n";
    return os.str();
  }
  char line[160];
  std::snprintf(line, sizeof line, "%-16s %-8s %12s %11s %14s\n", "axiom", "status", "checked",
                "violations", "worst_margin");
  os << line;
  for (const auto& r : results) {
    std::snprintf(line, sizeof line, "%-16s %-8s %12zu %11zu %14s\n", axiom_id(r.axiom),
                  status_name(r.status), r.checked, r.violation_count,
                  std::isfinite(r.worst_margin) ? fmt(r.worst_margin).c_str() : "-");
    os << line;
  }
  for (const auto& r : results) {
    for (const auto& v : r.violations) {
      os << "  " << axiom_id(r.axiom) << " [" << v.check << "] pos=" << fmt(v.pos, 6) << " t=" << fmt(v.t, 6);
      if (r.axiom == Axiom::b || r.axiom == Axiom::b_prime) os << " s=" << fmt(v.s, 6);
      os << " residual=" << fmt(v.residual) << " tol=" << fmt(v.tolerance) << "\n";
    }
  }
  os << (passed() ? "certified" : "not certified") << "\n";
  return os.str();
}

VerificationReport VerificationReport::construction_failed(std::string kind, std::string reason) {
  VerificationReport r;
  r.field_kind = std::move(kind);
  r.hypothesis_error = std::move(reason);
  for (Axiom a : all_axioms()) {
    AxiomResult res;
    res.axiom = a;
    r.results.push_back(std::move(res));
  }
  return r;
}

}  // namespace calx
