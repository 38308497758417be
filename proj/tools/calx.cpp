// calx: constructions, verification and oracles from the command line.
//
// Exit codes: 0 certified / success, 1 hypothesis or axiom violation,
// 2 usage error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "calx/energy.hpp"
#include "calx/fields.hpp"
#include "calx/oracle.hpp"
#include "calx/parallel.hpp"
#include "calx/verifier.hpp"
#include "json.hpp"

namespace {

using namespace calx;
using nlohmann::json;

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  int n = 2;
  double beta = 1.0;
  double gamma = 0.0;
  double m = 0.0;
  double M = 1.0;
  double R = 0.0;
  double rmax = 0.0;
  double sup_grad = 0.0;
  std::size_t samples = 1000;
  std::size_t scan_samples = 100000;
  std::size_t r_steps = 200;
  std::size_t delta_steps = 200;
  std::size_t resolution = 1000;
  int max_jumps = 2;
  std::string theorem;
  std::string betas;
  std::string gammas;
  std::string out;
  std::string sidecar;
  std::string format = "text";
  bool allow_unproven = false;
  bool run_oracle = false;
  VerifyConfig verify;
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw UsageError("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void write_json_file(const std::string& path, const json& j) {
  std::ofstream f(path);
  if (!f) throw UsageError("cannot open output file " + path);
  f << j.dump(2) << "\n";
}

// "lo:hi:count" or a comma separated list.
std::vector<double> parse_grid(const std::string& spec, const char* what) {
  if (spec.empty()) throw UsageError(std::string(what) + ": empty grid");
  std::vector<double> out;
  try {
    if (spec.find(':') != std::string::npos) {
      std::istringstream is(spec);
      std::string lo, hi, count;
      std::getline(is, lo, ':');
      std::getline(is, hi, ':');
      std::getline(is, count);
      const long k = std::stol(count);
      if (k < 1) throw UsageError(std::string(what) + ": count must be >= 1");
      out = linspace(std::stod(lo), std::stod(hi), static_cast<std::size_t>(k));
    } else {
      std::istringstream is(spec);
      for (std::string item; std::getline(is, item, ',');) out.push_back(std::stod(item));
    }
  } catch (const std::logic_error&) {
    throw UsageError(std::string(what) + ": cannot parse grid '" + spec + "'");
  }
  for (double v : out) {
    if (!(v > 0.0) || !std::isfinite(v)) throw UsageError(std::string(what) + ": values must be positive");
  }
  return out;
}

// ---------------------------------------------------------------------------

int cmd_energy_curve(const Options& o) {
  const Dimension n{o.n};
  const double rmax = o.rmax > 0.0 ? o.rmax : 10.0;
  if (!(rmax > 1.0)) throw UsageError("--rmax must exceed 1");
  if (o.samples < 2) throw UsageError("--samples must be >= 2");

  Output out(o.out);
  auto& os = out.stream();
  os << "R,E,dE_dR\n";
  double min_slope = std::numeric_limits<double>::infinity();
  for (double R : linspace(1.0, rmax, o.samples)) {
    const double slope = dE_dR(n, o.beta, o.gamma, R);
    min_slope = std::min(min_slope, slope);
    os << num(R) << ',' << num(energy_radial_optimal(n, o.beta, o.gamma, R)) << ',' << num(slope) << '\n';
  }

  const auto roots = critical_radii(n, o.beta, o.gamma, rmax, {o.scan_samples, 1e-9});
  json side = {{"n", o.n},
               {"beta", o.beta},
               {"gamma", o.gamma},
               {"rmax", rmax},
               {"samples", o.samples},
               {"critical_radii", roots},
               {"min_dE_dR", min_slope},
               {"dE_dR_nonnegative", min_slope >= 0.0}};
  std::string path = o.sidecar;
  if (path.empty() && !o.out.empty()) path = o.out + ".json";
  if (path.empty()) {
    std::cerr << side.dump() << "\n";
  } else {
    write_json_file(path, side);
  }
  return kOk;
}

std::unique_ptr<PiecewiseField> build_field(const Options& o, const CLI::App& sub, json& notes) {
  const auto given = [&](const char* flag) { return sub.count(flag) > 0; };
  const double r_max = o.rmax > 0.0 ? o.rmax : 4.0;
  if (o.theorem == "harmonic") {
    if (!(o.m >= 0.0 && o.m <= o.M && o.M > 0.0)) throw UsageError("harmonic: requires 0 <= m <= M, M > 0");
    const double sup = given("--sup-grad") ? o.sup_grad : (o.M > o.m ? o.M - o.m : 1.0);
    if (!(sup > 0.0)) throw UsageError("--sup-grad must be positive");
    const double length = o.M > o.m ? (o.M - o.m) / sup : 1.0;
    notes["profile"] = {{"kind", "affine"}, {"length", length}, {"sup_gradient", sup}};
    const auto u = HarmonicProfile::affine(0.0, length, o.m, o.M);
    return std::make_unique<HarmonicField>(build_field_harmonic(u, o.m, o.M, o.beta));
  }
  if (!given("--n")) throw UsageError(o.theorem + ": --n is required");
  if (o.theorem == "indicator-const") {
    if (!given("--gamma")) throw UsageError("indicator-const: --gamma is required");
    return std::make_unique<IndicatorConstField>(build_field_indicator_const(o.n, o.beta, o.gamma, r_max));
  }
  if (o.theorem == "indicator-two-piece") {
    if (!given("--gamma")) throw UsageError("indicator-two-piece: --gamma is required");
    const HypothesisScan scan{std::max(100.0, r_max), o.scan_samples};
    return std::make_unique<IndicatorTwoPieceField>(
        build_field_indicator_two_piece(o.n, o.beta, o.gamma, r_max, scan));
  }
  // ball-harmonic
  if (!given("--R")) throw UsageError("ball-harmonic: --R is required");
  double gamma = o.gamma;
  if (!given("--gamma")) {
    const auto g = euler_lagrange_gamma(o.n, o.beta, o.R);
    if (!g) throw HypothesisViolation("no positive gamma solves the Euler-Lagrange equation at R = " + num(o.R), o.R);
    gamma = *g;
    notes["gamma_from_euler_lagrange"] = gamma;
  }
  BallHarmonicOptions opts;
  opts.require_beta_bound = !o.allow_unproven;
  opts.r_max = o.rmax;
  opts.scan = {std::max(100.0, r_max), o.scan_samples};
  return build_field_ball_harmonic(o.n, o.beta, gamma, o.R, opts);
}

// Brute-force search over the competitor family; true when it agrees with
// the calibrated candidate.
bool run_oracle(const Options& o, const PiecewiseField& field, const json& notes, json& result) {
  constexpr double slack = 1e-6;
  if (o.theorem == "harmonic") {
    const double length = notes["profile"]["length"].get<double>();
    const double scale = o.M;
    const JumpSearchSpace space{o.resolution, o.max_jumps};
    const auto best = oracle_1d_best(o.m / scale, 1.0, o.beta * length, space);
    const double candidate = best.affine_energy;
    result = {{"family", "one-dimensional jumps"},
              {"candidate_energy", candidate * scale * scale / length},
              {"best_energy", best.energy.total * scale * scale / length},
              {"best_jumps", best.jumps}};
    return best.energy.total >= candidate - slack;
  }
  const int n = field.dimension();
  const double gamma = std::sqrt(field.volume_coefficient());
  double candidate = energy_radial_general({n, o.beta, gamma, 1.0, 1.0}).total;
  double r_hi = std::max(4.0, field.pos_max());
  if (o.theorem == "ball-harmonic" && o.R > 1.0) {
    candidate = energy_radial_optimal(Dimension{n}, o.beta, gamma, o.R);
    r_hi = std::max(r_hi, 2.0 * o.R);
  }
  const auto sweep = oracle_radial_sweep(n, o.beta, gamma, linspace(1.0, r_hi, o.r_steps),
                                         linspace(1.0 / o.delta_steps, 1.0, o.delta_steps));
  result = {{"family", "radial profiles"},
            {"candidate_energy", candidate},
            {"best_energy", sweep.best.energy.total},
            {"best_R", sweep.best.R},
            {"best_delta", sweep.best.delta}};
  return sweep.best.energy.total >= candidate - slack;
}

int cmd_check(const Options& o, const CLI::App& sub) {
  json notes = json::object();
  std::unique_ptr<PiecewiseField> field;
  VerificationReport report;
  try {
    field = build_field(o, sub, notes);
    report = verify_all(*field, o.verify);
  } catch (const HypothesisViolation& e) {
    report = VerificationReport::construction_failed(o.theorem, e.what());
  }

  json oracle = nullptr;
  bool oracle_ok = true;
  if (o.run_oracle && field) oracle_ok = run_oracle(o, *field, notes, oracle);

  json doc = report.to_json();
  doc["theorem"] = o.theorem;
  if (!notes.empty()) doc["notes"] = notes;
  if (!oracle.is_null()) {
    oracle["consistent"] = oracle_ok;
    doc["oracle"] = oracle;
  }
  if (!o.out.empty()) write_json_file(o.out, doc);

  if (o.format == "json") {
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << report.summary_table();
    if (!oracle.is_null()) {
      std::cout << "oracle: candidate " << num(oracle["candidate_energy"].get<double>()) << ", best found "
                << num(oracle["best_energy"].get<double>()) << (oracle_ok ? " (consistent)" : " (CHEAPER COMPETITOR)")
                << "\n";
    }
  }
  if (!report.hypothesis_error.empty()) std::cerr << "hypothesis violated: " << report.hypothesis_error << "\n";
  return report.passed() && oracle_ok ? kOk : kViolation;
}

int cmd_describe(const Options& o, const CLI::App& sub) {
  json notes = json::object();
  try {
    const auto field = build_field(o, sub, notes);
    json d = field->describe();
    if (!notes.empty()) d["notes"] = notes;
    Output out(o.out);
    out.stream() << d.dump(2) << "\n";
    return kOk;
  } catch (const HypothesisViolation& e) {
    std::cerr << "hypothesis violated: " << e.what() << "\n";
    return kViolation;
  }
}

const char* classify(int n, double beta, double gamma, double rmax, std::size_t samples) {
  const Dimension dim{n};
  if (beta <= gamma) return "indicator-by-beta<=gamma";
  if (indicator_monotonicity_margin(dim, beta, gamma, rmax, samples).margin >= 0.0) {
    return "indicator-by-monotonicity";
  }
  if (beta >= n - 0.5 && !critical_radii(dim, beta, gamma, rmax, {samples, 1e-9}).empty()) {
    return "harmonic-certified";
  }
  return "undetermined";
}

int cmd_phase_diagram(const Options& o) {
  static_cast<void>(Dimension{o.n});
  const auto betas = parse_grid(o.betas, "--betas");
  const auto gammas = parse_grid(o.gammas, "--gammas");
  const double rmax = o.rmax > 0.0 ? o.rmax : 100.0;
  if (!(rmax > 1.0)) throw UsageError("--rmax must exceed 1");

  std::vector<const char*> regime(betas.size() * gammas.size());
  parallel_for(regime.size(), [&](std::size_t k) {
    regime[k] = classify(o.n, betas[k / gammas.size()], gammas[k % gammas.size()], rmax, o.scan_samples);
  });
  Output out(o.out);
  auto& os = out.stream();
  os << "beta,gamma,regime\n";
  for (std::size_t k = 0; k < regime.size(); ++k) {
    os << num(betas[k / gammas.size()]) << ',' << num(gammas[k % gammas.size()]) << ',' << regime[k] << '\n';
  }
  return kOk;
}

int cmd_radial_sweep(const Options& o) {
  const double rmax = o.rmax > 0.0 ? o.rmax : 4.0;
  if (!(rmax > 1.0)) throw UsageError("--rmax must exceed 1");
  if (o.r_steps < 2 || o.delta_steps < 1) throw UsageError("--r-steps >= 2 and --delta-steps >= 1 required");
  const auto sweep = oracle_radial_sweep(o.n, o.beta, o.gamma, linspace(1.0, rmax, o.r_steps),
                                         linspace(1.0 / o.delta_steps, 1.0, o.delta_steps));
  Output out(o.out);
  write_sweep_csv(out.stream(), sweep);
  const json best = {{"R", sweep.best.R},
                     {"delta", sweep.best.delta},
                     {"total", sweep.best.energy.total},
                     {"indicator_wins", sweep.indicator_wins()}};
  if (o.sidecar.empty()) {
    std::cerr << best.dump() << "\n";
  } else {
    write_json_file(o.sidecar, best);
  }
  return kOk;
}

int cmd_oracle_1d(const Options& o) {
  const auto r = oracle_1d_best(o.m, o.M, o.beta, {o.resolution, o.max_jumps});
  auto pieces = json::array();
  for (const auto& p : r.best.pieces()) {
    pieces.push_back({{"x_begin", p.x_begin}, {"x_end", p.x_end}, {"slope", p.slope}, {"intercept", p.intercept}});
  }
  auto jumps = json::array();
  for (const auto& j : r.best.jumps()) jumps.push_back({{"x", j.x}, {"minus", j.minus}, {"plus", j.plus}});
  const json doc = {{"m", o.m},
                    {"M", o.M},
                    {"beta", o.beta},
                    {"resolution", r.resolution},
                    {"jumps", r.jumps},
                    {"energy",
                     {{"dirichlet", r.energy.dirichlet}, {"jump", r.energy.jump}, {"total", r.energy.total}}},
                    {"affine_energy", r.affine_energy},
                    {"best_one_jump", std::isfinite(r.best_one_jump) ? json(r.best_one_jump) : json()},
                    {"best_two_jump", std::isfinite(r.best_two_jump) ? json(r.best_two_jump) : json()},
                    {"pieces", pieces},
                    {"jump_set", jumps}};
  Output out(o.out);
  out.stream() << doc.dump(2) << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------

bool flag_given(const std::vector<std::string>& args, const std::string& flag) {
  for (const auto& a : args) {
    if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
  }
  return false;
}

// Values from a --config JSON file are appended as flags unless the same
// flag is already on the command line.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read config file " + path);
  json cfg;
  try {
    f >> cfg;
  } catch (const json::exception& e) {
    throw UsageError("config file " + path + ": " + e.what());
  }
  if (!cfg.is_object()) throw UsageError("config file " + path + ": expected a JSON object");
  for (const auto& [key, value] : cfg.items()) {
    const std::string flag = "--" + key;
    if (flag_given(args, flag)) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
    } else if (value.is_number()) {
      args.push_back(flag);
      args.push_back(value.is_number_float() ? num(value.get<double>()) : value.dump());
    } else if (value.is_string()) {
      args.push_back(flag);
      args.push_back(value.get<std::string>());
    } else {
      throw UsageError("config file " + path + ": unsupported value for '" + key + "'");
    }
  }
  return args;
}

void add_problem_flags(CLI::App* sub, Options& o) {
  sub->add_option("--n", o.n, "spatial dimension")->check(CLI::Range(1, 10));
  sub->add_option("--beta", o.beta, "jump coefficient beta > 0")->check(CLI::PositiveNumber);
  sub->add_option("--gamma", o.gamma, "volume coefficient gamma >= 0")->check(CLI::NonNegativeNumber);
}

void add_verify_flags(CLI::App* sub, Options& o) {
  sub->add_option("--grid", o.verify.pos_nodes, "spatial grid nodes")->check(CLI::Range(16, 100000));
  sub->add_option("--t-grid", o.verify.t_nodes, "t grid nodes")->check(CLI::Range(16, 100000));
  sub->add_option("--pairs", o.verify.pair_nodes, "t nodes for the (r, s) pair scan")->check(CLI::Range(16, 100000));
  sub->add_option("--tol-a", o.verify.tol_a)->check(CLI::PositiveNumber);
  sub->add_option("--tol-b", o.verify.tol_b)->check(CLI::PositiveNumber);
  sub->add_option("--tol-graph", o.verify.tol_graph)->check(CLI::PositiveNumber);
  sub->add_option("--tol-div", o.verify.tol_div)->check(CLI::PositiveNumber);
  sub->add_option("--tol-flux", o.verify.tol_flux)->check(CLI::PositiveNumber);
}

void add_field_flags(CLI::App* sub, Options& o) {
  sub->add_option("theorem", o.theorem, "harmonic | indicator-const | indicator-two-piece | ball-harmonic")
      ->required()
      ->check(CLI::IsMember({"harmonic", "indicator-const", "indicator-two-piece", "ball-harmonic"}));
  add_problem_flags(sub, o);
  sub->add_option("--m", o.m, "lower Dirichlet value")->check(CLI::NonNegativeNumber);
  sub->add_option("--M", o.M, "upper Dirichlet value")->check(CLI::NonNegativeNumber);
  sub->add_option("--sup-grad", o.sup_grad, "sup of |grad u| for the harmonic profile");
  sub->add_option("--R", o.R, "outer radius of the harmonic profile")->check(CLI::Range(1.0, 1e6));
  sub->add_option("--rmax", o.rmax, "radial extent of the verification domain");
  sub->add_option("--scan-samples", o.scan_samples, "samples of the hypothesis scan")->check(CLI::Range(1, 100000000));
  sub->add_flag("--allow-unproven", o.allow_unproven, "build the ball field for beta < n - 1/2");
  sub->add_option("--out", o.out, "write the JSON document here");
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"calx: calibration certificates for free-discontinuity problems"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "JSON file with flag values; command-line flags win");

  auto* curve = app.add_subcommand("energy-curve", "CSV of R, E(R), E'(R) and critical radii");
  add_problem_flags(curve, o);
  curve->add_option("--rmax", o.rmax, "largest radius (default 10)");
  curve->add_option("--samples", o.samples, "curve samples")->check(CLI::Range(2, 100000000));
  curve->add_option("--scan-samples", o.scan_samples, "root scan samples")->check(CLI::Range(1, 100000000));
  curve->add_option("--out", o.out, "CSV path (default stdout)");
  curve->add_option("--sidecar", o.sidecar, "JSON path for the critical radii (default <out>.json)");

  auto* check = app.add_subcommand("check", "build a calibration and verify the axioms");
  add_field_flags(check, o);
  add_verify_flags(check, o);
  check->add_flag("--oracle", o.run_oracle, "also run the brute-force oracle");
  check->add_option("--resolution", o.resolution, "oracle grid resolution")->check(CLI::Range(1, 100000));
  check->add_option("--r-steps", o.r_steps)->check(CLI::Range(2, 100000));
  check->add_option("--delta-steps", o.delta_steps)->check(CLI::Range(1, 100000));
  check->add_option("--format", o.format, "text | json")->check(CLI::IsMember({"text", "json"}));

  auto* describe = app.add_subcommand("describe", "JSON description of a calibration field");
  add_field_flags(describe, o);

  auto* phase = app.add_subcommand("phase-diagram", "classify (beta, gamma) pairs");
  phase->add_option("--n", o.n, "spatial dimension")->check(CLI::Range(1, 10));
  phase->add_option("--betas", o.betas, "lo:hi:count or comma list")->required();
  phase->add_option("--gammas", o.gammas, "lo:hi:count or comma list")->required();
  phase->add_option("--rmax", o.rmax, "scan extent (default 100)");
  phase->add_option("--samples", o.scan_samples, "scan samples per pair")->check(CLI::Range(1, 100000000));
  phase->add_option("--out", o.out, "CSV path (default stdout)");

  auto* sweep = app.add_subcommand("radial-sweep", "energy surface of the radial family");
  add_problem_flags(sweep, o);
  sweep->add_option("--rmax", o.rmax, "largest radius (default 4)");
  sweep->add_option("--r-steps", o.r_steps)->check(CLI::Range(2, 100000));
  sweep->add_option("--delta-steps", o.delta_steps)->check(CLI::Range(1, 100000));
  sweep->add_option("--out", o.out, "CSV path (default stdout)");
  sweep->add_option("--sidecar", o.sidecar, "JSON path for the minimizer (default stderr)");

  auto* oracle = app.add_subcommand("oracle-1d", "exhaustive jump search on [0, 1]");
  oracle->add_option("--m", o.m)->check(CLI::Range(0.0, 1.0));
  oracle->add_option("--M", o.M)->check(CLI::Range(0.0, 1.0));
  oracle->add_option("--beta", o.beta)->check(CLI::PositiveNumber);
  oracle->add_option("--resolution", o.resolution)->check(CLI::Range(1, 100000));
  oracle->add_option("--max-jumps", o.max_jumps)->check(CLI::Range(0, 2));
  oracle->add_option("--out", o.out, "JSON path (default stdout)");

  try {
    std::vector<std::string> args(argv, argv + argc);
    args = expand_config(std::move(args));
    std::vector<const char*> cargs;
    for (const auto& a : args) cargs.push_back(a.c_str());
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*curve) return cmd_energy_curve(o);
    if (*check) return cmd_check(o, *check);
    if (*describe) return cmd_describe(o, *describe);
    if (*phase) return cmd_phase_diagram(o);
    if (*sweep) return cmd_radial_sweep(o);
    if (*oracle) return cmd_oracle_1d(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const HypothesisViolation& e) {
    std::cerr << "hypothesis violated: " << e.what() << "\n";
    return kViolation;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kViolation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
