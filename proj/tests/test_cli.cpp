#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

fs::path scratch_dir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("calx_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Run calx(const std::string& args) {
  const auto out = scratch_dir() / "stdout.txt";
  const auto err = scratch_dir() / "stderr.txt";
  const std::string cmd = std::string(CALX_BINARY) + " " + args + " >" + out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return {WEXITSTATUS(status), slurp(out), slurp(err)};
}

}  // namespace

TEST_CASE("check exit codes") {
  const auto bad = calx("check harmonic --beta 1 --m 0 --M 1 --sup-grad 1");
  CHECK(bad.code == 1);
  CHECK(bad.err.find("0.75 > 0.25") != std::string::npos);

  CHECK(calx("check indicator-const --n 2 --beta 0.3 --gamma 0.4").code == 0);
  CHECK(calx("check ball-harmonic --n 1 --beta 2 --gamma 0.5 --R 2.5").code == 0);
  CHECK(calx("check harmonic --beta 3 --m 0.8 --M 1 --oracle").code == 0);
  CHECK(calx("check indicator-two-piece --n 2 --beta 1 --gamma 0.4").code == 0);

  const auto hyp = calx("check indicator-two-piece --n 2 --beta 1 --gamma 0.34 --format json");
  CHECK(hyp.code == 1);
  const auto doc = nlohmann::json::parse(hyp.out);
  CHECK(doc["passed"] == false);
  CHECK(doc.contains("hypothesis_error"));

  // beta < n - 1/2 is rejected unless explicitly allowed, and then (b) fails.
  CHECK(calx("check ball-harmonic --n 2 --beta 1.3 --R 1.1").code == 1);
  const auto unproven = calx("check ball-harmonic --n 2 --beta 1.3 --R 1.1 --allow-unproven --format json");
  CHECK(unproven.code == 1);
  CHECK(nlohmann::json::parse(unproven.out)["axioms"]["b"]["status"] == "fail");
}

TEST_CASE("usage errors exit with 2") {
  CHECK(calx("").code == 2);
  CHECK(calx("frobnicate").code == 2);
  CHECK(calx("check").code == 2);
  CHECK(calx("check nonsense --n 2").code == 2);
  CHECK(calx("check indicator-const --beta 0.3 --gamma 0.4").code == 2);
  CHECK(calx("energy-curve --n 2 --beta -1 --gamma 0.3").code == 2);
  CHECK(calx("energy-curve --n 2 --beta 1 --gamma 0.3 --rmax 0.5").code == 2);
  CHECK(calx("phase-diagram --n 2 --betas 1:2 --gammas 0.4").code == 2);
  CHECK(calx("phase-diagram --n 2 --betas x --gammas 0.4").code == 2);
  CHECK(calx("energy-curve --config /nonexistent/calx.json").code == 2);
}

TEST_CASE("energy curve and sidecar") {
  const auto csv = scratch_dir() / "curve.csv";
  const auto r = calx("energy-curve --n 2 --beta 1 --gamma 0.34 --rmax 10 --samples 200 --out " + csv.string());
  REQUIRE(r.code == 0);
  const auto text = slurp(csv);
  CHECK(text.rfind("R,E,dE_dR\n1,", 0) == 0);
  const auto side = nlohmann::json::parse(slurp(csv.string() + ".json"));
  CHECK(side["critical_radii"].size() == 2);

  const auto one = calx("energy-curve --n 1 --beta 2 --gamma 0.5 --samples 10");
  REQUIRE(one.code == 0);
  const auto roots = nlohmann::json::parse(one.err)["critical_radii"];
  REQUIRE(roots.size() == 1);
  CHECK(std::abs(roots[0].get<double>() - 2.5) < 1e-9);

  const auto pos = calx("energy-curve --n 2 --beta 0.3 --gamma 0.4 --samples 50");
  CHECK(nlohmann::json::parse(pos.err)["dE_dR_nonnegative"] == true);

  // Byte-stable output.
  CHECK(calx("energy-curve --n 2 --beta 1 --gamma 0.34 --samples 300").out ==
        calx("energy-curve --n 2 --beta 1 --gamma 0.34 --samples 300").out);
  CHECK(calx("radial-sweep --n 2 --beta 1 --gamma 0.5 --r-steps 20 --delta-steps 20").out ==
        calx("radial-sweep --n 2 --beta 1 --gamma 0.5 --r-steps 20 --delta-steps 20").out);
}

TEST_CASE("config file, flags win") {
  const auto cfg = scratch_dir() / "cfg.json";
  std::ofstream(cfg) << R"({"n": 2, "beta": 1.0, "gamma": 0.34, "samples": 40})";
  const auto from_file = calx("energy-curve --config " + cfg.string());
  REQUIRE(from_file.code == 0);
  CHECK(from_file.out == calx("energy-curve --n 2 --beta 1 --gamma 0.34 --samples 40").out);

  const auto override = calx("energy-curve --config " + cfg.string() + " --gamma 0.5");
  REQUIRE(override.code == 0);
  CHECK(override.out == calx("energy-curve --n 2 --beta 1 --gamma 0.5 --samples 40").out);
}

TEST_CASE("phase diagram regimes") {
  const auto r = calx("phase-diagram --n 2 --betas 0.3,1 --gammas 0.34,0.4 --samples 20000");
  REQUIRE(r.code == 0);
  CHECK(r.out ==
        "beta,gamma,regime\n"
        "0.29999999999999999,0.34000000000000002,indicator-by-beta<=gamma\n"
        "0.29999999999999999,0.40000000000000002,indicator-by-beta<=gamma\n"
        "1,0.34000000000000002,undetermined\n"
        "1,0.40000000000000002,indicator-by-monotonicity\n");
}

TEST_CASE("describe and oracle") {
  const auto d = calx("describe ball-harmonic --n 2 --beta 2 --R 2");
  REQUIRE(d.code == 0);
  const auto j = nlohmann::json::parse(d.out);
  CHECK(j["regions"].size() == 6);
  CHECK(j["points_inward"] == true);

  const auto o = calx("oracle-1d --m 0 --M 1 --beta 1");
  REQUIRE(o.code == 0);
  const auto best = nlohmann::json::parse(o.out);
  CHECK(best["jumps"] == 1);
  CHECK(best["energy"]["total"].get<double>() == doctest::Approx(0.5));
}
