#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "grw/cli.hpp"
#include "grw/errors.hpp"
#include "grw/montecarlo.hpp"

using namespace grw;
using namespace grw::cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::initializer_list<const char*> args) {
  std::vector<const char*> argv{"grw_cli"};
  argv.insert(argv.end(), args.begin(), args.end());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> f;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, sep)) f.push_back(cell);
  if (!line.empty() && line.back() == sep) f.emplace_back();
  return f;
}

std::vector<std::string> lines(const std::string& text) {
  auto ls = split(text, '\n');
  if (!ls.empty() && ls.back().empty()) ls.pop_back();
  return ls;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "grw_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("doubles print with 17 significant digits") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(2.0) == "2");
  CHECK(format_double(-1.0 / 3.0) == "-0.33333333333333331");
  CHECK(format_double(INFINITY) == "inf");
  CHECK(format_double(-INFINITY) == "-inf");
  CHECK(format_double(NAN) == "nan");
  for (double v : {1e-300, 3.141592653589793, 12.857142857142858, 6.02214076e23, 0.30000000000000004})
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
}

TEST_CASE("default seed comes from the environment") {
  unsetenv("GRW_DEFAULT_SEED");
  CHECK(default_seed() == kDefaultSeed);
  setenv("GRW_DEFAULT_SEED", "12345", 1);
  CHECK(default_seed() == 12345u);
  setenv("GRW_DEFAULT_SEED", "18446744073709551615", 1);
  CHECK(default_seed() == 18446744073709551615ull);
  for (const char* bad : {"abc", "-3", "12x", "99999999999999999999"}) {
    setenv("GRW_DEFAULT_SEED", bad, 1);
    CHECK_THROWS_AS(default_seed(), DomainError);
  }
  unsetenv("GRW_DEFAULT_SEED");
}

TEST_CASE("r grids") {
  const auto g = make_r_grid(1e-4, 0.5, 5, true);
  REQUIRE(g.size() == 5);
  CHECK(g.front() == 1e-4);
  CHECK(g.back() == 0.5);
  for (std::size_t i = 1; i + 1 < g.size(); ++i) CHECK(g[i] / g[i - 1] == doctest::Approx(g[i + 1] / g[i]));
  const auto l = make_r_grid(0.1, 0.9, 5, false);
  CHECK(l[2] == doctest::Approx(0.5));
  CHECK(make_r_grid(0.3, 0.3, 1, true) == std::vector<double>{0.3});
  CHECK_THROWS_AS(make_r_grid(0.0, 0.5, 3, true), DomainError);
  CHECK_THROWS_AS(make_r_grid(0.1, 1.0, 3, true), DomainError);
  CHECK_THROWS_AS(make_r_grid(0.5, 0.1, 3, true), DomainError);
  CHECK_THROWS_AS(make_r_grid(0.1, 0.5, 0, true), DomainError);
}

TEST_CASE("classify") {
  auto r = run({"classify", "--epsilon", "0"});
  REQUIRE(r.code == kExitOk);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["regime"] == "NullRecurrent");
  CHECK(j["rho"].get<double>() == 0.5);
  CHECK(j["delta"].is_null());

  j = nlohmann::json::parse(run({"classify", "--epsilon", "-0.75"}).out);
  CHECK(j["regime"] == "Transient");
  CHECK(j["return_probability"].get<double>() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(j["rho"].is_null());

  j = nlohmann::json::parse(run({"classify", "--epsilon", "1"}).out);
  CHECK(j["regime"] == "PositiveRecurrent");
  CHECK(j["rho"].get<double>() == 1.0);
  CHECK(j["delta"].get<double>() == 0.5);
  CHECK(j["mean_return_time"].get<double>() == 2.0);

  CHECK(run({"classify", "--epsilon", "-1"}).code == kExitUsage);
  CHECK(run({"classify", "--epsilon", "1.5"}).code == kExitUsage);
  CHECK(run({"classify"}).code == kExitUsage);
  CHECK(run({"classify", "--epsilon", "abc"}).code == kExitUsage);
}

TEST_CASE("sweep csv") {
  auto r = run({"sweep", "--epsilon", "1", "--x0", "1", "--xr", "1", "--r", "0.5"});
  REQUIRE(r.code == kExitOk);
  auto ls = lines(r.out);
  REQUIRE(ls.size() == 2);
  CHECK(ls[0] == kSweepHeader);
  auto f = split(ls[1], ',');
  REQUIRE(f.size() == 11);
  CHECK(f[4] == "2");
  CHECK(f[7].empty());
  CHECK(f[8].empty());
  CHECK(f[9] == "PositiveRecurrent");

  r = run({"sweep", "--epsilon", "-0.85", "--x0", "3", "--xr", "5", "--r-min", "0.01", "--r-max", "0.8",
           "--r-points", "7", "--r-scale", "linear"});
  REQUIRE(r.code == kExitOk);
  ls = lines(r.out);
  CHECK(ls.size() == 8);
  CHECK(split(ls[1], ',')[3] == "0.01");
  CHECK(split(ls[7], ',')[3] == "0.80000000000000004");
  CHECK(split(ls[1], ',')[10].empty());
}

TEST_CASE("analytic columns do not depend on Monte Carlo flags") {
  const auto plain = run({"sweep", "--epsilon", "0.25", "--x0", "3", "--xr", "5", "--r", "0.2,0.6"});
  const auto mc = run({"sweep", "--epsilon", "0.25", "--x0", "3", "--xr", "5", "--r", "0.2,0.6", "--mc", "2000",
                       "--seed", "9", "--workers", "2"});
  REQUIRE(plain.code == kExitOk);
  REQUIRE(mc.code == kExitOk);
  const auto a = lines(plain.out), b = lines(mc.out);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 1; i < a.size(); ++i) {
    const auto fa = split(a[i], ','), fb = split(b[i], ',');
    for (std::size_t k : {0, 1, 2, 3, 4, 5, 6, 9, 10}) CHECK(fa[k] == fb[k]);
    CHECK_FALSE(fb[7].empty());
    const double mean = std::stod(fa[4]), mean_mc = std::stod(fb[7]), se = std::stod(fb[8]);
    CHECK(std::fabs(mean - mean_mc) < 4.0 * se);
  }
}

TEST_CASE("outputs are byte-stable for fixed seeds") {
  const auto a = run({"sweep", "--epsilon", "-0.25", "--x0", "2", "--xr", "4", "--r", "0.3", "--mc", "3000",
                      "--seed", "42", "--workers", "1"});
  const auto b = run({"sweep", "--epsilon", "-0.25", "--x0", "2", "--xr", "4", "--r", "0.3", "--mc", "3000",
                      "--seed", "42", "--workers", "3"});
  CHECK(a.out == b.out);
  const auto c = run({"sweep", "--epsilon", "-0.25", "--x0", "2", "--xr", "4", "--r", "0.3", "--mc", "3000",
                      "--seed", "43"});
  CHECK(a.out != c.out);
}

TEST_CASE("environment seed is used when --seed is absent") {
  setenv("GRW_DEFAULT_SEED", "42", 1);
  const auto env = run({"sweep", "--epsilon", "-0.25", "--x0", "2", "--xr", "4", "--r", "0.3", "--mc", "3000"});
  unsetenv("GRW_DEFAULT_SEED");
  const auto flag =
      run({"sweep", "--epsilon", "-0.25", "--x0", "2", "--xr", "4", "--r", "0.3", "--mc", "3000", "--seed", "42"});
  CHECK(env.out == flag.out);
  setenv("GRW_DEFAULT_SEED", "not-a-seed", 1);
  CHECK(run({"sweep", "--epsilon", "-0.25", "--x0", "2", "--r", "0.3", "--mc", "10"}).code == kExitUsage);
  unsetenv("GRW_DEFAULT_SEED");
}

TEST_CASE("sweep argument errors") {
  CHECK(run({"sweep", "--epsilon", "0.25", "--x0", "3", "--r", "0"}).code == kExitUsage);
  CHECK(run({"sweep", "--epsilon", "0.25", "--x0", "3", "--r", "0.2,1"}).code == kExitUsage);
  CHECK(run({"sweep", "--epsilon", "0.25", "--x0", "3"}).code == kExitUsage);
  CHECK(run({"sweep", "--epsilon", "0.25", "--x0", "3", "--r", "0.2", "--r-min", "0.1"}).code == kExitUsage);
  CHECK(run({"sweep", "--epsilon", "0.25", "--x0", "0", "--r", "0.2"}).code == kExitUsage);
  CHECK(run({"sweep", "--epsilon", "0.25", "--x0", "3", "--r", "0.2", "--format", "xml"}).code == kExitUsage);
  CHECK(run({"sweep", "--epsilon", "0.25", "--x0", "3", "--r-min", "0.5", "--r-max", "0.1"}).code == kExitUsage);
}

TEST_CASE("sweep json and file output") {
  const auto path = scratch("sweep.json");
  std::filesystem::remove(path);
  const auto r = run({"sweep", "--epsilon", "0.5", "--x0", "3", "--xr", "5", "--r", "0.1,0.2", "--format", "json",
                      "--out", path.c_str()});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.empty());
  const auto j = nlohmann::json::parse(slurp(path));
  REQUIRE(j.size() == 2);
  CHECK(j[0]["regime"] == "NullRecurrent");
  CHECK(j[0]["mean_mc"].is_null());
  CHECK(j[1]["r"].get<double>() == 0.2);
  const auto meta = nlohmann::json::parse(slurp(path.string() + ".meta.json"));
  CHECK(meta["command"] == "sweep");
  CHECK(meta.contains("created_utc"));
  const auto stdout_run =
      run({"sweep", "--epsilon", "0.5", "--x0", "3", "--xr", "5", "--r", "0.1,0.2", "--format", "json"});
  CHECK(stdout_run.out == slurp(path));
  CHECK(run({"sweep", "--epsilon", "0.5", "--x0", "3", "--r", "0.1", "--out", "/nonexistent/dir/x.csv"}).code ==
        kExitUsage);
}

TEST_CASE("optimize") {
  auto r = run({"optimize", "--epsilon", "1", "--x0", "8", "--xr", "8"});
  REQUIRE(r.code == kExitOk);
  auto j = nlohmann::json::parse(r.out);
  CHECK(std::fabs(j["z_star"].get<double>() - 0.9873) < 5e-4);
  CHECK(j["converged"].get<bool>());
  CHECK(j["r_star"].get<double>() + j["z_star"].get<double>() == doctest::Approx(1.0).epsilon(1e-15));
  const auto& cert = j["certificate"];
  CHECK(cert["slope_at_bracket"][0].get<double>() < 0.0);
  CHECK(cert["slope_at_bracket"][1].get<double>() > 0.0);
  CHECK(cert["bracket"][0].get<double>() <= j["r_star"].get<double>());
  CHECK(cert["bracket"][1].get<double>() >= j["r_star"].get<double>());

  r = run({"optimize", "--epsilon", "1", "--x0", "1", "--xr", "1"});
  REQUIRE(r.code == kExitOk);
  j = nlohmann::json::parse(r.out);
  CHECK(j["r_star"].is_null());
  CHECK(j["reason"] == "monotone-increasing mean");

  j = nlohmann::json::parse(run({"optimize", "--epsilon", "0.25", "--x0", "3"}).out);
  CHECK(j["r_star"].get<double>() > 0.0);
  CHECK(run({"optimize", "--epsilon", "0.25"}).code == kExitUsage);
}

TEST_CASE("threshold") {
  auto r = run({"threshold", "--epsilon", "1", "--x0", "4", "--xr", "4"});
  REQUIRE(r.code == kExitOk);
  auto j = nlohmann::json::parse(r.out);
  CHECK(std::fabs(j["z_th"].get<double>() - 0.8433) < 5e-4);
  CHECK(j["free_mean"].get<double>() == 16.0);
  CHECK(j["certificate"]["mean_at_threshold"].get<double>() == doctest::Approx(16.0).epsilon(1e-9));

  r = run({"threshold", "--epsilon", "0.25", "--x0", "4"});
  REQUIRE(r.code == kExitOk);
  j = nlohmann::json::parse(r.out);
  CHECK(j["r_th"].is_null());
  CHECK(j.contains("reason"));
}

TEST_CASE("simulate and sample dumps") {
  const auto path = scratch("samples.bin");
  const auto r = run({"simulate", "--epsilon", "0.25", "--x0", "3", "--xr", "5", "--r", "0.3", "--mc", "500", "--seed",
                      "11", "--dump", path.c_str()});
  REQUIRE(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["n"] == 500);
  CHECK(j["seed"] == 11);
  std::ifstream f(path, std::ios::binary);
  const McSamples dumped = read_sample_dump(f, kDefaultMaxSteps);
  McConfig cfg;
  cfg.n_trajectories = 500;
  cfg.seed = 11;
  CHECK(dumped.steps == simulate(WalkSpec::make(0.25, 3, 5), 0.3, cfg).steps);
  CHECK(j["mean"].get<double>() == summarize(dumped, kDefaultMaxSteps).mean);
}

TEST_CASE("numeric failures exit with 1") {
  const auto r = run({"simulate", "--epsilon", "-0.85", "--x0", "3", "--xr", "5", "--r", "0.8", "--mc", "100",
                      "--max-steps", "100"});
  CHECK(r.code == kExitNumeric);
  CHECK(r.err.find("max_steps") != std::string::npos);
}

TEST_CASE("validate") {
  auto r = run({"validate", "closed-forms"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("FAIL") == std::string::npos);
  CHECK(r.out.find("16/16 checks passed") != std::string::npos);
  r = run({"validate", "renewal"});
  CHECK(r.code == kExitOk);
  CHECK(run({"validate", "everything"}).code == kExitUsage);
  CHECK(run({"validate"}).code == kExitUsage);
  CHECK_THROWS_AS(run_validation("everything"), DomainError);
}

TEST_CASE("help and unknown commands") {
  CHECK(run({"--help"}).code == kExitOk);
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);
}
