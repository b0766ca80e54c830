#ifndef GRW_CLI_HPP
#define GRW_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "grw/gillis.hpp"
#include "grw/montecarlo.hpp"

namespace grw::cli {

enum ExitCode : int { kExitOk = 0, kExitNumeric = 1, kExitUsage = 2 };

// 17 significant digits, round-trip exact; "inf", "-inf", "nan" for non-finite values.
std::string format_double(double v);

// GRW_DEFAULT_SEED if set (DomainError if it does not parse as an unsigned 64-bit integer), else kDefaultSeed.
std::uint64_t default_seed();

// points values in [lo, hi], log- or linearly spaced; DomainError unless 0 < lo <= hi < 1 and points >= 1.
std::vector<double> make_r_grid(double lo, double hi, int points, bool log_scale);

struct SweepRow {
  double epsilon;
  std::int64_t x0;
  std::int64_t xr;
  double r;
  double mean_analytic;
  double std_analytic;
  double cv;
  std::optional<double> mean_mc;
  std::optional<double> se_mc;
  std::string regime;
  std::optional<double> rho;
};

inline constexpr const char* kSweepHeader = "epsilon,x0,xr,r,mean_analytic,std_analytic,cv,mean_mc,se_mc,regime,rho";

// DomainError unless every r lies in (0,1). Monte Carlo columns are filled when mc is set.
std::vector<SweepRow> sweep(const WalkSpec& spec, const std::vector<double>& grid, const std::optional<McConfig>& mc);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
nlohmann::json sweep_json(const std::vector<SweepRow>& rows);

nlohmann::json classify_report(double epsilon);
// {"r_star", "z_star", "mean_at_star", "converged", "certificate"}; null r_star comes with "reason".
nlohmann::json optimize_report(const WalkSpec& spec);
// {"r_th", "z_th", "free_mean", "converged", "certificate"}; null r_th comes with "reason".
nlohmann::json threshold_report(const WalkSpec& spec);

struct CheckResult {
  std::string name;
  bool pass;
  std::string detail;
};

inline const std::vector<std::string> kValidationSuites{"closed-forms", "pmf-oracle", "renewal", "asymptotes",
                                                        "montecarlo"};
// DomainError for an unknown suite.
std::vector<CheckResult> run_validation(const std::string& suite);

// Full command line: parses argv, runs the subcommand, maps failures to ExitCode.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace grw::cli

#endif
