#ifndef GRW_MONTECARLO_HPP
#define GRW_MONTECARLO_HPP

#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include "grw/gillis.hpp"

namespace grw {

inline constexpr std::int64_t kDefaultMaxSteps = 10'000'000;
inline constexpr std::uint64_t kDefaultSeed = 20240611;

struct McConfig {
  std::int64_t n_trajectories = 10'000;
  std::uint64_t seed = kDefaultSeed;
  std::int64_t max_steps = kDefaultMaxSteps;
  int workers = 1;

  void validate() const;
};

struct McEstimate {
  std::int64_t n = 0;
  double mean = 0.0;
  double std_dev = 0.0;
  double se_mean = 0.0;
  double se_std = 0.0;
  std::int64_t censored_count = 0;
  // Censored trajectories enter the statistics at max_steps, so the estimates are biased low.
  bool biased_low = false;
};

// Stream for one trajectory, derived from (seed, index) through std::seed_seq.
using RngStream = std::mt19937_64;
RngStream trajectory_stream(std::uint64_t seed, std::uint64_t index);

struct Trajectory {
  std::int64_t steps;
  bool censored;  // true if the origin was not reached within max_steps
};

// Each step draws u1; u1 < r relocates to xr, else u2 < (1 + eps/x)/2 moves toward lower x.
Trajectory simulate_one(const WalkSpec& spec, double r, RngStream& rng, std::int64_t max_steps = kDefaultMaxSteps);

struct McSamples {
  std::vector<std::int64_t> steps;  // by trajectory index; censored entries hold max_steps
  std::vector<bool> censored;       // by trajectory index
  std::int64_t censored_count = 0;
};

McSamples simulate(const WalkSpec& spec, double r, const McConfig& cfg);

// Summary with ordered compensated sums; raises CensoringError if more than 1% of samples are censored.
McEstimate summarize(const McSamples& samples, std::int64_t max_steps);
McEstimate estimate(const WalkSpec& spec, double r, const McConfig& cfg);

// Normalized histogram for n <= n_max; tail_mass holds later hits and censored samples.
PmfPrefix empirical_pmf(const McSamples& samples, std::int64_t n_max);
PmfPrefix empirical_pmf(const WalkSpec& spec, double r, const McConfig& cfg, std::int64_t n_max);

// Raw sample dump: "GRWS", u16 version, u16 reserved, u64 count, then count u64 values, all little-endian.
// A censored trajectory is written as 0.
inline constexpr std::uint16_t kDumpVersion = 1;
void write_sample_dump(std::ostream& out, const McSamples& samples);
McSamples read_sample_dump(std::istream& in, std::int64_t max_steps);

}  // namespace grw

#endif
