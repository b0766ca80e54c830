#include "grw/montecarlo.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <thread>

#include "grw/errors.hpp"

namespace grw {
namespace {

constexpr double kTwo53 = 9007199254740992.0;

// u = (raw >> 11) 2^-53 is uniform on [0,1); u < p  <=>  (raw >> 11) < ceil(p 2^53).
std::uint64_t threshold(double p) {
  if (p <= 0.0) return 0;
  if (p >= 1.0) return std::uint64_t{1} << 53;
  return static_cast<std::uint64_t>(std::ceil(p * kTwo53));
}

class StepTable {
 public:
  StepTable(double epsilon, std::int64_t cap) : epsilon_(epsilon), cap_(cap), down_(2 * cap + 1) {
    for (std::int64_t y = -cap; y <= cap; ++y)
      if (y != 0) down_[static_cast<std::size_t>(y + cap)] = threshold(transition_probability(epsilon, y).p_minus);
  }
  std::uint64_t down(std::int64_t y) const {
    if (y >= -cap_ && y <= cap_) return down_[static_cast<std::size_t>(y + cap_)];
    return threshold(0.5 * (1.0 + epsilon_ / static_cast<double>(y)));
  }

 private:
  double epsilon_;
  std::int64_t cap_;
  std::vector<std::uint64_t> down_;
};

constexpr std::int64_t kTableCap = 4096;

Trajectory run(const WalkSpec& spec, std::uint64_t reset_below, const StepTable& table, RngStream& rng,
               std::int64_t max_steps) {
  std::int64_t x = spec.x0;
  for (std::int64_t n = 1; n <= max_steps; ++n) {
    if ((rng() >> 11) < reset_below) {
      x = spec.xr;
    } else {
      x += (rng() >> 11) < table.down(x) ? -1 : 1;
      if (x == 0) return {n, false};
    }
  }
  return {max_steps, true};
}

void check_inputs(const WalkSpec& spec, double r) {
  spec.validate();
  if (!(r >= 0.0 && r < 1.0)) throw DomainError("r must lie in [0,1)");
}

struct Neumaier {
  double sum = 0.0, comp = 0.0;
  void add(double v) {
    const double t = sum + v;
    comp += std::fabs(sum) >= std::fabs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

void put_le(std::ostream& out, std::uint64_t v, int bytes) {
  std::array<char, 8> b{};
  for (int i = 0; i < bytes; ++i) b[static_cast<std::size_t>(i)] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b.data(), bytes);
}

std::uint64_t get_le(std::istream& in, int bytes) {
  std::array<unsigned char, 8> b{};
  in.read(reinterpret_cast<char*>(b.data()), bytes);
  if (!in) throw DomainError("truncated sample dump");
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(b[static_cast<std::size_t>(i)]) << (8 * i);
  return v;
}

}  // namespace

void McConfig::validate() const {
  if (n_trajectories < 1) throw DomainError("n_trajectories must be at least 1");
  if (max_steps < 1) throw DomainError("max_steps must be at least 1");
  if (workers < 1) throw DomainError("workers must be at least 1");
}

RngStream trajectory_stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return RngStream(seq);
}

Trajectory simulate_one(const WalkSpec& spec, double r, RngStream& rng, std::int64_t max_steps) {
  check_inputs(spec, r);
  if (max_steps < 1) throw DomainError("max_steps must be at least 1");
  const StepTable table(spec.epsilon, std::min<std::int64_t>(kTableCap, max_steps + std::max(std::abs(spec.x0), std::abs(spec.xr))));
  return run(spec, threshold(r), table, rng, max_steps);
}

McSamples simulate(const WalkSpec& spec, double r, const McConfig& cfg) {
  check_inputs(spec, r);
  cfg.validate();
  const StepTable table(spec.epsilon, kTableCap);
  const std::uint64_t reset_below = threshold(r);
  const auto n = static_cast<std::size_t>(cfg.n_trajectories);
  std::vector<Trajectory> out(n);
  const auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      RngStream rng = trajectory_stream(cfg.seed, i);
      out[i] = run(spec, reset_below, table, rng, cfg.max_steps);
    }
  };
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(cfg.workers), n);
  if (workers <= 1) {
    work(0, n);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, n * w / workers, n * (w + 1) / workers);
    for (auto& t : pool) t.join();
  }
  McSamples s;
  s.steps.resize(n);
  s.censored.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    s.steps[i] = out[i].steps;
    s.censored[i] = out[i].censored;
    if (out[i].censored) ++s.censored_count;
  }
  return s;
}

McEstimate summarize(const McSamples& samples, std::int64_t max_steps) {
  const auto n = static_cast<std::int64_t>(samples.steps.size());
  if (n < 1) throw DomainError("no samples to summarize");
  if (samples.censored_count * 100 > n)
    throw CensoringError(std::to_string(samples.censored_count) + " of " + std::to_string(n) +
                         " trajectories reached max_steps = " + std::to_string(max_steps));
  Neumaier s1;
  for (std::int64_t v : samples.steps) s1.add(static_cast<double>(v));
  const double nd = static_cast<double>(n);
  const double mean = s1.value() / nd;
  Neumaier s2, s4;
  for (std::int64_t v : samples.steps) {
    const double d = static_cast<double>(v) - mean;
    s2.add(d * d);
    s4.add(d * d * d * d);
  }
  const double m2 = s2.value() / nd, m4 = s4.value() / nd;
  McEstimate e;
  e.n = n;
  e.mean = mean;
  e.censored_count = samples.censored_count;
  e.biased_low = samples.censored_count > 0;
  if (n >= 2) {
    e.std_dev = std::sqrt(s2.value() / (nd - 1.0));
    e.se_mean = e.std_dev / std::sqrt(nd);
    e.se_std = m2 > 0.0 ? std::sqrt(std::max(0.0, m4 - m2 * m2) / (4.0 * m2 * nd)) : 0.0;
  }
  return e;
}

McEstimate estimate(const WalkSpec& spec, double r, const McConfig& cfg) {
  return summarize(simulate(spec, r, cfg), cfg.max_steps);
}

PmfPrefix empirical_pmf(const McSamples& samples, std::int64_t n_max) {
  if (n_max < 1) throw DomainError("n_max must be at least 1");
  const auto n = static_cast<double>(samples.steps.size());
  if (samples.steps.empty()) throw DomainError("no samples");
  std::vector<std::int64_t> counts(static_cast<std::size_t>(n_max) + 1, 0);
  std::int64_t overflow = 0;
  for (std::size_t i = 0; i < samples.steps.size(); ++i) {
    const std::int64_t v = samples.steps[i];
    if (!samples.censored[i] && v <= n_max) ++counts[static_cast<std::size_t>(v)];
    else ++overflow;
  }
  PmfPrefix p;
  p.n_max = n_max;
  p.probs.resize(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) p.probs[k] = static_cast<double>(counts[k]) / n;
  p.tail_mass = static_cast<double>(overflow) / n;
  return p;
}

PmfPrefix empirical_pmf(const WalkSpec& spec, double r, const McConfig& cfg, std::int64_t n_max) {
  const McSamples s = simulate(spec, r, cfg);
  if (s.censored_count * 100 > static_cast<std::int64_t>(s.steps.size()))
    throw CensoringError("more than 1% of trajectories reached max_steps");
  return empirical_pmf(s, n_max);
}

void write_sample_dump(std::ostream& out, const McSamples& samples) {
  out.write("GRWS", 4);
  put_le(out, kDumpVersion, 2);
  put_le(out, 0, 2);
  put_le(out, samples.steps.size(), 8);
  // Hitting times are >= 1, so 0 marks a censored trajectory unambiguously.
  for (std::size_t i = 0; i < samples.steps.size(); ++i)
    put_le(out, samples.censored[i] ? 0 : static_cast<std::uint64_t>(samples.steps[i]), 8);
  if (!out) throw ResourceError("failed to write sample dump");
}

McSamples read_sample_dump(std::istream& in, std::int64_t max_steps) {
  std::array<char, 4> magic{};
  in.read(magic.data(), 4);
  if (!in || std::string(magic.data(), 4) != "GRWS") throw DomainError("not a sample dump");
  if (get_le(in, 2) != kDumpVersion) throw DomainError("unsupported sample dump version");
  get_le(in, 2);
  const std::uint64_t count = get_le(in, 8);
  McSamples s;
  s.steps.reserve(count);
  s.censored.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto v = static_cast<std::int64_t>(get_le(in, 8));
    s.steps.push_back(v == 0 ? max_steps : v);
    s.censored.push_back(v == 0);
    if (v == 0) ++s.censored_count;
  }
  return s;
}

}  // namespace grw
