#pragma once

// Monte Carlo photon counting for a prepare-and-measure run, and the
// propagation of Poissonian counting errors into the witness value.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dimwitness/rng.hpp"
#include "dimwitness/settings.hpp"

namespace dimwitness {

// Sampler regime switches.
inline constexpr double kPoissonInversionMax = 10.0;        // mean below: sequential inversion; else PTRD
inline constexpr std::uint64_t kBinomialBernoulliMax = 100000;  // n below: Bernoulli trials; else normal approx
// E values this close to ±1 are sampled as exactly ±1.
inline constexpr double kCertainOutcomeTol = 1e-12;

struct CountRecord {
  int x;  // 0-based preparation
  int y;  // 0-based measurement
  std::uint64_t n_plus;
  std::uint64_t n_minus;

  friend bool operator==(const CountRecord&, const CountRecord&) = default;
};

struct RunConfig {
  double rate = 2e4;      // detected photons per second
  double duration = 30.0;  // seconds per (x, y) setting
  std::uint64_t seed = 0;

  // Throws InvariantViolation unless rate > 0 and duration > 0.
  void validate() const;
};

struct WitnessEstimate {
  double value;
  double sigma;
  std::vector<CountRecord> counts;
  // Some record used had n_plus·n_minus = 0, so its variance term is zero and
  // sigma underestimates the error.
  bool degenerate_variance;
};

std::uint64_t sample_poisson(double mean, SplitMix64& rng);
std::uint64_t sample_binomial(std::uint64_t n, double p, SplitMix64& rng);

// One record per (x, y) with c_xy != 0: N ~ Poisson(rate·duration),
// n_plus ~ Binomial(N, (1 + E_xy)/2). Setting (x, y) draws from the stream
// seed ^ ((x+1)·1000 + (y+1)).
std::vector<CountRecord> simulate_counts(const Witness& w, const ExpectationTable& e, const RunConfig& cfg);
std::vector<CountRecord> simulate_counts(const ExperimentSpec& spec, const RunConfig& cfg);

// Ê_xy = (n₊ - n₋)/(n₊ + n₋); sigma² = Σ c_xy² · 4 n₊ n₋ / (n₊ + n₋)³.
// Throws MissingData when a needed (x, y) has no record or a zero total.
WitnessEstimate estimate(const Witness& w, std::span<const CountRecord> counts);

// simulate_counts then estimate, for a catalog experiment.
WitnessEstimate run_experiment(std::string_view id, const RunConfig& cfg);

// Counts JSON: {"witness": name, "records": [{"x","y","n_plus","n_minus"}]},
// with 1-based x and y.
nlohmann::json counts_to_json(std::string_view witness_name, std::span<const CountRecord> records);

}  // namespace dimwitness
