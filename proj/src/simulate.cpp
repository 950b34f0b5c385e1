#include "dimwitness/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace dimwitness {

void RunConfig::validate() const {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw InvariantViolation("RunConfig: rate must be > 0");
  if (!(duration > 0.0) || !std::isfinite(duration)) throw InvariantViolation("RunConfig: duration must be > 0");
}

std::uint64_t sample_poisson(double mean, SplitMix64& rng) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) throw InvariantViolation("sample_poisson: invalid mean");
  if (mean == 0.0) return 0;
  if (mean < kPoissonInversionMax) {
    // Sequential search of the CDF.
    std::uint64_t k = 0;
    double p = std::exp(-mean);
    double cdf = p;
    const double u = rng.uniform();
    while (u > cdf) {
      ++k;
      p *= mean / static_cast<double>(k);
      cdf += p;
      if (p <= 0.0) break;
    }
    return k;
  }
  // PTRD, Hörmann (1993), "The transformed rejection method for generating
  // Poisson random variables".
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  while (true) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform();
    const double us = 0.5 - std::abs(u);
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(invalpha) - std::log(a / (us * us) + b) <= -mean + k * loglam - std::lgamma(k + 1.0)) {
      return static_cast<std::uint64_t>(k);
    }
  }
}

std::uint64_t sample_binomial(std::uint64_t n, double p, SplitMix64& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvariantViolation("sample_binomial: p outside [0, 1]");
  if (n == 0 || p == 0.0) return 0;
  if (p == 1.0) return n;
  if (n < kBinomialBernoulliMax) {
    std::uint64_t k = 0;
    for (std::uint64_t i = 0; i < n; ++i) k += rng.uniform() < p ? 1 : 0;
    return k;
  }
  // Normal approximation with continuity correction.
  const double mean = static_cast<double>(n) * p;
  const double sd = std::sqrt(mean * (1.0 - p));
  const double k = std::floor(mean + sd * rng.normal() + 0.5);
  return static_cast<std::uint64_t>(std::clamp(k, 0.0, static_cast<double>(n)));
}

std::vector<CountRecord> simulate_counts(const Witness& w, const ExpectationTable& e, const RunConfig& cfg) {
  cfg.validate();
  if (e.preparations() != w.preparations() || e.measurements() != w.measurements()) {
    throw DimensionError("simulate_counts: expectation table shape does not match witness");
  }
  const double mean = cfg.rate * cfg.duration;
  std::vector<CountRecord> out;
  for (int x = 0; x < w.preparations(); ++x) {
    for (int y = 0; y < w.measurements(); ++y) {
      if (w.coeff(x, y) == 0.0) continue;
      const auto key = static_cast<std::uint64_t>((x + 1) * 1000 + (y + 1));
      auto rng = SplitMix64::stream(cfg.seed, key);
      double ev = std::clamp(e(x, y), -1.0, 1.0);
      if (ev > 1.0 - kCertainOutcomeTol) ev = 1.0;
      if (ev < -1.0 + kCertainOutcomeTol) ev = -1.0;
      const std::uint64_t total = sample_poisson(mean, rng);
      const std::uint64_t plus = sample_binomial(total, 0.5 * (1.0 + ev), rng);
      out.push_back({x, y, plus, total - plus});
    }
  }
  return out;
}

std::vector<CountRecord> simulate_counts(const ExperimentSpec& spec, const RunConfig& cfg) {
  return simulate_counts(catalog(spec.witness_name).witness, expectations(spec), cfg);
}

WitnessEstimate estimate(const Witness& w, std::span<const CountRecord> counts) {
  std::map<std::pair<int, int>, const CountRecord*> by_setting;
  for (const auto& r : counts) by_setting[{r.x, r.y}] = &r;

  Table e(static_cast<std::size_t>(w.preparations()), std::vector<double>(static_cast<std::size_t>(w.measurements()), 0.0));
  double variance = 0.0;
  bool degenerate = false;
  std::vector<CountRecord> used;
  for (int x = 0; x < w.preparations(); ++x) {
    for (int y = 0; y < w.measurements(); ++y) {
      const double c = w.coeff(x, y);
      if (c == 0.0) continue;
      const auto it = by_setting.find({x, y});
      const std::string where = "(x=" + std::to_string(x + 1) + ", y=" + std::to_string(y + 1) + ")";
      if (it == by_setting.end()) throw MissingData("estimate: no counts for setting " + where);
      const auto& r = *it->second;
      const double np = static_cast<double>(r.n_plus);
      const double nm = static_cast<double>(r.n_minus);
      const double total = np + nm;
      if (total == 0.0) throw MissingData("estimate: zero total counts for setting " + where);
      e[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] = (np - nm) / total;
      variance += c * c * 4.0 * np * nm / (total * total * total);
      degenerate = degenerate || r.n_plus == 0 || r.n_minus == 0;
      used.push_back(r);
    }
  }
  return {evaluate(w, ExpectationTable(std::move(e))), std::sqrt(variance), std::move(used), degenerate};
}

WitnessEstimate run_experiment(std::string_view id, const RunConfig& cfg) {
  const auto spec = experiment(id);
  const auto w = catalog(spec.witness_name).witness;
  const auto counts = simulate_counts(w, expectations(spec), cfg);
  return estimate(w, counts);
}

nlohmann::json counts_to_json(std::string_view witness_name, std::span<const CountRecord> records) {
  auto arr = nlohmann::json::array();
  for (const auto& r : records) {
    arr.push_back({{"x", r.x + 1}, {"y", r.y + 1}, {"n_plus", r.n_plus}, {"n_minus", r.n_minus}});
  }
  return {{"witness", witness_name}, {"records", std::move(arr)}};
}

}  // namespace dimwitness
