#include "dimwitness/classical.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dimwitness {

ClassicalStrategy::ClassicalStrategy(int d, std::vector<int> labels, std::vector<std::vector<int>> responses)
    : d_(d), labels_(std::move(labels)), responses_(std::move(responses)) {
  if (d_ < 1) throw InvariantViolation("ClassicalStrategy: d must be >= 1");
  for (int l : labels_) {
    if (l < 0 || l >= d_) {
      throw InvariantViolation("ClassicalStrategy: label " + std::to_string(l) + " outside [0, " +
                               std::to_string(d_) + ")");
    }
  }
  for (const auto& f : responses_) {
    if (static_cast<int>(f.size()) != d_) {
      throw InvariantViolation("ClassicalStrategy: response function must have d entries");
    }
    for (int v : f) {
      if (v != 1 && v != -1) throw InvariantViolation("ClassicalStrategy: responses must be +1 or -1");
    }
  }
}

ExpectationTable classical_expectations(const ClassicalStrategy& s, int n_preparations, int n_measurements) {
  if (static_cast<int>(s.labels().size()) != n_preparations ||
      static_cast<int>(s.responses().size()) != n_measurements) {
    throw DimensionError("classical_expectations: strategy has " + std::to_string(s.labels().size()) +
                         " preparations and " + std::to_string(s.responses().size()) +
                         " measurements, expected " + std::to_string(n_preparations) + " and " +
                         std::to_string(n_measurements));
  }
  Table e(static_cast<std::size_t>(n_preparations), std::vector<double>(static_cast<std::size_t>(n_measurements)));
  for (int x = 0; x < n_preparations; ++x) {
    const auto label = static_cast<std::size_t>(s.labels()[static_cast<std::size_t>(x)]);
    for (int y = 0; y < n_measurements; ++y) {
      e[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] = s.responses()[static_cast<std::size_t>(y)][label];
    }
  }
  return ExpectationTable(std::move(e));
}

double strategy_count(const Witness& w, int d) {
  return std::pow(static_cast<double>(d), w.preparations()) *
         std::pow(2.0, static_cast<double>(d) * w.measurements());
}

ClassicalBoundResult classical_bound(const Witness& w, int d, double guard) {
  if (d < 1) throw DimensionError("classical_bound: d must be >= 1");
  const int n = w.preparations();
  const int m = w.measurements();
  const double count = strategy_count(w, d);
  if (count > guard) {
    std::ostringstream msg;
    msg << "classical_bound: " << count << " strategies for d=" << d << " exceeds the enumeration guard "
        << guard;
    throw TooLarge(msg.str());
  }

  const int bits = d * m;
  const std::uint64_t n_masks = std::uint64_t{1} << bits;
  const bool flip_symmetric = w.take_abs();

  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  // agg[l·m + y] = Σ_{x: label(x) = l} c_xy
  std::vector<double> agg(static_cast<std::size_t>(bits));

  double best = -INFINITY;
  std::vector<int> best_labels = labels;
  std::uint64_t best_mask = 0;
  std::uint64_t checked = 0;

  while (true) {
    std::fill(agg.begin(), agg.end(), 0.0);
    for (int x = 0; x < n; ++x) {
      for (int y = 0; y < m; ++y) agg[static_cast<std::size_t>(labels[static_cast<std::size_t>(x)] * m + y)] += w.coeff(x, y);
    }
    for (std::uint64_t mask = 0; mask < n_masks; ++mask) {
      if (flip_symmetric && (mask & 1U)) continue;
      double v = 0.0;
      for (int y = 0; y < m; ++y) {
        for (int l = 0; l < d; ++l) {
          const double a = agg[static_cast<std::size_t>(l * m + y)];
          v += (mask >> (y * d + l)) & 1U ? -a : a;
        }
      }
      if (flip_symmetric) v = std::abs(v);
      ++checked;
      if (v > best) {
        best = v;
        best_labels = labels;
        best_mask = mask;
      }
    }
    // Odometer step, last digit fastest.
    int pos = n - 1;
    while (pos >= 0 && ++labels[static_cast<std::size_t>(pos)] == d) {
      labels[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }

  std::vector<std::vector<int>> responses(static_cast<std::size_t>(m), std::vector<int>(static_cast<std::size_t>(d)));
  for (int y = 0; y < m; ++y) {
    for (int l = 0; l < d; ++l) {
      responses[static_cast<std::size_t>(y)][static_cast<std::size_t>(l)] = (best_mask >> (y * d + l)) & 1U ? -1 : 1;
    }
  }
  ClassicalStrategy strategy(d, std::move(best_labels), std::move(responses));
  // Report the value recomputed through the public evaluation path so that
  // the strategy re-evaluates to it exactly.
  const double value = evaluate(w, classical_expectations(strategy, n, m));
  return {value, std::move(strategy), checked};
}

}  // namespace dimwitness
