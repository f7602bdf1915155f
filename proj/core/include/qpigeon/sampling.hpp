#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qpigeon/operator.hpp"
#include "qpigeon/report.hpp"
#include "qpigeon/state.hpp"
#include "qpigeon/tsvf.hpp"

namespace qpigeon {

// Two-sided z-score threshold for empirical-vs-predicted comparisons.
inline constexpr double kZThreshold = 4.0;
// Conditional frequencies need at least this many postselected runs.
inline constexpr int kMinPostselected = 100;

// One (outcome, postselected) tally; outcome is empty when no intermediate
// measurement was configured.
struct CountCell {
  std::optional<double> outcome;
  bool postselected;
  long long count;
};

struct Counts {
  long long shots;
  uint64_t seed;
  std::string rng_name;
  int rng_version;
  bool has_outcomes;
  std::vector<CountCell> cells;  // ascending by outcome, then postselected

  long long postselected_total() const;
  long long count_of(std::optional<double> outcome, bool postselected,
                     double tol = 1e-8) const;
};

// Per shot: sample an eigenvalue of the observable (if given) with Born
// probability, collapse, then sample postselection success. Bitwise
// deterministic given (seed); shot s draws from counter stream s.
Counts sample_strong(const StateVector& pre, const StateVector& post,
                     const std::optional<Operator>& observable,
                     long long shots, uint64_t seed);

// z-scores of conditional (postselected) outcome frequencies against the
// predicted distribution; zero-probability entries are exact checks.
Report empirical_vs_abl(const Counts& counts,
                        const AblDistribution& predicted);

}  // namespace qpigeon
