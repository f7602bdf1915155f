#include "qpigeon/sampling.hpp"

#include <cmath>
#include <stdexcept>

#include "qpigeon/philox.hpp"
#include "qpigeon/spectrum.hpp"
#include "qpigeon/version.hpp"

namespace qpigeon {

long long Counts::postselected_total() const {
  long long total = 0;
  for (const auto& cell : cells) {
    if (cell.postselected) total += cell.count;
  }
  return total;
}

long long Counts::count_of(std::optional<double> outcome, bool postselected,
                           double tol) const {
  for (const auto& cell : cells) {
    if (cell.postselected != postselected) continue;
    if (outcome.has_value() != cell.outcome.has_value()) continue;
    if (!outcome.has_value() || std::abs(*cell.outcome - *outcome) <= tol) {
      return cell.count;
    }
  }
  return 0;
}

Counts sample_strong(const StateVector& pre, const StateVector& post,
                     const std::optional<Operator>& observable,
                     long long shots, uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("shots must be at least 1");
  if (pre.dim() != post.dim()) {
    throw std::invalid_argument("two-state vector dimension mismatch: " +
                                std::to_string(pre.dim()) + " vs " +
                                std::to_string(post.dim()));
  }
  if (!is_normalized(pre)) {
    throw std::invalid_argument("preselected state is not normalized");
  }
  if (!is_normalized(post)) {
    throw std::invalid_argument("postselected state is not normalized");
  }

  Counts counts;
  counts.shots = shots;
  counts.seed = seed;
  counts.rng_name = std::string(kRngName);
  counts.rng_version = kRngVersion;
  counts.has_outcomes = observable.has_value();

  if (!observable) {
    const double q = std::norm(inner(post, pre));
    counts.cells = {{std::nullopt, false, 0}, {std::nullopt, true, 0}};
    for (long long s = 0; s < shots; ++s) {
      const bool selected = philox_uniform(seed, static_cast<uint64_t>(s), 1) <
                            q;
      counts.cells[selected ? 1 : 0].count += 1;
    }
    return counts;
  }

  if (observable->dim() != pre.dim()) {
    throw std::invalid_argument("operator dimension mismatch: " +
                                std::to_string(observable->dim()) + " vs " +
                                std::to_string(pre.dim()));
  }
  const Operator obs = observable->has_flag(kHermitian)
                           ? *observable
                           : with_flags(*observable, kHermitian);
  const Spectrum spectrum = hermitian_spectrum(obs);

  // Exact Born weights and post-collapse postselection probabilities.
  const size_t k = spectrum.pairs.size();
  std::vector<double> born(k);
  std::vector<double> select(k, 0.0);
  for (size_t i = 0; i < k; ++i) {
    const StateVector projected = apply(spectrum.pairs[i].projector, pre);
    const double p = norm_squared(projected);
    born[i] = p;
    if (p > 1e-30) {
      select[i] = std::norm(inner(post, projected)) / p;
    }
  }

  counts.cells.reserve(2 * k);
  for (size_t i = 0; i < k; ++i) {
    counts.cells.push_back({spectrum.pairs[i].eigenvalue, false, 0});
    counts.cells.push_back({spectrum.pairs[i].eigenvalue, true, 0});
  }

  for (long long s = 0; s < shots; ++s) {
    const double u_outcome = philox_uniform(seed, static_cast<uint64_t>(s), 0);
    size_t picked = k - 1;
    double cumulative = 0.0;
    for (size_t i = 0; i < k; ++i) {
      cumulative += born[i];
      if (u_outcome < cumulative) {
        picked = i;
        break;
      }
    }
    const bool selected =
        philox_uniform(seed, static_cast<uint64_t>(s), 1) < select[picked];
    counts.cells[2 * picked + (selected ? 1 : 0)].count += 1;
  }
  return counts;
}

Report empirical_vs_abl(const Counts& counts,
                        const AblDistribution& predicted) {
  if (!counts.has_outcomes) {
    throw std::invalid_argument("counts carry no measurement outcomes");
  }
  const long long n_post = counts.postselected_total();
  if (n_post < kMinPostselected) {
    // data-dependent, not a caller error
    throw std::runtime_error("too few postselected runs (" +
                             std::to_string(n_post) + "); increase shots");
  }

  Report report;
  report.tool_version = std::string(kToolVersion);
  report.command = "empirical_vs_abl";

  for (const auto& [eigenvalue, probability] : predicted.entries) {
    const long long observed = counts.count_of(eigenvalue, true);
    const double frequency =
        static_cast<double>(observed) / static_cast<double>(n_post);
    CheckResult check;
    check.name = "conditional_outcome_" + format_value(eigenvalue);
    check.expected = format_value(probability);
    const double variance = probability * (1.0 - probability);
    if (variance <= 0.0) {
      // Zero or unit probability: the event is exact, not statistical.
      check.actual = format_value(frequency);
      check.tolerance = 0.0;
      check.pass = frequency == probability;
      if (!check.pass) {
        check.actual += " (exact violation, count " +
                        std::to_string(probability == 0.0
                                           ? observed
                                           : n_post - observed) +
                        ")";
      }
    } else {
      const double sigma =
          std::sqrt(variance / static_cast<double>(n_post));
      check.actual = format_value(frequency);
      check.tolerance = kZThreshold * sigma;
      check.pass = std::abs(frequency - probability) <= check.tolerance;
    }
    report.add(check);
  }

  // Every observed outcome must belong to the predicted support.
  CheckResult support;
  support.name = "outcome_support";
  support.expected = "all observed outcomes predicted";
  support.tolerance = 0.0;
  support.pass = true;
  support.actual = "ok";
  for (const auto& cell : counts.cells) {
    if (!cell.postselected || cell.count == 0 || !cell.outcome) continue;
    bool found = false;
    for (const auto& [eigenvalue, probability] : predicted.entries) {
      if (std::abs(eigenvalue - *cell.outcome) <= 1e-8) {
        found = true;
        break;
      }
    }
    if (!found) {
      support.pass = false;
      support.actual = "unpredicted outcome " + format_value(*cell.outcome);
      break;
    }
  }
  report.add(support);
  return report;
}

}  // namespace qpigeon
