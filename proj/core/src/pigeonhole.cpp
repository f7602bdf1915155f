#include "qpigeon/pigeonhole.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qpigeon/spectrum.hpp"
#include "qpigeon/tsvf.hpp"
#include "qpigeon/version.hpp"

namespace qpigeon {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

StateVector triple(const StateVector& single) {
  return tensor(tensor(single, single), single);
}

std::string pair_suffix(std::pair<int, int> pair) {
  return std::to_string(pair.first) + std::to_string(pair.second);
}

std::pair<int, int> normalized_pair(std::pair<int, int> pair) {
  if (pair.first > pair.second) std::swap(pair.first, pair.second);
  return pair;
}

std::string format_abl_entries(
    const std::vector<std::pair<double, double>>& entries) {
  std::string out = "{";
  for (size_t k = 0; k < entries.size(); ++k) {
    if (k > 0) out += ", ";
    out += format_value(entries[k].first) + ": " +
           format_value(entries[k].second);
  }
  out += "}";
  return out;
}

std::string format_spectrum(const Spectrum& spectrum) {
  std::string out = "{";
  for (size_t k = 0; k < spectrum.pairs.size(); ++k) {
    if (k > 0) out += ", ";
    out += format_value(spectrum.pairs[k].eigenvalue) + " x" +
           std::to_string(spectrum.pairs[k].multiplicity);
  }
  out += "}";
  return out;
}

}  // namespace

StateVector preselected_state() {
  const StateVector plus({Complex(kInvSqrt2, 0.0), Complex(kInvSqrt2, 0.0)});
  return triple(plus);
}

StateVector postselected_state() {
  const StateVector plus_i({Complex(kInvSqrt2, 0.0), Complex(0.0, kInvSqrt2)});
  return triple(plus_i);
}

Operator pair_projector(int a, int b) {
  if (a < 0 || a > 2 || b < 0 || b > 2) {
    throw std::invalid_argument("particle index out of range: " +
                                std::to_string(a < 0 || a > 2 ? a : b));
  }
  if (a == b) {
    throw std::invalid_argument(
        "pair projector requires two distinct particles");
  }
  std::vector<double> diag(8, 0.0);
  for (int s = 0; s < 8; ++s) {
    const int box_a = (s >> (2 - a)) & 1;
    const int box_b = (s >> (2 - b)) & 1;
    if (box_a == box_b) diag[static_cast<size_t>(s)] = 1.0;
  }
  return Operator::diagonal(diag, kHermitian | kProjector);
}

Operator total_projector() {
  return add(add(pair_projector(0, 1), pair_projector(1, 2)),
             pair_projector(0, 2));
}

PigeonholeScenario PigeonholeScenario::standard() {
  std::map<std::pair<int, int>, Operator> projectors;
  for (const auto& [a, b] : kPairOrder) {
    projectors.emplace(std::make_pair(a, b), pair_projector(a, b));
  }
  return {3, preselected_state(), postselected_state(), std::move(projectors),
          total_projector()};
}

Report verify_conundrum(const PigeonholeScenario& scenario, double tolerance) {
  if (tolerance < 0.0) {
    throw std::invalid_argument("tolerance must be non-negative");
  }
  Report report;
  report.tool_version = std::string(kToolVersion);
  report.command = "verify_conundrum";

  const TwoStateVector tsv = make_tsv(scenario.pre, scenario.post);

  // Pair matrix elements <post|P_ab|pre>, each expected 0.
  for (const auto& pair : kPairOrder) {
    const Operator& p = scenario.pair_projectors.at(pair);
    const Complex element = inner(scenario.post, apply(p, scenario.pre));
    report.add(make_check("matrix_element_pair_" + pair_suffix(pair),
                          Complex(0.0, 0.0), element, tolerance));
  }

  // |<post|total|pre>|^2, expected 0.
  const Complex total_element =
      inner(scenario.post, apply(scenario.total, scenario.pre));
  report.add(make_check("matrix_element_total_abs_sq", 0.0,
                        std::norm(total_element), tolerance));

  // Overlap gate for weak values.
  report.add(make_check("overlap_post_pre", Complex(-0.25, -0.25), tsv.overlap,
                        tolerance));

  // Weak values of the pairs and of the total, all expected 0.
  for (const auto& pair : kPairOrder) {
    const Operator& p = scenario.pair_projectors.at(pair);
    report.add(make_check("weak_value_pair_" + pair_suffix(pair),
                          Complex(0.0, 0.0), weak_value(tsv, p), tolerance));
  }
  report.add(make_check("weak_value_total", Complex(0.0, 0.0),
                        weak_value(tsv, scenario.total), tolerance));

  // Spectrum of the total: eigenvalue 1 with multiplicity 6, 3 with 2.
  const Spectrum spectrum = hermitian_spectrum(scenario.total);
  CheckResult spectrum_check;
  spectrum_check.name = "spectrum_total";
  spectrum_check.expected = "{1 x6, 3 x2}";
  spectrum_check.actual = format_spectrum(spectrum);
  spectrum_check.tolerance = tolerance;
  spectrum_check.pass =
      spectrum.pairs.size() == 2 &&
      std::abs(spectrum.pairs[0].eigenvalue - 1.0) <= tolerance &&
      spectrum.pairs[0].multiplicity == 6 &&
      std::abs(spectrum.pairs[1].eigenvalue - 3.0) <= tolerance &&
      spectrum.pairs[1].multiplicity == 2;
  report.add(spectrum_check);

  // Conditional outcome distributions: {0: 1, 1: 0} per pair.
  for (const auto& pair : kPairOrder) {
    const Operator& p = scenario.pair_projectors.at(pair);
    const AblDistribution dist = abl_distribution(tsv, p);
    CheckResult check;
    check.name = "abl_pair_" + pair_suffix(pair);
    check.expected = "{0: 1, 1: 0}";
    check.actual = format_abl_entries(dist.entries);
    check.tolerance = tolerance;
    check.pass = std::abs(dist.probability_of(0.0) - 1.0) <= tolerance &&
                 std::abs(dist.probability_of(1.0)) <= tolerance;
    report.add(check);
  }

  // Conditional outcome distribution of the total: {1: 0.9, 3: 0.1}.
  {
    const AblDistribution dist = abl_distribution(tsv, scenario.total);
    CheckResult check;
    check.name = "abl_total";
    check.expected = "{1: 0.9, 3: 0.1}";
    check.actual = format_abl_entries(dist.entries);
    check.tolerance = tolerance;
    check.pass = std::abs(dist.probability_of(1.0) - 0.9) <= tolerance &&
                 std::abs(dist.probability_of(3.0) - 0.1) <= tolerance;
    report.add(check);
  }

  // Two-outcome certainty: eigenvalue 0 per pair, none for the total.
  for (const auto& pair : kPairOrder) {
    const Operator& p = scenario.pair_projectors.at(pair);
    const auto certain = dichotomic_certainty(tsv, p);
    CheckResult check;
    check.name = "certainty_pair_" + pair_suffix(pair);
    check.expected = "0";
    check.actual = certain ? format_value(*certain) : "none";
    check.tolerance = tolerance;
    check.pass = certain.has_value() && std::abs(*certain) <= tolerance;
    report.add(check);
  }
  {
    const auto certain = dichotomic_certainty(tsv, scenario.total);
    CheckResult check;
    check.name = "certainty_total";
    check.expected = "none";
    check.actual = certain ? format_value(*certain) : "none";
    check.tolerance = tolerance;
    check.pass = !certain.has_value();
    report.add(check);
  }

  return report;
}

Report verify_conundrum(double tolerance) {
  return verify_conundrum(PigeonholeScenario::standard(), tolerance);
}

SequentialResult enumerate_sequential_pairs(
    const PigeonholeScenario& scenario,
    const std::vector<std::pair<int, int>>& order) {
  if (order.empty() || order.size() > scenario.pair_projectors.size()) {
    throw std::invalid_argument("measurement order must contain 1 to " +
                                std::to_string(scenario.pair_projectors.size()) +
                                " pairs");
  }
  std::vector<std::pair<int, int>> keys;
  std::vector<const Operator*> projectors;
  for (const auto& pair : order) {
    const auto key = normalized_pair(pair);
    if (std::find(keys.begin(), keys.end(), key) != keys.end()) {
      throw std::invalid_argument("repeated pair in measurement order");
    }
    const auto it = scenario.pair_projectors.find(key);
    if (it == scenario.pair_projectors.end()) {
      throw std::invalid_argument("unknown pair in measurement order: (" +
                                  std::to_string(pair.first) + ", " +
                                  std::to_string(pair.second) + ")");
    }
    keys.push_back(key);
    projectors.push_back(&it->second);
  }

  const int k = static_cast<int>(order.size());
  SequentialResult result;
  result.postselect_probability = 0.0;
  double first_weight = 0.0;
  double later_weight = 0.0;
  for (int mask = 0; mask < (1 << k); ++mask) {
    SequentialBranch branch;
    branch.outcomes.resize(static_cast<size_t>(k));
    StateVector chain = scenario.pre;
    for (int j = 0; j < k; ++j) {
      const int outcome = (mask >> (k - 1 - j)) & 1;
      branch.outcomes[static_cast<size_t>(j)] = outcome;
      const StateVector projected = apply(*projectors[static_cast<size_t>(j)], chain);
      chain = outcome == 1 ? projected
                           : add(chain, scaled(projected, Complex(-1.0, 0.0)));
    }
    branch.probability = norm_squared(chain);
    branch.joint_postselected = std::norm(inner(scenario.post, chain));
    result.postselect_probability += branch.joint_postselected;
    if (branch.outcomes[0] == 1) first_weight += branch.joint_postselected;
    for (int j = 1; j < k; ++j) {
      if (branch.outcomes[static_cast<size_t>(j)] == 1) {
        later_weight += branch.joint_postselected;
        break;
      }
    }
    result.branches.push_back(std::move(branch));
  }
  if (result.postselect_probability <= kAblDenominatorTol) {
    throw std::runtime_error("postselection impossible after this measurement");
  }
  result.first_pair_together = first_weight / result.postselect_probability;
  result.later_pair_together = later_weight / result.postselect_probability;
  return result;
}

Report sequential_pair_demo(const std::vector<std::pair<int, int>>& order) {
  const PigeonholeScenario scenario = PigeonholeScenario::standard();
  const SequentialResult result = enumerate_sequential_pairs(scenario, order);

  Report report;
  report.tool_version = std::string(kToolVersion);
  report.command = "sequential_pair_demo";

  report.add(make_check("postselection_probability", 0.125,
                        result.postselect_probability, 1e-12));

  if (order.size() == 1) {
    // A single measured pair is never found together after postselection.
    report.add(make_check("measured_pair_together_given_postselection", 0.0,
                          result.first_pair_together, 1e-12));
  } else {
    // Later measured pairs can be found together: certainty is per-pair.
    CheckResult check;
    check.name = "later_pair_together_given_postselection";
    check.expected = "> 0";
    check.actual = format_value(result.later_pair_together);
    check.tolerance = 0.0;
    check.pass = result.later_pair_together > 1e-12;
    report.add(check);
  }

  DataTable table;
  for (const auto& pair : order) {
    table.columns.push_back("outcome_pair_" +
                            pair_suffix(normalized_pair(pair)));
  }
  table.columns.push_back("probability");
  table.columns.push_back("joint_postselected");
  for (const auto& branch : result.branches) {
    std::vector<double> row;
    row.reserve(branch.outcomes.size() + 2);
    for (const int outcome : branch.outcomes) {
      row.push_back(static_cast<double>(outcome));
    }
    row.push_back(branch.probability);
    row.push_back(branch.joint_postselected);
    table.rows.push_back(std::move(row));
  }
  report.data = std::move(table);
  return report;
}

}  // namespace qpigeon
