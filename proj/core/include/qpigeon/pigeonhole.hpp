#pragma once

#include <array>
#include <map>
#include <utility>
#include <vector>

#include "qpigeon/operator.hpp"
#include "qpigeon/report.hpp"
#include "qpigeon/state.hpp"

namespace qpigeon {

// Three particles, two boxes. Preselection |+++>, postselection |+i+i+i>,
// with |+> = (|L>+|R>)/sqrt(2) and |+i> = (|L>+i|R>)/sqrt(2).
StateVector preselected_state();
StateVector postselected_state();

// Projector onto the subspace where particles a and b share a box.
Operator pair_projector(int a, int b);
// Sum of the three pair projectors (hermitian, not a projector).
Operator total_projector();

// Canonical pair ordering used for reports and sweeps.
inline constexpr std::array<std::pair<int, int>, 3> kPairOrder = {
    {{0, 1}, {1, 2}, {0, 2}}};

struct PigeonholeScenario {
  int n_particles;
  StateVector pre;
  StateVector post;
  std::map<std::pair<int, int>, Operator> pair_projectors;
  Operator total;

  static PigeonholeScenario standard();
};

// Runs the full fixed-order check suite: pair and total matrix elements,
// overlap, weak values, total spectrum, conditional outcome distributions,
// and two-outcome certainty for every pair and for the total.
Report verify_conundrum(const PigeonholeScenario& scenario, double tolerance);
Report verify_conundrum(double tolerance);

// One outcome sequence of the ordered projective measurements: outcome 1
// means "found together". probability is the chance of the sequence;
// joint_postselected additionally requires postselection success.
struct SequentialBranch {
  std::vector<int> outcomes;
  double probability;
  double joint_postselected;
};

struct SequentialResult {
  std::vector<SequentialBranch> branches;
  double postselect_probability;
  // Conditional on postselection:
  double first_pair_together;
  double later_pair_together;
};

// Exact enumeration over all outcome sequences (collapse + renormalize is
// folded into unnormalized projector chains).
SequentialResult enumerate_sequential_pairs(
    const PigeonholeScenario& scenario,
    const std::vector<std::pair<int, int>>& order);

// Report form of the enumeration: the first measured pair is never found
// together, while any later measured pair can be.
Report sequential_pair_demo(const std::vector<std::pair<int, int>>& order);

}  // namespace qpigeon
