#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "qpigeon/operator.hpp"
#include "qpigeon/philox.hpp"
#include "qpigeon/state.hpp"

namespace qpigeon {

// Overlaps at or below this are treated as orthogonal pre/post pairs.
inline constexpr double kOrthogonalityTol = 1e-10;
// Weak value must match an eigenvalue this closely (as a complex number).
inline constexpr double kCertaintyTol = 1e-10;
// Conditional probabilities are undefined below this total weight.
inline constexpr double kAblDenominatorTol = 1e-14;

// Pre- and postselected pair with the cached overlap <post|pre>.
struct TwoStateVector {
  StateVector pre;
  StateVector post;
  Complex overlap;
  bool degenerate;  // |overlap| <= kOrthogonalityTol
};

TwoStateVector make_tsv(const StateVector& pre, const StateVector& post);

// <post|A|pre> / <post|pre>; throws for degenerate pairs.
Complex weak_value(const TwoStateVector& tsv, const Operator& a);

// Conditional outcome distribution for one projective measurement between
// pre- and postselection. Every eigenvalue of the observable appears, in
// ascending order, possibly with probability 0.
struct AblDistribution {
  std::vector<std::pair<double, double>> entries;

  // Probability of the entry whose eigenvalue lies within tol; 0 if none.
  double probability_of(double eigenvalue, double tol = 1e-8) const;
};

AblDistribution abl_distribution(const TwoStateVector& tsv, const Operator& a);

// For a two-outcome observable: the eigenvalue the intermediate strong
// measurement is certain to give, if the weak value equals one; else empty.
std::optional<double> dichotomic_certainty(const TwoStateVector& tsv,
                                           const Operator& a);

// Haar-uniform normalized state (complex Gaussian components, normalized).
StateVector random_state(CounterRng& rng, int dim);
// GUE-style random hermitian matrix, hermitian flag set.
Operator random_hermitian(CounterRng& rng, int dim);
// Projector onto the span of `rank` random states.
Operator random_projector(CounterRng& rng, int dim, int rank);

// A constructed instance of the dichotomic-certainty theorem: the weak
// value of `observable` equals `eigenvalue` by construction.
struct Av91Instance {
  TwoStateVector tsv;
  Operator observable;
  double eigenvalue;
};

Av91Instance random_av91_instance(uint64_t seed, int dim,
                                  int max_attempts = 1000);

}  // namespace qpigeon
