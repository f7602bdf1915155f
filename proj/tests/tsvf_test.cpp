#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "qpigeon/operator.hpp"
#include "qpigeon/philox.hpp"
#include "qpigeon/pigeonhole.hpp"
#include "qpigeon/spectrum.hpp"
#include "qpigeon/state.hpp"
#include "qpigeon/tsvf.hpp"

namespace qpigeon {
namespace {

TwoStateVector pigeonhole_tsv() {
  return make_tsv(preselected_state(), postselected_state());
}

StateVector basis_state(int dim, int index) {
  std::vector<Complex> amps(static_cast<size_t>(dim), Complex(0.0, 0.0));
  amps[static_cast<size_t>(index)] = Complex(1.0, 0.0);
  return StateVector(std::move(amps));
}

// post made orthogonal to v, so <post|v> = 0 by construction.
StateVector orthogonalized(const StateVector& candidate, const StateVector& v) {
  const double vn2 = norm_squared(v);
  StateVector out = candidate;
  if (vn2 > 1e-24) {
    out = add(candidate, scaled(v, -inner(v, candidate) / vn2));
    out = add(out, scaled(v, -inner(v, out) / vn2));
  }
  return normalized(out);
}

TEST(MakeTsv, CachesPigeonholeOverlap) {
  const TwoStateVector tsv = pigeonhole_tsv();
  EXPECT_NEAR(tsv.overlap.real(), -0.25, 1e-14);
  EXPECT_NEAR(tsv.overlap.imag(), -0.25, 1e-14);
  EXPECT_FALSE(tsv.degenerate);
  EXPECT_NEAR(std::abs(tsv.overlap - inner(tsv.post, tsv.pre)), 0.0, 1e-14);
}

TEST(MakeTsv, SelfOverlapIsOne) {
  const StateVector psi = preselected_state();
  const TwoStateVector tsv = make_tsv(psi, psi);
  EXPECT_NEAR(std::abs(tsv.overlap - Complex(1.0, 0.0)), 0.0, 1e-14);
}

TEST(MakeTsv, OrthogonalStatesAreDegenerateFlagged) {
  const TwoStateVector tsv = make_tsv(basis_state(2, 0), basis_state(2, 1));
  EXPECT_TRUE(tsv.degenerate);
  EXPECT_NEAR(std::abs(tsv.overlap), 0.0, 0.0);
}

TEST(MakeTsv, RejectsDimensionMismatchAndUnnormalizedInput) {
  EXPECT_THROW(make_tsv(basis_state(2, 0), basis_state(4, 0)),
               std::invalid_argument);
  const StateVector half = scaled(basis_state(2, 0), Complex(0.5, 0.0));
  EXPECT_THROW(make_tsv(half, basis_state(2, 0)), std::invalid_argument);
  EXPECT_THROW(make_tsv(basis_state(2, 0), half), std::invalid_argument);
}

TEST(WeakValue, PigeonholePairsAndTotalVanish) {
  const TwoStateVector tsv = pigeonhole_tsv();
  for (const auto& [a, b] : kPairOrder) {
    EXPECT_NEAR(std::abs(weak_value(tsv, pair_projector(a, b))), 0.0, 1e-10);
  }
  EXPECT_NEAR(std::abs(weak_value(tsv, total_projector())), 0.0, 1e-10);
}

TEST(WeakValue, EqualsExpectationWhenPostEqualsPre) {
  const StateVector psi = preselected_state();
  const TwoStateVector tsv = make_tsv(psi, psi);
  const Complex wv = weak_value(tsv, pair_projector(0, 1));
  EXPECT_NEAR(wv.real(), 0.5, 1e-12);
  EXPECT_NEAR(wv.imag(), 0.0, 1e-12);
}

TEST(WeakValue, IdentityOperatorGivesOne) {
  const TwoStateVector tsv = pigeonhole_tsv();
  EXPECT_NEAR(std::abs(weak_value(tsv, Operator::identity(8)) -
                       Complex(1.0, 0.0)),
              0.0, 1e-12);
}

TEST(WeakValue, DegeneratePairRejectedWithMessage) {
  const TwoStateVector tsv = make_tsv(basis_state(2, 0), basis_state(2, 1));
  try {
    weak_value(tsv, Operator::identity(2));
    FAIL() << "expected runtime_error";
  } catch (const std::runtime_error& e) {
    EXPECT_EQ(std::string(e.what()), "weak value undefined, <post|pre> = 0");
  }
}

TEST(AblDistribution, PigeonholePairIsNullWithCertainty) {
  const TwoStateVector tsv = pigeonhole_tsv();
  for (const auto& [a, b] : kPairOrder) {
    const AblDistribution dist = abl_distribution(tsv, pair_projector(a, b));
    ASSERT_EQ(dist.entries.size(), 2u);
    EXPECT_NEAR(dist.probability_of(0.0), 1.0, 1e-12);
    EXPECT_NEAR(dist.probability_of(1.0), 0.0, 1e-12);
  }
}

TEST(AblDistribution, PigeonholeTotalIsNineToOne) {
  const TwoStateVector tsv = pigeonhole_tsv();
  const AblDistribution dist = abl_distribution(tsv, total_projector());
  EXPECT_NEAR(dist.probability_of(1.0), 0.9, 1e-10);
  EXPECT_NEAR(dist.probability_of(3.0), 0.1, 1e-10);
}

TEST(AblDistribution, EqualPrePostGivesBornWeights) {
  const StateVector psi = preselected_state();
  const TwoStateVector tsv = make_tsv(psi, psi);
  const AblDistribution dist = abl_distribution(tsv, pair_projector(0, 1));
  EXPECT_NEAR(dist.probability_of(0.0), 0.5, 1e-12);
  EXPECT_NEAR(dist.probability_of(1.0), 0.5, 1e-12);
}

TEST(AblDistribution, EntriesAscendingAndNormalized) {
  CounterRng rng(31);
  for (int k = 0; k < 20; ++k) {
    const StateVector pre = random_state(rng, 6);
    const StateVector post = random_state(rng, 6);
    if (std::abs(inner(post, pre)) < 1e-3) continue;
    const Operator a = random_hermitian(rng, 6);
    const AblDistribution dist = abl_distribution(make_tsv(pre, post), a);
    double total = 0.0;
    for (size_t j = 0; j < dist.entries.size(); ++j) {
      if (j > 0) {
        EXPECT_GT(dist.entries[j].first, dist.entries[j - 1].first);
      }
      EXPECT_GE(dist.entries[j].second, -1e-15);
      EXPECT_LE(dist.entries[j].second, 1.0 + 1e-12);
      total += dist.entries[j].second;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_NEAR(dist.probability_of(1e9), 0.0, 0.0);  // off-spectrum query
  }
}

TEST(AblDistribution, ImpossiblePostselectionRejected) {
  // Orthogonal pre/post and identity observable: the measurement cannot
  // restore any overlap.
  const TwoStateVector tsv = make_tsv(basis_state(2, 0), basis_state(2, 1));
  try {
    abl_distribution(tsv, Operator::identity(2));
    FAIL() << "expected runtime_error";
  } catch (const std::runtime_error& e) {
    EXPECT_EQ(std::string(e.what()),
              "postselection impossible after this measurement");
  }
}

TEST(DichotomicCertainty, PigeonholePairIsCertainNull) {
  const TwoStateVector tsv = pigeonhole_tsv();
  for (const auto& [a, b] : kPairOrder) {
    const auto certain = dichotomic_certainty(tsv, pair_projector(a, b));
    ASSERT_TRUE(certain.has_value());
    EXPECT_NEAR(*certain, 0.0, 1e-12);
  }
}

TEST(DichotomicCertainty, TotalWeakValueIsNotAnEigenvalue) {
  // Pi is dichotomic ({1, 3}) but its weak value 0 matches neither.
  const auto certain = dichotomic_certainty(pigeonhole_tsv(), total_projector());
  EXPECT_FALSE(certain.has_value());
}

TEST(DichotomicCertainty, IdentityRejectedAsNonDichotomic) {
  try {
    dichotomic_certainty(pigeonhole_tsv(), Operator::identity(8));
    FAIL() << "expected invalid_argument";
  } catch (const std::invalid_argument& e) {
    EXPECT_EQ(std::string(e.what()),
              "dichotomic certainty requires exactly two distinct eigenvalues, "
              "got 1");
  }
}

TEST(DichotomicCertainty, RequiresVanishingImaginaryPart) {
  // A dichotomic observable whose weak value has Re = eigenvalue but a
  // sizable imaginary part must not report certainty.
  CounterRng rng(33);
  bool tested = false;
  for (int attempt = 0; attempt < 200 && !tested; ++attempt) {
    const StateVector pre = random_state(rng, 4);
    const StateVector post = random_state(rng, 4);
    if (std::abs(inner(post, pre)) < 0.2) continue;
    const Operator p = random_projector(rng, 4, 2);
    const TwoStateVector tsv = make_tsv(pre, post);
    const Complex wv = weak_value(tsv, p);
    if (std::abs(wv.imag()) < 0.1) continue;
    // Shift the observable so Re(weak value) lands exactly on eigenvalue 0:
    // B = P - Re(P_w) I has eigenvalues {-Re, 1-Re}, weak value i*Im(P_w).
    const Operator shifted =
        with_flags(subtract(p, scaled(Operator::identity(4), wv.real())),
                   kHermitian);
    const Complex shifted_wv = weak_value(tsv, shifted);
    EXPECT_NEAR(shifted_wv.real(), 0.0, 1e-10);
    EXPECT_NEAR(shifted_wv.imag(), wv.imag(), 1e-10);
    const auto certain = dichotomic_certainty(tsv, shifted);
    EXPECT_FALSE(certain.has_value());
    tested = true;
  }
  EXPECT_TRUE(tested);
}

TEST(RandomAv91Instance, DeterministicForFixedSeed) {
  const Av91Instance a = random_av91_instance(42, 8);
  const Av91Instance b = random_av91_instance(42, 8);
  EXPECT_EQ(a.eigenvalue, b.eigenvalue);
  for (int j = 0; j < 8; ++j) {
    EXPECT_EQ(a.tsv.pre.amplitude(j), b.tsv.pre.amplitude(j));
    EXPECT_EQ(a.tsv.post.amplitude(j), b.tsv.post.amplitude(j));
  }
  EXPECT_NEAR(max_abs_diff(a.observable, b.observable), 0.0, 0.0);
}

TEST(RandomAv91Instance, WeakValueEqualsEigenvalueByConstruction) {
  for (uint64_t seed = 1; seed <= 25; ++seed) {
    const Av91Instance inst = random_av91_instance(seed, 4);
    const Complex wv = weak_value(inst.tsv, inst.observable);
    EXPECT_NEAR(std::abs(wv - Complex(inst.eigenvalue, 0.0)), 0.0, 1e-10);
  }
}

TEST(RandomAv91Instance, AblAssignsCertainty) {
  for (uint64_t seed = 100; seed < 120; ++seed) {
    const Av91Instance inst = random_av91_instance(seed, 8);
    const AblDistribution dist =
        abl_distribution(inst.tsv, inst.observable);
    EXPECT_NEAR(dist.probability_of(inst.eigenvalue), 1.0, 1e-9);
  }
}

TEST(RandomAv91Instance, RejectsDimensionBelowTwo) {
  EXPECT_THROW(random_av91_instance(1, 1), std::invalid_argument);
}

TEST(Properties, WeakValueIsLinear) {
  CounterRng rng(41);
  int tested = 0;
  while (tested < 200) {
    const StateVector pre = random_state(rng, 8);
    const StateVector post = random_state(rng, 8);
    if (std::abs(inner(post, pre)) < 0.05) continue;  // conditioning guard
    const Operator a = random_hermitian(rng, 8);
    const Operator b = random_hermitian(rng, 8);
    const TwoStateVector tsv = make_tsv(pre, post);
    const Complex lhs = weak_value(tsv, with_flags(add(a, b), kHermitian));
    const Complex rhs = weak_value(tsv, a) + weak_value(tsv, b);
    EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-10);
    ++tested;
  }
}

TEST(Properties, PigeonholeWeakValuesSumToTotal) {
  const TwoStateVector tsv = pigeonhole_tsv();
  Complex sum(0.0, 0.0);
  for (const auto& [a, b] : kPairOrder) {
    sum += weak_value(tsv, pair_projector(a, b));
  }
  EXPECT_NEAR(std::abs(sum - weak_value(tsv, total_projector())), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(sum), 0.0, 1e-10);
}

TEST(Properties, WeakValuesAreGenuinelyComplex) {
  CounterRng rng(43);
  int draws = 0;
  int complex_seen = 0;
  while (draws < 1000) {
    const StateVector pre = random_state(rng, 4);
    const StateVector post = random_state(rng, 4);
    if (std::abs(inner(post, pre)) < 1e-3) continue;
    const Operator p = random_projector(rng, 4, 2);
    const Complex wv = weak_value(make_tsv(pre, post), p);
    if (std::abs(wv.imag()) > 0.1) ++complex_seen;
    ++draws;
  }
  EXPECT_GT(complex_seen, 0);
}

TEST(Properties, SpectralLinearityOfWeakValues) {
  CounterRng rng(44);
  for (int k = 0; k < 20; ++k) {
    const StateVector pre = random_state(rng, 6);
    const StateVector post = random_state(rng, 6);
    if (std::abs(inner(post, pre)) < 0.05) continue;
    const Operator a = random_hermitian(rng, 6);
    const TwoStateVector tsv = make_tsv(pre, post);
    Complex recomposed(0.0, 0.0);
    for (const auto& pair : hermitian_spectrum(a).pairs) {
      recomposed += pair.eigenvalue * weak_value(tsv, pair.projector);
    }
    EXPECT_NEAR(std::abs(recomposed - weak_value(tsv, a)), 0.0, 1e-9);
  }
}

TEST(Properties, PigeonholeEigenprojectorWeakValues) {
  // (P_1)_w = 3/2 and (P_3)_w = -1/2, recombining to (Pi)_w = 0.
  const TwoStateVector tsv = pigeonhole_tsv();
  const Spectrum spec = hermitian_spectrum(total_projector());
  const Complex p1 = weak_value(tsv, spec.projector_for(1.0));
  const Complex p3 = weak_value(tsv, spec.projector_for(3.0));
  EXPECT_NEAR(std::abs(p1 - Complex(1.5, 0.0)), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(p3 - Complex(-0.5, 0.0)), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(p1 + 3.0 * p3), 0.0, 1e-10);
}

TEST(Properties, ProjectorWeakValueZeroOrOneImpliesCertainty) {
  // AV91 corollary: construct tsv pairs whose projector weak value is
  // exactly 0 (or 1) and confirm the conditional distribution is certain.
  CounterRng rng(45);
  int tested = 0;
  while (tested < 40) {
    const int dim = 4;
    const Operator p = random_projector(rng, dim, 2);
    const StateVector pre = random_state(rng, dim);
    const double target = (tested % 2 == 0) ? 0.0 : 1.0;
    // <post|(P - target)|pre> = 0 forces P_w = target.
    const StateVector v = apply(
        with_flags(subtract(p, scaled(Operator::identity(dim), target)),
                   kHermitian),
        pre);
    if (norm_squared(v) < 1e-10) continue;
    const StateVector post = orthogonalized(random_state(rng, dim), v);
    const TwoStateVector tsv = make_tsv(pre, post);
    if (tsv.degenerate || std::abs(tsv.overlap) < 1e-3) continue;
    const Complex wv = weak_value(tsv, p);
    if (std::abs(wv - Complex(target, 0.0)) > kCertaintyTol) continue;
    const auto certain = dichotomic_certainty(tsv, p);
    ASSERT_TRUE(certain.has_value());
    EXPECT_NEAR(*certain, target, 1e-9);
    EXPECT_NEAR(abl_distribution(tsv, p).probability_of(target), 1.0, 1e-9);
    ++tested;
  }
}

}  // namespace
}  // namespace qpigeon
