#include "qpigeon/tsvf.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qpigeon/spectrum.hpp"

namespace qpigeon {

namespace {

void require_same_dim(const TwoStateVector& tsv, const Operator& a) {
  if (a.dim() != tsv.pre.dim()) {
    throw std::invalid_argument("operator dimension mismatch: " +
                                std::to_string(a.dim()) + " vs " +
                                std::to_string(tsv.pre.dim()));
  }
}

}  // namespace

TwoStateVector make_tsv(const StateVector& pre, const StateVector& post) {
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
  const Complex overlap = inner(post, pre);
  return {pre, post, overlap, std::abs(overlap) <= kOrthogonalityTol};
}

Complex weak_value(const TwoStateVector& tsv, const Operator& a) {
  require_same_dim(tsv, a);
  if (tsv.degenerate) {
    throw std::runtime_error("weak value undefined, <post|pre> = 0");
  }
  return inner(tsv.post, apply(a, tsv.pre)) / tsv.overlap;
}

double AblDistribution::probability_of(double eigenvalue, double tol) const {
  for (const auto& [value, probability] : entries) {
    if (std::abs(value - eigenvalue) <= tol) return probability;
  }
  return 0.0;
}

AblDistribution abl_distribution(const TwoStateVector& tsv,
                                 const Operator& a) {
  require_same_dim(tsv, a);
  const Spectrum spectrum = hermitian_spectrum(a);
  std::vector<double> weights;
  weights.reserve(spectrum.pairs.size());
  double denominator = 0.0;
  for (const auto& pair : spectrum.pairs) {
    const double w = std::norm(inner(tsv.post, apply(pair.projector, tsv.pre)));
    weights.push_back(w);
    denominator += w;
  }
  if (denominator <= kAblDenominatorTol) {
    throw std::runtime_error("postselection impossible after this measurement");
  }
  AblDistribution dist;
  dist.entries.reserve(weights.size());
  for (size_t k = 0; k < weights.size(); ++k) {
    dist.entries.emplace_back(spectrum.pairs[k].eigenvalue,
                              weights[k] / denominator);
  }
  return dist;
}

std::optional<double> dichotomic_certainty(const TwoStateVector& tsv,
                                           const Operator& a) {
  const Spectrum spectrum = hermitian_spectrum(a);
  if (spectrum.pairs.size() != 2) {
    throw std::invalid_argument(
        "dichotomic certainty requires exactly two distinct eigenvalues, "
        "got " +
        std::to_string(spectrum.pairs.size()));
  }
  const Complex w = weak_value(tsv, a);
  for (const auto& pair : spectrum.pairs) {
    if (std::abs(w - Complex(pair.eigenvalue, 0.0)) <= kCertaintyTol) {
      return pair.eigenvalue;
    }
  }
  return std::nullopt;
}

StateVector random_state(CounterRng& rng, int dim) {
  if (dim < 1) throw std::invalid_argument("random state requires dim >= 1");
  std::vector<Complex> amps(static_cast<size_t>(dim));
  for (auto& amp : amps) {
    const double re = rng.next_normal();
    const double im = rng.next_normal();
    amp = Complex(re, im);
  }
  return normalized(StateVector(amps));
}

Operator random_hermitian(CounterRng& rng, int dim) {
  if (dim < 1) {
    throw std::invalid_argument("random hermitian requires dim >= 1");
  }
  const size_t n = static_cast<size_t>(dim);
  std::vector<Complex> entries(n * n);
  for (size_t r = 0; r < n; ++r) {
    entries[r * n + r] = Complex(rng.next_normal(), 0.0);
    for (size_t c = r + 1; c < n; ++c) {
      const Complex z(rng.next_normal(), rng.next_normal());
      entries[r * n + c] = z;
      entries[c * n + r] = std::conj(z);
    }
  }
  return Operator(dim, entries, kHermitian);
}

Operator random_projector(CounterRng& rng, int dim, int rank) {
  if (rank < 0 || rank > dim) {
    throw std::invalid_argument("projector rank must lie in [0, dim]");
  }
  std::vector<StateVector> vectors;
  vectors.reserve(static_cast<size_t>(rank));
  for (int k = 0; k < rank; ++k) vectors.push_back(random_state(rng, dim));
  return projector_onto(dim, vectors);
}

Av91Instance random_av91_instance(uint64_t seed, int dim, int max_attempts) {
  if (dim < 2) {
    throw std::invalid_argument("av91 instance requires dim >= 2");
  }
  CounterRng rng(seed);
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    // Dichotomic observable: eigenvalues lam0 != lam1, both eigenspaces
    // non-trivial (rank between 1 and dim-1).
    const int rank = 1 + static_cast<int>(rng.next_uniform() *
                                          static_cast<double>(dim - 1));
    const double lam0 = -2.0 + 4.0 * rng.next_uniform();
    const double gap = 0.5 + 1.5 * rng.next_uniform();
    const double sign = rng.next_uniform() < 0.5 ? -1.0 : 1.0;
    const double lam1 = lam0 + sign * gap;
    const Operator p = random_projector(rng, dim, rank);
    const Operator a =
        add(scaled(p, Complex(lam1 - lam0, 0.0)),
            scaled(Operator::identity(dim), Complex(lam0, 0.0)));

    const StateVector pre = random_state(rng, dim);
    const double lam = rng.next_uniform() < 0.5 ? lam0 : lam1;

    // post must be orthogonal to (A - lam)|pre>; two projection passes keep
    // the residual at rounding level.
    const StateVector v = apply(
        subtract(a, scaled(Operator::identity(dim), Complex(lam, 0.0))), pre);
    const double vn2 = norm_squared(v);
    StateVector candidate = random_state(rng, dim);
    if (vn2 > 1e-24) {
      for (int pass = 0; pass < 2; ++pass) {
        candidate = add(candidate, scaled(v, -inner(v, candidate) / vn2));
      }
    }
    if (norm_squared(candidate) <= 1e-20) continue;
    const StateVector post = normalized(candidate);

    TwoStateVector tsv = make_tsv(pre, post);
    if (tsv.degenerate) continue;
    if (std::abs(weak_value(tsv, a) - Complex(lam, 0.0)) > kCertaintyTol) {
      continue;
    }
    return {std::move(tsv), a, lam};
  }
  throw std::runtime_error("av91 instance sampling exhausted " +
                           std::to_string(max_attempts) + " attempts");
}

}  // namespace qpigeon
