#include "qpigeon/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qpigeon {

namespace {

size_t idx(int r, int c, int n) {
  return static_cast<size_t>(r) * static_cast<size_t>(n) + static_cast<size_t>(c);
}

// Cyclic Jacobi on a real symmetric matrix (row-major, modified in place).
// v accumulates the rotations: on return a is diagonal and the columns of v
// are the eigenvectors.  Convergence: max off-diagonal <= tol, at most
// kJacobiMaxSweeps full sweeps.
void jacobi_real_symmetric(std::vector<double>& a, std::vector<double>& v, int n) {
  v.assign(static_cast<size_t>(n) * static_cast<size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) v[idx(i, i, n)] = 1.0;

  double scale = 1.0;
  for (const double x : a) scale = std::max(scale, std::abs(x));
  const double tol = kJacobiOffTol * scale;

  for (int sweep = 0; sweep < kJacobiMaxSweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) off = std::max(off, std::abs(a[idx(p, q, n)]));
    }
    if (off <= tol) return;

    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a[idx(p, q, n)];
        if (std::abs(apq) <= tol * 1e-3) continue;
        const double tau = (a[idx(q, q, n)] - a[idx(p, p, n)]) / (2.0 * apq);
        double t;
        if (std::abs(tau) > 1e150) {
          t = 1.0 / (2.0 * tau);
        } else {
          t = ((tau >= 0.0) ? 1.0 : -1.0) /
              (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {  // A <- A J
          const double akp = a[idx(k, p, n)], akq = a[idx(k, q, n)];
          a[idx(k, p, n)] = c * akp - s * akq;
          a[idx(k, q, n)] = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {  // A <- J^T A
          const double apk = a[idx(p, k, n)], aqk = a[idx(q, k, n)];
          a[idx(p, k, n)] = c * apk - s * aqk;
          a[idx(q, k, n)] = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {  // V <- V J
          const double vkp = v[idx(k, p, n)], vkq = v[idx(k, q, n)];
          v[idx(k, p, n)] = c * vkp - s * vkq;
          v[idx(k, q, n)] = s * vkp + c * vkq;
        }
      }
    }
  }
  throw std::runtime_error(
      "jacobi eigensolver failed to converge within " +
      std::to_string(kJacobiMaxSweeps) + " sweeps");
}

// Modified Gram-Schmidt with one re-orthogonalization pass.  Appends the
// normalized residual of `cand` to `basis` when its norm stays above tol.
bool gram_schmidt_accept(std::vector<std::vector<Complex>>& basis,
                         std::vector<Complex> cand, double tol) {
  const int n = static_cast<int>(cand.size());
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& e : basis) {
      Complex proj = 0.0;
      for (int i = 0; i < n; ++i) proj += std::conj(e[static_cast<size_t>(i)]) *
                                          cand[static_cast<size_t>(i)];
      for (int i = 0; i < n; ++i) cand[static_cast<size_t>(i)] -=
          proj * e[static_cast<size_t>(i)];
    }
  }
  double n2 = 0.0;
  for (const auto& x : cand) n2 += std::norm(x);
  const double nrm = std::sqrt(n2);
  if (nrm < tol) return false;
  for (auto& x : cand) x /= nrm;
  basis.push_back(std::move(cand));
  return true;
}

Operator projector_from_basis(int dim, const std::vector<std::vector<Complex>>& basis) {
  std::vector<Complex> e(static_cast<size_t>(dim) * static_cast<size_t>(dim), 0.0);
  for (const auto& vec : basis) {
    for (int r = 0; r < dim; ++r) {
      for (int c = 0; c < dim; ++c) {
        e[idx(r, c, dim)] += vec[static_cast<size_t>(r)] *
                             std::conj(vec[static_cast<size_t>(c)]);
      }
    }
  }
  return Operator(dim, std::move(e), kHermitian | kProjector);
}

}  // namespace

int Spectrum::total_multiplicity() const {
  int total = 0;
  for (const auto& p : pairs) total += p.multiplicity;
  return total;
}

const Operator& Spectrum::projector_for(double lambda, double tol) const {
  for (const auto& p : pairs) {
    if (std::abs(p.eigenvalue - lambda) <= tol) return p.projector;
  }
  throw std::invalid_argument("no eigenvalue within tolerance of " +
                              std::to_string(lambda));
}

Spectrum hermitian_spectrum(const Operator& op) {
  if (!op.has_flag(kHermitian)) {
    throw std::invalid_argument(
        "hermitian_spectrum requires a hermitian-flagged operator");
  }
  const int n = op.dim();
  const int m = 2 * n;

  // Real-symmetric embedding [[X, -Y], [Y, X]] of X + iY.
  std::vector<double> s(static_cast<size_t>(m) * static_cast<size_t>(m), 0.0);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const Complex h = op.at(r, c);
      s[idx(r, c, m)] = h.real();
      s[idx(r + n, c + n, m)] = h.real();
      s[idx(r, c + n, m)] = -h.imag();
      s[idx(r + n, c, m)] = h.imag();
    }
  }

  std::vector<double> v;
  jacobi_real_symmetric(s, v, m);

  std::vector<int> order(static_cast<size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return s[idx(a, a, m)] < s[idx(b, b, m)]; });

  Spectrum result;
  size_t start = 0;
  while (start < order.size()) {
    size_t end = start + 1;
    while (end < order.size() &&
           s[idx(order[end], order[end], m)] -
                   s[idx(order[end - 1], order[end - 1], m)] <=
               kEigClusterTol) {
      ++end;
    }
    if ((end - start) % 2 != 0) {
      throw std::runtime_error(
          "eigenvalue clustering failed: embedded pair split across clusters");
    }

    double lambda = 0.0;
    for (size_t i = start; i < end; ++i) lambda += s[idx(order[i], order[i], m)];
    lambda /= static_cast<double>(end - start);

    // Candidates u + iv from the embedded eigenvectors; half are redundant
    // (w and iw describe the same complex line), Gram-Schmidt keeps one each.
    std::vector<std::vector<Complex>> basis;
    for (size_t i = start; i < end; ++i) {
      std::vector<Complex> cand(static_cast<size_t>(n));
      for (int r = 0; r < n; ++r) {
        cand[static_cast<size_t>(r)] =
            Complex(v[idx(r, order[i], m)], v[idx(r + n, order[i], m)]);
      }
      gram_schmidt_accept(basis, std::move(cand), kRankTol);
    }
    const int mult = static_cast<int>(basis.size());
    if (mult != static_cast<int>((end - start) / 2)) {
      throw std::runtime_error(
          "eigenspace extraction failed: rank does not match cluster size");
    }
    result.pairs.push_back(EigenPair{lambda, mult, projector_from_basis(n, basis)});
    start = end;
  }

  if (result.total_multiplicity() != n) {
    throw std::runtime_error("eigendecomposition multiplicities do not sum to dim");
  }
  return result;
}

Operator projector_onto(int dim, const std::vector<StateVector>& vectors) {
  if (dim <= 0) throw std::invalid_argument("projector dimension must be positive");
  std::vector<std::vector<Complex>> basis;
  for (size_t k = 0; k < vectors.size(); ++k) {
    if (vectors[k].dim() != dim) {
      throw std::invalid_argument("projector_onto vector " + std::to_string(k) +
                                  " has dimension " +
                                  std::to_string(vectors[k].dim()) + ", expected " +
                                  std::to_string(dim));
    }
    const double n2 = norm_squared(vectors[k]);
    if (n2 <= kRankTol * kRankTol) continue;  // zero vector adds nothing
    std::vector<Complex> cand = vectors[k].amplitudes();
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& x : cand) x *= inv;
    gram_schmidt_accept(basis, std::move(cand), kRankTol);
  }
  return projector_from_basis(dim, basis);
}

}  // namespace qpigeon
