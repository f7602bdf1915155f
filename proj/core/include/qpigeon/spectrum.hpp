// spectrum.hpp -- eigendecomposition of hermitian operators and span projectors.
//
// The solver is a cyclic Jacobi iteration on the real-symmetric embedding
// [[X, -Y], [Y, X]] of a hermitian matrix X + iY.  Eigenvalues of the
// embedding come in duplicated pairs; per eigenvalue cluster the complex
// eigenspace is recovered by Gram-Schmidt over the candidate vectors u + iv.
// No external solver is used so the spectral route stays independent of the
// direct matrix-element route it is checked against.
#pragma once

#include <vector>

#include "qpigeon/operator.hpp"

namespace qpigeon {

inline constexpr int kJacobiMaxSweeps = 100;
inline constexpr double kJacobiOffTol = 1e-12;
inline constexpr double kEigClusterTol = 1e-8;
inline constexpr double kRankTol = 1e-10;

struct EigenPair {
  double eigenvalue;
  int multiplicity;
  Operator projector;  // orthogonal projector onto the eigenspace
};

struct Spectrum {
  std::vector<EigenPair> pairs;  // ascending by eigenvalue

  int total_multiplicity() const;
  // Projector for the eigenvalue nearest to lambda within tol; throws if none.
  const Operator& projector_for(double lambda, double tol = 1e-8) const;
};

// Full eigendecomposition; requires the hermitian flag, eigenvalues within a
// cluster tolerance of 1e-8 are merged into one degenerate pair.
Spectrum hermitian_spectrum(const Operator& op);

// Orthogonal projector onto span{vectors}; linearly dependent inputs are
// discarded at rank tolerance 1e-10.  An empty list gives the zero operator.
Operator projector_onto(int dim, const std::vector<StateVector>& vectors);

}  // namespace qpigeon
