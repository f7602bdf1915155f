// state.hpp -- dense complex state vectors over a labeled finite basis.
//
// Conventions fixed here and relied on everywhere else:
//   * particle 0 is the most significant label character,
//   * "L" precedes "R" within each particle,
// so for three particles the basis order is LLL, LLR, LRL, LRR, RLL, RLR,
// RRL, RRR.  Dimensions that are powers of two get box labels automatically;
// any other dimension gets decimal index labels.
#pragma once

#include <complex>
#include <string>
#include <vector>

namespace qpigeon {

using Complex = std::complex<double>;

std::vector<std::string> default_basis_labels(int dim);

class StateVector {
 public:
  explicit StateVector(std::vector<Complex> amplitudes);
  StateVector(std::vector<Complex> amplitudes, std::vector<std::string> labels);

  int dim() const { return static_cast<int>(amps_.size()); }
  const Complex& amplitude(int i) const { return amps_[static_cast<size_t>(i)]; }
  const std::vector<Complex>& amplitudes() const { return amps_; }
  const std::string& label(int i) const { return labels_[static_cast<size_t>(i)]; }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  std::vector<Complex> amps_;
  std::vector<std::string> labels_;
};

// <bra|ket>, conjugate-linear in the first argument.
Complex inner(const StateVector& bra, const StateVector& ket);

double norm_squared(const StateVector& s);
bool is_normalized(const StateVector& s, double tol = 1e-12);

// s scaled to unit norm; throws on (near-)zero input.
StateVector normalized(const StateVector& s);

// Kronecker product; basis labels concatenate.
StateVector tensor(const StateVector& a, const StateVector& b);

StateVector add(const StateVector& a, const StateVector& b);
StateVector scaled(const StateVector& a, Complex factor);

}  // namespace qpigeon
