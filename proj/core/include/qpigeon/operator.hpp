// operator.hpp -- dense complex operators with validated structure flags.
#pragma once

#include <vector>

#include "qpigeon/state.hpp"

namespace qpigeon {

// Structure flags.  A flag may only be attached when the matrix actually
// satisfies the property within the fixed validation tolerance, so flagged
// operators can be trusted downstream.
enum OpFlag : unsigned {
  kHermitian = 1u << 0,  // max |M - M^dagger| <= 1e-12
  kProjector = 1u << 1,  // hermitian and max |M^2 - M| <= 1e-10
  kUnitary = 1u << 2,    // max |M^dagger M - I| <= 1e-10
};

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kProjectorTol = 1e-10;
inline constexpr double kUnitaryTol = 1e-10;

class Operator {
 public:
  // Row-major entries; validates finiteness and any requested flags.
  Operator(int dim, std::vector<Complex> entries, unsigned flags = 0);

  static Operator identity(int dim);
  static Operator zero(int dim);
  static Operator diagonal(const std::vector<double>& values, unsigned flags = 0);

  int dim() const { return dim_; }
  unsigned flags() const { return flags_; }
  bool has_flag(OpFlag f) const { return (flags_ & f) != 0; }

  const Complex& at(int r, int c) const {
    return entries_[static_cast<size_t>(r) * static_cast<size_t>(dim_) +
                    static_cast<size_t>(c)];
  }
  const std::vector<Complex>& entries() const { return entries_; }

 private:
  int dim_;
  std::vector<Complex> entries_;
  unsigned flags_;
};

// Numeric property checks (independent of flags).
bool is_hermitian(const Operator& op, double tol = kHermitianTol);
bool is_projector_matrix(const Operator& op, double tol = kProjectorTol);
bool is_unitary(const Operator& op, double tol = kUnitaryTol);

// Copy of op with extra flags attached; throws if a property does not hold.
Operator with_flags(const Operator& op, unsigned flags);

// |out> = op |in>; the result is generally not normalized.
StateVector apply(const Operator& op, const StateVector& in);

Operator add(const Operator& a, const Operator& b);
Operator subtract(const Operator& a, const Operator& b);
Operator multiply(const Operator& a, const Operator& b);
Operator scaled(const Operator& a, Complex factor);
Operator adjoint(const Operator& a);
Operator tensor(const Operator& a, const Operator& b);

Complex trace(const Operator& a);

// max_ij |a_ij - b_ij|; used by tests and validations.
double max_abs_diff(const Operator& a, const Operator& b);

}  // namespace qpigeon
