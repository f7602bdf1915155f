#include "qpigeon/operator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qpigeon {

namespace {

size_t idx(int r, int c, int n) {
  return static_cast<size_t>(r) * static_cast<size_t>(n) + static_cast<size_t>(c);
}

void validate_flags(const Operator& op, unsigned flags) {
  if ((flags & kHermitian) && !is_hermitian(op)) {
    throw std::invalid_argument("operator is not hermitian within 1e-12");
  }
  if (flags & kProjector) {
    if (!is_hermitian(op)) {
      throw std::invalid_argument("projector flag requires a hermitian matrix");
    }
    if (!is_projector_matrix(op)) {
      throw std::invalid_argument("operator is not idempotent within 1e-10");
    }
  }
  if ((flags & kUnitary) && !is_unitary(op)) {
    throw std::invalid_argument("operator is not unitary within 1e-10");
  }
}

}  // namespace

Operator::Operator(int dim, std::vector<Complex> entries, unsigned flags)
    : dim_(dim), entries_(std::move(entries)), flags_(flags) {
  if (dim_ <= 0) throw std::invalid_argument("operator dimension must be positive");
  if (entries_.size() != static_cast<size_t>(dim_) * static_cast<size_t>(dim_)) {
    throw std::invalid_argument("operator entry count does not match dimension");
  }
  for (size_t i = 0; i < entries_.size(); ++i) {
    if (!std::isfinite(entries_[i].real()) || !std::isfinite(entries_[i].imag())) {
      throw std::invalid_argument("operator entry " + std::to_string(i) +
                                  " is not finite");
    }
  }
  if (flags_ != 0) validate_flags(*this, flags_);
}

Operator Operator::identity(int dim) {
  std::vector<Complex> e(static_cast<size_t>(dim) * static_cast<size_t>(dim), 0.0);
  for (int i = 0; i < dim; ++i) e[idx(i, i, dim)] = 1.0;
  return Operator(dim, std::move(e), kHermitian | kProjector | kUnitary);
}

Operator Operator::zero(int dim) {
  std::vector<Complex> e(static_cast<size_t>(dim) * static_cast<size_t>(dim), 0.0);
  return Operator(dim, std::move(e), kHermitian | kProjector);
}

Operator Operator::diagonal(const std::vector<double>& values, unsigned flags) {
  const int n = static_cast<int>(values.size());
  std::vector<Complex> e(static_cast<size_t>(n) * static_cast<size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) e[idx(i, i, n)] = values[static_cast<size_t>(i)];
  return Operator(n, std::move(e), flags);
}

bool is_hermitian(const Operator& op, double tol) {
  const int n = op.dim();
  for (int r = 0; r < n; ++r) {
    for (int c = r; c < n; ++c) {
      if (std::abs(op.at(r, c) - std::conj(op.at(c, r))) > tol) return false;
    }
  }
  return true;
}

// Both predicates run inside flag validation, so they work on raw entries
// instead of building flagged operators (which would validate recursively).
bool is_projector_matrix(const Operator& op, double tol) {
  const int n = op.dim();
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      Complex sum = 0.0;
      for (int k = 0; k < n; ++k) sum += op.at(r, k) * op.at(k, c);
      if (std::abs(sum - op.at(r, c)) > tol) return false;
    }
  }
  return true;
}

bool is_unitary(const Operator& op, double tol) {
  const int n = op.dim();
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      Complex sum = 0.0;
      for (int k = 0; k < n; ++k) sum += std::conj(op.at(k, r)) * op.at(k, c);
      const Complex expected = r == c ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
      if (std::abs(sum - expected) > tol) return false;
    }
  }
  return true;
}

Operator with_flags(const Operator& op, unsigned flags) {
  return Operator(op.dim(), op.entries(), op.flags() | flags);
}

StateVector apply(const Operator& op, const StateVector& in) {
  if (op.dim() != in.dim()) {
    throw std::invalid_argument("apply dimension mismatch: operator " +
                                std::to_string(op.dim()) + " vs state " +
                                std::to_string(in.dim()));
  }
  std::vector<Complex> out(static_cast<size_t>(op.dim()), 0.0);
  for (int r = 0; r < op.dim(); ++r) {
    Complex sum = 0.0;
    for (int c = 0; c < op.dim(); ++c) sum += op.at(r, c) * in.amplitude(c);
    out[static_cast<size_t>(r)] = sum;
  }
  return StateVector(std::move(out), in.labels());
}

namespace {

void require_same_dim(const Operator& a, const Operator& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument(std::string(what) + " dimension mismatch: " +
                                std::to_string(a.dim()) + " vs " +
                                std::to_string(b.dim()));
  }
}

}  // namespace

Operator add(const Operator& a, const Operator& b) {
  require_same_dim(a, b, "operator sum");
  std::vector<Complex> e = a.entries();
  for (size_t i = 0; i < e.size(); ++i) e[i] += b.entries()[i];
  const unsigned f = (a.flags() & b.flags()) & kHermitian;
  return Operator(a.dim(), std::move(e), f);
}

Operator subtract(const Operator& a, const Operator& b) {
  require_same_dim(a, b, "operator difference");
  std::vector<Complex> e = a.entries();
  for (size_t i = 0; i < e.size(); ++i) e[i] -= b.entries()[i];
  const unsigned f = (a.flags() & b.flags()) & kHermitian;
  return Operator(a.dim(), std::move(e), f);
}

Operator multiply(const Operator& a, const Operator& b) {
  require_same_dim(a, b, "operator product");
  const int n = a.dim();
  std::vector<Complex> e(static_cast<size_t>(n) * static_cast<size_t>(n), 0.0);
  for (int r = 0; r < n; ++r) {
    for (int k = 0; k < n; ++k) {
      const Complex ark = a.at(r, k);
      if (ark == Complex(0.0, 0.0)) continue;
      for (int c = 0; c < n; ++c) e[idx(r, c, n)] += ark * b.at(k, c);
    }
  }
  const unsigned f = (a.flags() & b.flags()) & kUnitary;
  return Operator(n, std::move(e), f);
}

Operator scaled(const Operator& a, Complex factor) {
  std::vector<Complex> e = a.entries();
  for (auto& v : e) v *= factor;
  const unsigned f = (factor.imag() == 0.0) ? (a.flags() & kHermitian) : 0u;
  return Operator(a.dim(), std::move(e), f);
}

Operator adjoint(const Operator& a) {
  const int n = a.dim();
  std::vector<Complex> e(static_cast<size_t>(n) * static_cast<size_t>(n));
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) e[idx(r, c, n)] = std::conj(a.at(c, r));
  }
  return Operator(n, std::move(e), a.flags());
}

Operator tensor(const Operator& a, const Operator& b) {
  const int na = a.dim(), nb = b.dim(), n = na * nb;
  std::vector<Complex> e(static_cast<size_t>(n) * static_cast<size_t>(n));
  for (int ra = 0; ra < na; ++ra) {
    for (int ca = 0; ca < na; ++ca) {
      for (int rb = 0; rb < nb; ++rb) {
        for (int cb = 0; cb < nb; ++cb) {
          e[idx(ra * nb + rb, ca * nb + cb, n)] = a.at(ra, ca) * b.at(rb, cb);
        }
      }
    }
  }
  return Operator(n, std::move(e), a.flags() & b.flags());
}

Complex trace(const Operator& a) {
  Complex t = 0.0;
  for (int i = 0; i < a.dim(); ++i) t += a.at(i, i);
  return t;
}

double max_abs_diff(const Operator& a, const Operator& b) {
  require_same_dim(a, b, "operator comparison");
  double m = 0.0;
  for (size_t i = 0; i < a.entries().size(); ++i) {
    m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
  }
  return m;
}

}  // namespace qpigeon
