#include "qpigeon/state.hpp"

#include <cmath>
#include <stdexcept>

namespace qpigeon {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void require_finite(const std::vector<Complex>& amps) {
  for (size_t i = 0; i < amps.size(); ++i) {
    if (!std::isfinite(amps[i].real()) || !std::isfinite(amps[i].imag())) {
      throw std::invalid_argument("state amplitude " + std::to_string(i) +
                                  " is not finite");
    }
  }
}

}  // namespace

std::vector<std::string> default_basis_labels(int dim) {
  if (dim <= 0) throw std::invalid_argument("basis dimension must be positive");
  std::vector<std::string> labels;
  labels.reserve(static_cast<size_t>(dim));
  if (is_power_of_two(dim) && dim > 1) {
    int particles = 0;
    for (int d = dim; d > 1; d >>= 1) ++particles;
    for (int i = 0; i < dim; ++i) {
      std::string s(static_cast<size_t>(particles), 'L');
      for (int j = 0; j < particles; ++j) {
        if ((i >> (particles - 1 - j)) & 1) s[static_cast<size_t>(j)] = 'R';
      }
      labels.push_back(std::move(s));
    }
  } else {
    for (int i = 0; i < dim; ++i) labels.push_back(std::to_string(i));
  }
  return labels;
}

StateVector::StateVector(std::vector<Complex> amplitudes)
    : amps_(std::move(amplitudes)),
      labels_(default_basis_labels(static_cast<int>(amps_.size()))) {
  require_finite(amps_);
}

StateVector::StateVector(std::vector<Complex> amplitudes,
                         std::vector<std::string> labels)
    : amps_(std::move(amplitudes)), labels_(std::move(labels)) {
  if (amps_.empty()) throw std::invalid_argument("state must have dimension >= 1");
  if (labels_.size() != amps_.size()) {
    throw std::invalid_argument("label count " + std::to_string(labels_.size()) +
                                " does not match dimension " +
                                std::to_string(amps_.size()));
  }
  require_finite(amps_);
}

Complex inner(const StateVector& bra, const StateVector& ket) {
  if (bra.dim() != ket.dim()) {
    throw std::invalid_argument("inner product dimension mismatch: " +
                                std::to_string(bra.dim()) + " vs " +
                                std::to_string(ket.dim()));
  }
  Complex sum = 0.0;
  for (int i = 0; i < bra.dim(); ++i) {
    sum += std::conj(bra.amplitude(i)) * ket.amplitude(i);
  }
  return sum;
}

double norm_squared(const StateVector& s) {
  double sum = 0.0;
  for (int i = 0; i < s.dim(); ++i) sum += std::norm(s.amplitude(i));
  return sum;
}

bool is_normalized(const StateVector& s, double tol) {
  return std::abs(norm_squared(s) - 1.0) <= tol;
}

StateVector normalized(const StateVector& s) {
  const double n2 = norm_squared(s);
  if (n2 <= 1e-300) throw std::invalid_argument("cannot normalize a zero state");
  const double inv = 1.0 / std::sqrt(n2);
  std::vector<Complex> amps = s.amplitudes();
  for (auto& a : amps) a *= inv;
  return StateVector(std::move(amps), s.labels());
}

StateVector tensor(const StateVector& a, const StateVector& b) {
  std::vector<Complex> amps;
  std::vector<std::string> labels;
  amps.reserve(static_cast<size_t>(a.dim()) * static_cast<size_t>(b.dim()));
  labels.reserve(amps.capacity());
  for (int i = 0; i < a.dim(); ++i) {
    for (int j = 0; j < b.dim(); ++j) {
      amps.push_back(a.amplitude(i) * b.amplitude(j));
      labels.push_back(a.label(i) + b.label(j));
    }
  }
  return StateVector(std::move(amps), std::move(labels));
}

StateVector add(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("state sum dimension mismatch: " +
                                std::to_string(a.dim()) + " vs " +
                                std::to_string(b.dim()));
  }
  std::vector<Complex> amps = a.amplitudes();
  for (int i = 0; i < b.dim(); ++i) amps[static_cast<size_t>(i)] += b.amplitude(i);
  return StateVector(std::move(amps), a.labels());
}

StateVector scaled(const StateVector& a, Complex factor) {
  std::vector<Complex> amps = a.amplitudes();
  for (auto& v : amps) v *= factor;
  return StateVector(std::move(amps), a.labels());
}

}  // namespace qpigeon
