#include "qpigeon/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qpigeon {

namespace {

bool is_power_of_two(size_t n) { return n > 0 && (n & (n - 1)) == 0; }

// Iterative radix-2 Cooley-Tukey; sign = -1 forward, +1 inverse (no scaling).
void fft_radix2(std::vector<Complex>& a, int sign) {
  const size_t n = a.size();
  for (size_t i = 1, j = 0; i < n; ++i) {  // bit-reversal permutation
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
    const Complex wlen = std::polar(1.0, ang);
    for (size_t i = 0; i < n; i += len) {
      Complex w = 1.0;
      for (size_t k = 0; k < len / 2; ++k) {
        const Complex u = a[i + k];
        const Complex t = a[i + k + len / 2] * w;
        a[i + k] = u + t;
        a[i + k + len / 2] = u - t;
        w *= wlen;
      }
    }
  }
}

void dft_naive(std::vector<Complex>& a, int sign) {
  const size_t n = a.size();
  std::vector<Complex> out(n, 0.0);
  const double base = sign * 2.0 * std::numbers::pi / static_cast<double>(n);
  for (size_t m = 0; m < n; ++m) {
    Complex sum = 0.0;
    for (size_t j = 0; j < n; ++j) {
      sum += a[j] * std::polar(1.0, base * static_cast<double>(m * j % n));
    }
    out[m] = sum;
  }
  a = std::move(out);
}

void transform(std::vector<Complex>& a, int sign) {
  if (a.empty()) throw std::invalid_argument("dft input must be non-empty");
  if (is_power_of_two(a.size())) {
    fft_radix2(a, sign);
  } else {
    dft_naive(a, sign);
  }
}

}  // namespace

void dft_forward(std::vector<Complex>& data) { transform(data, -1); }

void dft_inverse(std::vector<Complex>& data) {
  transform(data, +1);
  const double inv = 1.0 / static_cast<double>(data.size());
  for (auto& x : data) x *= inv;
}

std::vector<double> dft_frequencies(int n, double spacing) {
  if (n <= 0 || spacing <= 0.0) {
    throw std::invalid_argument("dft_frequencies requires n > 0 and spacing > 0");
  }
  std::vector<double> freq(static_cast<size_t>(n));
  const double unit =
      2.0 * std::numbers::pi / (static_cast<double>(n) * spacing);
  for (int m = 0; m < n; ++m) {
    const int k = (m <= (n - 1) / 2) ? m : m - n;
    freq[static_cast<size_t>(m)] = unit * static_cast<double>(k);
  }
  return freq;
}

void translate(std::vector<Complex>& wave, double spacing, double delta) {
  if (delta == 0.0) return;
  const auto freq = dft_frequencies(static_cast<int>(wave.size()), spacing);
  dft_forward(wave);
  for (size_t m = 0; m < wave.size(); ++m) {
    wave[m] *= std::polar(1.0, -freq[m] * delta);
  }
  dft_inverse(wave);
}

}  // namespace qpigeon
