// fft.hpp -- small discrete Fourier transform used for exact periodic
// translation of pointer wavefunctions and for momentum-space moments.
// Radix-2 fast path for power-of-two sizes, O(n^2) fallback otherwise;
// grids here are ~1k points so nothing heavier is warranted.
#pragma once

#include <vector>

#include "qpigeon/state.hpp"

namespace qpigeon {

// Unnormalized forward DFT: c_m = sum_j data_j e^{-2 pi i m j / n}.
void dft_forward(std::vector<Complex>& data);

// Inverse of dft_forward (includes the 1/n factor).
void dft_inverse(std::vector<Complex>& data);

// Angular frequencies 2*pi*m/(n*spacing) in standard DFT order
// (non-negative first, then negative).
std::vector<double> dft_frequencies(int n, double spacing);

// Exact periodic translation: wave(x) -> wave(x - delta), any real delta.
void translate(std::vector<Complex>& wave, double spacing, double delta);

}  // namespace qpigeon
