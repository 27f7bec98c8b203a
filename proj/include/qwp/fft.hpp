#pragma once

#include <vector>

#include "qwp/core.hpp"

namespace qwp {

// Radix-2 FFT for power-of-two lengths, x'[n] = sum_k x[k] e^{-2pi i k n / N}.
// The inverse applies the conjugate twiddles and divides by N.
// Butterflies propagate exact zeros, so constant and Nyquist-alternating
// inputs produce bit-exact zero bins away from their single active bin.
void fft_inplace(cplx* x, std::size_t n, bool inverse);

inline void fft(std::vector<cplx>& x) { fft_inplace(x.data(), x.size(), false); }
inline void ifft(std::vector<cplx>& x) { fft_inplace(x.data(), x.size(), true); }

// 2D transforms: rows first, then columns, via the 1D routine.
void fft2_inplace(CMat& a, bool inverse);

}  // namespace qwp
