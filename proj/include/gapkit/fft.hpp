#pragma once

#include <complex>
#include <vector>

namespace gapkit {

// In-place iterative radix-2 FFT, forward sign convention
//   X[n] = sum_j x[j] e^{-2 pi i j n / N}.
// N must be a power of two.
void fft(std::vector<std::complex<double>>& data);

// Inverse transform including the 1/N factor.
void ifft(std::vector<std::complex<double>>& data);

} // namespace gapkit
