#pragma once

// Radix-2 complex FFT, enough for the power-of-two sample grids used here.

#include <complex>
#include <stdexcept>
#include <vector>

namespace shearmix {

inline bool is_power_of_two(unsigned n) { return n != 0 && (n & (n - 1)) == 0; }

// In-place forward DFT: X_k = sum_j x_j exp(-2 pi i j k / n).
inline void fft_inplace(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  if (!is_power_of_two(static_cast<unsigned>(n))) throw std::invalid_argument("fft: size must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * 3.141592653589793238462643383279 / static_cast<double>(len);
    const std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        std::complex<double> u = a[i + k];
        std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

// Row-major n x n forward 2-D DFT.
inline void fft2_inplace(std::vector<std::complex<double>>& a, int n) {
  std::vector<std::complex<double>> scratch(n);
  for (int r = 0; r < n; ++r) {
    scratch.assign(a.begin() + static_cast<std::ptrdiff_t>(r) * n,
                   a.begin() + static_cast<std::ptrdiff_t>(r + 1) * n);
    fft_inplace(scratch);
    std::copy(scratch.begin(), scratch.end(), a.begin() + static_cast<std::ptrdiff_t>(r) * n);
  }
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < n; ++r) scratch[r] = a[static_cast<std::size_t>(r) * n + c];
    fft_inplace(scratch);
    for (int r = 0; r < n; ++r) a[static_cast<std::size_t>(r) * n + c] = scratch[r];
  }
}

}  // namespace shearmix
