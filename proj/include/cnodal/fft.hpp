#pragma once

// Minimal iterative radix-2 FFT for power-of-two grids, plus an
// n-dimensional wrapper (row-major, last axis fastest). Used for discrete
// Fourier analysis of sampled fields; sizes here are small enough that a
// tuned library would change nothing but the constant.

#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace cnodal {

inline bool is_power_of_two(std::int64_t v) { return v > 0 && (v & (v - 1)) == 0; }

// In-place decimation-in-time FFT; size must be a power of two.
// inverse=false computes sum_m a[m] e^{-2*pi*i*k*m/N} (unnormalized);
// inverse=true the conjugate transform, also unnormalized.
inline void fft_inplace(std::complex<double>* a, std::int64_t size, bool inverse) {
  if (!is_power_of_two(size)) throw std::invalid_argument("fft size must be 2^k");
  // bit-reversal permutation
  for (std::int64_t i = 1, j = 0; i < size; ++i) {
    std::int64_t bit = size >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::int64_t len = 2; len <= size; len <<= 1) {
    const double ang = (inverse ? 2.0 : -2.0) * std::numbers::pi / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::int64_t i = 0; i < size; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::int64_t j = 0; j < len / 2; ++j) {
        std::complex<double> u = a[i + j];
        std::complex<double> v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

// FFT along every axis of a row-major array (last axis fastest).
inline void fft_nd(std::vector<std::complex<double>>& data,
                   const std::vector<std::int64_t>& dims, bool inverse) {
  std::int64_t total = 1;
  for (std::int64_t d : dims) total *= d;
  if (static_cast<std::int64_t>(data.size()) != total)
    throw std::invalid_argument("fft_nd: size mismatch");
  std::int64_t stride = 1;  // stride of the current axis, built from the last
  for (std::size_t axis = dims.size(); axis-- > 0;) {
    const std::int64_t n = dims[axis];
    std::vector<std::complex<double>> line(static_cast<std::size_t>(n));
    const std::int64_t block = stride * n;
    for (std::int64_t base = 0; base < total; base += block) {
      for (std::int64_t off = 0; off < stride; ++off) {
        for (std::int64_t m = 0; m < n; ++m)
          line[static_cast<std::size_t>(m)] = data[base + off + m * stride];
        fft_inplace(line.data(), n, inverse);
        for (std::int64_t m = 0; m < n; ++m)
          data[base + off + m * stride] = line[static_cast<std::size_t>(m)];
      }
    }
    stride = block;
  }
}

// Maps a DFT bin index to its signed integer frequency.
inline int dft_bin_to_freq(std::int64_t bin, std::int64_t n) {
  return static_cast<int>(bin <= n / 2 ? bin : bin - n);
}

}  // namespace cnodal
