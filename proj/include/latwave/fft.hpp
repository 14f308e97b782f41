#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace latwave::detail {

using cdouble = std::complex<double>;

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 Cooley-Tukey. sign = -1 forward, +1 inverse kernel.
// No normalization.
inline void fft_pow2(std::vector<cdouble>& a, int sign) {
    const std::size_t n = a.size();
    if (n <= 1) return;
    // bit reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
        const std::size_t half = len / 2;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < half; ++k) {
                // direct twiddle evaluation keeps rounding O(eps) per butterfly
                const cdouble w = std::polar(1.0, ang * static_cast<double>(k));
                const cdouble u = a[i + k];
                const cdouble v = a[i + k + half] * w;
                a[i + k] = u + v;
                a[i + k + half] = u - v;
            }
        }
    }
}

// Bluestein chirp-z transform: DFT of arbitrary length via one pow2 convolution.
// Kernel matches fft_pow2's: X_k = sum_j a_j exp(sign*2*pi*i*j*k/n).
inline void fft_bluestein(std::vector<cdouble>& a, int sign) {
    const std::size_t n = a.size();
    if (n <= 1) return;
    std::size_t m = 1;
    while (m < 2 * n - 1) m <<= 1;
    // chirp(j) = exp(sign*pi*i*j^2/n); j^2 taken mod 2n, exact in 64-bit
    std::vector<cdouble> chirp(n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::uint64_t q = (static_cast<std::uint64_t>(j) * j) % (2 * n);
        chirp[j] = std::polar(1.0, sign * std::numbers::pi * static_cast<double>(q) /
                                       static_cast<double>(n));
    }
    std::vector<cdouble> b(m, cdouble{0.0, 0.0}), c(m, cdouble{0.0, 0.0});
    for (std::size_t j = 0; j < n; ++j) b[j] = a[j] * chirp[j];
    c[0] = std::conj(chirp[0]);
    for (std::size_t j = 1; j < n; ++j) c[j] = c[m - j] = std::conj(chirp[j]);
    fft_pow2(b, -1);
    fft_pow2(c, -1);
    for (std::size_t j = 0; j < m; ++j) b[j] *= c[j];
    fft_pow2(b, +1);
    const double scale = 1.0 / static_cast<double>(m);
    for (std::size_t k = 0; k < n; ++k) a[k] = b[k] * scale * chirp[k];
}

inline void fft_1d(std::vector<cdouble>& a, int sign) {
    if (is_pow2(a.size()))
        fft_pow2(a, sign);
    else
        fft_bluestein(a, sign);
}

// Unnormalized n-dimensional transform on a row-major cube of side N
// (axis 0 has stride 1). Applies the 1D kernel along every axis.
inline void fft_nd(std::vector<cdouble>& data, int n_axes, std::size_t N, int sign) {
    if (N == 0 || data.size() == 0) throw std::invalid_argument("fft_nd: empty field");
    std::vector<cdouble> line(N);
    std::size_t stride = 1;
    for (int axis = 0; axis < n_axes; ++axis) {
        const std::size_t block = stride * N;
        for (std::size_t base = 0; base < data.size(); base += block) {
            for (std::size_t off = 0; off < stride; ++off) {
                for (std::size_t k = 0; k < N; ++k) line[k] = data[base + off + k * stride];
                fft_1d(line, sign);
                for (std::size_t k = 0; k < N; ++k) data[base + off + k * stride] = line[k];
            }
        }
        stride *= N;
    }
}

}  // namespace latwave::detail
