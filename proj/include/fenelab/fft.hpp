#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

namespace fenelab::fft {

/// In-place iterative radix-2 FFT; n must be a power of two. No normalization.
inline void transform(std::complex<double>* a, int n, bool inverse) {
    if (n <= 1) return;
    if ((n & (n - 1)) != 0) throw std::invalid_argument("fft: size must be a power of two");

    for (int i = 1, j = 0; i < n; ++i) {
        int bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (int len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * 3.14159265358979323846 / len * (inverse ? 1.0 : -1.0);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (int i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (int j = 0; j < len / 2; ++j) {
                const std::complex<double> u = a[i + j];
                const std::complex<double> v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

/// 2-D transform of an n*n row-major array (rows then columns).
inline void transform2(std::complex<double>* a, int n, bool inverse) {
    for (int row = 0; row < n; ++row) transform(a + static_cast<long>(row) * n, n, inverse);
    std::vector<std::complex<double>> col(static_cast<std::size_t>(n));
    for (int c = 0; c < n; ++c) {
        for (int r = 0; r < n; ++r) col[static_cast<std::size_t>(r)] = a[static_cast<long>(r) * n + c];
        transform(col.data(), n, inverse);
        for (int r = 0; r < n; ++r) a[static_cast<long>(r) * n + c] = col[static_cast<std::size_t>(r)];
    }
}

} // namespace fenelab::fft
