#include "gapkit/fft.hpp"

#include "gapkit/types.hpp"

#include <cmath>

namespace gapkit {

namespace {

void transform(std::vector<std::complex<double>>& a, double sign) {
    const std::size_t n = a.size();
    if (n == 0) return;
    if ((n & (n - 1)) != 0) throw Error("fft size must be a power of two");

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * M_PI / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                std::complex<double> u = a[i + j];
                std::complex<double> v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

} // namespace

void fft(std::vector<std::complex<double>>& data) { transform(data, -1.0); }

void ifft(std::vector<std::complex<double>>& data) {
    transform(data, 1.0);
    const double inv = 1.0 / static_cast<double>(data.size());
    for (auto& z : data) z *= inv;
}

} // namespace gapkit
