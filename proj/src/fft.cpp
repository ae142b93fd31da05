#include "gapsol/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace gapsol {

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

void fft(std::vector<std::complex<double>>& data, bool inverse) {
    const std::size_t n = data.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("fft: length must be a power of two");

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }

    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * M_PI / double(len);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> even = data[i + k];
                const std::complex<double> odd = data[i + k + len / 2] * w;
                data[i + k] = even + odd;
                data[i + k + len / 2] = even - odd;
                w *= wlen;
            }
        }
    }
    if (inverse) {
        const double inv_n = 1.0 / double(n);
        for (auto& x : data) x *= inv_n;
    }
}

std::vector<std::complex<double>> analytic_signal(const std::vector<double>& series) {
    const std::size_t n = series.size();
    const std::size_t m = next_pow2(n);
    std::vector<std::complex<double>> buf(m, {0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) buf[i] = {series[i], 0.0};

    fft(buf, false);
    for (std::size_t k = 1; k < m / 2; ++k) buf[k] *= 2.0;
    for (std::size_t k = m / 2 + 1; k < m; ++k) buf[k] = {0.0, 0.0};
    fft(buf, true);

    buf.resize(n);
    return buf;
}

} // namespace gapsol
