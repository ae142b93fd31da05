// gapsol: minimal radix-2 FFT and the analytic-signal transform built on it.
#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace gapsol {

std::size_t next_pow2(std::size_t n);

// In-place iterative radix-2 transform; data.size() must be a power of two.
void fft(std::vector<std::complex<double>>& data, bool inverse);

// Analytic signal of a real series: forward transform (zero-padded to a power
// of two), negative frequencies zeroed, positive doubled, inverse transform.
// Returns the first n entries; |result| is the amplitude envelope.
std::vector<std::complex<double>> analytic_signal(const std::vector<double>& series);

} // namespace gapsol
