#ifndef ROUGHFLOW_FBM_HPP
#define ROUGHFLOW_FBM_HPP

#include <complex>
#include <cstdint>
#include <vector>

#include "roughflow/grid.hpp"

namespace roughflow {

/// In-place radix-2 FFT (size must be a power of two). sign = -1 forward.
void fft_radix2(std::vector<std::complex<double>>& a, int sign);

/// One exact fractional Brownian motion sample at the grid nodes, started at 0.
/// Circulant embedding (Davies-Harte) of the increment process; falls back to a
/// Cholesky factor of the increment covariance if the embedding spectrum has a
/// genuinely negative eigenvalue. Deterministic in (hurst, grid, seed).
std::vector<double> sample_fbm_1d(double hurst, const Grid& grid, std::uint64_t seed);

}  // namespace roughflow

#endif
