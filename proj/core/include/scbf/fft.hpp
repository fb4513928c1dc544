#pragma once

#include <complex>
#include <vector>

#include "scbf/domain.hpp"

namespace scbf::fft {

/// In-place unnormalized c2c transform on a row-major array.
/// sign -1: forward (physical -> raw spectral), sign +1: backward.
/// Plans are cached per shape and created with deterministic heuristics so
/// repeated runs are bit-identical.
void transform(std::complex<double>* data, int rank, const int* dims, int sign);

/// Physical samples (complex carriers, real parts hold the field) of one
/// spectral component on a grid with `m` points per axis, m >= resolution.
std::vector<std::complex<double>> to_physical(const TorusDomain& dom,
                                              const std::complex<double>* comp, int m);

/// Projects grid data back onto the band |k_i| <= N/2 - 1 (Nyquist planes
/// zeroed) with 1/m^dim normalization. Overwrites `comp_out`.
void from_physical(const TorusDomain& dom, std::vector<std::complex<double>>& grid, int m,
                   std::complex<double>* comp_out);

}  // namespace scbf::fft
