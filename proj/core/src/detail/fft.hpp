#pragma once

#include <complex>

#include "ridk/fields.hpp"

namespace ridk::detail {

// Unnormalised multi-dimensional DFTs (FFTW sign conventions).  `in` and
// `out` must not alias.  Safe to call concurrently.
void fft_forward(const TorusGrid& grid, const std::complex<double>* in, std::complex<double>* out);
void fft_backward(const TorusGrid& grid, const std::complex<double>* in, std::complex<double>* out);

}  // namespace ridk::detail
