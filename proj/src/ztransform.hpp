#pragma once

// Batched real <-> complex DFT along z for every radial row of a field.
// Plans are cached per (nr, nz) and per thread; FFTW planning is serialised.

#include <complex>
#include <vector>

#include "hallmhd/grid.hpp"

namespace hallmhd::detail {

using Complex = std::complex<double>;

/// Spectrum layout: modes k = 0..nz/2 for each row, row-major [i*(nz/2+1) + k].
struct ZSpectrum {
  int nr = 0;
  int nmodes = 0;
  std::vector<Complex> data;
  Complex& operator()(int i, int k) { return data[static_cast<std::size_t>(i) * nmodes + k]; }
  Complex operator()(int i, int k) const { return data[static_cast<std::size_t>(i) * nmodes + k]; }
};

/// Forward transform (unnormalised).
ZSpectrum forward_z(const ScalarField& f);
/// Inverse transform including the 1/nz normalisation; parity and grid from the arguments.
ScalarField inverse_z(const ZSpectrum& s, const GridSpec& grid, Parity parity);

}  // namespace hallmhd::detail
