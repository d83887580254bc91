#pragma once

#include <functional>
#include <span>
#include <vector>

#include "morrlab/grid.hpp"

namespace morrlab::fft {

/// Symbol m(xi), sampled on the dual lattice xi_k = k/(2L), k in [-N/2, N/2).
using SymbolFn = std::function<Complex(const Point& xi)>;

/// Kernel K(z) on node-offset vectors z = m h, m integer per axis.
using OffsetKernelFn = std::function<Complex(const Point& z)>;

/// Signed frequency of FFT bin `idx` on one axis: k/(2L) with k in [-N/2, N/2).
double bin_frequency(const GridSpec& spec, std::size_t idx);

/// Forward transform F(xi_k) = h^n sum_j f(x_j) e^{-2 pi i x_j xi_k},
/// returned in FFT bin order (use bin_frequency per axis index).
std::vector<Complex> forward(const GridFunction& f);

/// Inverse of `forward`: f(x_j) = (2L)^{-n} sum_k F(xi_k) e^{+2 pi i x_j xi_k}.
GridFunction inverse(const GridSpec& spec, std::span<const Complex> spectrum);

/// g with spectrum m(xi) F(xi); phases of the cell-centered transform cancel.
GridFunction apply_symbol(const GridFunction& f, const SymbolFn& m);

/// Spatial kernel of a symbol: inverse transform of {m(xi_k)}.
GridFunction synthesize_kernel(const GridSpec& spec, const SymbolFn& m);

/// Aperiodic convolution (K * f)(x_i) = h^n sum_j K(x_i - x_j) f(x_j),
/// evaluated by zero-padded transforms of size 2N per axis.
GridFunction convolve(const GridFunction& f, const OffsetKernelFn& kernel);

}  // namespace morrlab::fft
