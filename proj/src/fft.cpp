#include "morrlab/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace morrlab::fft {

namespace {

// In-place unnormalized DFT over the last `dim` axes, each of length n.
void raw_dft(std::vector<Complex>& data, int dim, std::size_t n, int sign) {
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan = dim == 1
                       ? fftw_plan_dft_1d(int(n), ptr, ptr, sign, FFTW_ESTIMATE)
                       : fftw_plan_dft_2d(int(n), int(n), ptr, ptr, sign, FFTW_ESTIMATE);
  if (plan == nullptr) throw std::runtime_error("transform planning failed");
  fftw_execute(plan);
  fftw_destroy_plan(plan);
}

std::int64_t signed_bin(std::size_t idx, std::size_t n) {
  return idx < n / 2 ? std::int64_t(idx) : std::int64_t(idx) - std::int64_t(n);
}

// Phase e^{-2 pi i xi_k x_0} aligning FFTW's index-0 origin with the first
// cell center x_0 = -L + h/2; one factor per axis bin.
std::vector<Complex> origin_phases(const GridSpec& spec) {
  const std::size_t n = spec.points_per_axis();
  const double x0 = spec.node(0);
  std::vector<Complex> ph(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double xi = double(signed_bin(k, n)) / (2.0 * spec.half_width());
    const double ang = -2.0 * std::numbers::pi * xi * x0;
    ph[k] = Complex(std::cos(ang), std::sin(ang));
  }
  return ph;
}

}  // namespace

double bin_frequency(const GridSpec& spec, std::size_t idx) {
  return double(signed_bin(idx, spec.points_per_axis())) / (2.0 * spec.half_width());
}

std::vector<Complex> forward(const GridFunction& f) {
  const GridSpec& spec = f.spec();
  const std::size_t n = spec.points_per_axis();
  std::vector<Complex> data(f.values().begin(), f.values().end());
  raw_dft(data, spec.dim(), n, FFTW_FORWARD);
  const auto ph = origin_phases(spec);
  const double vol = spec.cell_volume();
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto idx = spec.unflat(i);
    Complex phase = ph[idx[0]];
    if (spec.dim() == 2) phase *= ph[idx[1]];
    data[i] *= vol * phase;
  }
  return data;
}

GridFunction inverse(const GridSpec& spec, std::span<const Complex> spectrum) {
  if (spectrum.size() != spec.size()) {
    throw std::invalid_argument("spectrum size does not match grid");
  }
  const std::size_t n = spec.points_per_axis();
  std::vector<Complex> data(spectrum.begin(), spectrum.end());
  const auto ph = origin_phases(spec);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto idx = spec.unflat(i);
    Complex phase = std::conj(ph[idx[0]]);
    if (spec.dim() == 2) phase *= std::conj(ph[idx[1]]);
    data[i] *= phase;
  }
  raw_dft(data, spec.dim(), n, FFTW_BACKWARD);
  double dual_vol = 1.0;
  for (int a = 0; a < spec.dim(); ++a) dual_vol /= 2.0 * spec.half_width();
  for (Complex& v : data) v *= dual_vol;
  return GridFunction(spec, std::move(data));
}

GridFunction apply_symbol(const GridFunction& f, const SymbolFn& m) {
  const GridSpec& spec = f.spec();
  const std::size_t n = spec.points_per_axis();
  std::vector<Complex> data(f.values().begin(), f.values().end());
  raw_dft(data, spec.dim(), n, FFTW_FORWARD);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto idx = spec.unflat(i);
    Point xi{bin_frequency(spec, idx[0]), 0.0};
    if (spec.dim() == 2) xi[1] = bin_frequency(spec, idx[1]);
    data[i] *= m(xi);
  }
  raw_dft(data, spec.dim(), n, FFTW_BACKWARD);
  const double norm = 1.0 / double(spec.size());
  for (Complex& v : data) v *= norm;
  return GridFunction(spec, std::move(data));
}

GridFunction synthesize_kernel(const GridSpec& spec, const SymbolFn& m) {
  std::vector<Complex> spectrum(spec.size());
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    const auto idx = spec.unflat(i);
    Point xi{bin_frequency(spec, idx[0]), 0.0};
    if (spec.dim() == 2) xi[1] = bin_frequency(spec, idx[1]);
    spectrum[i] = m(xi);
  }
  return inverse(spec, spectrum);
}

GridFunction convolve(const GridFunction& f, const OffsetKernelFn& kernel) {
  const GridSpec& spec = f.spec();
  const std::size_t n = spec.points_per_axis();
  const std::size_t p = 2 * n;
  const double h = spec.spacing();
  const int dim = spec.dim();
  const std::size_t padded_size = dim == 1 ? p : p * p;

  std::vector<Complex> fpad(padded_size, Complex{0.0, 0.0});
  std::vector<Complex> kpad(padded_size, Complex{0.0, 0.0});

  // Offsets m in [-(N-1), N-1] live at padded index m mod 2N; index N stays
  // zero so the circular product reproduces the aperiodic sum exactly.
  auto offset_of = [&](std::size_t padded_idx) -> std::int64_t {
    return padded_idx < n ? std::int64_t(padded_idx) : std::int64_t(padded_idx) - std::int64_t(p);
  };

  if (dim == 1) {
    for (std::size_t i = 0; i < n; ++i) fpad[i] = f[i];
    for (std::size_t i = 0; i < p; ++i) {
      const std::int64_t m = offset_of(i);
      if (std::llabs(m) >= std::int64_t(n)) continue;
      kpad[i] = kernel(Point{double(m) * h, 0.0});
    }
  } else {
    for (std::size_t i0 = 0; i0 < n; ++i0) {
      for (std::size_t i1 = 0; i1 < n; ++i1) fpad[i0 * p + i1] = f[spec.flat(i0, i1)];
    }
    for (std::size_t i0 = 0; i0 < p; ++i0) {
      const std::int64_t m0 = offset_of(i0);
      if (std::llabs(m0) >= std::int64_t(n)) continue;
      for (std::size_t i1 = 0; i1 < p; ++i1) {
        const std::int64_t m1 = offset_of(i1);
        if (std::llabs(m1) >= std::int64_t(n)) continue;
        kpad[i0 * p + i1] = kernel(Point{double(m0) * h, double(m1) * h});
      }
    }
  }

  raw_dft(fpad, dim, p, FFTW_FORWARD);
  raw_dft(kpad, dim, p, FFTW_FORWARD);
  for (std::size_t i = 0; i < padded_size; ++i) fpad[i] *= kpad[i];
  raw_dft(fpad, dim, p, FFTW_BACKWARD);

  const double scale = spec.cell_volume() / double(padded_size);
  std::vector<Complex> out(spec.size());
  if (dim == 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fpad[i] * scale;
  } else {
    for (std::size_t i0 = 0; i0 < n; ++i0) {
      for (std::size_t i1 = 0; i1 < n; ++i1) out[spec.flat(i0, i1)] = fpad[i0 * p + i1] * scale;
    }
  }
  return GridFunction(spec, std::move(out));
}

}  // namespace morrlab::fft
