#ifndef VISCO_FFT_HPP
#define VISCO_FFT_HPP

// Fourier conventions used throughout the library.
//
//   forward:  F(w) = int f(t) exp(+i w t) dt
//   inverse:  f(t) = 1/(2 pi) int F(w) exp(-i w t) dw
//
// With this pair a time derivative maps to the multiplier (-i w) and a
// retarded delta d(t - a) maps to exp(+i w a). Real signals have Hermitian
// spectra, F(-w) = conj(F(w)), so only w >= 0 is ever stored.

#include <cstddef>
#include <span>
#include <vector>

#include "visco/types.hpp"

namespace visco {

/// Two-sided angular-frequency grid w_k = k * d_omega, k in [-n/2, n/2).
struct FrequencyGrid {
  std::size_t n = 0;
  double d_omega = 0.0;

  FrequencyGrid() = default;
  FrequencyGrid(std::size_t n, double d_omega);

  double omega(std::ptrdiff_t k) const { return static_cast<double>(k) * d_omega; }
  double omega_max() const { return 0.5 * static_cast<double>(n) * d_omega; }
  /// Number of non-negative frequencies stored for a real signal (0..n/2).
  std::size_t one_sided_size() const { return n / 2 + 1; }
};

/// Uniform time grid t_j = t0 + j * dt, j in [0, n). n must be even.
struct TimeGrid {
  double t0 = 0.0;
  double dt = 0.0;
  std::size_t n = 0;

  TimeGrid() = default;
  TimeGrid(double t0, double dt, std::size_t n);

  double time(std::size_t j) const { return t0 + static_cast<double>(j) * dt; }
  double duration() const { return static_cast<double>(n) * dt; }
  double omega_max() const { return kPi / dt; }
  /// The DFT frequency grid matching this time grid (period n*dt).
  FrequencyGrid frequency_grid() const;

  bool operator==(const TimeGrid&) const = default;
};

/// Frequency samples paired to their grid. One-sided storage (k = 0..n/2).
struct ComplexSpectrum {
  FrequencyGrid grid;
  std::vector<Complex> values;
};

/// Raised-cosine weight: 1 below (1 - fraction) * omega_max, rolling to 0 at omega_max.
double raised_cosine_taper(double omega, double omega_max, double fraction = 0.1);

/// Inverse transform of the 10% raised-cosine taper, i.e. the band-limited
/// delta used as the ideal arrival at finite bandwidth. Closed form.
double band_limited_delta(double t, double omega_max);

/// Real samples f(t_j) from one-sided spectrum samples on grid.frequency_grid().
/// The Nyquist bin is taken as real.
std::vector<double> synthesize_real(const TimeGrid& grid, std::span<const Complex> one_sided);

/// Complex samples from a full two-sided spectrum given in FFT order
/// (k = 0..n/2-1, then -n/2..-1). Used to check Hermitian symmetry.
std::vector<Complex> synthesize_complex(const TimeGrid& grid, std::span<const Complex> fft_order);

/// Forward transform by the rectangle rule: F(w_k) = sum_j f_j exp(i w_k t_j) dt,
/// returned for k = 0..n/2.
std::vector<Complex> analyze_real(const TimeGrid& grid, std::span<const double> samples);

/// Unnormalized DFT of a complex sequence. Direction -1 uses exp(-2 pi i jk/n),
/// direction +1 uses exp(+2 pi i jk/n).
std::vector<Complex> dft(std::span<const Complex> x, int direction);

}  // namespace visco

#endif  // VISCO_FFT_HPP
