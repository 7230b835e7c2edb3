#include "visco/medium.hpp"

#include <boost/math/special_functions/digamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace visco {

namespace {

bool is_integer(double y) { return std::abs(y - std::round(y)) < 1e-12; }

}  // namespace

const char* to_string(Mode m) { return m == Mode::p ? "p" : "s"; }

PowerLawMedium::PowerLawMedium(double rho, double c_p, double c_s, double nu_p, double nu_s, double y)
    : rho_(rho), c_p_(c_p), c_s_(c_s), nu_p_(nu_p), nu_s_(nu_s), y_(y) {
  for (double v : {rho, c_p, c_s, nu_p, nu_s, y})
    if (!std::isfinite(v)) throw std::invalid_argument("PowerLawMedium: parameters must be finite");
  if (!(rho > 0.0)) throw std::invalid_argument("PowerLawMedium: rho must be positive");
  if (!(c_s > 0.0)) throw std::invalid_argument("PowerLawMedium: c_s must be positive");
  if (!(c_p > c_s)) throw std::invalid_argument("PowerLawMedium: c_p must exceed c_s");
  if (nu_p < 0.0 || nu_s < 0.0) throw std::invalid_argument("PowerLawMedium: viscosities must be >= 0");
  if (!(y > 0.0)) throw std::invalid_argument("PowerLawMedium: y must be positive");
}

double PowerLawMedium::loss_ratio(Mode m, double omega) const {
  const double c = speed(m);
  return viscosity(m) * std::abs(attenuation_multiplier(y_, omega)) / (c * c);
}

bool PowerLawMedium::perturbative(double omega_max) const {
  return loss_ratio(Mode::p, omega_max) < 1.0 && loss_ratio(Mode::s, omega_max) < 1.0;
}

PowerLawMedium PowerLawMedium::with_viscosity(double nu_p, double nu_s) const {
  return PowerLawMedium(rho_, c_p_, c_s_, nu_p, nu_s, y_);
}

PowerLawMedium PowerLawMedium::with_exponent(double y) const {
  return PowerLawMedium(rho_, c_p_, c_s_, nu_p_, nu_s_, y);
}

Complex attenuation_multiplier(double y, double omega) {
  if (!(y > 0.0) || !std::isfinite(y)) throw std::invalid_argument("attenuation_multiplier: y must be positive");
  if (!std::isfinite(omega)) throw std::invalid_argument("attenuation_multiplier: omega must be finite");
  if (omega == 0.0) return {0.0, 0.0};
  const double sgn = omega > 0.0 ? 1.0 : -1.0;
  const double aw = std::abs(omega);
  if (is_integer(y)) {
    const long n = std::lround(y);
    if (n % 2 == 0) {
      // -(-1)^{n/2} (-i w)^{n-1}
      const Complex base(0.0, -omega);
      Complex pw(1.0, 0.0);
      for (long j = 0; j < n - 1; ++j) pw *= base;
      const double sign = (n / 2) % 2 == 0 ? 1.0 : -1.0;
      return -sign * pw;
    }
    const double mag = std::pow(aw, static_cast<double>(n - 1));
    const double re = -(2.0 / kPi) * (boost::math::digamma(static_cast<double>(n)) - std::log(aw));
    return mag * Complex(re, -sgn);
  }
  const double mag = std::pow(aw, y - 1.0);
  return -mag * Complex(std::tan(0.5 * kPi * y), sgn);
}

DispersionValue dispersion(const PowerLawMedium& medium, Mode mode, double omega) {
  const double c = medium.speed(mode);
  const double nu = medium.viscosity(mode);
  if (!std::isfinite(omega)) throw std::invalid_argument("dispersion: omega must be finite");
  if (nu == 0.0) return {Complex(omega, 0.0), false};
  const double aw = std::abs(omega);
  const Complex radicand = 1.0 - (nu / (c * c)) * attenuation_multiplier(medium.y(), aw);
  Complex k = aw * std::sqrt(radicand);
  if (k.imag() < 0.0) k = -k;
  DispersionValue out{k, radicand.real() <= 0.0};
  if (omega < 0.0) out.k = -std::conj(k);
  return out;
}

double perturbative_frequency(const PowerLawMedium& medium, Mode mode) {
  const double inf = std::numeric_limits<double>::infinity();
  if (medium.viscosity(mode) == 0.0 || medium.y() <= 1.0) return inf;
  // Loss ratio grows like w^{y-1} (times a slowly varying log for odd y); bracket then bisect in log w.
  double lo = 1e-12, hi = 1.0;
  while (medium.loss_ratio(mode, hi) < 1.0) {
    hi *= 10.0;
    if (hi > 1e300) return inf;
  }
  while (medium.loss_ratio(mode, lo) >= 1.0 && lo > 1e-300) lo *= 1e-3;
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (medium.loss_ratio(mode, mid) < 1.0) lo = mid;
    else hi = mid;
    if (hi / lo < 1.0 + 1e-14) break;
  }
  return std::sqrt(lo * hi);
}

KramersKronigReport kramers_kronig_residual(const PowerLawMedium& medium, Mode mode,
                                            const FrequencyGrid& band,
                                            const KramersKronigOptions& options) {
  const std::size_t n = band.n;
  const double omega_max = band.omega_max();
  KramersKronigReport report;
  double wc = options.cutoff;
  if (!(wc > 0.0)) {
    const double wp = perturbative_frequency(medium, mode);
    wc = std::isfinite(wp) ? 0.01 * wp : omega_max / 64.0;
  }
  report.cutoff = wc;
  report.band_too_narrow = omega_max < 8.0 * wc || band.d_omega > 0.25 * wc;
  if (medium.viscosity(mode) == 0.0) return report;

  // f sampled in FFT order: k = 0..n/2-1 then -n/2..-1.
  std::vector<Complex> f(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto k = static_cast<std::ptrdiff_t>(j) - (j < n / 2 ? 0 : static_cast<std::ptrdiff_t>(n));
    const double w = band.omega(k);
    const Complex window = std::pow(Complex(1.0, -w / wc), 4);
    f[j] = (dispersion(medium, mode, w).k - w) / window;
  }

  // Causality projection: transform i Im f to the lag domain, multiply by sgn(lag), return.
  std::vector<Complex> lag(n);
  for (std::size_t j = 0; j < n; ++j) lag[j] = Complex(0.0, f[j].imag());
  lag = dft(lag, -1);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    if (j >= 1 && j < n / 2) s = 1.0;
    else if (j > n / 2) s = -1.0;
    lag[j] *= s;
  }
  const std::vector<Complex> buf = dft(lag, +1);

  double num = 0.0, den = 0.0;
  const double limit = options.interior * omega_max;
  for (std::size_t j = 0; j < n; ++j) {
    const auto k = static_cast<std::ptrdiff_t>(j) - (j < n / 2 ? 0 : static_cast<std::ptrdiff_t>(n));
    if (std::abs(band.omega(k)) >= limit) continue;
    const double pred = buf[j].real() / static_cast<double>(n);
    num = std::max(num, std::abs(f[j].real() - pred));
    den = std::max(den, std::abs(f[j]));
  }
  report.residual = den > 0.0 ? num / den : 0.0;
  return report;
}

}  // namespace visco
