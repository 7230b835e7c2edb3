#ifndef VISCO_MEDIUM_HPP
#define VISCO_MEDIUM_HPP

#include "visco/fft.hpp"
#include "visco/types.hpp"

namespace visco {

enum class Mode { p, s };

const char* to_string(Mode m);

/// Isotropic power-law attenuating medium. All quantities in SI.
class PowerLawMedium {
 public:
  /// Throws std::invalid_argument unless rho > 0, c_p > c_s > 0, nu_p, nu_s >= 0 and y > 0.
  PowerLawMedium(double rho, double c_p, double c_s, double nu_p, double nu_s, double y);

  double rho() const { return rho_; }
  double c_p() const { return c_p_; }
  double c_s() const { return c_s_; }
  double nu_p() const { return nu_p_; }
  double nu_s() const { return nu_s_; }
  double y() const { return y_; }

  double speed(Mode m) const { return m == Mode::p ? c_p_ : c_s_; }
  double viscosity(Mode m) const { return m == Mode::p ? nu_p_ : nu_s_; }

  /// Loss ratio nu_m |M(w)| / c_m^2 at frequency w.
  double loss_ratio(Mode m, double omega) const;
  /// True when the loss ratio is below 1 for both modes at omega_max.
  bool perturbative(double omega_max) const;

  PowerLawMedium with_viscosity(double nu_p, double nu_s) const;
  PowerLawMedium with_exponent(double y) const;

 private:
  double rho_, c_p_, c_s_, nu_p_, nu_s_, y_;
};

/// Fourier multiplier of the power-law attenuation convolution.
/// Even y: -(-1)^{y/2} (-i w)^{y-1}; non-integer y: -|w|^{y-1} (tan(pi y/2) + i sgn w);
/// odd y: -|w|^{y-1} (i sgn w + (2/pi)(digamma(y) - ln|w|)) with 1 s as reference time.
/// Returns 0 at w = 0. Throws for y <= 0 or non-finite w.
Complex attenuation_multiplier(double y, double omega);

struct DispersionValue {
  Complex k;
  bool non_perturbative = false;
};

/// K_m(w) = w sqrt(1 - nu_m M(w)/c_m^2) with Im K >= 0 for w >= 0 and K(-w) = -conj(K(w)).
DispersionValue dispersion(const PowerLawMedium& medium, Mode mode, double omega);

/// Frequency at which nu_m |M(w)| / c_m^2 = 1, or +inf when the loss never reaches 1
/// (nu_m = 0 or y <= 1).
double perturbative_frequency(const PowerLawMedium& medium, Mode mode);

struct KramersKronigOptions {
  /// Roll-off frequency of the causal window; <= 0 selects 1% of the perturbative frequency.
  double cutoff = 0.0;
  /// Fraction of the band (|w| < fraction * omega_max) where the residual is measured.
  double interior = 0.5;
};

struct KramersKronigReport {
  double residual = 0.0;
  double cutoff = 0.0;
  bool band_too_narrow = false;
};

/// Causal consistency of the dispersion relation. The excess f(w) = (K(w) - w) / (1 - i w/w_c)^4
/// is analytic in the upper half plane, so its real part must equal the discrete Hilbert
/// transform of its imaginary part. Returns max|Re f - H[Im f]| / max|f| over the interior.
KramersKronigReport kramers_kronig_residual(const PowerLawMedium& medium, Mode mode,
                                            const FrequencyGrid& band,
                                            const KramersKronigOptions& options = {});

}  // namespace visco

#endif  // VISCO_MEDIUM_HPP
