#ifndef VISCO_DEATTEN_HPP
#define VISCO_DEATTEN_HPP

#include <string>

#include "visco/medium.hpp"
#include "visco/signal.hpp"

namespace visco {

/// Viscous time scale eps = nu_s / c_s^2 of the Voigt model.
struct ViscosityScale {
  double eps = 0.0;

  ViscosityScale() = default;
  /// Throws std::invalid_argument for negative or non-finite eps.
  explicit ViscosityScale(double eps);
  /// Throws std::invalid_argument unless the medium is Voigt (y = 2).
  static ViscosityScale from_medium(const PowerLawMedium& medium);
};

struct ExactAttenuationResult {
  SampledSignal signal;
  /// Sup-norm change when the top half of the band is discarded, relative to the sup of the result.
  double band_truncation = 0.0;
  bool band_warning = false;
};

/// L phi(t) = (1/2pi) int int A_s(w) phi(tau) exp(i K_s(w) tau) exp(-i w t) dtau dw
/// for any exponent y. The tau-transform is a direct sum over samples with tau >= 0,
/// the w-integral is the inverse FFT on the grid's own frequency band.
ExactAttenuationResult attenuation_exact(const PowerLawMedium& medium, const SampledSignal& phi,
                                         double warning_threshold = 5e-3);

/// Gaussian-kernel approximation of L (Voigt):
/// int_0^inf (t/tau) phi(tau) exp(-(tau - t)^2 / (2 eps tau)) / sqrt(2 pi eps tau) dtau.
/// Samples at t <= 0 are passed through. phi is interpolated with local cubics and is
/// taken as 0 outside the grid and for tau <= 0.
SampledSignal gaussian_attenuation(const ViscosityScale& scale, const SampledSignal& phi);

/// Transpose of gaussian_attenuation:
/// int_0^inf (tau/t) phi(tau) exp(-(tau - t)^2 / (2 eps t)) / sqrt(2 pi eps t) dtau.
SampledSignal gaussian_attenuation_adjoint(const ViscosityScale& scale, const SampledSignal& phi);

/// phi + eps d/dt(t dphi/dt) by conservative centered differences, one-sided second order
/// at both ends.
SampledSignal compose_correction(const ViscosityScale& scale, const SampledSignal& phi);

/// Discrete d/dt(t dphi/dt) used by compose_correction.
std::vector<double> radial_operator(const SampledSignal& phi);

enum class InversionMethod { first_order, ode };

const char* to_string(InversionMethod m);
/// Parses "first_order" / "ode"; throws std::invalid_argument otherwise.
InversionMethod parse_inversion_method(const std::string& name);

/// Recovers phi from measured = phi + eps d/dt(t dphi/dt).
/// first_order: measured - eps d/dt(t d measured/dt).
/// ode: Crank-Nicolson march of the system phi' = q/t, q' = (measured - phi)/eps from
/// phi = q = 0 at the first positive grid node; phi = 0 for t <= 0.
/// Throws std::runtime_error if a step's linear system is singular.
SampledSignal invert_attenuation(const ViscosityScale& scale, const SampledSignal& measured,
                                 InversionMethod method);

}  // namespace visco

#endif  // VISCO_DEATTEN_HPP
