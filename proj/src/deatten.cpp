#include "visco/deatten.hpp"

#include "visco/green.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace visco {

namespace {

constexpr std::size_t kMaxQuadratureNodes = 1 << 20;

// Four-point Lagrange interpolation of the grid samples; zero off-grid and for t <= 0.
double cubic_at(const SampledSignal& s, double t) {
  if (t <= 0.0) return 0.0;
  const std::size_t n = s.size();
  const double x = (t - s.grid.t0) / s.grid.dt;
  if (x < 0.0 || x > static_cast<double>(n - 1)) return 0.0;
  auto j = static_cast<std::ptrdiff_t>(std::floor(x)) - 1;
  j = std::clamp<std::ptrdiff_t>(j, 0, static_cast<std::ptrdiff_t>(n) - 4);
  const double u = x - static_cast<double>(j);
  const double* v = s.values.data() + j;
  const double l0 = -(u - 1.0) * (u - 2.0) * (u - 3.0) / 6.0;
  const double l1 = u * (u - 2.0) * (u - 3.0) / 2.0;
  const double l2 = -u * (u - 1.0) * (u - 3.0) / 2.0;
  const double l3 = u * (u - 1.0) * (u - 2.0) / 6.0;
  return l0 * v[0] + l1 * v[1] + l2 * v[2] + l3 * v[3];
}

enum class Kernel { forward, adjoint };

double kernel(Kernel kind, double eps, double t, double tau) {
  const double d = tau - t;
  if (kind == Kernel::forward)
    return (t / tau) * std::exp(-d * d / (2.0 * eps * tau)) / std::sqrt(2.0 * kPi * eps * tau);
  return (tau / t) * std::exp(-d * d / (2.0 * eps * t)) / std::sqrt(2.0 * kPi * eps * t);
}

SampledSignal gaussian_operator(Kernel kind, const ViscosityScale& scale, const SampledSignal& phi) {
  if (phi.size() < 4) throw std::invalid_argument("gaussian operator: need at least 4 samples");
  const double eps = scale.eps;
  if (eps == 0.0) return phi;
  const double t_end = phi.time(phi.size() - 1);
  std::vector<double> out(phi.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(phi.size()); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const double t = phi.time(i);
    if (t <= 0.0) {
      out[i] = phi.values[i];
      continue;
    }
    // Window where the Gaussian exponent stays above -32.
    double lo, hi;
    if (kind == Kernel::forward) {
      const double centre = t + 32.0 * eps;
      const double half = std::sqrt(64.0 * eps * t + 1024.0 * eps * eps);
      lo = centre - half;
      hi = centre + half;
    } else {
      const double half = 8.0 * std::sqrt(eps * t);
      lo = t - half;
      hi = t + half;
    }
    lo = std::max(lo, 0.0);
    hi = std::min(hi, t_end);
    if (!(hi > lo)) {
      out[i] = 0.0;
      continue;
    }
    const double sigma = std::sqrt(eps * t);
    double h = std::min(phi.grid.dt, 0.25 * sigma);
    auto nodes = static_cast<std::size_t>(std::ceil((hi - lo) / h));
    nodes = std::clamp<std::size_t>(nodes, 8, kMaxQuadratureNodes);
    h = (hi - lo) / static_cast<double>(nodes);
    double sum = 0.0;
    for (std::size_t k = 0; k <= nodes; ++k) {
      const double tau = lo + h * static_cast<double>(k);
      if (tau <= 0.0) continue;
      const double w = (k == 0 || k == nodes) ? 0.5 : 1.0;
      sum += w * kernel(kind, eps, t, tau) * cubic_at(phi, tau);
    }
    out[i] = sum * h;
  }
  return SampledSignal(phi.grid, std::move(out));
}

}  // namespace

ViscosityScale::ViscosityScale(double eps_) : eps(eps_) {
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw std::invalid_argument("ViscosityScale: eps must be >= 0");
}

ViscosityScale ViscosityScale::from_medium(const PowerLawMedium& medium) {
  if (std::abs(medium.y() - 2.0) > 1e-12)
    throw std::invalid_argument("ViscosityScale: Gaussian-kernel operators require y = 2");
  return ViscosityScale(medium.nu_s() / (medium.c_s() * medium.c_s()));
}

ExactAttenuationResult attenuation_exact(const PowerLawMedium& medium, const SampledSignal& phi,
                                         double warning_threshold) {
  const TimeGrid& grid = phi.grid;
  const FrequencyGrid fg = grid.frequency_grid();
  const std::size_t m = fg.one_sided_size();
  std::vector<Complex> spectrum(m);
  std::size_t first = 0;
  while (first < phi.size() && grid.time(first) < 0.0) ++first;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t kk = 0; kk < static_cast<std::ptrdiff_t>(m); ++kk) {
    const auto k = static_cast<std::size_t>(kk);
    const double w = fg.omega(static_cast<std::ptrdiff_t>(k));
    const Complex K = dispersion(medium, Mode::s, w).k;
    const Complex step = std::exp(kI * K * grid.dt);
    Complex sum(0.0, 0.0);
    Complex e(0.0, 0.0);
    for (std::size_t j = first; j < phi.size(); ++j) {
      // Refresh the recurrence periodically to bound rounding drift.
      if ((j - first) % 64 == 0) e = std::exp(kI * K * grid.time(j));
      else e *= step;
      sum += phi.values[j] * e;
    }
    spectrum[k] = amplitude_factor(medium, Mode::s, w) * sum * grid.dt;
  }
  if (!spectrum.empty()) spectrum[m - 1] = Complex(spectrum[m - 1].real(), 0.0);

  ExactAttenuationResult result;
  result.signal = SampledSignal(grid, synthesize_real(grid, spectrum));
  std::vector<Complex> half = spectrum;
  for (std::size_t k = m / 2; k < m; ++k) half[k] = 0.0;
  const std::vector<double> coarse = synthesize_real(grid, half);
  double diff = 0.0;
  for (std::size_t j = 0; j < grid.n; ++j) diff = std::max(diff, std::abs(coarse[j] - result.signal.values[j]));
  const double sup = result.signal.sup_norm();
  result.band_truncation = sup > 0.0 ? diff / sup : 0.0;
  result.band_warning = result.band_truncation > warning_threshold;
  return result;
}

SampledSignal gaussian_attenuation(const ViscosityScale& scale, const SampledSignal& phi) {
  return gaussian_operator(Kernel::forward, scale, phi);
}

SampledSignal gaussian_attenuation_adjoint(const ViscosityScale& scale, const SampledSignal& phi) {
  return gaussian_operator(Kernel::adjoint, scale, phi);
}

std::vector<double> radial_operator(const SampledSignal& phi) {
  const std::size_t n = phi.size();
  if (n < 4) throw std::invalid_argument("radial_operator: need at least 4 samples");
  const double dt = phi.grid.dt;
  const auto& f = phi.values;
  std::vector<double> out(n);
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const double tp = phi.time(j) + 0.5 * dt;
    const double tm = phi.time(j) - 0.5 * dt;
    out[j] = (tp * (f[j + 1] - f[j]) - tm * (f[j] - f[j - 1])) / (dt * dt);
  }
  // t f'' + f' with one-sided second-order stencils.
  {
    const double d2 = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / (dt * dt);
    const double d1 = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dt);
    out[0] = phi.time(0) * d2 + d1;
  }
  {
    const std::size_t e = n - 1;
    const double d2 = (2.0 * f[e] - 5.0 * f[e - 1] + 4.0 * f[e - 2] - f[e - 3]) / (dt * dt);
    const double d1 = (3.0 * f[e] - 4.0 * f[e - 1] + f[e - 2]) / (2.0 * dt);
    out[e] = phi.time(e) * d2 + d1;
  }
  return out;
}

SampledSignal compose_correction(const ViscosityScale& scale, const SampledSignal& phi) {
  if (scale.eps == 0.0) return phi;
  const std::vector<double> d = radial_operator(phi);
  std::vector<double> out(phi.size());
  for (std::size_t j = 0; j < phi.size(); ++j) out[j] = phi.values[j] + scale.eps * d[j];
  return SampledSignal(phi.grid, std::move(out));
}

const char* to_string(InversionMethod m) { return m == InversionMethod::ode ? "ode" : "first_order"; }

InversionMethod parse_inversion_method(const std::string& name) {
  if (name == "first_order") return InversionMethod::first_order;
  if (name == "ode") return InversionMethod::ode;
  throw std::invalid_argument("unknown inversion method: " + name);
}

SampledSignal invert_attenuation(const ViscosityScale& scale, const SampledSignal& measured,
                                 InversionMethod method) {
  const double eps = scale.eps;
  if (eps == 0.0) return measured;
  if (method == InversionMethod::first_order) {
    const std::vector<double> d = radial_operator(measured);
    std::vector<double> out(measured.size());
    for (std::size_t j = 0; j < measured.size(); ++j) out[j] = measured.values[j] - eps * d[j];
    return SampledSignal(measured.grid, std::move(out));
  }

  const std::size_t n = measured.size();
  const double h = measured.grid.dt;
  const auto& m = measured.values;
  std::vector<double> out(n, 0.0);
  std::size_t j = 0;
  while (j < n && measured.time(j) <= 0.0) ++j;
  double phi = 0.0, q = 0.0;
  for (; j + 1 < n; ++j) {
    const double t = measured.time(j);
    const double tn = measured.time(j + 1);
    // [1, -h/(2 tn); h/(2 eps), 1] [phi+, q+] = rhs
    const double a12 = -h / (2.0 * tn);
    const double a21 = h / (2.0 * eps);
    const double r1 = phi + 0.5 * h * q / t;
    const double r2 = q + a21 * (m[j] + m[j + 1] - phi);
    const double det = 1.0 - a12 * a21;
    if (!std::isfinite(det) || det <= 0.0)
      throw std::runtime_error("invert_attenuation: singular step at t = " + std::to_string(tn));
    const double phi_next = (r1 - a12 * r2) / det;
    const double q_next = (r2 - a21 * r1) / det;
    if (!std::isfinite(phi_next) || !std::isfinite(q_next))
      throw std::runtime_error("invert_attenuation: non-finite state at t = " + std::to_string(tn));
    phi = phi_next;
    q = q_next;
    out[j + 1] = phi;
  }
  return SampledSignal(measured.grid, std::move(out));
}

}  // namespace visco
