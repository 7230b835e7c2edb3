#include "visco/green.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace visco {

namespace {

struct ScalarSpectra {
  Complex gp, gs, wp, ws;
};

ScalarSpectra scalar_spectra(const PowerLawMedium& medium, double r, double omega) {
  const double four_pi_r = 4.0 * kPi * r;
  return {phase_factor(medium, Mode::p, omega, r) / four_pi_r,
          phase_factor(medium, Mode::s, omega, r) / four_pi_r,
          radial_moment(medium, Mode::p, omega, r), radial_moment(medium, Mode::s, omega, r)};
}

double kron(int i, int j) { return i == j ? 1.0 : 0.0; }

}  // namespace

SourceReceiverGeometry SourceReceiverGeometry::make(const Vec3& xi, const Vec3& x) {
  SourceReceiverGeometry g;
  g.xi = xi;
  g.x = x;
  const Vec3 d = x - xi;
  g.r = norm(d);
  if (!(g.r > 0.0) || !std::isfinite(g.r))
    throw std::invalid_argument("SourceReceiverGeometry: source and receiver must be distinct");
  g.gamma = (1.0 / g.r) * d;
  return g;
}

Complex amplitude_factor(const PowerLawMedium& medium, Mode mode, double omega) {
  const double c = medium.speed(mode);
  return 1.0 - medium.viscosity(mode) * attenuation_multiplier(medium.y(), omega) / (c * c);
}

Complex radial_moment(const PowerLawMedium& medium, Mode mode, double omega, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("radial_moment: r must be positive");
  const Complex A = amplitude_factor(medium, mode, omega);
  const Complex K = dispersion(medium, mode, omega).k;
  const double a = r / medium.speed(mode);
  if (std::abs(K) * a < 0.5) {
    // sum_n (iK)^n a^{n+2} / (n! (n+2))
    const Complex z = kI * K * a;
    Complex term(1.0, 0.0);
    Complex sum(0.0, 0.0);
    for (int n = 0; n < 40; ++n) {
      if (n > 0) term *= z / static_cast<double>(n);
      sum += term / static_cast<double>(n + 2);
      if (std::abs(term) < 1e-18) break;
    }
    return A * a * a * sum;
  }
  const Complex e = std::exp(kI * K * a);
  const Complex inv_k2 = 1.0 / (K * K);
  return A * (e * (a / (kI * K) + inv_k2) - inv_k2);
}

Complex phase_factor(const PowerLawMedium& medium, Mode mode, double omega, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("phase_factor: r must be positive");
  const Complex K = dispersion(medium, mode, omega).k;
  return amplitude_factor(medium, mode, omega) * std::exp(kI * K * (r / medium.speed(mode)));
}

Matrix3c green_frequency_tensor(const PowerLawMedium& medium, const SourceReceiverGeometry& geometry,
                                double omega) {
  const double r = geometry.r;
  if (!(r > 0.0)) throw std::invalid_argument("green_frequency_tensor: r must be positive");
  const ScalarSpectra s = scalar_spectra(medium, r, omega);
  const double rho = medium.rho();
  const double cp2 = medium.c_p() * medium.c_p();
  const double cs2 = medium.c_s() * medium.c_s();
  const Complex near = (s.ws - s.wp) / (4.0 * kPi * rho * r * r * r);
  Matrix3c g{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double gg = geometry.gamma[i] * geometry.gamma[j];
      g[i][j] = gg * s.gp / (rho * cp2) + (kron(i, j) - gg) * s.gs / (rho * cs2) + (3.0 * gg - kron(i, j)) * near;
    }
  return g;
}

Complex p_potential(const PowerLawMedium& medium, const Vec3& offset, double omega) {
  const double r = norm(offset);
  if (!(r > 0.0)) throw std::invalid_argument("p_potential: offset must be nonzero");
  const double d1_inv_r = -offset[0] / (r * r * r);
  return -d1_inv_r * radial_moment(medium, Mode::p, omega, r) / (4.0 * kPi * medium.rho());
}

ScalarGreenSeries scalar_green_series(const PowerLawMedium& medium, double r, const TimeGrid& grid,
                                      const SynthesisOptions& options) {
  if (!(r > 0.0)) throw std::invalid_argument("scalar_green_series: r must be positive");
  const FrequencyGrid fg = grid.frequency_grid();
  const std::size_t m = fg.one_sided_size();
  const double omega_max = grid.omega_max();
  std::vector<Complex> gp(m), gs(m), wp(m), ws(m);
  double peak = 0.0, knee_value = 0.0;
  const auto knee = static_cast<std::size_t>(std::floor((1.0 - options.taper_fraction) * static_cast<double>(m - 1)));
  for (std::size_t k = 0; k < m; ++k) {
    const double w = fg.omega(static_cast<std::ptrdiff_t>(k));
    const ScalarSpectra s = scalar_spectra(medium, r, w);
    const double level = std::max(std::abs(s.gp), std::abs(s.gs));
    peak = std::max(peak, level);
    if (k == knee) knee_value = level;
    const double taper = raised_cosine_taper(w, omega_max, options.taper_fraction);
    gp[k] = taper * s.gp;
    gs[k] = taper * s.gs;
    wp[k] = taper * s.wp;
    ws[k] = taper * s.ws;
  }
  ScalarGreenSeries out;
  out.grid = grid;
  out.r = r;
  out.gp = synthesize_real(grid, gp);
  out.gs = synthesize_real(grid, gs);
  out.wp = synthesize_real(grid, wp);
  out.ws = synthesize_real(grid, ws);
  out.spectrum_truncated = peak > 0.0 && knee_value > options.truncation_floor * peak;
  return out;
}

SampledSignal GreenTensorSeries::component(int i, int j) const {
  std::vector<double> v(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) v[k] = g[k][i][j];
  return SampledSignal(grid, std::move(v));
}

GreenTensorSeries green_time_tensor(const PowerLawMedium& medium, const SourceReceiverGeometry& geometry,
                                    const TimeGrid& grid, const SynthesisOptions& options) {
  const ScalarGreenSeries s = scalar_green_series(medium, geometry.r, grid, options);
  const double rho = medium.rho();
  const double cp2 = medium.c_p() * medium.c_p();
  const double cs2 = medium.c_s() * medium.c_s();
  const double r3 = geometry.r * geometry.r * geometry.r;
  GreenTensorSeries out{geometry, grid, std::vector<Matrix3>(grid.n), s.spectrum_truncated};
  for (std::size_t k = 0; k < grid.n; ++k) {
    const double near = (s.ws[k] - s.wp[k]) / (4.0 * kPi * rho * r3);
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        const double gg = geometry.gamma[i] * geometry.gamma[j];
        const double v = gg * s.gp[k] / (rho * cp2) + (kron(i, j) - gg) * s.gs[k] / (rho * cs2) +
                         (3.0 * gg - kron(i, j)) * near;
        out.g[k][i][j] = v;
        out.g[k][j][i] = v;
      }
  }
  return out;
}

GreenTensorSeries green_quasi_incompressible(const PowerLawMedium& medium,
                                             const SourceReceiverGeometry& geometry,
                                             const TimeGrid& grid, const SynthesisOptions& options) {
  // int_0^r z^2 G^s(z, t) dz = (c_s^2 / 4 pi) W_s(r, t).
  const ScalarGreenSeries s = scalar_green_series(medium, geometry.r, grid, options);
  const double rho = medium.rho();
  const double cs2 = medium.c_s() * medium.c_s();
  const double r3 = geometry.r * geometry.r * geometry.r;
  GreenTensorSeries out{geometry, grid, std::vector<Matrix3>(grid.n), s.spectrum_truncated};
  for (std::size_t k = 0; k < grid.n; ++k) {
    const double near = s.ws[k] / (4.0 * kPi * rho * r3);
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        const double gg = geometry.gamma[i] * geometry.gamma[j];
        const double v = (kron(i, j) - gg) * s.gs[k] / (rho * cs2) + (3.0 * gg - kron(i, j)) * near;
        out.g[k][i][j] = v;
        out.g[k][j][i] = v;
      }
  }
  return out;
}

SampledSignal temporal_profile(const PowerLawMedium& medium, double r, const TimeGrid& grid,
                               const SynthesisOptions& options) {
  const ScalarGreenSeries s = scalar_green_series(medium, r, grid, options);
  const double rho = medium.rho();
  const double cp2 = medium.c_p() * medium.c_p();
  const double r3 = r * r * r;
  std::vector<double> v(grid.n);
  for (std::size_t k = 0; k < grid.n; ++k)
    v[k] = (s.gp[k] + s.gs[k]) / (rho * cp2) + (s.ws[k] - s.wp[k]) / (4.0 * kPi * rho * r3);
  return SampledSignal(grid, std::move(v));
}

RadialTable radial_table(const PowerLawMedium& medium, const std::vector<double>& radii, double t,
                         const TimeGrid& grid, const SynthesisOptions& options) {
  const FrequencyGrid fg = grid.frequency_grid();
  const std::size_t m = fg.one_sided_size();
  const double omega_max = grid.omega_max();
  std::vector<Complex> phase(m);
  std::vector<double> weight(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double w = fg.omega(static_cast<std::ptrdiff_t>(k));
    phase[k] = std::exp(-kI * w * t);
    const double fold = (k == 0 || k == m - 1) ? 1.0 : 2.0;
    weight[k] = fold * raised_cosine_taper(w, omega_max, options.taper_fraction) * fg.d_omega / (2.0 * kPi);
  }
  RadialTable table;
  table.r = radii;
  const std::size_t nr = radii.size();
  table.gp.assign(nr, 0.0);
  table.gs.assign(nr, 0.0);
  table.wp.assign(nr, 0.0);
  table.ws.assign(nr, 0.0);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(nr); ++i) {
    const double r = radii[static_cast<std::size_t>(i)];
    if (!(r > 0.0)) continue;
    double gp = 0.0, gs = 0.0, wp = 0.0, ws = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      if (weight[k] == 0.0) continue;
      const ScalarSpectra s = scalar_spectra(medium, r, fg.omega(static_cast<std::ptrdiff_t>(k)));
      gp += weight[k] * (s.gp * phase[k]).real();
      gs += weight[k] * (s.gs * phase[k]).real();
      wp += weight[k] * (s.wp * phase[k]).real();
      ws += weight[k] * (s.ws * phase[k]).real();
    }
    const auto u = static_cast<std::size_t>(i);
    table.gp[u] = gp;
    table.gs[u] = gs;
    table.wp[u] = wp;
    table.ws[u] = ws;
  }
  return table;
}

PlanarField spatial_profile(const PowerLawMedium& medium, double t, double half_extent, std::size_t points,
                            const TimeGrid& grid, const SynthesisOptions& options) {
  if (points < 2) throw std::invalid_argument("spatial_profile: need at least 2 points per axis");
  if (!(half_extent > 0.0)) throw std::invalid_argument("spatial_profile: extent must be positive");
  PlanarField field;
  const double h = 2.0 * half_extent / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    field.x.push_back(-half_extent + h * static_cast<double>(i));
    field.y.push_back(-half_extent + h * static_cast<double>(i));
  }
  // Tabulate the scalar blocks on a radial grid 4x finer than the planar spacing.
  const double r_max = std::sqrt(2.0) * half_extent * (1.0 + 1e-9);
  const double dr = h / 4.0;
  const auto nr = static_cast<std::size_t>(std::ceil(r_max / dr)) + 2;
  std::vector<double> radii(nr);
  for (std::size_t i = 0; i < nr; ++i) radii[i] = dr * static_cast<double>(i);
  const RadialTable table = radial_table(medium, radii, t, grid, options);

  const double rho = medium.rho();
  const double cp2 = medium.c_p() * medium.c_p();
  auto interp = [&](const std::vector<double>& v, double r) {
    const double x = r / dr;
    const auto j = std::min(static_cast<std::size_t>(x), nr - 2);
    const double a = x - static_cast<double>(j);
    return (1.0 - a) * v[j] + a * v[j + 1];
  };
  field.values.assign(points * points, 0.0);
  for (std::size_t ix = 0; ix < points; ++ix)
    for (std::size_t iy = 0; iy < points; ++iy) {
      const double x = field.x[ix], y = field.y[iy];
      const double r = std::hypot(x, y);
      if (r < 0.5 * h) continue;
      // Below the first tabulated radius the linear interpolation uses r = 0, which is unset.
      const double rr = std::max(r, dr);
      const double c2 = (x / r) * (x / r);
      const double gp = interp(table.gp, rr), gs = interp(table.gs, rr);
      const double wp = interp(table.wp, rr), ws = interp(table.ws, rr);
      field.values[ix * points + iy] =
          (c2 * gp + (1.0 - c2) * gs) / (rho * cp2) + (3.0 * c2 - 1.0) * (ws - wp) / (4.0 * kPi * rho * r * r * r);
    }
  return field;
}

}  // namespace visco
