#include "visco/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace visco {

namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(p);
  }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};
template <class T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <class T>
FftwBuffer<T> fftw_buffer(std::size_t n) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * n));
  if (p == nullptr) throw std::bad_alloc();
  return FftwBuffer<T>(p);
}

Complex to_complex(const fftw_complex& c) { return {c[0], c[1]}; }

}  // namespace

FrequencyGrid::FrequencyGrid(std::size_t n_, double d_omega_) : n(n_), d_omega(d_omega_) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("FrequencyGrid: n must be even and >= 2");
  if (!(d_omega > 0.0) || !std::isfinite(d_omega))
    throw std::invalid_argument("FrequencyGrid: d_omega must be positive");
}

TimeGrid::TimeGrid(double t0_, double dt_, std::size_t n_) : t0(t0_), dt(dt_), n(n_) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("TimeGrid: n must be even and >= 2");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("TimeGrid: dt must be positive");
  if (!std::isfinite(t0)) throw std::invalid_argument("TimeGrid: t0 must be finite");
}

FrequencyGrid TimeGrid::frequency_grid() const {
  return FrequencyGrid(n, 2.0 * kPi / (static_cast<double>(n) * dt));
}

double raised_cosine_taper(double omega, double omega_max, double fraction) {
  const double w = std::abs(omega);
  if (w >= omega_max) return 0.0;
  const double knee = (1.0 - fraction) * omega_max;
  if (w <= knee || fraction <= 0.0) return 1.0;
  return 0.5 * (1.0 + std::cos(kPi * (w - knee) / (fraction * omega_max)));
}

double band_limited_delta(double t, double omega_max) {
  // (1/pi) int_0^W taper(w) cos(w t) dw with knee a = 0.9 W and roll-off b = 0.1 W:
  //   h(t) = (sin(W t) + sin(a t)) p^2 / (2 pi t (p^2 - t^2)),  p = pi / b.
  const double W = omega_max;
  const double a = 0.9 * W;
  const double b = 0.1 * W;
  const double p = kPi / b;
  const double at = std::abs(t);
  if (at * W < 1e-6) return 0.95 * W / kPi;
  if (std::abs(at - p) < 1e-7 * p) return -b / (4.0 * kPi);
  const double num = std::sin(W * at) + std::sin(a * at);
  return num * p * p / (2.0 * kPi * at * (p * p - at * at));
}

std::vector<double> synthesize_real(const TimeGrid& grid, std::span<const Complex> one_sided) {
  const std::size_t n = grid.n;
  if (one_sided.size() != n / 2 + 1)
    throw std::invalid_argument("synthesize_real: spectrum length must be n/2+1");
  const double dw = grid.frequency_grid().d_omega;

  auto in = fftw_buffer<fftw_complex>(n / 2 + 1);
  auto out = fftw_buffer<double>(n);
  Plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan.reset(fftw_plan_dft_c2r_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE));
  }
  // f_j = 1/(n dt) sum_k C_k e^{-2 pi i jk/n}, C_k = F_k e^{-i w_k t0}. For a real
  // result this equals the c2r (e^{+}) transform of conj(C_k).
  for (std::size_t k = 0; k <= n / 2; ++k) {
    const double w = dw * static_cast<double>(k);
    Complex c = std::conj(one_sided[k] * std::exp(-kI * w * grid.t0));
    if (k == n / 2 || k == 0) c = Complex(c.real(), 0.0);
    in[k][0] = c.real();
    in[k][1] = c.imag();
  }
  fftw_execute(plan.get());
  std::vector<double> f(n);
  const double scale = 1.0 / (static_cast<double>(n) * grid.dt);
  for (std::size_t j = 0; j < n; ++j) f[j] = out[j] * scale;
  return f;
}

std::vector<Complex> synthesize_complex(const TimeGrid& grid, std::span<const Complex> fft_order) {
  const std::size_t n = grid.n;
  if (fft_order.size() != n) throw std::invalid_argument("synthesize_complex: spectrum length must be n");
  const double dw = grid.frequency_grid().d_omega;
  auto buf = fftw_buffer<fftw_complex>(n);
  Plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan.reset(fftw_plan_dft_1d(static_cast<int>(n), buf.get(), buf.get(), FFTW_FORWARD, FFTW_ESTIMATE));
  }
  for (std::size_t k = 0; k < n; ++k) {
    const auto ks = static_cast<std::ptrdiff_t>(k) - (k < n / 2 ? 0 : static_cast<std::ptrdiff_t>(n));
    const double w = dw * static_cast<double>(ks);
    const Complex c = fft_order[k] * std::exp(-kI * w * grid.t0);
    buf[k][0] = c.real();
    buf[k][1] = c.imag();
  }
  fftw_execute(plan.get());
  std::vector<Complex> f(n);
  const double scale = 1.0 / (static_cast<double>(n) * grid.dt);
  for (std::size_t j = 0; j < n; ++j) f[j] = to_complex(buf[j]) * scale;
  return f;
}

std::vector<Complex> analyze_real(const TimeGrid& grid, std::span<const double> samples) {
  const std::size_t n = grid.n;
  if (samples.size() != n) throw std::invalid_argument("analyze_real: sample count must equal grid.n");
  const double dw = grid.frequency_grid().d_omega;
  auto in = fftw_buffer<double>(n);
  auto out = fftw_buffer<fftw_complex>(n / 2 + 1);
  Plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan.reset(fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE));
  }
  for (std::size_t j = 0; j < n; ++j) in[j] = samples[j];
  fftw_execute(plan.get());
  // sum_j f_j e^{+i w_k (t0 + j dt)} dt = e^{i w_k t0} conj(Y_k) dt for real f.
  std::vector<Complex> F(n / 2 + 1);
  for (std::size_t k = 0; k <= n / 2; ++k) {
    const double w = dw * static_cast<double>(k);
    F[k] = std::exp(kI * w * grid.t0) * std::conj(to_complex(out[k])) * grid.dt;
  }
  return F;
}

std::vector<Complex> dft(std::span<const Complex> x, int direction) {
  const std::size_t n = x.size();
  if (n == 0) return {};
  auto buf = fftw_buffer<fftw_complex>(n);
  Plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan.reset(fftw_plan_dft_1d(static_cast<int>(n), buf.get(), buf.get(),
                                direction < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE));
  }
  for (std::size_t j = 0; j < n; ++j) {
    buf[j][0] = x[j].real();
    buf[j][1] = x[j].imag();
  }
  fftw_execute(plan.get());
  std::vector<Complex> out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = to_complex(buf[j]);
  return out;
}

}  // namespace visco
