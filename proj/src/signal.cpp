#include "visco/signal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace visco {

SampledSignal::SampledSignal(TimeGrid grid_, std::vector<double> values_)
    : grid(grid_), values(std::move(values_)) {
  if (values.size() != grid.n) throw std::invalid_argument("SampledSignal: size does not match grid");
}

SampledSignal SampledSignal::sample(const TimeGrid& grid, const std::function<double(double)>& f) {
  std::vector<double> v(grid.n);
  for (std::size_t j = 0; j < grid.n; ++j) v[j] = f(grid.time(j));
  return SampledSignal(grid, std::move(v));
}

std::optional<std::size_t> SampledSignal::support_start(double threshold) const {
  const double level = threshold * sup_norm();
  for (std::size_t j = 0; j < values.size(); ++j)
    if (std::abs(values[j]) > level) return j;
  return std::nullopt;
}

bool SampledSignal::causal() const {
  for (std::size_t j = 0; j < values.size(); ++j)
    if (grid.time(j) < 0.0 && values[j] != 0.0) return false;
  return true;
}

double SampledSignal::at(double t) const {
  const double x = (t - grid.t0) / grid.dt;
  if (!(x >= 0.0) || x > static_cast<double>(values.size() - 1)) return 0.0;
  const auto j = static_cast<std::size_t>(x);
  if (j + 1 >= values.size()) return values.back();
  const double a = x - static_cast<double>(j);
  return (1.0 - a) * values[j] + a * values[j + 1];
}

double SampledSignal::sup_norm() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

std::size_t SampledSignal::argmax() const {
  return static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
}

double full_width_half_max(const SampledSignal& s) {
  if (s.values.empty()) return 0.0;
  const std::size_t i = s.argmax();
  const double half = 0.5 * s.values[i];
  std::size_t lo = i, hi = i;
  while (lo > 0 && s.values[lo - 1] >= half) --lo;
  while (hi + 1 < s.size() && s.values[hi + 1] >= half) ++hi;
  double left = s.time(lo), right = s.time(hi);
  if (lo > 0) {
    const double a = (half - s.values[lo - 1]) / (s.values[lo] - s.values[lo - 1]);
    left = s.time(lo - 1) + a * s.grid.dt;
  }
  if (hi + 1 < s.size()) {
    const double a = (s.values[hi] - half) / (s.values[hi] - s.values[hi + 1]);
    right = s.time(hi) + a * s.grid.dt;
  }
  return right - left;
}

}  // namespace visco
