#ifndef VISCO_SIGNAL_HPP
#define VISCO_SIGNAL_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "visco/fft.hpp"

namespace visco {

/// Uniformly sampled real time series.
struct SampledSignal {
  TimeGrid grid;
  std::vector<double> values;

  SampledSignal() = default;
  /// Throws std::invalid_argument if values.size() != grid.n.
  SampledSignal(TimeGrid grid, std::vector<double> values);

  static SampledSignal sample(const TimeGrid& grid, const std::function<double(double)>& f);

  std::size_t size() const { return values.size(); }
  double time(std::size_t j) const { return grid.time(j); }

  /// First index whose magnitude exceeds threshold * sup; empty for an all-zero signal.
  std::optional<std::size_t> support_start(double threshold = 0.0) const;
  /// True when every sample at t < 0 is zero.
  bool causal() const;

  /// Linear interpolation at time t; 0 outside the grid.
  double at(double t) const;

  double sup_norm() const;
  std::size_t argmax() const;
};

/// Full width at half maximum around the global maximum, linearly interpolated.
double full_width_half_max(const SampledSignal& s);

}  // namespace visco

#endif  // VISCO_SIGNAL_HPP
