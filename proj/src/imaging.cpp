#include "visco/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "visco/green.hpp"

namespace visco {

void SensorArrayRecording::validate() const {
  if (receivers.size() != signals.size())
    throw std::invalid_argument("SensorArrayRecording: one trace per receiver required");
  if (signals.empty()) throw std::invalid_argument("SensorArrayRecording: no receivers");
  for (const auto& s : signals)
    if (!(s.grid == signals.front().grid))
      throw std::invalid_argument("SensorArrayRecording: traces must share a time grid");
}

const char* to_string(Channel c) { return c == Channel::transverse ? "transverse" : "shear_scalar"; }

Channel parse_channel(const std::string& name) {
  if (name == "shear_scalar") return Channel::shear_scalar;
  if (name == "transverse") return Channel::transverse;
  throw std::invalid_argument("unknown channel: " + name);
}

SensorArrayRecording simulate_recording(const PowerLawMedium& medium, const Vec3& source,
                                        const std::vector<Vec3>& receivers, const TimeGrid& grid,
                                        Channel channel) {
  SensorArrayRecording rec{receivers, {}, medium};
  rec.signals.resize(receivers.size());
  const double scale = medium.rho() * medium.c_s() * medium.c_s();
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(receivers.size()); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const auto geometry = SourceReceiverGeometry::make(source, receivers[i]);
    if (channel == Channel::shear_scalar) {
      rec.signals[i] = SampledSignal(grid, scalar_green_series(medium, geometry.r, grid).gs);
    } else {
      SampledSignal s = green_time_tensor(medium, geometry, grid).component(2, 2);
      for (double& v : s.values) v *= scale;
      rec.signals[i] = std::move(s);
    }
  }
  return rec;
}

SensorArrayRecording add_white_noise(const SensorArrayRecording& recording, double snr_db, std::uint64_t seed) {
  recording.validate();
  double power = 0.0;
  std::size_t count = 0;
  for (const auto& s : recording.signals)
    for (double v : s.values) {
      power += v * v;
      ++count;
    }
  power /= static_cast<double>(count);
  const double sigma = std::sqrt(power / std::pow(10.0, snr_db / 10.0));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, sigma);
  SensorArrayRecording out = recording;
  for (auto& s : out.signals)
    for (double& v : s.values) v += normal(rng);
  return out;
}

SensorArrayRecording correct_recordings(const SensorArrayRecording& recording, const ViscosityScale& scale,
                                        InversionMethod method) {
  recording.validate();
  SensorArrayRecording out = recording;
  for (std::size_t i = 0; i < recording.signals.size(); ++i) {
    try {
      const SampledSignal adj = gaussian_attenuation_adjoint(scale, recording.signals[i]);
      out.signals[i] = invert_attenuation(scale, adj, method);
    } catch (const std::exception& e) {
      throw std::runtime_error("receiver " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

std::vector<Vec3> circular_array(const Vec3& centre, double radius, std::size_t count) {
  std::vector<Vec3> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double a = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(count);
    out.push_back({centre[0] + radius * std::cos(a), centre[1] + radius * std::sin(a), centre[2]});
  }
  return out;
}

ImageGrid::ImageGrid(const Vec3& origin_, const Vec3& spacing_, const std::array<std::size_t, 3>& count_)
    : origin(origin_), spacing(spacing_), count(count_) {
  for (std::size_t c : count)
    if (c == 0) throw std::invalid_argument("ImageGrid: counts must be positive");
  for (double s : spacing)
    if (!(s > 0.0)) throw std::invalid_argument("ImageGrid: spacing must be positive");
  values.assign(size(), 0.0);
}

ImageGrid ImageGrid::planar(const Vec3& centre, double spacing, std::size_t half) {
  const double extent = spacing * static_cast<double>(half);
  return ImageGrid({centre[0] - extent, centre[1] - extent, centre[2]}, {spacing, spacing, spacing},
                   {2 * half + 1, 2 * half + 1, 1});
}

std::array<std::size_t, 3> ImageGrid::unravel(std::size_t linear) const {
  const std::size_t k = linear % count[2];
  const std::size_t ij = linear / count[2];
  return {ij / count[1], ij % count[1], k};
}

Vec3 ImageGrid::point(std::size_t linear) const {
  const auto idx = unravel(linear);
  return {origin[0] + spacing[0] * static_cast<double>(idx[0]), origin[1] + spacing[1] * static_cast<double>(idx[1]),
          origin[2] + spacing[2] * static_cast<double>(idx[2])};
}

std::size_t ImageGrid::argmax() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[best]) best = i;
  return best;
}

double ImageGrid::peak_to_median() const {
  if (values.empty()) return 0.0;
  std::vector<double> v = values;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double median = v[mid];
  if (v.size() % 2 == 0) {
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    median = 0.5 * (median + lower);
  }
  const double peak = *std::max_element(values.begin(), values.end());
  return median > 0.0 ? peak / median : std::numeric_limits<double>::infinity();
}

namespace {

template <class Score>
ImageGrid fill(const ImageGrid& grid, Score score) {
  ImageGrid out = grid;
  out.values.assign(grid.size(), 0.0);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(grid.size()); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    out.values[i] = score(grid.point(i));
  }
  return out;
}

}  // namespace

ImageGrid kirchhoff_image(const SensorArrayRecording& recording, const ImageGrid& grid) {
  recording.validate();
  const double c = recording.medium.c_s();
  return fill(grid, [&](const Vec3& y) {
    double sum = 0.0;
    for (std::size_t r = 0; r < recording.receivers.size(); ++r) {
      const double d = distance(recording.receivers[r], y);
      sum += recording.signals[r].at(d / c) * 4.0 * kPi * d;
    }
    return std::abs(sum);
  });
}

ImageGrid time_reversal_image(const SensorArrayRecording& recording, const ImageGrid& grid) {
  recording.validate();
  const double c = recording.medium.c_s();
  const TimeGrid& tg = recording.signals.front().grid;
  const double omega_max = tg.omega_max();
  const auto window = static_cast<std::ptrdiff_t>(std::min<std::size_t>(tg.n, 512));
  const auto n = static_cast<std::ptrdiff_t>(tg.n);
  return fill(grid, [&](const Vec3& y) {
    double sum = 0.0;
    for (std::size_t r = 0; r < recording.receivers.size(); ++r) {
      const double d = distance(recording.receivers[r], y);
      const double delay = d / c;
      const auto centre = static_cast<std::ptrdiff_t>(std::llround((delay - tg.t0) / tg.dt));
      const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, centre - window);
      const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(n - 1, centre + window);
      const auto& s = recording.signals[r].values;
      double acc = 0.0;
      for (std::ptrdiff_t j = lo; j <= hi; ++j)
        acc += s[static_cast<std::size_t>(j)] * band_limited_delta(tg.time(static_cast<std::size_t>(j)) - delay, omega_max);
      sum += acc * tg.dt / (4.0 * kPi * d);
    }
    return std::abs(sum);
  });
}

ImageGrid backpropagation_image(const SensorArrayRecording& recording, const ImageGrid& grid, double band_lo,
                                double band_hi) {
  recording.validate();
  if (!(band_lo >= 0.0) || !(band_hi <= 1.0) || !(band_lo < band_hi))
    throw std::invalid_argument("backpropagation_image: need 0 <= band_lo < band_hi <= 1");
  const double c = recording.medium.c_s();
  const TimeGrid& tg = recording.signals.front().grid;
  const FrequencyGrid fg = tg.frequency_grid();
  const double omega_max = tg.omega_max();
  const std::size_t m = fg.one_sided_size();

  // Two-sided sum folded onto w >= 0: Hermitian pairs give 2 Re of the positive term.
  std::vector<double> omega;
  std::vector<double> weight;
  std::vector<std::vector<Complex>> spectra(recording.signals.size());
  std::vector<std::size_t> keep;
  for (std::size_t k = 0; k < m; ++k) {
    const double w = fg.omega(static_cast<std::ptrdiff_t>(k));
    if (w < band_lo * omega_max || w > band_hi * omega_max) continue;
    const double fold = (k == 0 || k == m - 1) ? 1.0 : 2.0;
    const double taper = raised_cosine_taper(w, omega_max);
    if (taper == 0.0) continue;
    keep.push_back(k);
    omega.push_back(w);
    weight.push_back(fold * taper * fg.d_omega / (2.0 * kPi));
  }
  for (std::size_t r = 0; r < recording.signals.size(); ++r) {
    const std::vector<Complex> full = analyze_real(tg, recording.signals[r].values);
    spectra[r].reserve(keep.size());
    for (std::size_t k : keep) spectra[r].push_back(full[k]);
  }
  return fill(grid, [&](const Vec3& y) {
    double sum = 0.0;
    for (std::size_t r = 0; r < recording.receivers.size(); ++r) {
      const double d = distance(recording.receivers[r], y);
      const double delay = d / c;
      double acc = 0.0;
      for (std::size_t q = 0; q < omega.size(); ++q)
        acc += weight[q] * (spectra[r][q] * std::exp(-kI * omega[q] * delay)).real();
      sum += acc / (4.0 * kPi * d);
    }
    return std::abs(sum);
  });
}

LocalizationSummary summarize(const ImageGrid& image, const Vec3& true_source) {
  LocalizationSummary s;
  s.peak_index = image.argmax();
  s.peak = image.point(s.peak_index);
  double err = 0.0;
  for (int a = 0; a < 3; ++a) err = std::max(err, std::abs(s.peak[a] - true_source[a]) / image.spacing[a]);
  s.error_voxels = err;
  s.peak_to_median = image.peak_to_median();
  return s;
}

double main_lobe_width(const ImageGrid& image) {
  const std::size_t peak = image.argmax();
  const auto idx = image.unravel(peak);
  const double half = 0.5 * image.values[peak];
  auto value = [&](std::size_t i) { return image.values[image.index(i, idx[1], idx[2])]; };
  double left = static_cast<double>(idx[0]), right = left;
  for (std::size_t i = idx[0]; i > 0; --i) {
    if (value(i - 1) < half) {
      left = static_cast<double>(i) - (value(i) - half) / (value(i) - value(i - 1));
      break;
    }
    left = static_cast<double>(i - 1);
  }
  for (std::size_t i = idx[0]; i + 1 < image.count[0]; ++i) {
    if (value(i + 1) < half) {
      right = static_cast<double>(i) + (value(i) - half) / (value(i) - value(i + 1));
      break;
    }
    right = static_cast<double>(i + 1);
  }
  return right - left;
}

}  // namespace visco
