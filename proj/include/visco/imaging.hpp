#ifndef VISCO_IMAGING_HPP
#define VISCO_IMAGING_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "visco/deatten.hpp"
#include "visco/medium.hpp"
#include "visco/signal.hpp"
#include "visco/types.hpp"

namespace visco {

/// Receiver positions with one trace each on a shared time grid.
struct SensorArrayRecording {
  std::vector<Vec3> receivers;
  std::vector<SampledSignal> signals;
  PowerLawMedium medium;

  /// Throws std::invalid_argument on count mismatch or differing grids.
  void validate() const;
};

/// Data channel recorded at each receiver.
/// shear_scalar: G^s(|x - xi|, t), the scalar shear Green function.
/// transverse: rho c_s^2 G_33 for a point force along z, i.e. the full tensor
/// component scaled to the same far-field amplitude as the scalar channel.
enum class Channel { shear_scalar, transverse };

const char* to_string(Channel c);
Channel parse_channel(const std::string& name);

SensorArrayRecording simulate_recording(const PowerLawMedium& medium, const Vec3& source,
                                        const std::vector<Vec3>& receivers, const TimeGrid& grid,
                                        Channel channel = Channel::transverse);

/// Adds white Gaussian noise with variance mean_square(all traces) / 10^(snr_db/10).
SensorArrayRecording add_white_noise(const SensorArrayRecording& recording, double snr_db, std::uint64_t seed);

/// Applies the adjoint Gaussian operator then the chosen inverse to every trace.
/// Errors are rethrown as std::runtime_error naming the receiver index.
SensorArrayRecording correct_recordings(const SensorArrayRecording& recording, const ViscosityScale& scale,
                                        InversionMethod method = InversionMethod::first_order);

/// Equally spaced receivers on a circle of the given radius in the plane z = centre[2].
std::vector<Vec3> circular_array(const Vec3& centre, double radius, std::size_t count);

/// Axis-aligned voxel grid with one nonnegative score per voxel.
/// Linear index of voxel (i, j, k) is (i * ny + j) * nz + k.
struct ImageGrid {
  Vec3 origin{};
  Vec3 spacing{};
  std::array<std::size_t, 3> count{1, 1, 1};
  std::vector<double> values;

  ImageGrid() = default;
  ImageGrid(const Vec3& origin, const Vec3& spacing, const std::array<std::size_t, 3>& count);
  /// Grid of (2 half + 1) nodes per in-plane axis centred on `centre`, one node in z.
  static ImageGrid planar(const Vec3& centre, double spacing, std::size_t half);

  std::size_t size() const { return count[0] * count[1] * count[2]; }
  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const { return (i * count[1] + j) * count[2] + k; }
  std::array<std::size_t, 3> unravel(std::size_t linear) const;
  Vec3 point(std::size_t linear) const;
  /// Largest score; ties go to the lowest linear index.
  std::size_t argmax() const;
  /// Maximum score over the median score.
  double peak_to_median() const;
};

ImageGrid kirchhoff_image(const SensorArrayRecording& recording, const ImageGrid& grid);
ImageGrid time_reversal_image(const SensorArrayRecording& recording, const ImageGrid& grid);
/// Frequency-domain refocusing restricted to band_lo * omega_max <= |w| <= band_hi * omega_max.
ImageGrid backpropagation_image(const SensorArrayRecording& recording, const ImageGrid& grid,
                                double band_lo = 0.0, double band_hi = 1.0);

struct LocalizationSummary {
  Vec3 peak{};
  std::size_t peak_index = 0;
  /// Largest per-axis index offset between the peak and the true source.
  double error_voxels = 0.0;
  double peak_to_median = 0.0;
};

LocalizationSummary summarize(const ImageGrid& image, const Vec3& true_source);

/// Width of the main lobe along the first axis through the peak, in voxels, at half maximum.
double main_lobe_width(const ImageGrid& image);

}  // namespace visco

#endif  // VISCO_IMAGING_HPP
