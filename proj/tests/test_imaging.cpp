#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "visco/imaging.hpp"

using namespace visco;

namespace {

constexpr double kVoxel = 5e-4;
constexpr double kSpeed = 1600.0;

PowerLawMedium tissue(double nu_s) { return PowerLawMedium(1000.0, 40.0 * kSpeed, kSpeed, 0.0, nu_s, 2.0); }

TimeGrid array_grid() {
  const double dt = kVoxel / kSpeed;
  return TimeGrid(-128.0 * dt, dt, 512);
}

const Vec3 kCentre{0.01, 0.0, 0.0};

std::vector<Vec3> ring(std::size_t count = 16) { return circular_array(kCentre, 0.05, count); }

}  // namespace

TEST(ImageGrid, LayoutAndArgmaxTies) {
  ImageGrid g({0, 0, 0}, {1, 1, 1}, {2, 3, 4});
  EXPECT_EQ(g.size(), 24u);
  EXPECT_EQ(g.index(1, 2, 3), 23u);
  EXPECT_EQ(g.unravel(g.index(1, 0, 2)), (std::array<std::size_t, 3>{1, 0, 2}));
  g.values[5] = 2.0;
  g.values[17] = 2.0;
  EXPECT_EQ(g.argmax(), 5u);
  EXPECT_THROW(ImageGrid({0, 0, 0}, {1, 1, 1}, {0, 1, 1}), std::invalid_argument);
}

TEST(ImageGrid, PeakToMedian) {
  ImageGrid g({0, 0, 0}, {1, 1, 1}, {5, 1, 1});
  g.values = {1, 2, 3, 4, 10};
  EXPECT_DOUBLE_EQ(g.peak_to_median(), 10.0 / 3.0);
}

TEST(Recording, Validation) {
  SensorArrayRecording r{{{0, 0, 0}}, {}, tissue(0.0)};
  EXPECT_THROW(r.validate(), std::invalid_argument);
}

TEST(Correction, ZeroViscosityLeavesRecordingsUnchanged) {
  const auto rec = simulate_recording(tissue(0.0), kCentre, ring(4), array_grid());
  const auto out = correct_recordings(rec, ViscosityScale(0.0));
  for (std::size_t i = 0; i < rec.signals.size(); ++i) EXPECT_EQ(out.signals[i].values, rec.signals[i].values);
}

TEST(Correction, CorrectedTracesPeakAtTravelTime) {
  const PowerLawMedium m = tissue(0.2);
  const Vec3 source{kCentre[0] + 3 * kVoxel, kCentre[1] - 5 * kVoxel, 0.0};
  const auto rec = simulate_recording(m, source, ring(), array_grid());
  const auto out = correct_recordings(rec, ViscosityScale::from_medium(m));
  std::size_t hits = 0;
  for (std::size_t i = 0; i < out.signals.size(); ++i) {
    const auto& s = out.signals[i];
    const double arrival = distance(rec.receivers[i], source) / kSpeed;
    if (std::abs(s.time(s.argmax()) - arrival) <= s.grid.dt) ++hits;
  }
  EXPECT_GE(hits * 10, out.signals.size() * 9);
}

TEST(Correction, ChangeOnIdealDataScalesWithViscosity) {
  const auto rec = simulate_recording(tissue(0.0), kCentre, ring(4), array_grid());
  auto change = [&](double eps) {
    const auto out = correct_recordings(rec, ViscosityScale(eps));
    double m = 0.0;
    for (std::size_t i = 0; i < rec.signals.size(); ++i)
      for (std::size_t j = 0; j < rec.signals[i].size(); ++j)
        m = std::max(m, std::abs(out.signals[i].values[j] - rec.signals[i].values[j]));
    return m;
  };
  const double eps = 1e-9;
  const double ratio = change(eps) / change(0.5 * eps);
  EXPECT_GT(ratio, 1.6);
  EXPECT_LT(ratio, 2.4);
}

TEST(Correction, ErrorsNameTheReceiver) {
  auto rec = simulate_recording(tissue(0.0), kCentre, ring(3), array_grid());
  rec.signals[1].values[300] = std::nan("");
  try {
    correct_recordings(rec, ViscosityScale(1e-8), InversionMethod::ode);
    FAIL() << "expected an exception";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("receiver 1"), std::string::npos);
  }
}

TEST(Imaging, IdealSourceLocalizedExactlyByAllFunctionals) {
  const Vec3 source{kCentre[0] - 2 * kVoxel, kCentre[1] + 4 * kVoxel, 0.0};
  const auto rec = simulate_recording(tissue(0.0), source, ring(), array_grid());
  const ImageGrid grid = ImageGrid::planar(kCentre, kVoxel, 8);
  const auto k = summarize(kirchhoff_image(rec, grid), source);
  const auto t = summarize(time_reversal_image(rec, grid), source);
  const auto b = summarize(backpropagation_image(rec, grid), source);
  EXPECT_EQ(k.error_voxels, 0.0);
  EXPECT_EQ(t.error_voxels, 0.0);
  EXPECT_EQ(b.error_voxels, 0.0);
  EXPECT_EQ(k.peak_index, t.peak_index);
}

TEST(Imaging, BackpropagationMatchesTimeReversal) {
  const Vec3 source{kCentre[0] + kVoxel, kCentre[1], 0.0};
  const auto rec = simulate_recording(tissue(0.0), source, ring(3), array_grid());
  const ImageGrid grid = ImageGrid::planar(kCentre, kVoxel, 3);
  const auto tr = time_reversal_image(rec, grid);
  const auto bp = backpropagation_image(rec, grid);
  const double peak = *std::max_element(tr.values.begin(), tr.values.end());
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_NEAR(bp.values[i], tr.values[i], 0.01 * peak);
}

TEST(Imaging, HighBandSharpensMainLobe) {
  const auto rec = simulate_recording(tissue(0.0), kCentre, ring(), array_grid());
  const ImageGrid grid = ImageGrid::planar(kCentre, 0.25 * kVoxel, 16);
  const auto full = backpropagation_image(rec, grid, 0.0, 1.0);
  const auto high = backpropagation_image(rec, grid, 0.5, 1.0);
  EXPECT_EQ(full.argmax(), high.argmax());
  EXPECT_LT(main_lobe_width(high), main_lobe_width(full));
}

TEST(Imaging, NoisyDataLocalizedWithinTwoVoxels) {
  const PowerLawMedium m = tissue(0.2);
  const ViscosityScale scale = ViscosityScale::from_medium(m);
  const Vec3 source{kCentre[0] + 2 * kVoxel, kCentre[1] + kVoxel, 0.0};
  const auto clean = simulate_recording(m, source, ring(), array_grid());
  const ImageGrid grid = ImageGrid::planar(kCentre, kVoxel, 6);
  std::vector<double> errors;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto corrected = correct_recordings(add_white_noise(clean, 10.0, seed), scale);
    errors.push_back(summarize(time_reversal_image(corrected, grid), source).error_voxels);
  }
  std::nth_element(errors.begin(), errors.begin() + 10, errors.end());
  EXPECT_LE(errors[10], 2.0);
}

TEST(Imaging, NoiseIsDeterministicPerSeed) {
  const auto rec = simulate_recording(tissue(0.2), kCentre, ring(2), array_grid());
  const auto a = add_white_noise(rec, 10.0, 42);
  const auto b = add_white_noise(rec, 10.0, 42);
  const auto c = add_white_noise(rec, 10.0, 43);
  EXPECT_EQ(a.signals[1].values, b.signals[1].values);
  EXPECT_NE(a.signals[1].values, c.signals[1].values);
}

TEST(Imaging, ErrorDoesNotDecreaseWithNoise) {
  const PowerLawMedium m = tissue(0.2);
  const ViscosityScale scale = ViscosityScale::from_medium(m);
  const auto clean = simulate_recording(m, kCentre, ring(), array_grid());
  const ImageGrid grid = ImageGrid::planar(kCentre, kVoxel, 6);
  double prev = -1.0;
  for (double snr : {20.0, 0.0, -15.0}) {
    std::vector<double> errors;
    for (std::uint64_t seed = 1; seed <= 9; ++seed) {
      const auto corrected = correct_recordings(add_white_noise(clean, snr, seed), scale);
      errors.push_back(summarize(kirchhoff_image(corrected, grid), kCentre).error_voxels);
    }
    std::nth_element(errors.begin(), errors.begin() + 4, errors.end());
    EXPECT_GE(errors[4], prev) << "snr=" << snr;
    prev = errors[4];
  }
}

TEST(Imaging, TranslationEquivariance) {
  const Vec3 source{kCentre[0] - kVoxel, kCentre[1] + 2 * kVoxel, 0.0};
  const Vec3 shift{3 * kVoxel, -2 * kVoxel, 0.0};
  const ImageGrid grid = ImageGrid::planar(kCentre, kVoxel, 8);
  std::vector<Vec3> moved;
  for (const auto& r : ring()) moved.push_back(r + shift);
  const auto a = simulate_recording(tissue(0.0), source, ring(), array_grid());
  const auto b = simulate_recording(tissue(0.0), source + shift, moved, array_grid());
  for (int method = 0; method < 3; ++method) {
    auto image = [&](const SensorArrayRecording& r) {
      if (method == 0) return kirchhoff_image(r, grid);
      if (method == 1) return time_reversal_image(r, grid);
      return backpropagation_image(r, grid);
    };
    const auto pa = grid.unravel(image(a).argmax());
    const auto pb = grid.unravel(image(b).argmax());
    EXPECT_EQ(static_cast<long>(pb[0]) - static_cast<long>(pa[0]), 3) << method;
    EXPECT_EQ(static_cast<long>(pb[1]) - static_cast<long>(pa[1]), -2) << method;
  }
}

TEST(Imaging, ScoresScaleLinearly) {
  const auto rec = simulate_recording(tissue(0.2), kCentre, ring(), array_grid());
  auto scaled = rec;
  for (auto& s : scaled.signals)
    for (double& v : s.values) v *= 3.0;
  const ImageGrid grid = ImageGrid::planar(kCentre, kVoxel, 4);
  const auto a = kirchhoff_image(rec, grid), b = kirchhoff_image(scaled, grid);
  EXPECT_EQ(a.argmax(), b.argmax());
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_NEAR(b.values[i], 3.0 * a.values[i], 1e-12 * b.values[i] + 1e-300);
}

TEST(Imaging, ScalarChannelAlsoLocalizes) {
  const Vec3 source{kCentre[0] + kVoxel, kCentre[1] - 3 * kVoxel, 0.0};
  const auto rec = simulate_recording(tissue(0.0), source, ring(), array_grid(), Channel::shear_scalar);
  const ImageGrid grid = ImageGrid::planar(kCentre, kVoxel, 6);
  EXPECT_EQ(summarize(kirchhoff_image(rec, grid), source).error_voxels, 0.0);
  EXPECT_EQ(parse_channel("shear_scalar"), Channel::shear_scalar);
  EXPECT_THROW(parse_channel("pressure"), std::invalid_argument);
}
