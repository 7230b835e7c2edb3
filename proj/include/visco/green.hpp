#ifndef VISCO_GREEN_HPP
#define VISCO_GREEN_HPP

#include <vector>

#include "visco/fft.hpp"
#include "visco/medium.hpp"
#include "visco/signal.hpp"
#include "visco/types.hpp"

namespace visco {

/// Source point xi, receiver x, distance r = |x - xi| and direction gamma = (x - xi)/r.
struct SourceReceiverGeometry {
  Vec3 xi{};
  Vec3 x{};
  double r = 0.0;
  Vec3 gamma{};

  /// Throws std::invalid_argument when x == xi.
  static SourceReceiverGeometry make(const Vec3& xi, const Vec3& x);
};

/// A_m(w) = 1 - nu_m M(w) / c_m^2.
Complex amplitude_factor(const PowerLawMedium& medium, Mode mode, double omega);

/// I_m(r, w) = A_m int_0^{r/c_m} z exp(i K_m z) dz. Closed form, with a power series
/// for |K| r/c_m < 0.5 to avoid cancellation.
Complex radial_moment(const PowerLawMedium& medium, Mode mode, double omega, double r);

/// E_m(r, w) = A_m exp(i K_m r / c_m).
Complex phase_factor(const PowerLawMedium& medium, Mode mode, double omega, double r);

/// Frequency-domain Green tensor at angular frequency omega.
Matrix3c green_frequency_tensor(const PowerLawMedium& medium, const SourceReceiverGeometry& geometry,
                                double omega);

/// Compressional Helmholtz potential of the first column of the Green tensor,
/// -(1/(4 pi rho)) d_1(1/r) I_p(r, w), at offset x - xi.
Complex p_potential(const PowerLawMedium& medium, const Vec3& offset, double omega);

/// The four scalar building blocks of the time-domain tensor at one distance.
/// gp, gs: inverse transforms of A_m exp(i K_m r/c_m)/(4 pi r); wp, ws: of I_m.
struct ScalarGreenSeries {
  TimeGrid grid;
  double r = 0.0;
  std::vector<double> gp, gs, wp, ws;
  /// Untapered spectral magnitude at the taper knee relative to the band peak exceeded the floor.
  bool spectrum_truncated = false;
};

struct SynthesisOptions {
  double taper_fraction = 0.1;
  double truncation_floor = 1e-3;
};

ScalarGreenSeries scalar_green_series(const PowerLawMedium& medium, double r, const TimeGrid& grid,
                                      const SynthesisOptions& options = {});

/// 3x3 real tensor per time sample at a fixed source-receiver offset.
struct GreenTensorSeries {
  SourceReceiverGeometry geometry;
  TimeGrid grid;
  std::vector<Matrix3> g;
  bool spectrum_truncated = false;

  SampledSignal component(int i, int j) const;
};

GreenTensorSeries green_time_tensor(const PowerLawMedium& medium, const SourceReceiverGeometry& geometry,
                                    const TimeGrid& grid, const SynthesisOptions& options = {});

/// Shear-only tensor of the incompressible limit.
GreenTensorSeries green_quasi_incompressible(const PowerLawMedium& medium,
                                             const SourceReceiverGeometry& geometry,
                                             const TimeGrid& grid, const SynthesisOptions& options = {});

/// t -> (G^p + G^s)/(rho c_p^2) + (W_s - W_p)/(4 pi rho r^3).
SampledSignal temporal_profile(const PowerLawMedium& medium, double r, const TimeGrid& grid,
                               const SynthesisOptions& options = {});

/// Scalar blocks evaluated at a single instant t for a list of distances, using the
/// frequency grid and taper of `grid`.
struct RadialTable {
  std::vector<double> r, gp, gs, wp, ws;
};
RadialTable radial_table(const PowerLawMedium& medium, const std::vector<double>& radii, double t,
                         const TimeGrid& grid, const SynthesisOptions& options = {});

/// Planar field (x, y) -> ((x/r)^2 G^p + (1 - (x/r)^2) G^s)/(rho c_p^2)
///   + (3 (x/r)^2 - 1)(W_s - W_p)/(4 pi rho r^3) at time t, with the source at the origin.
/// Samples are row-major over (ix, iy); the sample at r = 0 is set to 0.
struct PlanarField {
  std::vector<double> x, y;
  std::vector<double> values;
  double at(std::size_t ix, std::size_t iy) const { return values[ix * y.size() + iy]; }
};
PlanarField spatial_profile(const PowerLawMedium& medium, double t, double half_extent, std::size_t points,
                            const TimeGrid& grid, const SynthesisOptions& options = {});

}  // namespace visco

#endif  // VISCO_GREEN_HPP
