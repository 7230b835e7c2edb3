#ifndef VISCO_HARNESS_HPP
#define VISCO_HARNESS_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "visco/deatten.hpp"
#include "visco/fft.hpp"
#include "visco/green.hpp"
#include "visco/imaging.hpp"
#include "visco/medium.hpp"
#include "visco/signal.hpp"

namespace visco::harness {

inline constexpr int kSchemaVersion = 1;

/// Flat `[section] key = value` configuration with per-scenario defaults.
/// Keys are addressed as "section.key". Unknown keys are rejected.
class Config {
 public:
  /// Defaults for a scenario: fig1, fig2, fig3, localize, kk-check, green, correct.
  static Config defaults(const std::string& scenario);
  /// Defaults, then the INI file (if any), then "section.key=value" overrides.
  static Config load(const std::string& scenario, const std::optional<std::filesystem::path>& file,
                     const std::vector<std::string>& overrides);

  void set(const std::string& key, const std::string& value);
  /// Applies a "section.key=value" override.
  void apply(const std::string& assignment);
  std::string get(const std::string& key) const;
  double number(const std::string& key) const;
  std::int64_t integer(const std::string& key) const;
  std::vector<double> numbers(const std::string& key) const;
  Vec3 vec3(const std::string& key) const;
  const std::string& scenario() const { return scenario_; }
  std::uint64_t seed() const;

  PowerLawMedium medium() const;
  const std::map<std::string, std::string>& entries() const { return entries_; }
  nlohmann::json to_json() const;

 private:
  std::string scenario_;
  std::map<std::string, std::string> entries_;
};

/// (y, nu_s) pairs written as "y:nu,y:nu".
std::vector<std::pair<double, double>> parse_cases(const std::string& text);

// Figure 1: temporal response at fixed distance.
struct Fig1Case {
  double y = 0.0, nu_s = 0.0;
  SampledSignal viscous, elastic;
  double viscous_peak = 0.0, elastic_peak = 0.0;
  /// Time of the maximum of the elastic shear block G^s.
  double shear_arrival = 0.0;
  /// Sup-norm change of the viscous curve when the window length doubles, relative to its sup.
  double refinement_change = 0.0;
  bool perturbative = false;
  bool peak_ok = false, arrival_ok = false, refinement_ok = false;
  double seconds = 0.0;
  bool passed() const { return peak_ok && arrival_ok && refinement_ok; }
};
struct Fig1Report {
  TimeGrid grid;
  double r = 0.0;
  std::vector<Fig1Case> cases;
  bool passed() const;
};
Fig1Report run_fig1(const Config& config);

// Figure 2: planar field at a fixed instant.
struct Fig2Case {
  double y = 0.0, nu_s = 0.0;
  PlanarField field;
  /// Shear wavefront profile r -> 4 pi r G^s(r, t).
  std::vector<double> radii, front;
  double front_peak = 0.0, front_fwhm = 0.0, front_radius = 0.0;
  /// Maximum |field| along the transverse axis, reported only.
  double transverse_max = 0.0;
};
struct Fig2Report {
  double time = 0.0;
  std::vector<Fig2Case> cases;  // first entry is the elastic reference
  bool front_at_shear_radius = false;
  bool diffusion_ok = false;
  bool passed() const { return front_at_shear_radius && diffusion_ok; }
};
Fig2Report run_fig2(const Config& config);

// Figure 3: Gaussian-kernel approximation error versus eps.
struct Fig3Point {
  double eps = 0.0;
  double error = 0.0;
};
struct Fig3Report {
  std::vector<Fig3Point> points;
  double slope = 0.0;
  double zero_eps_error = 0.0;
  double slope_lo = 1.7, slope_hi = 2.3;
  bool passed() const { return slope >= slope_lo && slope <= slope_hi && zero_eps_error < 1e-10; }
};
Fig3Report run_fig3(const Config& config);

/// Least-squares slope of log(error) against log(eps).
double log_log_slope(const std::vector<Fig3Point>& points);

// Localization experiment.
struct MethodOutcome {
  double error_uncorrected = 0.0, error_corrected = 0.0;
  double ptm_uncorrected = 0.0, ptm_corrected = 0.0;
};
struct LocalizeTrial {
  Vec3 source{};
  MethodOutcome kirchhoff, time_reversal, backpropagation;
};
struct LocalizeReport {
  TimeGrid grid;
  double eps = 0.0;
  bool perturbative = false;
  std::vector<LocalizeTrial> trials;
  std::size_t ptm_wins = 0;  // Kirchhoff trials (excluding the centred one) where correction raises peak-to-median
  std::size_t random_trials = 0;
  double max_error = 0.0;    // over all corrected images
  double error_tolerance = 1.0;
  std::size_t required_wins = 8;
  bool passed() const { return max_error <= error_tolerance && ptm_wins >= required_wins; }
};
LocalizeReport run_localize(const Config& config);

// Causality check of the dispersion relation.
struct KkCase {
  double y = 0.0, nu_s = 0.0;
  std::vector<std::size_t> sizes;
  std::vector<double> residuals;
  std::vector<bool> band_too_narrow;
  double threshold = 0.0;
  bool monotone = false;
  bool passed() const;
};
struct KkReport {
  std::vector<KkCase> cases;
  bool passed() const;
};
KkReport run_kk_check(const Config& config);

// Ad-hoc tensor evaluation.
struct GreenReport {
  GreenTensorSeries tensor;
  bool perturbative = false;
};
GreenReport run_green(const Config& config);

/// File-in/file-out correction of a (t, value) CSV trace.
SampledSignal run_correct(const Config& config, const SampledSignal& input);

/// Runs one CLI scenario end to end: writes the manifest (status "running"), the data files,
/// the plot script, then the final manifest. Returns true when every assertion passed.
bool execute(const std::string& command, const Config& config, const std::filesystem::path& out_dir,
             const std::optional<std::filesystem::path>& input = std::nullopt,
             const std::optional<std::filesystem::path>& output = std::nullopt);

}  // namespace visco::harness

#endif  // VISCO_HARNESS_HPP
