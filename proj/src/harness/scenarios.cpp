#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>

#include "visco/harness.hpp"
#include "visco/output.hpp"

namespace visco::harness {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::size_t even_count(std::int64_t n, const char* key) {
  if (n < 4 || n % 2 != 0) throw std::invalid_argument(std::string("config ") + key + " must be even and >= 4");
  return static_cast<std::size_t>(n);
}

/// Time grid resolving a shear pulse at distance r: omega_max = factor * c_s / r unless dt is given.
TimeGrid pulse_grid(const Config& c, double r, std::size_t n) {
  double dt = c.number("grid.dt");
  if (!(dt > 0.0)) dt = kPi * r / (c.number("grid.omega_factor") * c.number("medium.c_s"));
  return TimeGrid(-c.number("grid.t0_fraction") * static_cast<double>(n) * dt, dt, n);
}

double signed_max(const SampledSignal& s) { return *std::max_element(s.values.begin(), s.values.end()); }

std::vector<double> times(const TimeGrid& g) {
  std::vector<double> t(g.n);
  for (std::size_t j = 0; j < g.n; ++j) t[j] = g.time(j);
  return t;
}

std::string number_text(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

bool Fig1Report::passed() const {
  return !cases.empty() && std::all_of(cases.begin(), cases.end(), [](const Fig1Case& c) { return c.passed(); });
}

Fig1Report run_fig1(const Config& config) {
  Fig1Report report;
  report.r = config.number("geometry.r");
  const std::size_t n = even_count(config.integer("grid.n"), "grid.n");
  report.grid = pulse_grid(config, report.r, n);
  const TimeGrid fine = pulse_grid(config, report.r, 2 * n);
  const double shift = (report.grid.t0 - fine.t0) / report.grid.dt;
  const auto offset = static_cast<std::size_t>(std::llround(shift));
  if (std::abs(shift - static_cast<double>(offset)) > 1e-6)
    throw std::invalid_argument("fig1: grid.t0_fraction * grid.n must give an integer sample offset");
  const PowerLawMedium base = config.medium();

  for (const auto& [y, nu_s] : parse_cases(config.get("fig1.cases"))) {
    const auto start = Clock::now();
    Fig1Case c;
    c.y = y;
    c.nu_s = nu_s;
    const PowerLawMedium viscous = base.with_exponent(y).with_viscosity(base.nu_p(), nu_s);
    const PowerLawMedium elastic = base.with_exponent(y).with_viscosity(0.0, 0.0);
    c.perturbative = viscous.perturbative(report.grid.omega_max());
    c.viscous = temporal_profile(viscous, report.r, report.grid);
    c.elastic = temporal_profile(elastic, report.r, report.grid);
    c.viscous_peak = signed_max(c.viscous);
    c.elastic_peak = signed_max(c.elastic);
    const SampledSignal shear(report.grid, scalar_green_series(elastic, report.r, report.grid).gs);
    c.shear_arrival = shear.time(shear.argmax());
    const SampledSignal refined = temporal_profile(viscous, report.r, fine);
    double diff = 0.0;
    for (std::size_t j = 0; j < n; ++j) diff = std::max(diff, std::abs(refined.values[j + offset] - c.viscous.values[j]));
    c.refinement_change = diff / c.viscous.sup_norm();
    c.peak_ok = c.viscous_peak < c.elastic_peak;
    c.arrival_ok = std::abs(c.shear_arrival - report.r / base.c_s()) <= report.grid.dt;
    c.refinement_ok = c.refinement_change < 5e-3;
    c.seconds = seconds_since(start);
    report.cases.push_back(std::move(c));
  }
  return report;
}

Fig2Report run_fig2(const Config& config) {
  Fig2Report report;
  report.time = config.number("fig2.time");
  const double r = config.number("geometry.r");
  const std::size_t n = even_count(config.integer("grid.n"), "grid.n");
  const TimeGrid grid = pulse_grid(config, r, n);
  const double extent = config.number("grid.extent");
  const auto points = static_cast<std::size_t>(config.integer("grid.points"));
  const PowerLawMedium base = config.medium();

  std::vector<std::pair<double, double>> cases = {{base.y(), 0.0}};
  for (const auto& c : parse_cases(config.get("fig2.cases"))) cases.push_back(c);

  const std::size_t profile_points = 1000;
  const double dr = extent / static_cast<double>(profile_points);
  std::vector<double> radii(profile_points);
  for (std::size_t i = 0; i < profile_points; ++i) radii[i] = dr * static_cast<double>(i + 1);

  for (const auto& [y, nu_s] : cases) {
    Fig2Case c;
    c.y = y;
    c.nu_s = nu_s;
    const PowerLawMedium medium = base.with_exponent(y).with_viscosity(nu_s == 0.0 ? 0.0 : base.nu_p(), nu_s);
    c.field = spatial_profile(medium, report.time, extent, points, grid);
    const RadialTable table = radial_table(medium, radii, report.time, grid);
    c.radii = radii;
    c.front.resize(profile_points);
    for (std::size_t i = 0; i < profile_points; ++i) c.front[i] = 4.0 * kPi * radii[i] * table.gs[i];
    const SampledSignal profile(TimeGrid(dr, dr, profile_points), c.front);
    c.front_peak = signed_max(profile);
    c.front_radius = profile.time(profile.argmax());
    c.front_fwhm = full_width_half_max(profile);
    const std::size_t mid = points / 2;
    for (std::size_t iy = 0; iy < points; ++iy)
      if (iy != mid) c.transverse_max = std::max(c.transverse_max, std::abs(c.field.at(mid, iy)));
    report.cases.push_back(std::move(c));
  }
  const double voxel = 2.0 * extent / static_cast<double>(points - 1);
  const Fig2Case& elastic = report.cases.front();
  report.front_at_shear_radius = std::abs(elastic.front_radius - base.c_s() * report.time) <= voxel;
  report.diffusion_ok = report.cases.size() > 1;
  for (std::size_t i = 1; i < report.cases.size(); ++i) {
    const Fig2Case& v = report.cases[i];
    report.diffusion_ok = report.diffusion_ok && v.front_peak < elastic.front_peak && v.front_fwhm > elastic.front_fwhm;
  }
  return report;
}

double log_log_slope(const std::vector<Fig3Point>& points) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const auto m = static_cast<double>(points.size());
  for (const auto& p : points) {
    const double x = std::log(p.eps), y = std::log(p.error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

Fig3Report run_fig3(const Config& config) {
  const double dt = config.number("fig3.dt");
  auto n = static_cast<std::size_t>(std::llround(config.number("fig3.t_end") / dt)) + 1;
  n += n % 2;
  const TimeGrid grid(0.0, dt, n);
  auto phi = [](double t) { return std::exp(-50.0 * (t - 1.0) * (t - 1.0)); };
  auto phi2 = [](double t) {
    const double u = t - 1.0;
    return (10000.0 * u * u - 100.0) * std::exp(-50.0 * u * u);
  };
  const SampledSignal input = SampledSignal::sample(grid, phi);
  auto error_for = [&](double eps) {
    const SampledSignal out = gaussian_attenuation(ViscosityScale(eps), input);
    double err = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double t = grid.time(j);
      if (t <= 0.0) continue;
      err = std::max(err, std::abs(out.values[j] - (phi(t) + 0.5 * eps * t * phi2(t))));
    }
    return err;
  };
  Fig3Report report;
  for (double eps : config.numbers("fig3.eps")) {
    if (!(eps > 0.0)) throw std::invalid_argument("fig3.eps values must be positive");
    report.points.push_back({eps, error_for(eps)});
  }
  if (report.points.size() < 2) throw std::invalid_argument("fig3.eps needs at least two values");
  report.slope = log_log_slope(report.points);
  report.zero_eps_error = error_for(0.0);
  return report;
}

LocalizeReport run_localize(const Config& config) {
  const PowerLawMedium medium = config.medium();
  const ViscosityScale scale = ViscosityScale::from_medium(medium);
  const double voxel = config.number("imaging.voxel");
  const std::size_t n = even_count(config.integer("grid.n"), "grid.n");
  double dt = config.number("grid.dt");
  if (!(dt > 0.0)) dt = voxel / medium.c_s();
  LocalizeReport report;
  report.grid = TimeGrid(-config.number("grid.t0_fraction") * static_cast<double>(n) * dt, dt, n);
  report.eps = scale.eps;
  report.perturbative = medium.perturbative(report.grid.omega_max());

  const Vec3 centre = config.vec3("geometry.source");
  const auto receivers = circular_array(centre, config.number("geometry.array_radius"),
                                        static_cast<std::size_t>(config.integer("geometry.receivers")));
  const ImageGrid grid = ImageGrid::planar(centre, voxel, static_cast<std::size_t>(config.integer("imaging.search_half")));
  const Channel channel = parse_channel(config.get("imaging.channel"));
  const InversionMethod method = parse_inversion_method(config.get("imaging.method"));
  const double snr_db = config.number("imaging.snr_db");
  const auto spread = config.integer("imaging.source_spread");
  const auto random_trials = static_cast<std::size_t>(config.integer("imaging.trials"));

  std::vector<Vec3> sources = {centre};
  std::mt19937_64 rng(config.seed());
  std::uniform_int_distribution<std::int64_t> offset(-spread, spread);
  for (std::size_t i = 0; i < random_trials; ++i) {
    const auto dx = static_cast<double>(offset(rng));
    const auto dy = static_cast<double>(offset(rng));
    sources.push_back({centre[0] + dx * voxel, centre[1] + dy * voxel, centre[2]});
  }
  report.random_trials = random_trials;

  for (std::size_t i = 0; i < sources.size(); ++i) {
    LocalizeTrial trial;
    trial.source = sources[i];
    SensorArrayRecording raw = simulate_recording(medium, trial.source, receivers, report.grid, channel);
    if (std::isfinite(snr_db)) raw = add_white_noise(raw, snr_db, config.seed() + 1 + i);
    const SensorArrayRecording corrected = correct_recordings(raw, scale, method);
    auto evaluate = [&](auto imager, MethodOutcome& out) {
      const auto u = summarize(imager(raw), trial.source);
      const auto c = summarize(imager(corrected), trial.source);
      out.error_uncorrected = u.error_voxels;
      out.error_corrected = c.error_voxels;
      out.ptm_uncorrected = u.peak_to_median;
      out.ptm_corrected = c.peak_to_median;
      report.max_error = std::max(report.max_error, c.error_voxels);
    };
    evaluate([&](const SensorArrayRecording& r) { return kirchhoff_image(r, grid); }, trial.kirchhoff);
    evaluate([&](const SensorArrayRecording& r) { return time_reversal_image(r, grid); }, trial.time_reversal);
    evaluate([&](const SensorArrayRecording& r) { return backpropagation_image(r, grid); }, trial.backpropagation);
    if (i > 0 && trial.kirchhoff.ptm_corrected > trial.kirchhoff.ptm_uncorrected) ++report.ptm_wins;
    report.trials.push_back(trial);
  }
  report.required_wins = (8 * random_trials + 9) / 10;
  return report;
}

bool KkCase::passed() const {
  const bool narrow = std::any_of(band_too_narrow.begin(), band_too_narrow.end(), [](bool b) { return b; });
  const bool below = std::all_of(residuals.begin(), residuals.end(), [&](double r) { return r < threshold; });
  const bool voigt = std::abs(y - 2.0) < 1e-12;
  return !narrow && below && (!voigt || monotone);
}

bool KkReport::passed() const {
  return !cases.empty() && std::all_of(cases.begin(), cases.end(), [](const KkCase& c) { return c.passed(); });
}

KkReport run_kk_check(const Config& config) {
  const PowerLawMedium base = config.medium();
  KkReport report;
  for (const auto& [y, nu_s] : parse_cases(config.get("kk.cases"))) {
    KkCase c;
    c.y = y;
    c.nu_s = nu_s;
    c.threshold = std::abs(y - 2.0) < 1e-12 ? 0.05 : 0.1;
    const PowerLawMedium medium = base.with_exponent(y).with_viscosity(base.nu_p(), nu_s);
    const double wp = perturbative_frequency(medium, Mode::s);
    const double d_omega = (std::isfinite(wp) ? 0.01 * wp : 1.0) / 16.0;
    for (double size : config.numbers("kk.sizes")) {
      const std::size_t nn = even_count(static_cast<std::int64_t>(size), "kk.sizes");
      const auto r = kramers_kronig_residual(medium, Mode::s, FrequencyGrid(nn, d_omega));
      c.sizes.push_back(nn);
      c.residuals.push_back(r.residual);
      c.band_too_narrow.push_back(r.band_too_narrow);
    }
    c.monotone = true;
    for (std::size_t i = 1; i < c.residuals.size(); ++i) c.monotone = c.monotone && c.residuals[i] < c.residuals[i - 1];
    report.cases.push_back(std::move(c));
  }
  return report;
}

GreenReport run_green(const Config& config) {
  const PowerLawMedium medium = config.medium();
  const auto geometry = SourceReceiverGeometry::make(config.vec3("geometry.source"), config.vec3("geometry.receiver"));
  const TimeGrid grid = pulse_grid(config, geometry.r, even_count(config.integer("grid.n"), "grid.n"));
  GreenReport report{green_time_tensor(medium, geometry, grid), medium.perturbative(grid.omega_max())};
  return report;
}

SampledSignal run_correct(const Config& config, const SampledSignal& input) {
  const PowerLawMedium medium = config.medium();
  const ViscosityScale scale = ViscosityScale::from_medium(medium);
  const InversionMethod method = parse_inversion_method(config.get("imaging.method"));
  return invert_attenuation(scale, gaussian_attenuation_adjoint(scale, input), method);
}

// ---------------------------------------------------------------------------
// Output

namespace {

const char* kPlotHeader =
    "import csv\n"
    "import os\n"
    "import matplotlib\n"
    "matplotlib.use('Agg')\n"
    "import matplotlib.pyplot as plt\n"
    "\n"
    "here = os.path.dirname(os.path.abspath(__file__))\n"
    "\n"
    "def load(name):\n"
    "    with open(os.path.join(here, name)) as f:\n"
    "        rows = list(csv.reader(f))\n"
    "    cols = list(zip(*[[float(v) for v in r] for r in rows[1:]]))\n"
    "    return rows[0], cols\n"
    "\n";

std::string case_tag(double y, double nu) { return "y" + number_text(y) + "_nu" + number_text(nu); }

nlohmann::json grid_json(const TimeGrid& g) {
  return {{"t0", g.t0}, {"dt", g.dt}, {"n", g.n}, {"omega_max", g.omega_max()}};
}

nlohmann::json write_fig1(const Fig1Report& rep, const std::filesystem::path& dir, Manifest& m) {
  nlohmann::json cases = nlohmann::json::array();
  std::string plot = kPlotHeader;
  plot += "fig, axes = plt.subplots(1, " + std::to_string(rep.cases.size()) + ", figsize=(5 * " +
          std::to_string(rep.cases.size()) + ", 4), squeeze=False)\n";
  std::size_t k = 0;
  for (const auto& c : rep.cases) {
    const std::string file = "fig1_" + case_tag(c.y, c.nu_s) + ".csv";
    write_csv(dir / file, {"t", "elastic", "viscous"}, {times(rep.grid), c.elastic.values, c.viscous.values});
    m.add_output(dir / file);
    plot += "_, cols = load('" + file + "')\n";
    plot += "ax = axes[0][" + std::to_string(k++) + "]\n";
    plot += "ax.plot(cols[0], cols[1], 'r', label='elastic')\n";
    plot += "ax.plot(cols[0], cols[2], 'b', label='viscous')\n";
    plot += "ax.set_xlim(-0.05, 0.2)\n";
    plot += "ax.set_xlabel('t [s]')\n";
    plot += "ax.set_title('y = " + number_text(c.y) + ", nu_s = " + number_text(c.nu_s) + "')\n";
    plot += "ax.legend()\n";
    cases.push_back({{"y", c.y},
                     {"nu_s", c.nu_s},
                     {"file", file},
                     {"viscous_peak", c.viscous_peak},
                     {"elastic_peak", c.elastic_peak},
                     {"shear_arrival", c.shear_arrival},
                     {"refinement_change", c.refinement_change},
                     {"perturbative", c.perturbative},
                     {"peak_ok", c.peak_ok},
                     {"arrival_ok", c.arrival_ok},
                     {"refinement_ok", c.refinement_ok},
                     {"seconds", c.seconds}});
  }
  plot += "fig.tight_layout()\nfig.savefig(os.path.join(here, 'fig1.png'), dpi=150)\n";
  write_text(dir / "plot_fig1.py", plot);
  m.add_output(dir / "plot_fig1.py");
  return {{"grid", grid_json(rep.grid)}, {"r", rep.r}, {"taper", "raised cosine over top 10% of band"}, {"cases", cases}};
}

nlohmann::json write_fig2(const Fig2Report& rep, const std::filesystem::path& dir, Manifest& m) {
  nlohmann::json cases = nlohmann::json::array();
  std::string plot = kPlotHeader + std::string("import numpy as np\n");
  plot += "fig, axes = plt.subplots(1, " + std::to_string(rep.cases.size()) + ", figsize=(5 * " +
          std::to_string(rep.cases.size()) + ", 4), squeeze=False)\n";
  std::size_t k = 0;
  for (const auto& c : rep.cases) {
    const std::string tag = case_tag(c.y, c.nu_s);
    const std::string field_file = "fig2_field_" + tag + ".csv";
    const std::string front_file = "fig2_front_" + tag + ".csv";
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < c.field.x.size(); ++i)
      for (std::size_t j = 0; j < c.field.y.size(); ++j) {
        xs.push_back(c.field.x[i]);
        ys.push_back(c.field.y[j]);
      }
    write_csv(dir / field_file, {"x", "y", "value"}, {xs, ys, c.field.values});
    write_csv(dir / front_file, {"r", "front"}, {c.radii, c.front});
    m.add_output(dir / field_file);
    m.add_output(dir / front_file);
    const std::string npts = std::to_string(c.field.x.size());
    plot += "_, cols = load('" + field_file + "')\n";
    plot += "v = np.array(cols[2]).reshape(" + npts + ", " + npts + ").T\n";
    plot += "lim = np.percentile(np.abs(v), 99)\n";
    plot += "ax = axes[0][" + std::to_string(k++) + "]\n";
    plot += "ax.imshow(v, origin='lower', extent=[min(cols[0]), max(cols[0]), min(cols[1]), max(cols[1])], "
            "cmap='RdBu_r', vmin=-lim, vmax=lim)\n";
    plot += "ax.set_xlabel('x [m]')\nax.set_ylabel('y [m]')\n";
    plot += "ax.set_title('y = " + number_text(c.y) + ", nu_s = " + number_text(c.nu_s) + "')\n";
    cases.push_back({{"y", c.y},
                     {"nu_s", c.nu_s},
                     {"field_file", field_file},
                     {"front_file", front_file},
                     {"front_peak", c.front_peak},
                     {"front_fwhm", c.front_fwhm},
                     {"front_radius", c.front_radius},
                     {"transverse_axis_max_abs", c.transverse_max}});
  }
  plot += "fig.tight_layout()\nfig.savefig(os.path.join(here, 'fig2.png'), dpi=150)\n";
  write_text(dir / "plot_fig2.py", plot);
  m.add_output(dir / "plot_fig2.py");
  return {{"time", rep.time},
          {"front_profile", "r -> 4 pi r G^s(r, t)"},
          {"front_at_shear_radius", rep.front_at_shear_radius},
          {"diffusion_ok", rep.diffusion_ok},
          {"cases", cases}};
}

nlohmann::json write_fig3(const Fig3Report& rep, const std::filesystem::path& dir, Manifest& m) {
  std::vector<double> eps, err;
  for (const auto& p : rep.points) {
    eps.push_back(p.eps);
    err.push_back(p.error);
  }
  write_csv(dir / "fig3_error.csv", {"eps", "error"}, {eps, err});
  m.add_output(dir / "fig3_error.csv");
  std::string plot = kPlotHeader;
  plot += "_, cols = load('fig3_error.csv')\n";
  plot += "fig, ax = plt.subplots(figsize=(5, 4))\n";
  plot += "ax.loglog(cols[0], cols[1], 'o-', label='sup error')\n";
  plot += "ax.loglog(cols[0], [cols[1][0] * (e / cols[0][0]) ** 2 for e in cols[0]], 'k--', label='slope 2')\n";
  plot += "ax.set_xlabel('nu_s / c_s^2 [s]')\nax.set_ylabel('error')\nax.legend()\n";
  plot += "fig.tight_layout()\nfig.savefig(os.path.join(here, 'fig3.png'), dpi=150)\n";
  write_text(dir / "plot_fig3.py", plot);
  m.add_output(dir / "plot_fig3.py");
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : rep.points) pts.push_back({{"eps", p.eps}, {"error", p.error}});
  return {{"points", pts},
          {"slope", rep.slope},
          {"slope_range", {rep.slope_lo, rep.slope_hi}},
          {"zero_eps_error", rep.zero_eps_error}};
}

nlohmann::json outcome_json(const MethodOutcome& o) {
  return {{"error_uncorrected", o.error_uncorrected},
          {"error_corrected", o.error_corrected},
          {"ptm_uncorrected", o.ptm_uncorrected},
          {"ptm_corrected", o.ptm_corrected}};
}

nlohmann::json write_localize(const LocalizeReport& rep, const std::filesystem::path& dir, Manifest& m) {
  std::vector<double> sx, sy, ek, et, eb, pku, pkc;
  nlohmann::json trials = nlohmann::json::array();
  for (const auto& t : rep.trials) {
    sx.push_back(t.source[0]);
    sy.push_back(t.source[1]);
    ek.push_back(t.kirchhoff.error_corrected);
    et.push_back(t.time_reversal.error_corrected);
    eb.push_back(t.backpropagation.error_corrected);
    pku.push_back(t.kirchhoff.ptm_uncorrected);
    pkc.push_back(t.kirchhoff.ptm_corrected);
    trials.push_back({{"source", t.source},
                      {"kirchhoff", outcome_json(t.kirchhoff)},
                      {"time_reversal", outcome_json(t.time_reversal)},
                      {"backpropagation", outcome_json(t.backpropagation)}});
  }
  write_csv(dir / "localize_trials.csv",
            {"source_x", "source_y", "kirchhoff_error", "time_reversal_error", "backpropagation_error",
             "kirchhoff_ptm_uncorrected", "kirchhoff_ptm_corrected"},
            {sx, sy, ek, et, eb, pku, pkc});
  m.add_output(dir / "localize_trials.csv");
  std::string plot = kPlotHeader;
  plot += "_, cols = load('localize_trials.csv')\n";
  plot += "fig, ax = plt.subplots(figsize=(5, 4))\n";
  plot += "ax.plot(cols[5], 'o-', label='uncorrected')\nax.plot(cols[6], 's-', label='corrected')\n";
  plot += "ax.set_xlabel('trial')\nax.set_ylabel('Kirchhoff peak-to-median')\nax.legend()\n";
  plot += "fig.tight_layout()\nfig.savefig(os.path.join(here, 'localize.png'), dpi=150)\n";
  write_text(dir / "plot_localize.py", plot);
  m.add_output(dir / "plot_localize.py");
  return {{"grid", grid_json(rep.grid)},
          {"eps", rep.eps},
          {"eps_omega_max", rep.eps * rep.grid.omega_max()},
          {"perturbative", rep.perturbative},
          {"max_error_voxels", rep.max_error},
          {"kirchhoff_ptm_wins", rep.ptm_wins},
          {"random_trials", rep.random_trials},
          {"required_wins", rep.required_wins},
          {"tie_break", "lowest linear index (i * ny + j) * nz + k"},
          {"trials", trials}};
}

nlohmann::json write_kk(const KkReport& rep, const std::filesystem::path& dir, Manifest& m) {
  std::vector<double> ys, sizes, residuals;
  nlohmann::json cases = nlohmann::json::array();
  for (const auto& c : rep.cases) {
    for (std::size_t i = 0; i < c.sizes.size(); ++i) {
      ys.push_back(c.y);
      sizes.push_back(static_cast<double>(c.sizes[i]));
      residuals.push_back(c.residuals[i]);
    }
    cases.push_back({{"y", c.y},
                     {"nu_s", c.nu_s},
                     {"sizes", c.sizes},
                     {"residuals", c.residuals},
                     {"band_too_narrow", c.band_too_narrow},
                     {"threshold", c.threshold},
                     {"monotone", c.monotone},
                     {"passed", c.passed()}});
  }
  write_csv(dir / "kk_residuals.csv", {"y", "n", "residual"}, {ys, sizes, residuals});
  m.add_output(dir / "kk_residuals.csv");
  std::string plot = kPlotHeader;
  plot += "_, cols = load('kk_residuals.csv')\n";
  plot += "fig, ax = plt.subplots(figsize=(5, 4))\n";
  plot += "for y in sorted(set(cols[0])):\n";
  plot += "    pts = [(n, r) for yy, n, r in zip(*cols) if yy == y]\n";
  plot += "    ax.loglog([p[0] for p in pts], [p[1] for p in pts], 'o-', label='y = %g' % y)\n";
  plot += "ax.set_xlabel('band samples')\nax.set_ylabel('residual')\nax.legend()\n";
  plot += "fig.tight_layout()\nfig.savefig(os.path.join(here, 'kk.png'), dpi=150)\n";
  write_text(dir / "plot_kk.py", plot);
  m.add_output(dir / "plot_kk.py");
  return {{"cases", cases}};
}

nlohmann::json write_green(const GreenReport& rep, const std::filesystem::path& dir, Manifest& m) {
  const auto& g = rep.tensor;
  std::vector<std::vector<double>> cols = {times(g.grid)};
  std::vector<std::string> header = {"t"};
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      header.push_back("g" + std::to_string(i + 1) + std::to_string(j + 1));
      cols.push_back(g.component(i, j).values);
    }
  write_csv(dir / "green_tensor.csv", header, cols);
  m.add_output(dir / "green_tensor.csv");
  std::string plot = kPlotHeader;
  plot += "head, cols = load('green_tensor.csv')\n";
  plot += "fig, ax = plt.subplots(figsize=(6, 4))\n";
  plot += "for name, c in zip(head[1:], cols[1:]):\n    ax.plot(cols[0], c, label=name)\n";
  plot += "ax.set_xlabel('t [s]')\nax.legend()\n";
  plot += "fig.tight_layout()\nfig.savefig(os.path.join(here, 'green.png'), dpi=150)\n";
  write_text(dir / "plot_green.py", plot);
  m.add_output(dir / "plot_green.py");
  return {{"grid", grid_json(g.grid)},
          {"r", g.geometry.r},
          {"gamma", g.geometry.gamma},
          {"spectrum_truncated", g.spectrum_truncated},
          {"perturbative", rep.perturbative}};
}

}  // namespace

bool execute(const std::string& command, const Config& config, const std::filesystem::path& out_dir,
             const std::optional<std::filesystem::path>& input, const std::optional<std::filesystem::path>& output) {
  const std::filesystem::path dir = out_dir / command;
  Manifest manifest(dir, command, config.to_json());
  manifest.begin();
  try {
    nlohmann::json results;
    bool passed = true;
    if (command == "fig1") {
      const auto rep = run_fig1(config);
      results = write_fig1(rep, dir, manifest);
      passed = rep.passed();
    } else if (command == "fig2") {
      const auto rep = run_fig2(config);
      results = write_fig2(rep, dir, manifest);
      passed = rep.passed();
    } else if (command == "fig3") {
      const auto rep = run_fig3(config);
      results = write_fig3(rep, dir, manifest);
      passed = rep.passed();
    } else if (command == "localize") {
      const auto rep = run_localize(config);
      results = write_localize(rep, dir, manifest);
      passed = rep.passed();
    } else if (command == "kk-check") {
      const auto rep = run_kk_check(config);
      results = write_kk(rep, dir, manifest);
      passed = rep.passed();
    } else if (command == "green") {
      results = write_green(run_green(config), dir, manifest);
    } else if (command == "correct") {
      if (!input) throw std::invalid_argument("correct: an input CSV is required");
      const SampledSignal in = read_trace_csv(*input);
      const SampledSignal out = run_correct(config, in);
      const std::filesystem::path target = output ? *output : dir / "corrected.csv";
      write_csv(target, {"t", "value"}, {times(out.grid), out.values});
      manifest.add_output(target);
      results = {{"input", input->string()}, {"output", target.string()}, {"grid", grid_json(out.grid)}};
    } else {
      throw std::invalid_argument("unknown command: " + command);
    }
    manifest.finish(results, passed);
    return passed;
  } catch (const std::exception& e) {
    manifest.fail(e.what());
    throw;
  }
}

}  // namespace visco::harness
