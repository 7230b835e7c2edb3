#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "visco/deatten.hpp"
#include "visco/green.hpp"

using namespace visco;

namespace {

double gauss(double t) { return std::exp(-50.0 * (t - 1.0) * (t - 1.0)); }
double gauss_d1(double t) { return -100.0 * (t - 1.0) * gauss(t); }
double gauss_d2(double t) { return (10000.0 * (t - 1.0) * (t - 1.0) - 100.0) * gauss(t); }

SampledSignal sample(const TimeGrid& g, double (*f)(double)) { return SampledSignal::sample(g, f); }

double sup_diff(const SampledSignal& a, const std::function<double(double)>& f, double lo, double hi) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double t = a.time(j);
    if (t >= lo && t <= hi) m = std::max(m, std::abs(a.values[j] - f(t)));
  }
  return m;
}

PowerLawMedium voigt(double nu_s) { return PowerLawMedium(1000.0, 40.0, 1.0, 0.0, nu_s, 2.0); }

}  // namespace

TEST(ViscosityScale, Construction) {
  EXPECT_THROW(ViscosityScale(-1e-3), std::invalid_argument);
  EXPECT_DOUBLE_EQ(ViscosityScale::from_medium(PowerLawMedium(1.0, 3.0, 2.0, 0.0, 0.2, 2.0)).eps, 0.05);
  EXPECT_THROW(ViscosityScale::from_medium(PowerLawMedium(1.0, 3.0, 2.0, 0.0, 0.2, 1.5)), std::invalid_argument);
}

TEST(Deatten, ZeroViscosityIsIdentity) {
  const TimeGrid g(-0.5, 0.01, 300);
  const SampledSignal phi = sample(g, gauss);
  const ViscosityScale zero(0.0);
  EXPECT_EQ(gaussian_attenuation(zero, phi).values, phi.values);
  EXPECT_EQ(gaussian_attenuation_adjoint(zero, phi).values, phi.values);
  EXPECT_EQ(compose_correction(zero, phi).values, phi.values);
  EXPECT_EQ(invert_attenuation(zero, phi, InversionMethod::first_order).values, phi.values);
  EXPECT_EQ(invert_attenuation(zero, phi, InversionMethod::ode).values, phi.values);
}

TEST(Deatten, ExactOperatorAtZeroViscosityIsIdentity) {
  const TimeGrid g(-1.0, 0.005, 1024);
  const SampledSignal phi = sample(g, gauss);
  const auto out = attenuation_exact(voigt(0.0), phi);
  EXPECT_LT(sup_diff(out.signal, gauss, -1.0, 10.0), 1e-8);
  EXPECT_FALSE(out.band_warning);
}

TEST(Deatten, ExactOperatorAgreesWithGaussianKernel) {
  const double eps = 1e-4;
  const TimeGrid g(-1.0, 0.004, 1024);
  const SampledSignal phi = sample(g, gauss);
  const auto exact = attenuation_exact(voigt(eps), phi);
  const auto approx = gaussian_attenuation(ViscosityScale(eps), phi);
  EXPECT_FALSE(exact.band_warning);
  double diff = 0.0, effect = 0.0;
  for (std::size_t j = 0; j < g.n; ++j) {
    if (g.time(j) <= 0.2) continue;
    diff = std::max(diff, std::abs(exact.signal.values[j] - approx.values[j]));
    effect = std::max(effect, std::abs(approx.values[j] - phi.values[j]));
  }
  // Both paths reproduce the O(eps) attenuation; they differ at higher order only.
  EXPECT_LT(diff, 0.05 * effect);
}

TEST(Deatten, ExactOperatorSpreadsImpulseIntoGaussian) {
  // A narrow pulse at tau0 becomes a pulse of width ~ sqrt(eps tau0) centred near tau0.
  const double eps = 1e-4, tau0 = 1.0, w = 0.002;
  const TimeGrid g(-0.5, 5e-4, 8192);
  const SampledSignal phi = SampledSignal::sample(g, [&](double t) { return std::exp(-0.5 * std::pow((t - tau0) / w, 2)); });
  const auto out = attenuation_exact(voigt(eps), phi);
  const std::size_t peak = out.signal.argmax();
  EXPECT_NEAR(out.signal.time(peak), tau0, 0.005);
  const double sigma = std::sqrt(eps * tau0 + w * w);
  EXPECT_NEAR(full_width_half_max(out.signal), 2.3548 * sigma, 0.1 * 2.3548 * sigma);
}

TEST(Deatten, ExactOperatorWarnsOnTruncatedBand) {
  const TimeGrid g(-0.5, 0.02, 256);
  const SampledSignal phi = SampledSignal::sample(g, [](double t) { return std::exp(-0.5 * std::pow((t - 1.0) / 0.02, 2)); });
  EXPECT_TRUE(attenuation_exact(voigt(1e-6), phi).band_warning);
}

TEST(Deatten, GaussianKernelPreservesConstantsAndLines) {
  const double eps = 1e-4;
  const TimeGrid g(0.0, 0.002, 2000);
  const ViscosityScale s(eps);
  const auto one = gaussian_attenuation(s, SampledSignal::sample(g, [](double) { return 1.0; }));
  EXPECT_LT(sup_diff(one, [](double) { return 1.0; }, 0.5, 3.0), 1e-5);
  const auto line = gaussian_attenuation(s, SampledSignal::sample(g, [](double t) { return t; }));
  EXPECT_LT(sup_diff(line, [](double t) { return t; }, 0.5, 3.0), 1e-5);
  const auto one_adj = gaussian_attenuation_adjoint(s, SampledSignal::sample(g, [](double) { return 1.0; }));
  EXPECT_LT(sup_diff(one_adj, [](double) { return 1.0; }, 0.5, 3.0), 1e-5);
}

TEST(Deatten, GaussianKernelOrderTwo) {
  const TimeGrid g(0.0, 5e-4, 5000);
  const SampledSignal phi = sample(g, gauss);
  std::vector<double> errs;
  const std::vector<double> epss = {1e-4, 3e-4, 1e-3};
  for (double eps : epss) {
    const auto out = gaussian_attenuation(ViscosityScale(eps), phi);
    errs.push_back(sup_diff(out, [&](double t) { return gauss(t) + 0.5 * eps * t * gauss_d2(t); }, 1e-9, 10.0));
  }
  const double slope = std::log(errs[2] / errs[0]) / std::log(epss[2] / epss[0]);
  EXPECT_GT(slope, 1.7);
  EXPECT_LT(slope, 2.3);
}

TEST(Deatten, AdjointKernelOrderTwo) {
  // L~* phi ~ phi + (eps/2) (t phi)'' = phi + (eps/2)(2 phi' + t phi'').
  const TimeGrid g(0.0, 5e-4, 5000);
  const SampledSignal phi = sample(g, gauss);
  std::vector<double> errs;
  const std::vector<double> epss = {1e-4, 3e-4, 1e-3};
  for (double eps : epss) {
    const auto out = gaussian_attenuation_adjoint(ViscosityScale(eps), phi);
    errs.push_back(sup_diff(
        out, [&](double t) { return gauss(t) + 0.5 * eps * (2.0 * gauss_d1(t) + t * gauss_d2(t)); }, 1e-9, 10.0));
  }
  const double slope = std::log(errs[2] / errs[0]) / std::log(epss[2] / epss[0]);
  EXPECT_GT(slope, 1.7);
  EXPECT_LT(slope, 2.3);
}

TEST(Deatten, DiscreteAdjointness) {
  const TimeGrid g(0.0, 2e-3, 1500);
  const ViscosityScale s(1e-3);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coef(-1.0, 1.0), centre(0.6, 2.4);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<std::pair<double, double>> a, b;
    for (int k = 0; k < 4; ++k) {
      a.emplace_back(coef(rng), centre(rng));
      b.emplace_back(coef(rng), centre(rng));
    }
    auto make = [&](const std::vector<std::pair<double, double>>& terms) {
      return SampledSignal::sample(g, [&](double t) {
        double v = 0.0;
        for (const auto& [c, m] : terms) v += c * std::exp(-0.5 * std::pow((t - m) / 0.1, 2));
        return v;
      });
    };
    const SampledSignal phi = make(a), psi = make(b);
    const auto lphi = gaussian_attenuation(s, phi);
    const auto lpsi = gaussian_attenuation_adjoint(s, psi);
    double left = 0.0, right = 0.0, scale = 0.0;
    for (std::size_t j = 0; j < g.n; ++j) {
      left += lphi.values[j] * psi.values[j] * g.dt;
      right += phi.values[j] * lpsi.values[j] * g.dt;
      scale += std::abs(phi.values[j] * psi.values[j]) * g.dt;
    }
    EXPECT_NEAR(left, right, 1e-6 * std::max(std::abs(left), scale)) << "trial " << trial;
  }
}

TEST(Deatten, GaussianOperatorsPassThroughNonPositiveTimes) {
  const TimeGrid g(-0.2, 0.01, 100);
  const SampledSignal phi = SampledSignal::sample(g, [](double t) { return 1.0 + t; });
  const auto out = gaussian_attenuation(ViscosityScale(1e-3), phi);
  for (std::size_t j = 0; j < g.n; ++j)
    if (g.time(j) <= 0.0) {
      EXPECT_EQ(out.values[j], phi.values[j]);
    }
}

TEST(Deatten, ComposeCorrectionOnQuadratic) {
  const TimeGrid g(0.0, 0.01, 200);
  const double eps = 0.3;
  const auto out = compose_correction(ViscosityScale(eps), SampledSignal::sample(g, [](double t) { return t * t; }));
  for (std::size_t j = 0; j < g.n; ++j) {
    const double t = g.time(j);
    EXPECT_NEAR(out.values[j], t * t + eps * 4.0 * t, 1e-9);
  }
}

TEST(Deatten, CompositionMatchesCorrectionAtHigherOrder) {
  const TimeGrid g(0.0, 5e-4, 5000);
  const SampledSignal phi = sample(g, gauss);
  double prev = 0.0;
  for (double eps : {1e-3, 5e-4, 2.5e-4}) {
    const ViscosityScale s(eps);
    const auto both = gaussian_attenuation_adjoint(s, gaussian_attenuation(s, phi));
    const auto corr = compose_correction(s, phi);
    double err = 0.0;
    for (std::size_t j = 1; j < g.n; ++j) err = std::max(err, std::abs(both.values[j] - corr.values[j]));
    if (prev > 0.0) {
      EXPECT_GE(prev / err, 2.5) << "eps=" << eps;
    }
    prev = err;
  }
}

TEST(Deatten, FirstOrderInverseIsSecondOrderAccurate) {
  const TimeGrid g(0.0, 1e-3, 2500);
  const SampledSignal phi = sample(g, gauss);
  double prev = 0.0;
  for (double eps : {1e-3, 5e-4, 2.5e-4}) {
    const ViscosityScale s(eps);
    const auto back = invert_attenuation(s, compose_correction(s, phi), InversionMethod::first_order);
    double err = 0.0;
    for (std::size_t j = 0; j < g.n; ++j) err = std::max(err, std::abs(back.values[j] - phi.values[j]));
    if (prev > 0.0) {
      EXPECT_GE(prev / err, 3.4);
      EXPECT_LE(prev / err, 4.6);
    }
    prev = err;
  }
}

TEST(Deatten, OdeInverseRecoversSignal) {
  const double eps = 1e-3;
  const ViscosityScale s(eps);
  double prev = 0.0;
  for (double dt : {2e-3, 1e-3, 5e-4}) {
    const auto n = static_cast<std::size_t>(std::llround(2.5 / dt));
    const TimeGrid g(-0.1, dt, n + n % 2);
    const SampledSignal phi = sample(g, gauss);
    // Measured data from the analytic forward operator, free of stencil error.
    const SampledSignal measured = SampledSignal::sample(g, [&](double t) {
      return gauss(t) + eps * (gauss_d1(t) + t * gauss_d2(t));
    });
    const auto back = invert_attenuation(s, measured, InversionMethod::ode);
    double err = 0.0;
    for (std::size_t j = 0; j < g.n; ++j) err = std::max(err, std::abs(back.values[j] - phi.values[j]));
    EXPECT_LT(err, 0.05);
    if (prev > 0.0) {
      EXPECT_LT(err, prev);
    }
    prev = err;
  }
}

TEST(Deatten, OdeInverseZeroBeforeOrigin) {
  const TimeGrid g(-0.5, 0.01, 300);
  const auto out = invert_attenuation(ViscosityScale(1e-3), sample(g, gauss), InversionMethod::ode);
  for (std::size_t j = 0; j < g.n; ++j)
    if (g.time(j) <= 0.0) {
      EXPECT_EQ(out.values[j], 0.0);
    }
}

TEST(Deatten, OdeInverseReportsNonFiniteState) {
  const TimeGrid g(0.0, 0.01, 100);
  SampledSignal bad = SampledSignal::sample(g, [](double) { return 0.0; });
  bad.values[50] = std::nan("");
  EXPECT_THROW(invert_attenuation(ViscosityScale(1e-3), bad, InversionMethod::ode), std::runtime_error);
}

TEST(Deatten, ParseMethod) {
  EXPECT_EQ(parse_inversion_method("ode"), InversionMethod::ode);
  EXPECT_EQ(parse_inversion_method("first_order"), InversionMethod::first_order);
  EXPECT_THROW(parse_inversion_method("newton"), std::invalid_argument);
}

TEST(EndToEndCorrection, ViscousShearPulseKeepsArrivalAndGainsAmplitude) {
  // Soft-tissue speeds keep eps * omega_max below one on the sampling grid.
  const double c = 1600.0, r = 0.015, dt = 5e-4 / c;
  const TimeGrid g(-512.0 * dt, dt, 2048);
  const PowerLawMedium m(1000.0, 40.0 * c, c, 0.0, 0.2, 2.0);
  const ViscosityScale s = ViscosityScale::from_medium(m);
  const SampledSignal viscous(g, scalar_green_series(m, r, g).gs);
  const SampledSignal corrected =
      invert_attenuation(s, gaussian_attenuation_adjoint(s, viscous), InversionMethod::first_order);
  EXPECT_LE(std::abs(corrected.time(corrected.argmax()) - r / c), dt);
  EXPECT_GT(corrected.values[corrected.argmax()], viscous.values[viscous.argmax()]);
}

TEST(EndToEndCorrection, SmoothPulseIsPartlySharpened) {
  const double c = 1600.0, t0 = 0.015 / c, dt = 5e-4 / c;
  const TimeGrid g(-512.0 * dt, dt, 2048);
  const ViscosityScale s(0.2 / (c * c));
  const SampledSignal phi =
      SampledSignal::sample(g, [&](double t) { return std::exp(-0.5 * std::pow((t - t0) / (3.0 * dt), 2)); });
  const SampledSignal blurred = gaussian_attenuation(s, phi);
  const SampledSignal corrected =
      invert_attenuation(s, gaussian_attenuation_adjoint(s, blurred), InversionMethod::first_order);
  EXPECT_LT(full_width_half_max(corrected), full_width_half_max(blurred));
  EXPECT_GT(full_width_half_max(corrected), full_width_half_max(phi));
  double before = 0.0, after = 0.0;
  for (std::size_t j = 0; j < g.n; ++j) {
    before = std::max(before, std::abs(blurred.values[j] - phi.values[j]));
    after = std::max(after, std::abs(corrected.values[j] - phi.values[j]));
  }
  EXPECT_LT(after, before);
}
