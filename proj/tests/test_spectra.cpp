#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "vsc/errors.hpp"
#include "vsc/spectra.hpp"

using namespace vsc;

namespace {

std::vector<double> noisy_sines(std::size_t n, double dt, std::vector<std::pair<double, double>> comps, double noise) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g(0, noise);
  std::uniform_real_distribution<double> ph(0, 2 * M_PI);
  std::vector<double> phases;
  for (std::size_t k = 0; k < comps.size(); ++k) phases.push_back(ph(rng));
  std::vector<double> x(n);
  for (std::size_t t = 0; t < n; ++t) {
    x[t] = g(rng);
    for (std::size_t k = 0; k < comps.size(); ++k)
      x[t] += comps[k].second * std::cos(comps[k].first * dt * static_cast<double>(t) + phases[k]);
  }
  return x;
}

}  // namespace

TEST(Spectra, NameRoundTrips) {
  for (auto t : {Taper::hann, Taper::bartlett, Taper::none}) EXPECT_EQ(parse_taper(to_string(t)), t);
  for (auto o : {Observable::collective_dipole, Observable::local_dipole, Observable::bond, Observable::photon})
    EXPECT_EQ(parse_observable(to_string(o)), o);
  EXPECT_THROW(parse_taper("gauss"), SpectrumError);
}

TEST(Spectra, AutocorrelationRoutesAgree) {
  const std::vector<double> x = centered(noisy_sines(5000, 1.0, {{0.3, 1.0}}, 0.5));
  const auto a = autocorrelation_serial(x, 300);
  const auto b = autocorrelation_parallel(x, 300);
  const auto c = autocorrelation_fft(x, 300);
  ASSERT_EQ(a.size(), 301u);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k], b[k]);
    EXPECT_NEAR(a[k], c[k], 1e-12 * a[0]);
  }
}

TEST(Spectra, CenteredRejectsNonFinite) {
  std::vector<double> x{1.0, NAN, 2.0};
  EXPECT_THROW(centered(x), SpectrumError);
}

TEST(Spectra, PeaksAtInjectedFrequencies) {
  const double dt = 100.0;
  const double w1 = 0.0061, w2 = 0.0113;
  const auto x = noisy_sines(40001, dt, {{w1, 1.0}, {w2, 0.5}}, 0.1);
  const Spectrum s = autocorrelation_spectrum(x, dt);
  const auto peaks = find_peaks(s, 0.05);
  ASSERT_TRUE(nearest_peak(peaks, w1, s.resolution).has_value());
  ASSERT_TRUE(nearest_peak(peaks, w2, s.resolution).has_value());
  const RabiSplitting r = rabi_splitting(peaks, 0.5 * (w1 + w2));
  EXPECT_NEAR(r.splitting, w2 - w1, 2 * s.resolution);
  // Parseval-like normalization: the integral recovers the variance.
  double var = 0;
  const auto xc = centered(x);
  for (double v : xc) var += v * v / xc.size();
  EXPECT_NEAR(s.integral(), var, 0.02 * var);
}

TEST(Spectra, RabiSplittingNeedsBothSides) {
  std::vector<Peak> only_low{{0.01, 1.0, 0.0}};
  EXPECT_THROW(rabi_splitting(only_low, 0.02), SpectrumError);
}

TEST(Spectra, TooShortSeriesRejected) {
  const std::vector<double> x(100, 1.0);
  EXPECT_THROW(autocorrelation_spectrum(x, 1.0), SpectrumError);
}

TEST(Spectra, VerletFrequencyMapInverts) {
  for (double w : {0.001, 0.006, 0.0116, 0.05}) {
    EXPECT_NEAR(physical_frequency(integrator_frequency(w, 20.0), 20.0), w, 1e-15);
    EXPECT_GT(integrator_frequency(w, 20.0), w);
  }
}

TEST(Spectra, BandMaximum) {
  Spectrum s;
  s.frequencies = {0, 1, 2, 3, 4};
  s.intensities = {0, 5, 1, 7, 2};
  EXPECT_EQ(band_maximum(s, 0.5, 2.5), 5);
  EXPECT_EQ(band_maximum(s, 2.5, 4.5), 7);
}
