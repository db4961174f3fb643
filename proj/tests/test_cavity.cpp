#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "vsc/cavity.hpp"
#include "vsc/co2.hpp"
#include "vsc/errors.hpp"

using namespace vsc;

TEST(Cavity, ModeVolume) {
  EXPECT_DOUBLE_EQ(coupling_from_mode_volume(4 * M_PI), 1.0);
  EXPECT_LT(coupling_from_mode_volume(1e30), 1e-14);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(1e-3, 2.0);
  for (int k = 0; k < 100; ++k) {
    const double l = u(rng);
    EXPECT_NEAR(coupling_from_mode_volume(mode_volume_from_coupling(l)), l, 1e-14 * l);
  }
  EXPECT_TRUE(std::isinf(mode_volume_from_coupling(0.0)));
}

TEST(Cavity, FabryPerot) {
  EXPECT_DOUBLE_EQ(fabry_perot_wavelength(1, 1, 2), 1.0);
  EXPECT_DOUBLE_EQ(fabry_perot_wavelength(1, 1, 1), 2.0);
  EXPECT_DOUBLE_EQ(fabry_perot_wavelength(3, 2.6, 5), 2 * fabry_perot_wavelength(3, 1.3, 5));
}

TEST(Cavity, RenormalizedFrequencyPerLevel) {
  EnsembleConfig c = CO2Preset::standard().make_ensemble(20, 0.03, 0.0116);
  const double w = c.omega_beta;
  const double g2 = 1.0 / (1.0 + c.collective_strength());
  EXPECT_NEAR(renormalized_frequency(ApproximationLevel::sc, c).omega_out, std::sqrt(g2) * w, 1e-16);
  EXPECT_EQ(renormalized_frequency(ApproximationLevel::be, c).omega_out, w);
  EXPECT_NEAR(renormalized_frequency(ApproximationLevel::D, c).omega_out, std::sqrt(2 - 1 / g2) * w, 1e-16);
  EXPECT_LE(renormalized_frequency(ApproximationLevel::sc, c).omega_out, w);
  c.lambda = 0.0;
  for (auto l : {ApproximationLevel::sc, ApproximationLevel::be, ApproximationLevel::D})
    EXPECT_EQ(renormalized_frequency(l, c).omega_out, w);
}

TEST(Cavity, DLevelUnstableBeyondHalf) {
  EnsembleConfig c = CO2Preset::standard().make_ensemble(20, 0.0, 0.0116);
  c.lambda = 1.0 / std::sqrt(c.n_molecules * c.single_polarizability());  // gamma^2 = 1/2
  EXPECT_THROW(renormalized_frequency(ApproximationLevel::D, c), UnstableRegimeError);
  c.lambda *= 0.99;
  EXPECT_NO_THROW(renormalized_frequency(ApproximationLevel::D, c));
}

TEST(Cavity, MaxwellMatchesSelfConsistent) {
  EnsembleConfig c = CO2Preset::standard().make_ensemble(7, 0.0, 0.0116);
  for (double l : {0.0, 0.01, 0.1, 0.5}) {
    c.lambda = l;
    const RedshiftReport m = maxwell_redshift(c);
    ASSERT_TRUE(m.n_r.has_value());
    EXPECT_NEAR(m.omega_out, renormalized_frequency(ApproximationLevel::sc, c).omega_out, 4e-16 * c.omega_beta);
  }
  c.lambda = 0.1;
  // A larger physical volume dilutes the medium.
  EXPECT_GT(maxwell_redshift(c, 10 * mode_volume_from_coupling(0.1)).omega_out, maxwell_redshift(c).omega_out);
}
