#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "vsc/co2.hpp"
#include "vsc/integrator.hpp"
#include "vsc/model.hpp"
#include "vsc/oracle.hpp"

using namespace vsc;

TEST(Oracle, SweepPasses) {
  const oracle::SweepReport r = oracle::verification_sweep(40, 7);
  for (const auto& c : r.checks) EXPECT_TRUE(c.passed()) << c.name << " " << c.max_error;
  EXPECT_TRUE(r.passed());
  EXPECT_GE(r.checks.size(), 10u);
}

TEST(Oracle, GaussSeidelAgreesWithDirectSolve) {
  const EnsembleConfig c = CO2Preset::standard().make_ensemble(4, 0.3, 0.0116);
  const oracle::QuadraticModel q = oracle::build_quadratic(c, ApproximationLevel::sc);
  SystemState s = initial_state(c, 0.3, 5);
  s.q_beta = 0.4;
  const Eigen::VectorXd slow = oracle::slow_coordinates(s);
  const Eigen::VectorXd direct = oracle::electronic_minimize(q, slow).electrons;
  EXPECT_LE(oracle::relative_error(direct, oracle::electronic_fixed_point(q, slow)), 1e-12);
}

TEST(Oracle, ElectronsMatchClosedForm) {
  const EnsembleConfig c = CO2Preset::standard().make_ensemble(3, 0.25, 0.0116);
  for (auto level : {ApproximationLevel::sc, ApproximationLevel::be, ApproximationLevel::D}) {
    SystemState s = initial_state(c, 0.3, 9);
    s.q_beta = -0.2;
    const DressedElectronSolution e = solve_dressed_electrons(c, s, level);
    const auto q = oracle::build_quadratic(c, level);
    const Eigen::VectorXd r = oracle::electronic_minimize(q, oracle::slow_coordinates(s)).electrons;
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(e.r_expect[i], r[i], 1e-12) << to_string(level);
  }
}

TEST(Oracle, SelfConsistentPhotonFrequency) {
  // With nuclei frozen (infinite mass limit) the photon oscillates at gamma omega.
  const EnsembleConfig c = CO2Preset::standard().make_ensemble(5, 0.1, 0.0116);
  const auto modes = oracle::full_normal_modes(oracle::build_quadratic(c, ApproximationLevel::sc));
  EXPECT_NEAR(modes.clamped_photon, c.omega_beta * std::sqrt(gamma_squared(5, 0.1, c.single_polarizability())),
              1e-14);
  EXPECT_FALSE(modes.unstable);
}

TEST(Oracle, DLevelBecomesUnstable) {
  EnsembleConfig c = CO2Preset::standard().make_ensemble(5, 0.0, 0.0116);
  c.lambda = 1.2 / std::sqrt(5 * c.single_polarizability());
  EXPECT_TRUE(oracle::full_normal_modes(oracle::build_quadratic(c, ApproximationLevel::D)).unstable);
  EXPECT_FALSE(oracle::full_normal_modes(oracle::build_quadratic(c, ApproximationLevel::sc)).unstable);
}

TEST(Oracle, RelativeError) {
  EXPECT_EQ(oracle::relative_error(1.0, 1.0), 0.0);
  EXPECT_NEAR(oracle::relative_error(1.0, 1.1), 0.1 / 1.1, 1e-15);
  EXPECT_EQ(oracle::relative_error(0.0, 1e-14), 1e-14 / 1e-12);
}

TEST(Oracle, AdiabaticLimitOfLightElectrons) {
  // Slow modes of the full system approach the electron-eliminated ones as
  // the synthetic electron mass goes to zero.
  const EnsembleConfig c = CO2Preset::standard().make_ensemble(3, 0.1, 0.0116);
  double prev = 1.0;
  for (double me : {1.0, 1e-1, 1e-2, 1e-3}) {
    const auto m = oracle::full_normal_modes(oracle::build_quadratic(c, ApproximationLevel::sc, {}, me));
    auto direct = m.direct;
    std::sort(direct.begin(), direct.end());
    double worst = 0.0;
    for (std::size_t k = 0; k < m.adiabatic.size(); ++k)
      if (m.adiabatic[k] > 1e-6) worst = std::max(worst, std::abs(direct[k] - m.adiabatic[k]) / m.adiabatic[k]);
    EXPECT_LT(worst, prev);
    prev = worst;
  }
  EXPECT_LT(prev, 1e-6);
}
