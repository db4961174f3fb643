#include <gtest/gtest.h>

#include <cmath>

#include "vsc/co2.hpp"
#include "vsc/errors.hpp"
#include "vsc/integrator.hpp"

using namespace vsc;

namespace {

EnsembleConfig co2(int n) { return CO2Preset::standard().make_ensemble(n, 0.02, 0.0116); }

}  // namespace

TEST(Integrator, ThermostatValidation) {
  ThermostatParams t;
  t.dt = 0.0;
  EXPECT_THROW(t.validate(), ModelError);
  t = {};
  t.friction = -1.0;
  EXPECT_THROW(t.validate(), ModelError);
  t = {};
  EXPECT_EQ(t.photon_gamma(), t.friction);
  t.photon_friction = 0.0;
  EXPECT_EQ(t.photon_gamma(), 0.0);
}

TEST(Integrator, SameSeedSameTrajectory) {
  const EnsembleConfig c = co2(4);
  ThermostatParams th;
  th.seed = 42;
  PropagationOptions p;
  p.n_steps = 2000;
  const Trajectory a = propagate(c, th, p, initial_state(c, 0.1, 1));
  const Trajectory b = propagate(c, th, p, initial_state(c, 0.1, 1));
  EXPECT_EQ(a.collective_dipole, b.collective_dipole);
  EXPECT_EQ(a.q_beta, b.q_beta);
  th.seed = 43;
  const Trajectory d = propagate(c, th, p, initial_state(c, 0.1, 1));
  EXPECT_NE(a.collective_dipole, d.collective_dipole);
}

TEST(Integrator, SerialAndParallelForcesGiveSameTrajectory) {
  const EnsembleConfig c = co2(100);
  ThermostatParams th;
  PropagationOptions p;
  p.n_steps = 200;
  p.parallel_forces = false;
  const Trajectory a = propagate(c, th, p, initial_state(c, 0.1, 1));
  p.parallel_forces = true;
  const Trajectory b = propagate(c, th, p, initial_state(c, 0.1, 1));
  EXPECT_EQ(a.collective_dipole, b.collective_dipole);
}

TEST(Integrator, SamplingLayout) {
  const EnsembleConfig c = co2(3);
  PropagationOptions p;
  p.n_steps = 100;
  p.sample_stride = 10;
  const Trajectory t = propagate(c, {}, p, initial_state(c, 0.1, 1));
  ASSERT_EQ(t.size(), 11u);
  EXPECT_EQ(t.steps.front(), 0);
  EXPECT_EQ(t.steps.back(), 100);
  EXPECT_EQ(t.local_dipoles.size(), 11u * 3);
  EXPECT_EQ(t.local_dipole(0), t.local_dipole_first);
  EXPECT_EQ(t.bond_length(0), t.bond_length_first);
  EXPECT_DOUBLE_EQ(t.sample_dt(), 200.0);
}

TEST(Integrator, NveConservesEnergy) {
  const EnsembleConfig c = co2(5);
  ThermostatParams th;
  th.friction = 0.0;
  PropagationOptions p;
  p.n_steps = 5000;
  p.sample_stride = 1;
  const Trajectory t = propagate(c, th, p, initial_state(c, 0.1, 3));
  const double e0 = t.kinetic_energy[0] + t.potential_energy[0];
  // Verlet's bounded shadow-energy wobble is O((omega dt)^2); drift is not.
  double worst = 0, first = 0, second = 0;
  const std::size_t half = t.size() / 2;
  for (std::size_t s = 0; s < t.size(); ++s) {
    const double e = t.kinetic_energy[s] + t.potential_energy[s];
    worst = std::max(worst, std::abs(e - e0) / std::abs(e0));
    (s < half ? first : second) += e;
  }
  EXPECT_LT(worst, 3e-2);
  EXPECT_LT(std::abs(first / half - second / (t.size() - half)) / std::abs(e0), 1e-4);
}

TEST(Integrator, HarmonicVerletFrequency) {
  // One free CO2 molecule without cavity: the bond oscillates at the
  // integrator-mapped sqrt(k_s) or sqrt(k_a); check period via zero crossings
  // of the symmetric displacement.
  const CO2Preset pr = CO2Preset::standard();
  EnsembleConfig c = pr.make_ensemble(1, 0.0, 0.0116);
  SystemState s = SystemState::zeros(c);
  s.position(0, 0) = -0.01;
  s.position(0, 2) = 0.01;
  ThermostatParams th;
  th.friction = 0.0;
  LangevinIntegrator integ(c, th);
  double prev = s.position(0, 2) - s.position(0, 0), last_cross = -1;
  int crossings = 0;
  double first_cross = -1;
  const double mid = 0.0;
  for (int k = 1; k <= 20000; ++k) {
    integ.step(s);
    const double x = s.position(0, 2) - s.position(0, 0);
    if ((prev - mid) * (x - mid) < 0) {
      const double t = (k - 1 + (prev - mid) / (prev - x)) * th.dt;
      if (first_cross < 0) first_cross = t;
      last_cross = t;
      ++crossings;
    }
    prev = x;
  }
  const double omega = M_PI * (crossings - 1) / (last_cross - first_cross);
  const double expected = 2.0 / th.dt * std::asin(std::sqrt(pr.k_s()) * th.dt / 2.0);
  EXPECT_NEAR(omega, expected, 1e-5 * expected);
}

TEST(Integrator, BlowUpIsReported) {
  const EnsembleConfig c = co2(2);
  PropagationOptions p;
  p.n_steps = 100;
  p.blowup_bound = 1e-3;
  EXPECT_THROW(propagate(c, {}, p, initial_state(c, 0.1, 1)), BlowUpError);
}
