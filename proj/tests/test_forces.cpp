#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "vsc/co2.hpp"
#include "vsc/errors.hpp"
#include "vsc/forces.hpp"
#include "vsc/integrator.hpp"
#include "vsc/oracle.hpp"

using namespace vsc;

namespace {

SystemState random_state(const EnsembleConfig& c, std::uint64_t seed) {
  SystemState s = initial_state(c, 0.4, seed);
  std::mt19937_64 rng(seed + 100);
  std::uniform_real_distribution<double> u(-1, 1);
  s.q_beta = u(rng);
  return s;
}

Eigen::VectorXd as_vector(const ForceResult& f) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(f.nuclear.size() + 1));
  for (std::size_t k = 0; k < f.nuclear.size(); ++k) v[static_cast<Eigen::Index>(k)] = f.nuclear[k];
  v[v.size() - 1] = f.photon;
  return v;
}

}  // namespace

TEST(Forces, MatchOracleGradientForCO2Pair) {
  const EnsembleConfig c = CO2Preset::standard().make_ensemble(2, 0.2, 0.0116);
  for (auto level : {ApproximationLevel::sc, ApproximationLevel::D}) {
    const ForceField f(c, level);
    const oracle::QuadraticModel q = oracle::build_quadratic(c, level);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const SystemState s = random_state(c, seed);
      const Eigen::VectorXd mine = as_vector(f.evaluate(s));
      const Eigen::VectorXd fd = oracle::finite_difference_forces(q, oracle::slow_coordinates(s), 1e-5);
      EXPECT_LE(oracle::relative_error(mine, fd), 1e-6) << to_string(level);
      EXPECT_LE(oracle::relative_error(mine, oracle::hellmann_feynman_forces(q, oracle::slow_coordinates(s))), 1e-10);
    }
  }
}

TEST(Forces, BeMatchesOracle) {
  const EnsembleConfig c = CO2Preset::standard().make_ensemble(3, 0.2, 0.0116);
  const ForceField f(c, ApproximationLevel::be);
  const oracle::QuadraticModel q = oracle::build_quadratic(c, ApproximationLevel::be);
  const SystemState s = random_state(c, 8);
  EXPECT_LE(oracle::relative_error(as_vector(f.evaluate(s)), oracle::hellmann_feynman_forces(q, oracle::slow_coordinates(s))),
            1e-10);
  EXPECT_THROW(f.potential_energy(s), ModelError);
}

TEST(Forces, LambdaZeroIsBareAtEveryLevel) {
  EnsembleConfig c = CO2Preset::standard().make_ensemble(4, 0.0, 0.0116);
  const SystemState s = random_state(c, 3);
  const ForceResult ref = ForceField(c, ApproximationLevel::sc).evaluate(s);
  std::vector<double> bare(ref.nuclear.size(), 0.0);
  for (int i = 0; i < 4; ++i)
    c.nuclear_potential.add_gradient(s.molecule(i), std::span<double>(bare).subspan(static_cast<std::size_t>(3 * i), 3));
  for (auto level : {ApproximationLevel::sc, ApproximationLevel::be, ApproximationLevel::D}) {
    const ForceResult r = ForceField(c, level).evaluate(s);
    for (std::size_t k = 0; k < bare.size(); ++k) EXPECT_NEAR(r.nuclear[k], -bare[k], 1e-15);
  }
}

TEST(Forces, NeutralAtomDecouples) {
  EnsembleConfig c;
  c.n_molecules = 5;
  c.nuclear_masses = {100.0};
  c.nuclear_charges = {2.0};
  c.electron_charge = 2.0;
  c.nuclear_potential.kind = NuclearPotential::Kind::none;
  c.lambda = 0.3;
  c.omega_beta = 0.02;
  for (auto level : {ApproximationLevel::sc, ApproximationLevel::D}) {
    const ForceField f(c, level);
    for (std::uint64_t seed = 0; seed < 20; ++seed)
      for (double v : f.evaluate(random_state(c, seed)).nuclear) EXPECT_EQ(v, 0.0);
  }
  double be_max = 0.0;
  const ForceField be(c, ApproximationLevel::be);
  for (std::uint64_t seed = 0; seed < 20; ++seed)
    for (double v : be.evaluate(random_state(c, seed)).nuclear) be_max = std::max(be_max, std::abs(v));
  EXPECT_GT(be_max, 1e-3);
}

TEST(Forces, ParallelBitIdenticalToSerial) {
  const EnsembleConfig c = CO2Preset::standard().make_ensemble(300, 0.005, 0.0116);
  const ForceField f(c);
  const SystemState s = random_state(c, 12);
  ForceResult a, b;
  f.evaluate_serial(s, a);
  f.evaluate_parallel(s, b);
  EXPECT_EQ(a.nuclear, b.nuclear);
  EXPECT_EQ(a.photon, b.photon);
}

TEST(Forces, PotentialGradientConsistent) {
  const EnsembleConfig c = CO2Preset::standard().make_ensemble(3, 0.1, 0.0116);
  const ForceField f(c);
  SystemState s = random_state(c, 4);
  const ForceResult r = f.evaluate(s);
  const double h = 1e-5;
  s.q_beta += h;
  const double up = f.potential_energy(s);
  s.q_beta -= 2 * h;
  const double dn = f.potential_energy(s);
  EXPECT_NEAR(r.photon, -(up - dn) / (2 * h), 1e-8);
}
