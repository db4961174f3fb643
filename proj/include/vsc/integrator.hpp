#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "vsc/forces.hpp"
#include "vsc/model.hpp"

namespace vsc {

struct ThermostatParams {
  double temperature = 1e-3;  ///< k_B T [hartree]
  double friction = 0.5e-5;   ///< gamma_T for the nuclei [1/a.u. time]
  /// Friction on the photon coordinate; unset means the nuclear value.
  std::optional<double> photon_friction;
  std::uint64_t seed = 1;
  double dt = 20.0;

  double photon_gamma() const { return photon_friction.value_or(friction); }
  void validate() const;
};

/// Splits a Langevin step as O(dt/2) B(dt/2) A(dt) B(dt/2) O(dt/2): exact
/// Ornstein-Uhlenbeck half steps around velocity Verlet. With zero friction
/// no random numbers are drawn and the step is plain velocity Verlet.
class LangevinIntegrator {
 public:
  LangevinIntegrator(const EnsembleConfig& config, ApproximationLevel level, const ThermostatParams& thermostat,
                     bool parallel_forces = true);
  LangevinIntegrator(const EnsembleConfig& config, const ThermostatParams& thermostat)
      : LangevinIntegrator(config, config.level, thermostat) {}

  void step(SystemState& state);

  const ForceField& force_field() const { return field_; }
  const ForceResult& last_forces() const { return forces_; }
  /// Forces at the current state; recomputed if the state changed externally.
  void invalidate() { forces_valid_ = false; }

 private:
  void ornstein_uhlenbeck(SystemState& state);
  void compute_forces(const SystemState& state);

  ForceField field_;
  ThermostatParams thermostat_;
  bool parallel_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  ForceResult forces_;
  bool forces_valid_ = false;
  std::vector<double> c1_, noise_;  // per-nucleus OU coefficients
  double c1_photon_ = 1.0, noise_photon_ = 0.0;
};

/// One step from scratch; convenient but rebuilds the force field each call.
SystemState langevin_step(const EnsembleConfig& config, SystemState state, const ThermostatParams& thermostat,
                          std::mt19937_64& rng);

struct PropagationOptions {
  long n_steps = 200000;
  int sample_stride = 5;
  double blowup_bound = 1e6;
  /// Keep every molecule's local dipole and bond length per sample.
  bool record_per_molecule = true;
  /// Record potential energy per sample (sc and D only).
  bool record_energy = true;
  bool parallel_forces = true;
};

struct Trajectory {
  double dt = 0.0;
  int sample_stride = 1;
  int n_molecules = 0;
  std::vector<long> steps;
  std::vector<double> q_beta;
  std::vector<double> collective_dipole;
  std::vector<double> local_dipole_first;
  std::vector<double> bond_length_first;
  std::vector<double> kinetic_energy;
  std::vector<double> potential_energy;  ///< empty for be
  /// samples x molecules, filled when record_per_molecule is set
  std::vector<double> local_dipoles;
  std::vector<double> bond_lengths;
  /// E_perp evaluated from the electronic solution per sample
  std::vector<double> e_perp;
  SystemState final_state;

  std::size_t size() const { return steps.size(); }
  double sample_dt() const { return dt * sample_stride; }
  /// Column of one molecule from the per-molecule arrays.
  std::vector<double> local_dipole(int molecule) const;
  std::vector<double> bond_length(int molecule) const;
};

/// Positions uniform in [-radius, radius], zero momenta, photon at rest.
SystemState initial_state(const EnsembleConfig& config, double radius, std::uint64_t seed);

/// Displacement R_2 - R_1 of molecule i; the first coordinate when N_n = 1.
double bond_length(const SystemState& state, int i);

/// Runs n_steps, sampling every sample_stride steps (the initial state is
/// sample 0). Throws BlowUpError when any coordinate leaves the bound.
Trajectory propagate(const EnsembleConfig& config, const ThermostatParams& thermostat,
                     const PropagationOptions& options, SystemState initial);

}  // namespace vsc
