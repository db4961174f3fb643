#pragma once

#include <vector>

#include "vsc/model.hpp"

namespace vsc {

struct ForceResult {
  std::vector<double> nuclear;  ///< molecule-major, same layout as positions
  double photon = 0.0;          ///< generalized force on q_beta (unit mass)
  double e_perp = 0.0;          ///< field that drove the nuclei
  std::vector<double> scratch;  ///< per-molecule partial sums, reused between calls
};

/// Hellmann-Feynman forces on the nuclei and the photon coordinate at a fixed
/// approximation level. Level-dependent constants are precomputed once.
class ForceField {
 public:
  ForceField(EnsembleConfig config, ApproximationLevel level);
  explicit ForceField(EnsembleConfig config) : ForceField(config, config.level) {}

  const EnsembleConfig& config() const { return config_; }
  ApproximationLevel level() const { return level_; }

  /// Reference implementation: one pass, fixed summation order.
  void evaluate_serial(const SystemState& state, ForceResult& out) const;
  /// OpenMP over molecules. Partial sums are reduced in molecule order, so the
  /// result is bit-identical to evaluate_serial for any thread count.
  void evaluate_parallel(const SystemState& state, ForceResult& out) const;
  void evaluate(const SystemState& state, ForceResult& out) const { evaluate_parallel(state, out); }
  ForceResult evaluate(const SystemState& state) const;

  /// Potential whose negative gradient gives the forces (sc and D only; the
  /// be equations are not conservative and this throws ModelError).
  double potential_energy(const SystemState& state) const;
  /// Sum of p^2 / 2M over nuclei plus p_beta^2 / 2.
  double kinetic_energy(const SystemState& state) const;

  /// Molecule count above which evaluate_parallel spawns threads.
  static constexpr int kParallelThreshold = 64;

 private:
  struct Sums {
    double screened = 0.0;  // X' = lambda sum Z'_n R_in
    double field = 0.0;     // sum_i E_i
  };
  void molecule_partials(const SystemState& state, int i, double* screened, double* field) const;
  double driving_field(const SystemState& state, const Sums& sums) const;
  void molecule_forces(const SystemState& state, int i, double e_drive, double* out) const;
  double photon_force(const SystemState& state, const Sums& sums) const;

  EnsembleConfig config_;
  ApproximationLevel level_;
  int nn_ = 0;
  std::vector<double> effective_charge_;  // Z_n for be, Z'_n otherwise
  std::vector<double> screened_charge_;   // Z'_n
  double alpha_i_ = 0.0;
  double gamma2_ = 1.0;
  double photon_stiffness_ = 1.0;  // multiplies omega^2 q
  double photon_coupling_ = 1.0;   // multiplies omega (X' - lambda alpha_i sum E)
};

}  // namespace vsc
