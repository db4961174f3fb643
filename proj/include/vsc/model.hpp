#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vsc {

/// Electronic closure used when coupling the ensemble to the cavity.
///   sc : self-consistent dressed electrons (full model)
///   be : bare electrons, cavity acts on the uncoupled electronic structure
///   D  : displacement-field coupling only, dipole self-energy dropped
enum class ApproximationLevel { sc, be, D };

std::string_view to_string(ApproximationLevel level);
ApproximationLevel parse_level(std::string_view text);

/// Intra-molecular nuclear potential W. The electron-nucleus springs are
/// compensated internally so that W alone governs the bare-molecule motion.
struct NuclearPotential {
  enum class Kind { none, chain };

  Kind kind = Kind::chain;
  double k_n = 0.0;  ///< nearest-neighbour spring constant for `chain`

  double energy(std::span<const double> molecule) const;
  /// Accumulates dW/dR_n into `grad`.
  void add_gradient(std::span<const double> molecule, std::span<double> grad) const;
  /// Dense Hessian of W for a molecule with `nuclei` nuclei, row-major.
  std::vector<double> hessian(int nuclei) const;
};

std::string_view to_string(NuclearPotential::Kind kind);
NuclearPotential::Kind parse_potential_kind(std::string_view text);

/// Parameters of N identical one-dimensional molecules coupled to one cavity
/// mode. Each molecule has one effective electron of charge -Z_e bound to its
/// nuclei by springs k_e.
struct EnsembleConfig {
  int n_molecules = 1;
  std::vector<double> nuclear_masses;
  std::vector<double> nuclear_charges;
  double electron_charge = 1.0;
  double k_e = 1.0;
  NuclearPotential nuclear_potential;
  double lambda = 0.0;
  double omega_beta = 1.0;
  ApproximationLevel level = ApproximationLevel::sc;

  int nuclei_per_molecule() const { return static_cast<int>(nuclear_masses.size()); }
  int nuclear_dofs() const { return n_molecules * nuclei_per_molecule(); }

  /// Z_n - Z_e / N_n, the screened nuclear charge entering the sc/D forces.
  double screened_charge(int n) const;
  double total_nuclear_charge() const;
  bool is_neutral(double tol = 1e-12) const;

  /// Bare single-molecule polarizability Z_e^2 / (N_n k_e).
  double single_polarizability() const;
  /// lambda^2 N alpha_i; gamma^2 = 1 / (1 + collective_strength).
  double collective_strength() const;

  /// Throws ModelError naming the first violated invariant.
  void validate() const;
};

/// Instantaneous nuclear and photonic configuration. Coordinates are stored
/// molecule-major: index i * N_n + n.
struct SystemState {
  int n_molecules = 0;
  int nuclei_per_molecule = 0;
  std::vector<double> positions;
  std::vector<double> momenta;
  double q_beta = 0.0;
  double p_beta = 0.0;
  /// Static external field acting on every electronic dipole.
  double global_field = 0.0;
  /// Optional per-molecule external field; empty means none.
  std::vector<double> local_fields;

  static SystemState zeros(const EnsembleConfig& config);

  double& position(int i, int n) { return positions[static_cast<std::size_t>(i * nuclei_per_molecule + n)]; }
  double position(int i, int n) const { return positions[static_cast<std::size_t>(i * nuclei_per_molecule + n)]; }
  std::span<const double> molecule(int i) const {
    return std::span<const double>(positions).subspan(static_cast<std::size_t>(i * nuclei_per_molecule),
                                                      static_cast<std::size_t>(nuclei_per_molecule));
  }

  /// Total external field felt by the electron of molecule i.
  double field_on(int i) const;
  bool has_external_field() const;

  void check_shape(const EnsembleConfig& config) const;
};

/// Closed-form ground state of the dressed electrons for one (R, q_beta).
struct DressedElectronSolution {
  ApproximationLevel level = ApproximationLevel::sc;
  std::vector<double> nu1;       ///< linear coefficient of each shifted oscillator
  double nu2 = 0.0;              ///< common oscillator frequency
  std::vector<double> eta;       ///< displacement nu1 / sqrt(2 nu2^3)
  std::vector<double> r_expect;  ///< <r_i>
  double x_expect = 0.0;         ///< <x> = -lambda Z_e sum_i <r_i>
  double e_perp = 0.0;           ///< transverse field driving the nuclei
};

/// gamma^2(N, lambda) = 1 / (1 + lambda^2 N alpha_i).
double gamma_squared(int n, double lambda, double alpha_i);

DressedElectronSolution solve_dressed_electrons(const EnsembleConfig& config, const SystemState& state,
                                                ApproximationLevel level);
inline DressedElectronSolution solve_dressed_electrons(const EnsembleConfig& config, const SystemState& state) {
  return solve_dressed_electrons(config, state, config.level);
}

/// Ground-state electronic energy E^e(R, q_beta). For sc the mean-field
/// double counting is removed; be and D have no two-electron term.
double electronic_energy(const EnsembleConfig& config, const SystemState& state, ApproximationLevel level);
inline double electronic_energy(const EnsembleConfig& config, const SystemState& state) {
  return electronic_energy(config, state, config.level);
}

/// lambda * sum_jm Z'_m R_jm, the part of the nuclear polarization that is not
/// screened by the electrons.
double screened_polarization(const EnsembleConfig& config, const SystemState& state);

/// Dipole of molecule i: sum_n Z_n R_in - Z_e <r_i>.
double molecular_dipole(const EnsembleConfig& config, const SystemState& state, const DressedElectronSolution& electrons,
                        int i);
/// Sum of all molecular dipoles, (X + <x>) / lambda for lambda > 0.
double collective_dipole(const EnsembleConfig& config, const SystemState& state, const DressedElectronSolution& electrons);

}  // namespace vsc
