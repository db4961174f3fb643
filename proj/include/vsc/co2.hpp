#pragma once

#include <array>
#include <span>
#include <vector>

#include "vsc/model.hpp"

namespace vsc {

/// Linear O-C-O molecule with nearest-neighbour springs.
struct CO2Preset {
  double mass_o = 29166.0;
  double mass_c = 21874.0;
  double charge_o = 2.0;
  double charge_c = 1.0;
  double electron_charge = 5.0;
  double k_e = 1.0;
  double k_n = 0.0;

  /// Default masses and charges with k_n chosen so that sqrt(k_a) = 0.0116.
  static CO2Preset standard();
  static constexpr double kTargetSqrtKa = 0.0116;

  double total_mass() const { return 2.0 * mass_o + mass_c; }
  double k_s() const { return k_n / mass_o; }
  double k_a() const { return total_mass() * k_n / (mass_o * mass_c); }
  /// Weight with which the asymmetric stretch enters the screened polarization.
  double epsilon_a() const;
  bool is_neutral(double tol = 1e-12) const;

  /// N molecules with this preset's masses/charges/springs.
  EnsembleConfig make_ensemble(int n_molecules, double lambda, double omega_beta,
                               ApproximationLevel level = ApproximationLevel::sc) const;

  /// Recovers the preset from an ensemble; throws ModelError when the ensemble
  /// is not a symmetric three-nucleus chain or is not neutral.
  static CO2Preset from_ensemble(const EnsembleConfig& config);
};

struct NormalModes {
  std::vector<double> rho_t;
  std::vector<double> rho_s;
  std::vector<double> rho_a;
  double rho_a_collective = 0.0;
  double epsilon_a = 0.0;
};

NormalModes normal_mode_transform(const CO2Preset& preset, std::span<const double> positions);
/// Inverse transform; returns molecule-major Cartesian positions.
std::vector<double> inverse_normal_mode_transform(const CO2Preset& preset, const NormalModes& modes);

struct ModeDynamicsReport {
  double k_s = 0.0;
  double k_a = 0.0;
  double epsilon_a = 0.0;
  double gamma2 = 1.0;
  double k_tilde_a = 0.0;   ///< collective asymmetric force constant
  double omega_tilde = 0.0; ///< gamma omega_beta
  /// Collective (rho_a, q_beta) dynamical matrix D, acceleration = -D x.
  std::array<std::array<double, 2>, 2> matrix{};
  double lower_polariton = 0.0;
  double upper_polariton = 0.0;
  double dark_frequency = 0.0;      ///< sqrt(k_a), (N-1)-fold
  double symmetric_frequency = 0.0; ///< sqrt(k_s), N-fold
  double rabi_splitting = 0.0;      ///< upper - lower, a.u.
};

/// Closed-form mode analysis of the sc CO2 ensemble. Throws ModelError when
/// the ensemble is not a neutral CO2 chain or the level is not sc.
ModeDynamicsReport analytic_mode_dynamics(const EnsembleConfig& config);

/// All 3N + 1 nuclear+photon frequencies, ascending, translations as 0.
std::vector<double> analytic_frequency_spectrum(const EnsembleConfig& config);

}  // namespace vsc
