#include "vsc/cavity.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "vsc/errors.hpp"

namespace vsc {

double coupling_from_mode_volume(double volume) {
  if (!(volume > 0.0)) throw ModelError("mode volume must be positive");
  if (std::isinf(volume)) return 0.0;
  return std::sqrt(4.0 * std::numbers::pi / volume);
}

double mode_volume_from_coupling(double lambda) {
  if (!(lambda >= 0.0)) throw ModelError("lambda must be non-negative");
  if (lambda == 0.0) return std::numeric_limits<double>::infinity();
  return 4.0 * std::numbers::pi / (lambda * lambda);
}

double fabry_perot_wavelength(double length, double n_r, int mode_order) {
  if (!(length > 0.0)) throw ModelError("cavity length must be positive");
  if (!(n_r >= 1.0)) throw ModelError("refractive index must be >= 1");
  if (mode_order < 1) throw ModelError("mode order must be >= 1");
  return 2.0 * n_r * length / mode_order;
}

RedshiftReport renormalized_frequency(ApproximationLevel level, const EnsembleConfig& config) {
  config.validate();
  RedshiftReport r;
  r.level = level;
  r.omega_in = config.omega_beta;
  r.gamma2 = gamma_squared(config.n_molecules, config.lambda, config.single_polarizability());
  switch (level) {
    case ApproximationLevel::sc:
      r.omega_out = std::sqrt(r.gamma2) * config.omega_beta;
      r.n_r = 1.0 / std::sqrt(r.gamma2);
      break;
    case ApproximationLevel::be:
      r.omega_out = config.omega_beta;
      break;
    case ApproximationLevel::D: {
      // 2 - 1/gamma^2 written as 1 - lambda^2 N alpha_i to avoid cancellation
      const double factor = 1.0 - config.collective_strength();
      if (!(factor > 0.0))
        throw UnstableRegimeError("D level has no stable photon mode for gamma^2 <= 1/2 (gamma^2 = " +
                                  std::to_string(r.gamma2) + ")");
      r.omega_out = std::sqrt(factor) * config.omega_beta;
      break;
    }
  }
  return r;
}

RedshiftReport maxwell_redshift(const EnsembleConfig& config, std::optional<double> physical_volume) {
  config.validate();
  RedshiftReport r;
  r.level = ApproximationLevel::sc;
  r.omega_in = config.omega_beta;
  r.gamma2 = gamma_squared(config.n_molecules, config.lambda, config.single_polarizability());
  const double n_alpha = config.n_molecules * config.single_polarizability();
  double susceptibility = 0.0;
  if (physical_volume) {
    if (!(*physical_volume > 0.0)) throw ModelError("physical volume must be positive");
    susceptibility = 4.0 * std::numbers::pi * n_alpha / *physical_volume;
  } else {
    // V = 4 pi / lambda^2, so 4 pi N alpha_i / V = lambda^2 N alpha_i.
    susceptibility = config.lambda * config.lambda * n_alpha;
  }
  const double n_r = std::sqrt(susceptibility + 1.0);
  r.n_r = n_r;
  r.omega_out = config.omega_beta / n_r;
  return r;
}

}  // namespace vsc
