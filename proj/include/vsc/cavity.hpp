#pragma once

#include <optional>

#include "vsc/model.hpp"

namespace vsc {

struct RedshiftReport {
  ApproximationLevel level = ApproximationLevel::sc;
  double omega_in = 0.0;
  double omega_out = 0.0;
  double gamma2 = 1.0;
  std::optional<double> n_r;
};

/// lambda = sqrt(4 pi / V_mode).
double coupling_from_mode_volume(double volume);
/// Inverse of coupling_from_mode_volume; infinite for lambda = 0.
double mode_volume_from_coupling(double lambda);

/// Fabry-Perot resonance wavelength 2 n_r L / m.
double fabry_perot_wavelength(double length, double n_r, int mode_order);

/// Photon frequency seen by the nuclei at each level.
///   sc: gamma omega, be: omega, D: sqrt(2 - 1/gamma^2) omega.
/// Throws UnstableRegimeError for D when gamma^2 <= 1/2.
RedshiftReport renormalized_frequency(ApproximationLevel level, const EnsembleConfig& config);

/// Dilute-medium refractive index sqrt(4 pi N alpha_i / V + 1) and the
/// resulting omega / n_r. The physical volume defaults to the mode volume.
RedshiftReport maxwell_redshift(const EnsembleConfig& config, std::optional<double> physical_volume = std::nullopt);

}  // namespace vsc
