#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vsc/integrator.hpp"
#include "vsc/model.hpp"
#include "vsc/spectra.hpp"

namespace vsc {

struct MdSpectraOptions {
  ThermostatParams thermostat;
  PropagationOptions propagation;
  double init_radius = 0.1;
  SpectrumOptions spectrum;
  int n_seeds = 4;
  double peak_threshold = 0.05;
};

struct ObservableSpectrum {
  Spectrum spectrum;               ///< on the integrator's frequency axis
  std::vector<Peak> md_peaks;
  std::vector<Peak> peaks;         ///< corrected to physical frequencies
};

/// Spectra of all four observables from n_seeds independent trajectories.
/// Seed k uses thermostat seed + k for both noise and initial positions.
/// Local dipole and bond spectra average over every molecule.
struct MdSpectra {
  std::array<ObservableSpectrum, 4> by_observable;
  double dt = 0.0;
  int n_seeds = 0;
  double mean_kinetic_per_dof = 0.0;  ///< over the final 80% of all runs

  const ObservableSpectrum& operator[](Observable o) const { return by_observable[static_cast<std::size_t>(o)]; }
  ObservableSpectrum& operator[](Observable o) { return by_observable[static_cast<std::size_t>(o)]; }
};

MdSpectra run_md_spectra(const EnsembleConfig& config, const MdSpectraOptions& options);

/// Spectra of the single-molecule columns of one stored trajectory.
MdSpectra spectra_from_trajectory(const Trajectory& trajectory, const SpectrumOptions& spectrum,
                                  double peak_threshold);

/// Cavity frequency that puts gamma omega on the collectively stiffened
/// asymmetric stretch, sqrt(k~_a) / gamma.
double dressed_resonance(const EnsembleConfig& config);

struct PowerLawFit {
  double exponent = 0.0;
  double prefactor = 0.0;
};
/// Least squares on log y = log c + p log x.
PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

struct IntensityRow {
  int n = 0;
  double lambda = 0.0;
  double analytic_lower = 0.0, analytic_upper = 0.0;
  double measured_lower = 0.0, measured_upper = 0.0;
  double splitting_cm1 = 0.0;
  double analytic_splitting_cm1 = 0.0;
  double local_lower = 0.0, local_upper = 0.0;
  double local_intensity = 0.0;  ///< mean of the two local polariton band maxima
};

/// At fixed lambda_col, runs N in `n_values` with lambda = lambda_col / sqrt(N)
/// and measures the local-dipole intensity at the two polaritons.
std::vector<IntensityRow> local_polariton_intensity_scan(const EnsembleConfig& base, const std::vector<int>& n_values,
                                                         double lambda_col, const MdSpectraOptions& options);

struct LevelComparison {
  ApproximationLevel level = ApproximationLevel::sc;
  std::string status = "ok";
  double analytic_photon = 0.0;           ///< a.u.; NaN when unstable
  std::optional<double> measured_photon;  ///< strongest photon-spectrum peak
  double max_cavity_force = 0.0;          ///< max |F - F(lambda = 0)| on nuclei over probe states
};

/// Same configuration and seeds at sc, be and D.
std::vector<LevelComparison> approximation_compare(const EnsembleConfig& config, const MdSpectraOptions& options,
                                                   int probe_states = 64, bool run_dynamics = true);

}  // namespace vsc
