#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace vsc {

enum class Taper { hann, bartlett, none };
enum class Observable { collective_dipole, local_dipole, bond, photon };

std::string_view to_string(Taper taper);
Taper parse_taper(std::string_view text);
std::string_view to_string(Observable observable);
Observable parse_observable(std::string_view text);

struct SpectrumOptions {
  Taper taper = Taper::hann;
  int padding = 4;   ///< zero-padding factor of the transform
  int max_lag = 0;   ///< 0 means n / 32
  std::size_t min_length = 1024;
};

/// One-sided power spectrum on a uniform grid. Intensities are normalized so
/// that the trapezoid integral over [0, pi/dt] equals the zero-lag covariance.
struct Spectrum {
  std::vector<double> frequencies;  ///< a.u. (angular)
  std::vector<double> intensities;
  Observable source = Observable::collective_dipole;
  double resolution = 0.0;  ///< grid spacing, a.u.
  double sample_dt = 0.0;

  std::vector<double> frequencies_cm1() const;
  double integral() const;
};

/// Biased autocorrelation (1/n) sum x_t x_{t+k} for k = 0..max_lag of a
/// series that has already been centered.
std::vector<double> autocorrelation_serial(std::span<const double> centered, int max_lag);
std::vector<double> autocorrelation_parallel(std::span<const double> centered, int max_lag);
/// Same quantity through a zero-padded FFT.
std::vector<double> autocorrelation_fft(std::span<const double> centered, int max_lag);

/// Subtracts the mean; throws SpectrumError on non-finite values.
std::vector<double> centered(std::span<const double> series);
int default_max_lag(std::size_t n, const SpectrumOptions& options);

/// Lag-windowed transform of an autocorrelation function.
Spectrum spectrum_from_autocorrelation(std::span<const double> acf, double sample_dt, const SpectrumOptions& options,
                                       Observable source = Observable::collective_dipole);

Spectrum autocorrelation_spectrum(std::span<const double> series, double sample_dt,
                                  const SpectrumOptions& options = {},
                                  Observable source = Observable::collective_dipole);

/// Averages the autocorrelations of several equally long series, in order.
Spectrum averaged_spectrum(const std::vector<std::vector<double>>& series, double sample_dt,
                           const SpectrumOptions& options = {},
                           Observable source = Observable::collective_dipole);

struct Peak {
  double frequency = 0.0;  ///< a.u.
  double intensity = 0.0;
  double fwhm = 0.0;       ///< a.u., 0 when a half-maximum crossing is missing
};

/// Local maxima above rel_threshold * max, refined by a parabola through the
/// three top bins. Sorted by frequency.
std::vector<Peak> find_peaks(const Spectrum& spectrum, double rel_threshold);

struct RabiSplitting {
  double lower = 0.0;  ///< a.u.
  double upper = 0.0;  ///< a.u.
  double splitting = 0.0;
  double splitting_cm1 = 0.0;
};

/// Nearest peaks strictly below and above omega_ref. Throws SpectrumError
/// when either side is empty.
RabiSplitting rabi_splitting(const std::vector<Peak>& peaks, double omega_ref);

/// Largest intensity on the grid inside [lo, hi].
double band_maximum(const Spectrum& spectrum, double lo, double hi);

/// Nearest peak to omega within tolerance, if any.
std::optional<Peak> nearest_peak(const std::vector<Peak>& peaks, double omega, double tolerance);

/// Velocity Verlet reproduces a harmonic frequency omega as
/// (2/dt) asin(omega dt / 2); physical_frequency inverts the map.
double integrator_frequency(double omega, double dt);
double physical_frequency(double omega_md, double dt);
std::vector<Peak> to_physical(std::vector<Peak> peaks, double dt);

}  // namespace vsc
