#include "vsc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>

#include "vsc/cavity.hpp"
#include "vsc/co2.hpp"
#include "vsc/errors.hpp"
#include "vsc/forces.hpp"
#include "vsc/units.hpp"

namespace vsc {

namespace {

constexpr std::array<Observable, 4> kObservables{Observable::collective_dipole, Observable::local_dipole,
                                                 Observable::bond, Observable::photon};

using AcfSet = std::array<std::vector<double>, 4>;

std::vector<double> column_acf(const std::vector<double>& series, int lag) {
  return autocorrelation_fft(centered(series), lag);
}

// Mean autocorrelation over every molecule's column of a per-molecule array.
std::vector<double> molecule_mean_acf(const std::vector<double>& flat, std::size_t samples, int n_mol, int lag) {
  std::vector<double> mean(static_cast<std::size_t>(lag) + 1, 0.0);
  std::vector<double> col(samples);
  for (int i = 0; i < n_mol; ++i) {
    for (std::size_t s = 0; s < samples; ++s) col[s] = flat[s * static_cast<std::size_t>(n_mol) + static_cast<std::size_t>(i)];
    const std::vector<double> acf = column_acf(col, lag);
    for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += acf[k] / n_mol;
  }
  return mean;
}

ObservableSpectrum finish(const std::vector<double>& acf, Observable o, double sample_dt, double dt,
                          const SpectrumOptions& opt, double threshold) {
  ObservableSpectrum out;
  out.spectrum = spectrum_from_autocorrelation(acf, sample_dt, opt, o);
  out.md_peaks = find_peaks(out.spectrum, threshold);
  out.peaks = to_physical(out.md_peaks, dt);
  return out;
}

}  // namespace

MdSpectra run_md_spectra(const EnsembleConfig& config, const MdSpectraOptions& options) {
  if (options.n_seeds < 1) throw ModelError("n_seeds must be >= 1");
  const long samples = options.propagation.n_steps / options.propagation.sample_stride + 1;
  if (static_cast<std::size_t>(samples) < options.spectrum.min_length)
    throw SpectrumError("run too short: " + std::to_string(samples) + " samples");
  const int lag = default_max_lag(static_cast<std::size_t>(samples), options.spectrum);

  PropagationOptions prop = options.propagation;
  prop.record_per_molecule = true;
  prop.record_energy = false;

  std::vector<AcfSet> acfs(static_cast<std::size_t>(options.n_seeds));
  std::vector<double> kinetic(static_cast<std::size_t>(options.n_seeds), 0.0);
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(options.n_seeds));
  const double dofs = config.nuclear_dofs() + 1.0;

  // One trajectory per thread; the force kernel stays serial inside.
#pragma omp parallel for schedule(dynamic) if (options.n_seeds > 1)
  for (int k = 0; k < options.n_seeds; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    try {
      ThermostatParams th = options.thermostat;
      th.seed = options.thermostat.seed + static_cast<std::uint64_t>(k);
      PropagationOptions p = prop;
      p.parallel_forces = false;
      const SystemState init = initial_state(config, options.init_radius, th.seed ^ 0x5DEECE66DULL);
      const Trajectory t = propagate(config, th, p, init);
      const std::size_t n = t.size();
      acfs[uk][0] = column_acf(t.collective_dipole, lag);
      acfs[uk][1] = molecule_mean_acf(t.local_dipoles, n, config.n_molecules, lag);
      acfs[uk][2] = molecule_mean_acf(t.bond_lengths, n, config.n_molecules, lag);
      acfs[uk][3] = column_acf(t.q_beta, lag);
      const std::size_t start = n / 5;
      double ke = 0.0;
      for (std::size_t s = start; s < n; ++s) ke += t.kinetic_energy[s];
      kinetic[uk] = ke / static_cast<double>(n - start) / dofs;
    } catch (...) {
      errors[uk] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  MdSpectra out;
  out.dt = options.thermostat.dt;
  out.n_seeds = options.n_seeds;
  const double sample_dt = options.thermostat.dt * options.propagation.sample_stride;
  for (std::size_t o = 0; o < kObservables.size(); ++o) {
    std::vector<double> mean(static_cast<std::size_t>(lag) + 1, 0.0);
    for (const AcfSet& a : acfs)
      for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += a[o][k];
    for (double& v : mean) v /= options.n_seeds;
    out.by_observable[o] = finish(mean, kObservables[o], sample_dt, out.dt, options.spectrum, options.peak_threshold);
  }
  for (double k : kinetic) out.mean_kinetic_per_dof += k / options.n_seeds;
  return out;
}

MdSpectra spectra_from_trajectory(const Trajectory& t, const SpectrumOptions& spectrum, double peak_threshold) {
  if (t.size() < spectrum.min_length) throw SpectrumError("trajectory too short for a spectrum");
  const int lag = default_max_lag(t.size(), spectrum);
  MdSpectra out;
  out.dt = t.dt;
  out.n_seeds = 1;
  const std::array<const std::vector<double>*, 4> cols{&t.collective_dipole, &t.local_dipole_first,
                                                      &t.bond_length_first, &t.q_beta};
  for (std::size_t o = 0; o < kObservables.size(); ++o)
    out.by_observable[o] =
        finish(column_acf(*cols[o], lag), kObservables[o], t.sample_dt(), t.dt, spectrum, peak_threshold);
  return out;
}

double dressed_resonance(const EnsembleConfig& config) {
  EnsembleConfig c = config;
  c.level = ApproximationLevel::sc;
  const ModeDynamicsReport r = analytic_mode_dynamics(c);
  return std::sqrt(r.k_tilde_a / r.gamma2);
}

PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ModelError("power-law fit needs two or more matching points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] > 0.0 && y[k] > 0.0)) throw ModelError("power-law fit needs positive data");
    const double lx = std::log(x[k]), ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  PowerLawFit f;
  f.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  f.prefactor = std::exp((sy - f.exponent * sx) / n);
  return f;
}

std::vector<IntensityRow> local_polariton_intensity_scan(const EnsembleConfig& base, const std::vector<int>& n_values,
                                                         double lambda_col, const MdSpectraOptions& options) {
  std::vector<IntensityRow> rows;
  for (int n : n_values) {
    EnsembleConfig c = base;
    c.n_molecules = n;
    c.lambda = lambda_col / std::sqrt(static_cast<double>(n));
    const ModeDynamicsReport modes = analytic_mode_dynamics(c);
    const MdSpectra md = run_md_spectra(c, options);

    IntensityRow row;
    row.n = n;
    row.lambda = c.lambda;
    row.analytic_lower = modes.lower_polariton;
    row.analytic_upper = modes.upper_polariton;
    row.analytic_splitting_cm1 = units::hartree_to_wavenumber(modes.rabi_splitting);
    const double mid = 0.5 * (modes.lower_polariton + modes.upper_polariton);
    const RabiSplitting split = rabi_splitting(md[Observable::collective_dipole].peaks, mid);
    row.measured_lower = split.lower;
    row.measured_upper = split.upper;
    row.splitting_cm1 = split.splitting_cm1;

    const Spectrum& local = md[Observable::local_dipole].spectrum;
    const double band = 2.0 * local.resolution;
    const double lo = integrator_frequency(modes.lower_polariton, options.thermostat.dt);
    const double hi = integrator_frequency(modes.upper_polariton, options.thermostat.dt);
    row.local_lower = band_maximum(local, lo - band, lo + band);
    row.local_upper = band_maximum(local, hi - band, hi + band);
    row.local_intensity = 0.5 * (row.local_lower + row.local_upper);
    rows.push_back(row);
  }
  return rows;
}

std::vector<LevelComparison> approximation_compare(const EnsembleConfig& config, const MdSpectraOptions& options,
                                                   int probe_states, bool run_dynamics) {
  std::vector<LevelComparison> rows;
  EnsembleConfig bare = config;
  bare.lambda = 0.0;
  const ForceField bare_field(bare, ApproximationLevel::sc);

  for (ApproximationLevel level : {ApproximationLevel::sc, ApproximationLevel::be, ApproximationLevel::D}) {
    LevelComparison row;
    row.level = level;
    EnsembleConfig c = config;
    c.level = level;
    try {
      row.analytic_photon = renormalized_frequency(level, c).omega_out;
    } catch (const UnstableRegimeError&) {
      row.analytic_photon = NAN;
      row.status = "unstable";
    }

    // Probe the force difference on arbitrary states.
    const ForceField field(c, level);
    std::mt19937_64 rng(options.thermostat.seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ForceResult with, without;
    for (int p = 0; p < probe_states; ++p) {
      SystemState s = SystemState::zeros(c);
      for (double& r : s.positions) r = u(rng);
      s.q_beta = u(rng);
      field.evaluate_serial(s, with);
      bare_field.evaluate_serial(s, without);
      for (std::size_t k = 0; k < with.nuclear.size(); ++k)
        row.max_cavity_force = std::max(row.max_cavity_force, std::abs(with.nuclear[k] - without.nuclear[k]));
    }

    if (run_dynamics && row.status == "ok") {
      try {
        const MdSpectra md = run_md_spectra(c, options);
        const auto& peaks = md[Observable::photon].peaks;
        if (!peaks.empty())
          row.measured_photon =
              std::max_element(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) {
                return a.intensity < b.intensity;
              })->frequency;
      } catch (const BlowUpError&) {
        row.status = "blowup";
      }
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace vsc
