#include "vsc/spectra.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <string>

#include "vsc/errors.hpp"
#include "vsc/units.hpp"

namespace vsc {

std::string_view to_string(Taper taper) {
  switch (taper) {
    case Taper::hann:
      return "hann";
    case Taper::bartlett:
      return "bartlett";
    case Taper::none:
      return "none";
  }
  return "?";
}

Taper parse_taper(std::string_view text) {
  if (text == "hann") return Taper::hann;
  if (text == "bartlett") return Taper::bartlett;
  if (text == "none") return Taper::none;
  throw SpectrumError("unknown taper '" + std::string(text) + "' (expected hann, bartlett or none)");
}

std::string_view to_string(Observable observable) {
  switch (observable) {
    case Observable::collective_dipole:
      return "collective_dipole";
    case Observable::local_dipole:
      return "local_dipole";
    case Observable::bond:
      return "bond";
    case Observable::photon:
      return "photon";
  }
  return "?";
}

Observable parse_observable(std::string_view text) {
  if (text == "collective_dipole") return Observable::collective_dipole;
  if (text == "local_dipole") return Observable::local_dipole;
  if (text == "bond") return Observable::bond;
  if (text == "photon") return Observable::photon;
  throw SpectrumError("unknown observable '" + std::string(text) + "'");
}

std::vector<double> Spectrum::frequencies_cm1() const {
  std::vector<double> out(frequencies.size());
  std::transform(frequencies.begin(), frequencies.end(), out.begin(), units::hartree_to_wavenumber);
  return out;
}

double Spectrum::integral() const {
  double s = 0.0;
  for (std::size_t k = 1; k < intensities.size(); ++k) s += 0.5 * (intensities[k - 1] + intensities[k]);
  return s * resolution;
}

namespace {

// The FFTW planner is not thread safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void check_lag(std::size_t n, int max_lag) {
  if (max_lag < 0 || static_cast<std::size_t>(max_lag) >= n)
    throw SpectrumError("max_lag must lie in [0, series length)");
}

double taper_weight(Taper taper, int k, int max_lag) {
  if (max_lag == 0) return 1.0;
  const double x = static_cast<double>(k) / max_lag;
  switch (taper) {
    case Taper::hann:
      return 0.5 * (1.0 + std::cos(std::numbers::pi * x));
    case Taper::bartlett:
      return 1.0 - x;
    case Taper::none:
      return 1.0;
  }
  return 1.0;
}

}  // namespace

std::vector<double> centered(std::span<const double> series) {
  double mean = 0.0;
  for (double v : series) {
    if (!std::isfinite(v)) throw SpectrumError("series contains non-finite values");
    mean += v;
  }
  mean /= static_cast<double>(series.size());
  std::vector<double> out(series.begin(), series.end());
  for (double& v : out) v -= mean;
  return out;
}

int default_max_lag(std::size_t n, const SpectrumOptions& options) {
  if (options.max_lag > 0) return options.max_lag;
  return std::max(1, static_cast<int>(n / 32));
}

std::vector<double> autocorrelation_serial(std::span<const double> x, int max_lag) {
  const std::size_t n = x.size();
  check_lag(n, max_lag);
  std::vector<double> c(static_cast<std::size_t>(max_lag) + 1);
  for (std::size_t k = 0; k < c.size(); ++k) {
    double s = 0.0;
    for (std::size_t t = 0; t + k < n; ++t) s += x[t] * x[t + k];
    c[k] = s / static_cast<double>(n);
  }
  return c;
}

std::vector<double> autocorrelation_parallel(std::span<const double> x, int max_lag) {
  const std::size_t n = x.size();
  check_lag(n, max_lag);
  std::vector<double> c(static_cast<std::size_t>(max_lag) + 1);
  const double* data = x.data();
#pragma omp parallel for schedule(dynamic, 16)
  for (int k = 0; k <= max_lag; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    double s = 0.0;
    for (std::size_t t = 0; t + uk < n; ++t) s += data[t] * data[t + uk];
    c[uk] = s / static_cast<double>(n);
  }
  return c;
}

std::vector<double> autocorrelation_fft(std::span<const double> x, int max_lag) {
  const std::size_t n = x.size();
  check_lag(n, max_lag);
  std::size_t m = 1;
  while (m < 2 * n) m <<= 1;
  const std::size_t half = m / 2 + 1;

  double* buf = fftw_alloc_real(m);
  fftw_complex* freq = fftw_alloc_complex(half);
  fftw_plan fwd, bwd;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fwd = fftw_plan_dft_r2c_1d(static_cast<int>(m), buf, freq, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_c2r_1d(static_cast<int>(m), freq, buf, FFTW_ESTIMATE);
  }
  std::fill(buf, buf + m, 0.0);
  std::copy(x.begin(), x.end(), buf);
  fftw_execute(fwd);
  for (std::size_t k = 0; k < half; ++k) {
    freq[k][0] = freq[k][0] * freq[k][0] + freq[k][1] * freq[k][1];
    freq[k][1] = 0.0;
  }
  fftw_execute(bwd);
  std::vector<double> c(static_cast<std::size_t>(max_lag) + 1);
  const double scale = 1.0 / (static_cast<double>(m) * static_cast<double>(n));
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = buf[k] * scale;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
  }
  fftw_free(buf);
  fftw_free(freq);
  return c;
}

Spectrum spectrum_from_autocorrelation(std::span<const double> acf, double sample_dt, const SpectrumOptions& options,
                                       Observable source) {
  if (acf.empty()) throw SpectrumError("empty autocorrelation");
  if (!(sample_dt > 0.0)) throw SpectrumError("sample_dt must be positive");
  if (options.padding < 1) throw SpectrumError("padding must be >= 1");
  const int lag = static_cast<int>(acf.size()) - 1;
  const std::size_t n_fft = static_cast<std::size_t>(options.padding) * 2 * static_cast<std::size_t>(std::max(lag, 1));
  const std::size_t half = n_fft / 2 + 1;

  // Even sequence s_k = s_{n-k} = w_k c_k, so the transform is real.
  double* seq = fftw_alloc_real(n_fft);
  fftw_complex* out = fftw_alloc_complex(half);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n_fft), seq, out, FFTW_ESTIMATE);
  }
  std::fill(seq, seq + n_fft, 0.0);
  for (int k = 0; k <= lag; ++k) {
    const double v = taper_weight(options.taper, k, lag) * acf[static_cast<std::size_t>(k)];
    const auto uk = static_cast<std::size_t>(k);
    seq[uk] = v;
    if (k > 0 && n_fft - uk != uk) seq[n_fft - uk] = v;
  }
  fftw_execute(plan);

  Spectrum s;
  s.source = source;
  s.sample_dt = sample_dt;
  s.resolution = 2.0 * std::numbers::pi / (static_cast<double>(n_fft) * sample_dt);
  s.frequencies.resize(half);
  s.intensities.resize(half);
  const double norm = sample_dt / std::numbers::pi;
  for (std::size_t k = 0; k < half; ++k) {
    s.frequencies[k] = static_cast<double>(k) * s.resolution;
    // Tapers with negative spectral sidelobes can dip below zero.
    s.intensities[k] = std::max(0.0, norm * out[k][0]);
  }
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(seq);
  fftw_free(out);
  return s;
}

Spectrum autocorrelation_spectrum(std::span<const double> series, double sample_dt, const SpectrumOptions& options,
                                  Observable source) {
  if (series.size() < options.min_length)
    throw SpectrumError("series too short for a spectrum: " + std::to_string(series.size()) + " < " +
                        std::to_string(options.min_length));
  const std::vector<double> x = centered(series);
  const std::vector<double> acf = autocorrelation_fft(x, default_max_lag(x.size(), options));
  return spectrum_from_autocorrelation(acf, sample_dt, options, source);
}

Spectrum averaged_spectrum(const std::vector<std::vector<double>>& series, double sample_dt,
                           const SpectrumOptions& options, Observable source) {
  if (series.empty()) throw SpectrumError("no series to average");
  const std::size_t n = series.front().size();
  if (n < options.min_length)
    throw SpectrumError("series too short for a spectrum: " + std::to_string(n) + " < " +
                        std::to_string(options.min_length));
  const int lag = default_max_lag(n, options);
  std::vector<double> mean(static_cast<std::size_t>(lag) + 1, 0.0);
  for (const auto& s : series) {
    if (s.size() != n) throw SpectrumError("series to average differ in length");
    const std::vector<double> acf = autocorrelation_fft(centered(s), lag);
    for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += acf[k];
  }
  for (double& v : mean) v /= static_cast<double>(series.size());
  return spectrum_from_autocorrelation(mean, sample_dt, options, source);
}

std::vector<Peak> find_peaks(const Spectrum& spectrum, double rel_threshold) {
  if (!(rel_threshold > 0.0 && rel_threshold < 1.0)) throw SpectrumError("rel_threshold must lie in (0, 1)");
  const auto& y = spectrum.intensities;
  std::vector<Peak> peaks;
  if (y.size() < 3) return peaks;
  const double top = *std::max_element(y.begin(), y.end());
  if (!(top > 0.0)) return peaks;
  const double floor = rel_threshold * top;

  for (std::size_t k = 1; k + 1 < y.size(); ++k) {
    if (!(y[k] > y[k - 1] && y[k] >= y[k + 1] && y[k] >= floor)) continue;
    const double a = y[k - 1], b = y[k], c = y[k + 1];
    const double denom = a - 2.0 * b + c;
    const double delta = denom != 0.0 ? 0.5 * (a - c) / denom : 0.0;
    Peak p;
    p.frequency = spectrum.frequencies[k] + delta * spectrum.resolution;
    p.intensity = b - 0.25 * (a - c) * delta;

    const double halfmax = 0.5 * p.intensity;
    std::size_t l = k;
    while (l > 0 && y[l] > halfmax) --l;
    std::size_t r = k;
    while (r + 1 < y.size() && y[r] > halfmax) ++r;
    if (y[l] <= halfmax && y[r] <= halfmax) {
      auto cross = [&](std::size_t lo, std::size_t hi) {
        const double t = (halfmax - y[lo]) / (y[hi] - y[lo]);
        return spectrum.frequencies[lo] + t * (spectrum.frequencies[hi] - spectrum.frequencies[lo]);
      };
      p.fwhm = cross(r, r - 1) - cross(l, l + 1);
    }
    peaks.push_back(p);
  }
  return peaks;
}

RabiSplitting rabi_splitting(const std::vector<Peak>& peaks, double omega_ref) {
  const Peak* below = nullptr;
  const Peak* above = nullptr;
  for (const Peak& p : peaks) {
    if (p.frequency < omega_ref && (!below || p.frequency > below->frequency)) below = &p;
    if (p.frequency > omega_ref && (!above || p.frequency < above->frequency)) above = &p;
  }
  if (!below || !above) throw SpectrumError("no pair of peaks brackets the reference frequency");
  RabiSplitting r;
  r.lower = below->frequency;
  r.upper = above->frequency;
  r.splitting = r.upper - r.lower;
  r.splitting_cm1 = units::hartree_to_wavenumber(r.splitting);
  return r;
}

double band_maximum(const Spectrum& spectrum, double lo, double hi) {
  double best = 0.0;
  for (std::size_t k = 0; k < spectrum.frequencies.size(); ++k)
    if (spectrum.frequencies[k] >= lo && spectrum.frequencies[k] <= hi) best = std::max(best, spectrum.intensities[k]);
  return best;
}

std::optional<Peak> nearest_peak(const std::vector<Peak>& peaks, double omega, double tolerance) {
  std::optional<Peak> best;
  for (const Peak& p : peaks) {
    const double d = std::abs(p.frequency - omega);
    if (d <= tolerance && (!best || d < std::abs(best->frequency - omega))) best = p;
  }
  return best;
}

double integrator_frequency(double omega, double dt) {
  const double x = 0.5 * omega * dt;
  if (!(x <= 1.0)) throw SpectrumError("frequency beyond the velocity Verlet stability limit");
  return 2.0 / dt * std::asin(x);
}

double physical_frequency(double omega_md, double dt) { return 2.0 / dt * std::sin(0.5 * omega_md * dt); }

std::vector<Peak> to_physical(std::vector<Peak> peaks, double dt) {
  for (Peak& p : peaks) {
    const double lo = physical_frequency(p.frequency - 0.5 * p.fwhm, dt);
    const double hi = physical_frequency(p.frequency + 0.5 * p.fwhm, dt);
    p.frequency = physical_frequency(p.frequency, dt);
    if (p.fwhm > 0.0) p.fwhm = hi - lo;
  }
  return peaks;
}

}  // namespace vsc
