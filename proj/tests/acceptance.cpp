// End-to-end acceptance checks, one line per criterion.
#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "vsc/analysis.hpp"
#include "vsc/cavity.hpp"
#include "vsc/co2.hpp"
#include "vsc/errors.hpp"
#include "vsc/forces.hpp"
#include "vsc/integrator.hpp"
#include "vsc/oracle.hpp"
#include "vsc/polarizability.hpp"
#include "vsc/spectra.hpp"
#include "vsc/units.hpp"

using namespace vsc;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;
std::string only;  // run a single criterion when set

void run(const char* id, const char* title, const std::function<Outcome()>& body) {
  if (!only.empty() && only != id) return;
  const auto t0 = std::chrono::steady_clock::now();
  Outcome r;
  try {
    r = body();
  } catch (const std::exception& e) {
    r = {false, std::string("exception: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!r.pass) ++failures;
  fmt::print("{} {} {} ({:.1f} s): {}\n", id, r.pass ? "PASS" : "FAIL", title, s, r.detail);
  std::fflush(stdout);
}

double cm(double au) { return units::hartree_to_wavenumber(au); }

const CO2Preset kCO2 = CO2Preset::standard();

EnsembleConfig co2(int n, double lambda, double omega) {
  return kCO2.make_ensemble(n, lambda, omega, ApproximationLevel::sc);
}

EnsembleConfig dressed(int n, double lambda) {
  EnsembleConfig c = co2(n, lambda, std::sqrt(kCO2.k_a()));
  c.omega_beta = dressed_resonance(c);
  return c;
}

MdSpectraOptions standard_protocol() {
  MdSpectraOptions o;  // k_BT 1e-3, gamma_T 0.5e-5, dt 20, 200000 steps, stride 5
  o.n_seeds = 4;
  o.peak_threshold = 0.03;  // above the ~1.4% Hann sidelobes
  return o;
}

Outcome ac1() {
  const oracle::SweepReport r = oracle::verification_sweep(200, 20240601, 1e-8);
  double worst = 0.0;
  std::string worst_name;
  for (const auto& c : r.checks)
    if (c.max_error / c.tolerance >= worst) {
      worst = c.max_error / c.tolerance;
      worst_name = c.name;
    }
  const bool ok = r.passed() && r.seconds < 60.0 && r.draws >= 200;
  return {ok, fmt::format("{} draws, {} checks, worst {} at {:.2g} x tolerance, {:.2f} s", r.draws, r.checks.size(),
                          worst_name, worst, r.seconds)};
}

Outcome ac2() {
  bool ok = true;
  double worst_identity = 0.0, smallest_gap = std::numeric_limits<double>::infinity();
  for (double lc : {0.1, 0.3})
    for (int n : {2, 10, 100, 10000}) {
      const ScalingRecipeReport r = verify_scaling_recipe(co2(n, 0.0, 0.0116), lc);
      ok = ok && r.passed && r.identity_error <= 1e-12 && r.perturbative_gap > 1e-6;
      worst_identity = std::max(worst_identity, r.identity_error);
      smallest_gap = std::min(smallest_gap, r.perturbative_gap);
    }
  return {ok, fmt::format("identity error <= {:.2e} (tol 1e-12), smallest perturbative gap {:.3e}", worst_identity,
                          smallest_gap)};
}

Outcome ac3() {
  EnsembleConfig c = co2(20, 0.0, std::sqrt(kCO2.k_a()));
  const double lambda_crit = 1.0 / std::sqrt(c.n_molecules * c.single_polarizability());
  double worst = 0.0, prev_gap = -1.0;
  bool monotone = true, d_errors = true;
  int stable_points = 0, unstable_points = 0;
  for (int k = 0; k <= 60; ++k) {
    c.lambda = 1.3 * lambda_crit * k / 60.0;
    const double sc = renormalized_frequency(ApproximationLevel::sc, c).omega_out;
    const double maxwell = maxwell_redshift(c).omega_out;
    worst = std::max(worst, std::abs(sc - maxwell) / maxwell);
    if (c.collective_strength() < 1.0) {
      const double d = renormalized_frequency(ApproximationLevel::D, c).omega_out;
      const double gap = std::abs(d - sc) / c.omega_beta;
      if (k > 0 && !(gap > prev_gap)) monotone = false;
      prev_gap = gap;
      ++stable_points;
    } else {
      ++unstable_points;
      try {
        renormalized_frequency(ApproximationLevel::D, c);
        d_errors = false;
      } catch (const UnstableRegimeError&) {
      }
    }
  }
  const double eps = std::numeric_limits<double>::epsilon();
  const bool ok = worst <= 4 * eps && monotone && d_errors && unstable_points > 0;
  return {ok, fmt::format("max |sc - omega/n_r| / (omega/n_r) = {:.1e} ({:.2f} eps); |D - sc| grows over {} points, "
                          "D errors at all {} points with gamma^2 <= 1/2",
                          worst, worst / eps, stable_points, unstable_points)};
}

Outcome ac4ab() {
  const EnsembleConfig c = dressed(20, 0.1 / std::sqrt(20.0));
  const ModeDynamicsReport modes = analytic_mode_dynamics(c);
  const MdSpectra md = run_md_spectra(c, standard_protocol());
  const auto& col = md[Observable::collective_dipole];
  const auto& bond = md[Observable::bond];
  const double bin = col.spectrum.resolution;
  auto near = [&](const std::vector<Peak>& peaks, double w) {
    const auto p = nearest_peak(peaks, w, bin);
    return p ? p->frequency : NAN;
  };
  const double lp = near(col.peaks, modes.lower_polariton);
  const double up = near(col.peaks, modes.upper_polariton);
  const double ks = near(bond.peaks, modes.symmetric_frequency);
  const bool ok = std::isfinite(lp) && std::isfinite(up) && std::isfinite(ks);
  return {ok, fmt::format("omega_beta = {:.6f} (gamma omega_beta on sqrt(k~_a)), bin {:.3f} cm-1; "
                          "LP {:.2f} vs {:.2f}, UP {:.2f} vs {:.2f}, sqrt(k_s) {:.2f} vs {:.2f} cm-1 (MD vs analytic); "
                          "errors {:.2f}/{:.2f}/{:.2f} bins",
                          c.omega_beta, cm(bin), cm(lp), cm(modes.lower_polariton), cm(up),
                          cm(modes.upper_polariton), cm(ks), cm(modes.symmetric_frequency),
                          std::abs(lp - modes.lower_polariton) / bin, std::abs(up - modes.upper_polariton) / bin,
                          std::abs(ks - modes.symmetric_frequency) / bin)};
}

Outcome ac4c() {
  const EnsembleConfig c = co2(20, 0.02, std::sqrt(kCO2.k_a()) / 3.0);
  const double target = renormalized_frequency(ApproximationLevel::sc, c).omega_out;
  const MdSpectra md = run_md_spectra(c, standard_protocol());
  const auto& ph = md[Observable::photon];
  const double bin = ph.spectrum.resolution;
  if (ph.peaks.empty()) return {false, "no photon peak"};
  const Peak top = *std::max_element(ph.peaks.begin(), ph.peaks.end(),
                                     [](const Peak& a, const Peak& b) { return a.intensity < b.intensity; });
  const double err = std::abs(top.frequency - target) / bin;
  const double from_bare = std::abs(top.frequency - c.omega_beta) / bin;
  return {err <= 1.0 && from_bare > 1.0,
          fmt::format("omega_beta = sqrt(k_a)/3: photon peak {:.2f} cm-1, gamma omega_beta {:.2f} cm-1 ({:.2f} bins), "
                      "bare omega_beta {:.2f} cm-1 ({:.2f} bins away)",
                      cm(top.frequency), cm(target), err, cm(c.omega_beta), from_bare)};
}

Outcome ac4() {
  const Outcome ab = ac4ab();
  const Outcome c = ac4c();
  return {ab.pass && c.pass, "(a,b) " + ab.detail + "; (c) " + c.detail};
}

Outcome ac5() {
  const double lambda_col = 0.1;
  const EnsembleConfig base = dressed(20, lambda_col / std::sqrt(20.0));
  const auto rows = local_polariton_intensity_scan(base, {5, 10, 20, 40}, lambda_col, standard_protocol());
  bool decreasing = true;
  double lo = rows.front().splitting_cm1, hi = lo, mean = 0.0;
  std::string trace;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (k > 0 && !(rows[k].local_intensity < rows[k - 1].local_intensity)) decreasing = false;
    lo = std::min(lo, rows[k].splitting_cm1);
    hi = std::max(hi, rows[k].splitting_cm1);
    mean += rows[k].splitting_cm1 / rows.size();
    trace += fmt::format(" N={}: I={:.3e} split={:.2f}", rows[k].n, rows[k].local_intensity, rows[k].splitting_cm1);
  }
  const double spread = (hi - lo) / mean;
  return {decreasing && spread <= 0.02,
          fmt::format("local intensity strictly decreasing: {}, splitting spread {:.2f}% (analytic {:.2f} cm-1);{}",
                      decreasing ? "yes" : "no", 100 * spread, rows.front().analytic_splitting_cm1, trace)};
}

Outcome ac6() {
  // Large N so that the 200000-step mean is not dominated by the few
  // kinetic-energy relaxation times the weak friction allows.
  const EnsembleConfig c = dressed(400, 0.1 / std::sqrt(400.0));
  ThermostatParams th;
  PropagationOptions p;
  p.record_per_molecule = false;
  p.record_energy = false;
  const Trajectory t = propagate(c, th, p, initial_state(c, 0.1, 11));
  const std::size_t start = t.size() / 5;
  double ke = 0.0;
  for (std::size_t s = start; s < t.size(); ++s) ke += t.kinetic_energy[s];
  const double per_dof = ke / static_cast<double>(t.size() - start) / (c.nuclear_dofs() + 1);
  const double ke_err = std::abs(per_dof - th.temperature / 2) / (th.temperature / 2);

  // NVE from a thermalized state, zero friction.
  ThermostatParams nve = th;
  nve.friction = 0.0;
  const EnsembleConfig small = dressed(20, 0.1 / std::sqrt(20.0));
  PropagationOptions eq;
  eq.n_steps = 20000;
  eq.record_per_molecule = false;
  eq.record_energy = false;
  const SystemState hot = propagate(small, th, eq, initial_state(small, 0.1, 5)).final_state;
  PropagationOptions run;
  run.n_steps = 10000;
  run.sample_stride = 1;
  run.record_per_molecule = false;
  const Trajectory r = propagate(small, nve, run, hot);
  std::vector<double> e(r.size());
  for (std::size_t s = 0; s < r.size(); ++s) e[s] = r.kinetic_energy[s] + r.potential_energy[s];
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(e.size());
  for (std::size_t s = 0; s < e.size(); ++s) {
    const double x = static_cast<double>(s);
    sx += x;
    sy += e[s];
    sxx += x * x;
    sxy += x * e[s];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double drift = std::abs(slope * (n - 1)) / std::abs(e.front());
  const auto [mn, mx] = std::minmax_element(e.begin(), e.end());
  const double wobble = (*mx - *mn) / std::abs(e.front());
  return {ke_err <= 0.05 && drift < 1e-4,
          fmt::format("N=400 Langevin KE/DOF {:.4e} vs k_BT/2 {:.1e} ({:.2f}%); NVE N=20 fitted drift {:.1e} over 1e4 "
                      "steps (peak-to-peak {:.1e})",
                      per_dof, th.temperature / 2, 100 * ke_err, drift, wobble)};
}

Outcome ac7() {
  EnsembleConfig atom;
  atom.n_molecules = 6;
  atom.nuclear_masses = {1836.0};
  atom.nuclear_charges = {3.0};
  atom.electron_charge = 3.0;
  atom.k_e = 0.7;
  atom.nuclear_potential.kind = NuclearPotential::Kind::none;
  atom.lambda = 0.05;
  atom.omega_beta = 0.01;
  MdSpectraOptions o;
  o.thermostat.seed = 3;
  const auto rows = approximation_compare(atom, o, 256, false);
  double sc = -1, d = -1, be = -1;
  for (const auto& r : rows) {
    if (r.level == ApproximationLevel::sc) sc = r.max_cavity_force;
    if (r.level == ApproximationLevel::D) d = r.max_cavity_force;
    if (r.level == ApproximationLevel::be) be = r.max_cavity_force;
  }
  return {sc == 0.0 && d == 0.0 && be > 1e-6,
          fmt::format("max |F - F_bare| over 256 random (q, R): sc {:.1e}, D {:.1e}, be {:.3e}", sc, d, be)};
}

Outcome ac8() {
  const double lambda = 0.002;
  std::vector<double> ns, split;
  for (int n = 1; n <= 1024; n *= 2) {
    ns.push_back(n);
    split.push_back(analytic_mode_dynamics(dressed(n, lambda)).rabi_splitting);
  }
  const PowerLawFit fit = fit_power_law(ns, split);

  const double md_lambda = 0.01;
  std::vector<double> md_n, md_split, an_split;
  for (int n : {5, 10, 20, 40}) {
    const EnsembleConfig c = dressed(n, md_lambda);
    const ModeDynamicsReport m = analytic_mode_dynamics(c);
    const MdSpectra md = run_md_spectra(c, standard_protocol());
    // The photon coordinate carries both polaritons with comparable weight;
    // in the total dipole the upper one fades as N grows at fixed lambda.
    const RabiSplitting r =
        rabi_splitting(md[Observable::photon].peaks, 0.5 * (m.lower_polariton + m.upper_polariton));
    md_n.push_back(n);
    md_split.push_back(r.splitting);
    an_split.push_back(m.rabi_splitting);
  }
  const PowerLawFit md_fit = fit_power_law(md_n, md_split);
  const PowerLawFit an_fit = fit_power_law(md_n, an_split);
  const bool ok = std::abs(fit.exponent - 0.5) <= 0.05 && std::abs(md_fit.exponent - 0.5) <= 0.05 &&
                  std::abs(md_fit.exponent - an_fit.exponent) <= 0.05;
  return {ok, fmt::format("analytic exponent {:.4f} (lambda {}, N 1..1024); MD (photon spectrum) cross-check lambda {} N 5..40: "
                          "{:.4f} vs analytic {:.4f}",
                          fit.exponent, lambda, md_lambda, md_fit.exponent, an_fit.exponent)};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) only = argv[1];
  run("AC1", "oracle equivalence sweep", ac1);
  run("AC2", "collective scaling recipe", ac2);
  run("AC3", "redshift identity and D-level pathology", ac3);
  run("AC4", "MD spectra: polaritons, sqrt(k_s), detuned photon peak", ac4);
  run("AC5", "local polariton decay at fixed collective coupling", ac5);
  run("AC6", "thermostat and NVE energy conservation", ac6);
  run("AC7", "neutral-atom decoupling via approximation-compare", ac7);
  run("AC8", "sqrt(N) Rabi splitting", ac8);
  fmt::print("{} criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
