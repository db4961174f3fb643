#include <fmt/format.h>

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "vsc/analysis.hpp"
#include "vsc/cavity.hpp"
#include "vsc/co2.hpp"
#include "vsc/config.hpp"
#include "vsc/errors.hpp"
#include "vsc/integrator.hpp"
#include "vsc/oracle.hpp"
#include "vsc/output.hpp"
#include "vsc/polarizability.hpp"
#include "vsc/spectra.hpp"
#include "vsc/units.hpp"

namespace {

using namespace vsc;

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::string level;
};

struct Grid {
  double lambda_min = 0.0;
  double lambda_max = 0.1;
  int lambda_steps = 11;
  std::string n_list = "1,10,100";
};

RunConfig effective_config(const Common& c) {
  RunConfig cfg = c.config_path.empty() ? default_run_config() : load_config(c.config_path);
  if (c.seed) cfg.thermostat.seed = *c.seed;
  if (!c.out_dir.empty()) cfg.output_dir = c.out_dir;
  if (!c.level.empty()) {
    cfg.ensemble.level = parse_level(c.level);
    cfg.refresh_ensemble();
    if (cfg.ensemble.level == ApproximationLevel::D) renormalized_frequency(ApproximationLevel::D, cfg.ensemble);
  }
  return cfg;
}

OutputHeader header_for(const RunConfig& cfg) { return {config_hash(cfg), kToolVersion, {}}; }

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.output_dir) / name).string();
}

MdSpectraOptions md_options(const RunConfig& cfg) {
  MdSpectraOptions o;
  o.thermostat = cfg.thermostat;
  o.propagation = cfg.propagation();
  o.init_radius = cfg.init_radius;
  o.spectrum = cfg.spectrum;
  o.n_seeds = cfg.n_seeds;
  o.peak_threshold = cfg.peak_threshold;
  return o;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const int v = std::stoi(item, &used);
    if (used != item.size() || v < 1) throw ModelError("--n-list: '" + item + "' is not a positive integer");
    out.push_back(v);
  }
  if (out.empty()) throw ModelError("--n-list is empty");
  return out;
}

std::vector<double> lambda_grid(const Grid& g) {
  if (g.lambda_steps < 1) throw ModelError("--lambda-steps must be >= 1");
  if (!(g.lambda_min >= 0.0 && g.lambda_max >= g.lambda_min)) throw ModelError("need 0 <= lambda-min <= lambda-max");
  std::vector<double> out;
  for (int k = 0; k < g.lambda_steps; ++k)
    out.push_back(g.lambda_steps == 1 ? g.lambda_min
                                      : g.lambda_min + (g.lambda_max - g.lambda_min) * k / (g.lambda_steps - 1));
  return out;
}

void write_peaks(const RunConfig& cfg, const MdSpectra& md) {
  std::vector<Spectrum> spectra;
  std::vector<PeakRecord> records;
  for (const ObservableSpectrum& o : md.by_observable) {
    spectra.push_back(o.spectrum);
    for (std::size_t k = 0; k < o.peaks.size(); ++k)
      records.push_back({o.spectrum.source, o.peaks[k], o.md_peaks[k].frequency});
  }
  const OutputHeader h = header_for(cfg);
  write_spectrum_csv(out_path(cfg, "spectrum.csv"), spectra, h);
  write_peaks_jsonl(out_path(cfg, "peaks.jsonl"), records, h);
  for (const PeakRecord& r : records)
    fmt::print("{:<18} {:>10.2f} cm-1  intensity {:.4g}\n", to_string(r.observable),
               units::hartree_to_wavenumber(r.peak.frequency), r.peak.intensity);
}

int cmd_simulate(const Common& common) {
  const RunConfig cfg = effective_config(common);
  const SystemState init = initial_state(cfg.ensemble, cfg.init_radius, cfg.thermostat.seed ^ 0x5DEECE66DULL);
  PropagationOptions p = cfg.propagation();
  p.record_per_molecule = false;
  const Trajectory t = propagate(cfg.ensemble, cfg.thermostat, p, init);
  const std::string path = out_path(cfg, "trajectory.csv");
  write_trajectory_csv(path, t, header_for(cfg));
  save_config(cfg, out_path(cfg, "config.yaml"));
  fmt::print("wrote {} ({} samples)\n", path, t.size());
  return 0;
}

int cmd_spectrum(const Common& common, const std::string& trajectory) {
  const RunConfig cfg = effective_config(common);
  if (!trajectory.empty()) {
    const Trajectory t = read_trajectory_csv(trajectory);
    write_peaks(cfg, spectra_from_trajectory(t, cfg.spectrum, cfg.peak_threshold));
  } else {
    write_peaks(cfg, run_md_spectra(cfg.ensemble, md_options(cfg)));
  }
  return 0;
}

int cmd_polarizability(const Common& common, const Grid& grid) {
  const RunConfig cfg = effective_config(common);
  std::vector<std::vector<std::string>> rows;
  auto add = [&rows](std::string kind, const PolarizabilityReport& r) {
    rows.push_back({std::move(kind), std::string(to_string(r.method)), std::to_string(r.n), format_number(r.lambda),
                    format_number(r.value), r.tc_limit ? format_number(*r.tc_limit) : "nan"});
  };
  for (int n : parse_int_list(grid.n_list)) {
    for (double lambda : lambda_grid(grid)) {
      EnsembleConfig e = cfg.ensemble;
      e.n_molecules = n;
      e.lambda = lambda;
      for (PolarizabilityKind kind : {kEnsembleResponse, kLocalResponse, kEnsembleToLocalField, kLocalToLocalField}) {
        for (PolarizabilityMethod m : {PolarizabilityMethod::bare, PolarizabilityMethod::self_consistent,
                                       PolarizabilityMethod::truncated_feedback})
          add(std::string(to_string(kind)), self_consistent_polarizability(kind, e, 0, 0, m));
        if (kind.perturbation == PerturbationScope::ensemble)
          add(std::string(to_string(kind)), perturbative_polarizability(kind.response, e));
      }
      if (n > 1)
        for (PolarizabilityMethod m : {PolarizabilityMethod::self_consistent, PolarizabilityMethod::truncated_feedback})
          add("local_from_other_local_field", self_consistent_polarizability(kLocalToLocalField, e, 0, 1, m));
    }
  }
  const std::string path = out_path(cfg, "polarizability.csv");
  write_csv(path, header_for(cfg), {"kind", "method", "N", "lambda", "value", "tc_limit"}, rows);
  fmt::print("wrote {} ({} rows)\n", path, rows.size());
  return 0;
}

int cmd_redshift(const Common& common, const Grid& grid) {
  const RunConfig cfg = effective_config(common);
  std::vector<std::vector<std::string>> rows;
  for (double lambda : lambda_grid(grid)) {
    EnsembleConfig e = cfg.ensemble;
    e.lambda = lambda;
    const double w = e.omega_beta;
    const double sc = renormalized_frequency(ApproximationLevel::sc, e).omega_out / w;
    const double be = renormalized_frequency(ApproximationLevel::be, e).omega_out / w;
    double d = NAN;
    std::string status = "ok";
    try {
      d = renormalized_frequency(ApproximationLevel::D, e).omega_out / w;
    } catch (const UnstableRegimeError&) {
      status = "D_unstable";
    }
    const double maxwell = maxwell_redshift(e, cfg.physical_volume).omega_out / w;
    rows.push_back({format_number(lambda), format_number(sc), format_number(d), format_number(be),
                    format_number(maxwell), status});
  }
  const std::string path = out_path(cfg, "redshift.csv");
  write_csv(path, header_for(cfg), {"lambda", "sc_ratio", "D_ratio", "be_ratio", "maxwell_ratio", "status"}, rows);
  fmt::print("wrote {} ({} rows)\n", path, rows.size());
  return 0;
}

int cmd_compare(const Common& common, bool no_dynamics) {
  const RunConfig cfg = effective_config(common);
  const auto table = approximation_compare(cfg.ensemble, md_options(cfg), 64, !no_dynamics);
  const double w = cfg.ensemble.omega_beta;
  std::vector<std::vector<std::string>> rows;
  fmt::print("{:<4} {:<10} {:>14} {:>14} {:>14} {:>16}\n", "lvl", "status", "analytic_cm1", "measured_cm1",
             "shift_cm1", "max_cavity_force");
  for (const LevelComparison& r : table) {
    const double measured = r.measured_photon.value_or(NAN);
    const double shift = measured - w;
    rows.push_back({std::string(to_string(r.level)), r.status, format_number(r.analytic_photon),
                    format_number(r.analytic_photon / w), format_number(measured), format_number(shift),
                    format_number(r.max_cavity_force)});
    fmt::print("{:<4} {:<10} {:>14.3f} {:>14.3f} {:>14.3f} {:>16.3e}\n", to_string(r.level), r.status,
               units::hartree_to_wavenumber(r.analytic_photon), units::hartree_to_wavenumber(measured),
               units::hartree_to_wavenumber(shift), r.max_cavity_force);
  }
  const std::string path = out_path(cfg, "approximation_compare.csv");
  write_csv(path, header_for(cfg),
            {"level", "status", "analytic_photon", "analytic_ratio", "measured_photon", "measured_shift",
             "max_cavity_force"},
            rows);
  fmt::print("wrote {}\n", path);
  return 0;
}

int cmd_oracle(int draws, std::uint64_t seed) {
  const oracle::SweepReport r = oracle::verification_sweep(draws, seed);
  fmt::print("{:<40} {:>6} {:>12} {:>10}  result\n", "check", "count", "max_error", "tolerance");
  for (const oracle::CheckResult& c : r.checks)
    fmt::print("{:<40} {:>6} {:>12.3e} {:>10.1e}  {}\n", c.name, c.count, c.max_error, c.tolerance,
               c.passed() ? "PASS" : "FAIL");
  fmt::print("{} draws, seed {}, {:.2f} s: {}\n", r.draws, r.seed, r.seconds, r.passed() ? "PASS" : "FAIL");
  return r.passed() ? 0 : 1;
}

int report(const char* kind, const std::string& what, int code) {
  std::fprintf(stderr, "vsc: error [%s]: %s\n", kind, what.c_str());
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collective vibrational strong coupling simulator"};
  app.set_version_flag("--version", std::string(vsc::kToolVersion));
  app.require_subcommand(1);

  Common common;
  Grid grid;
  std::string trajectory;
  bool no_dynamics = false;
  int draws = 200;
  std::uint64_t sweep_seed = 20240601;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config_path, "YAML run configuration")->check(CLI::ExistingFile);
    sub->add_option("--seed", common.seed, "thermostat and initial-state seed");
    sub->add_option("--out", common.out_dir, "output directory");
    sub->add_option("--level", common.level, "sc, be or D")->check(CLI::IsMember({"sc", "be", "D"}));
  };
  auto add_grid = [&](CLI::App* sub, bool with_n) {
    sub->add_option("--lambda-min", grid.lambda_min);
    sub->add_option("--lambda-max", grid.lambda_max);
    sub->add_option("--lambda-steps", grid.lambda_steps);
    if (with_n) sub->add_option("--n-list", grid.n_list, "comma-separated molecule counts");
  };

  CLI::App* sim = app.add_subcommand("simulate", "propagate one trajectory and write trajectory.csv");
  add_common(sim);
  CLI::App* spect = app.add_subcommand("spectrum", "IR spectra and peak list, from a trajectory or end to end");
  add_common(spect);
  spect->add_option("--trajectory", trajectory, "trajectory.csv written by simulate")->check(CLI::ExistingFile);
  CLI::App* pol = app.add_subcommand("polarizability-table", "static polarizabilities over an (N, lambda) grid");
  add_common(pol);
  add_grid(pol, true);
  CLI::App* red = app.add_subcommand("redshift-scan", "renormalized photon frequency over a lambda grid");
  add_common(red);
  add_grid(red, false);
  CLI::App* cmp = app.add_subcommand("approximation-compare", "same run at sc, be and D");
  add_common(cmp);
  cmp->add_flag("--no-dynamics", no_dynamics, "only the analytic and force columns");
  CLI::App* orc = app.add_subcommand("oracle-verify", "property sweep against the quadratic oracle");
  orc->add_option("--draws", draws)->check(CLI::PositiveNumber);
  orc->add_option("--seed", sweep_seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*sim) return cmd_simulate(common);
    if (*spect) return cmd_spectrum(common, trajectory);
    if (*pol) return cmd_polarizability(common, grid);
    if (*red) return cmd_redshift(common, grid);
    if (*cmp) return cmd_compare(common, no_dynamics);
    if (*orc) return cmd_oracle(draws, sweep_seed);
  } catch (const vsc::ConfigError& e) {
    return report("config", e.what(), 2);
  } catch (const vsc::UnstableRegimeError& e) {
    return report("unstable", e.what(), 3);
  } catch (const vsc::BlowUpError& e) {
    return report("blowup", fmt::format("{} (step {})", e.what(), e.step()), 4);
  } catch (const vsc::SpectrumError& e) {
    return report("spectrum", e.what(), 5);
  } catch (const vsc::ModelError& e) {
    return report("model", e.what(), 6);
  } catch (const std::exception& e) {
    return report("io", e.what(), 1);
  }
  return 1;
}
