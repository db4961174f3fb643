#pragma once

#include <optional>
#include <string>

#include "vsc/co2.hpp"
#include "vsc/integrator.hpp"
#include "vsc/model.hpp"
#include "vsc/spectra.hpp"

namespace vsc {

inline constexpr const char* kToolVersion = "0.1.0";

enum class Preset { co2, custom };

/// How omega_beta is chosen: an explicit value, the bare asymmetric stretch
/// sqrt(k_a), or the value that puts the renormalized photon gamma omega_beta
/// on the collectively stiffened stretch sqrt(k~_a).
enum class OmegaTuning { value, resonant, dressed_resonant };

/// Everything a run needs. `ensemble` is always fully populated; for the CO2
/// preset it is derived from `co2`.
struct RunConfig {
  Preset preset = Preset::co2;
  CO2Preset co2 = CO2Preset::standard();
  EnsembleConfig ensemble;
  OmegaTuning omega_tuning = OmegaTuning::resonant;
  std::optional<double> physical_volume;

  ThermostatParams thermostat;
  long n_steps = 200000;
  int sample_stride = 5;
  double init_radius = 0.1;
  double blowup_bound = 1e6;

  SpectrumOptions spectrum;
  int n_seeds = 4;
  double peak_threshold = 0.05;

  std::string output_dir = "out";

  /// Re-derives `ensemble` from the preset fields and the resonance flag.
  void refresh_ensemble();
  PropagationOptions propagation() const;
};

RunConfig default_run_config();

/// Parses the YAML text; `source` only labels diagnostics. Throws ConfigError
/// naming the field and line for unknown keys, bad types and bad values.
RunConfig parse_config(const std::string& text, const std::string& source = "<string>");
RunConfig load_config(const std::string& path);

/// Canonical YAML; parse_config(serialize_config(c)) reproduces c exactly.
std::string serialize_config(const RunConfig& config);
void save_config(const RunConfig& config, const std::string& path);

/// 16 hex digits of FNV-1a over the canonical serialization.
std::string config_hash(const RunConfig& config);

}  // namespace vsc
