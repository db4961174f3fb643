#include "vsc/config.hpp"

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>

#include "vsc/errors.hpp"

namespace vsc {

void RunConfig::refresh_ensemble() {
  if (preset == Preset::co2) {
    const EnsembleConfig old = ensemble;
    ensemble = co2.make_ensemble(old.n_molecules, old.lambda, old.omega_beta, old.level);
  }
  if (omega_tuning == OmegaTuning::value) return;
  if (preset != Preset::co2) throw ConfigError("omega_beta: resonant needs the co2 preset", "ensemble.omega_beta");
  ensemble.omega_beta = std::sqrt(co2.k_a());
  if (omega_tuning == OmegaTuning::dressed_resonant) {
    EnsembleConfig sc = ensemble;
    sc.level = ApproximationLevel::sc;
    const ModeDynamicsReport m = analytic_mode_dynamics(sc);
    ensemble.omega_beta = std::sqrt(m.k_tilde_a / m.gamma2);
  }
}

PropagationOptions RunConfig::propagation() const {
  PropagationOptions p;
  p.n_steps = n_steps;
  p.sample_stride = sample_stride;
  p.blowup_bound = blowup_bound;
  return p;
}

RunConfig default_run_config() {
  RunConfig c;
  c.ensemble.n_molecules = 20;
  c.ensemble.lambda = 0.02;
  c.ensemble.level = ApproximationLevel::sc;
  c.refresh_ensemble();
  return c;
}

namespace {

// Walks one mapping, remembers which keys were consumed and rejects the rest.
class Section {
 public:
  Section(YAML::Node node, std::string path, const std::string& source)
      : node_(std::move(node)), path_(std::move(path)), source_(source) {
    if (node_ && !node_.IsNull() && !node_.IsMap()) fail(path_, line_of(node_), "expected a mapping");
  }

  bool present() const { return node_ && node_.IsMap(); }

  template <typename T>
  std::optional<T> get(const std::string& key, const char* type) {
    known_.insert(key);
    if (!present()) return std::nullopt;
    const YAML::Node n = node_[key];
    if (!n) return std::nullopt;
    try {
      return n.as<T>();
    } catch (const YAML::Exception&) {
      fail(field(key), line_of(n), std::string("expected ") + type);
    }
  }

  template <typename T>
  void read(const std::string& key, const char* type, T& target) {
    if (auto v = get<T>(key, type)) target = *v;
  }

  std::optional<std::string> scalar(const std::string& key) { return get<std::string>(key, "a scalar"); }

  Section child(const std::string& key) {
    known_.insert(key);
    return Section(present() ? node_[key] : YAML::Node(), field(key), source_);
  }

  int line(const std::string& key) const {
    if (!present()) return 0;
    const YAML::Node n = node_[key];
    return n ? line_of(n) : line_of(node_);
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const {
    if (!present()) return;
    for (const auto& kv : node_) {
      const std::string key = kv.first.as<std::string>();
      if (!known_.count(key)) fail(field(key), line_of(kv.first), "unknown key");
    }
  }

  [[noreturn]] void fail(const std::string& field, int line, const std::string& msg) const {
    throw ConfigError(fmt::format("{}:{}: {}: {}", source_, line, field, msg), field, line);
  }

  static int line_of(const YAML::Node& n) { return n.Mark().line + 1; }

 private:
  YAML::Node node_;
  std::string path_;
  const std::string& source_;
  std::set<std::string> known_;
};

void require(bool ok, Section& s, const std::string& key, const std::string& msg) {
  if (!ok) s.fail(s.field(key), s.line(key), msg);
}

std::optional<double> optional_number(Section& s, const std::string& key) {
  const auto text = s.scalar(key);
  if (!text || *text == "none" || *text == "~" || *text == "null" || text->empty()) return std::nullopt;
  return s.get<double>(key, "a number or none");
}

void read_co2(Section s, CO2Preset& p) {
  s.read("mass_o", "a number", p.mass_o);
  s.read("mass_c", "a number", p.mass_c);
  s.read("charge_o", "a number", p.charge_o);
  s.read("charge_c", "a number", p.charge_c);
  s.read("electron_charge", "a number", p.electron_charge);
  s.read("k_e", "a number", p.k_e);
  const auto k_n = s.get<double>("k_n", "a number");
  const auto sqrt_k_a = s.get<double>("sqrt_k_a", "a number");
  if (k_n && sqrt_k_a) s.fail(s.field("sqrt_k_a"), s.line("sqrt_k_a"), "give k_n or sqrt_k_a, not both");
  require(p.mass_o > 0.0, s, "mass_o", "must be positive");
  require(p.mass_c > 0.0, s, "mass_c", "must be positive");
  require(p.k_e > 0.0, s, "k_e", "must be positive");
  if (k_n) {
    require(*k_n >= 0.0, s, "k_n", "must be non-negative");
    p.k_n = *k_n;
  } else {
    const double target = sqrt_k_a.value_or(CO2Preset::kTargetSqrtKa);
    require(target > 0.0, s, "sqrt_k_a", "must be positive");
    p.k_n = target * target * p.mass_o * p.mass_c / p.total_mass();
  }
  s.finish();
}

void read_custom(Section s, EnsembleConfig& e) {
  s.read("masses", "a list of numbers", e.nuclear_masses);
  s.read("charges", "a list of numbers", e.nuclear_charges);
  s.read("electron_charge", "a number", e.electron_charge);
  s.read("k_e", "a number", e.k_e);
  require(!e.nuclear_masses.empty(), s, "masses", "needs at least one nucleus");
  require(e.nuclear_charges.size() == e.nuclear_masses.size(), s, "charges", "needs one entry per mass");
  for (double m : e.nuclear_masses) require(m > 0.0, s, "masses", "must be positive");
  require(e.k_e > 0.0, s, "k_e", "must be positive");
  Section pot = s.child("nuclear_potential");
  if (auto kind = pot.scalar("kind")) {
    try {
      e.nuclear_potential.kind = parse_potential_kind(*kind);
    } catch (const ModelError& err) {
      pot.fail(pot.field("kind"), pot.line("kind"), err.what());
    }
  }
  pot.read("k_n", "a number", e.nuclear_potential.k_n);
  require(e.nuclear_potential.k_n >= 0.0, pot, "k_n", "must be non-negative");
  pot.finish();
  s.finish();
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(fmt::format("{}:{}: {}", source, e.mark.line + 1, e.msg), "", e.mark.line + 1);
  }
  RunConfig c = default_run_config();
  Section top(root, "", source);

  if (auto preset = top.scalar("preset")) {
    if (*preset == "co2")
      c.preset = Preset::co2;
    else if (*preset == "custom")
      c.preset = Preset::custom;
    else
      top.fail("preset", top.line("preset"), "expected co2 or custom");
  }

  Section ens = top.child("ensemble");
  ens.read("n_molecules", "an integer", c.ensemble.n_molecules);
  require(c.ensemble.n_molecules >= 1, ens, "n_molecules", "must be >= 1");
  ens.read("lambda", "a number", c.ensemble.lambda);
  require(c.ensemble.lambda >= 0.0 && std::isfinite(c.ensemble.lambda), ens, "lambda", "must be non-negative");
  if (auto omega = ens.scalar("omega_beta")) {
    if (*omega == "resonant") {
      c.omega_tuning = OmegaTuning::resonant;
    } else if (*omega == "dressed_resonant") {
      c.omega_tuning = OmegaTuning::dressed_resonant;
    } else {
      c.omega_tuning = OmegaTuning::value;
      c.ensemble.omega_beta = *ens.get<double>("omega_beta", "a number, 'resonant' or 'dressed_resonant'");
      require(c.ensemble.omega_beta > 0.0, ens, "omega_beta", "must be positive");
    }
  }
  if (auto level = ens.scalar("level")) {
    try {
      c.ensemble.level = parse_level(*level);
    } catch (const ModelError& err) {
      ens.fail(ens.field("level"), ens.line("level"), err.what());
    }
  }
  Section co2 = ens.child("co2");
  Section custom = ens.child("custom");
  if (c.preset == Preset::co2) {
    if (custom.present()) ens.fail(ens.field("custom"), ens.line("custom"), "only allowed with preset: custom");
    read_co2(co2, c.co2);
  } else {
    if (co2.present()) ens.fail(ens.field("co2"), ens.line("co2"), "only allowed with preset: co2");
    if (!custom.present()) ens.fail(ens.field("custom"), ens.line("custom"), "required with preset: custom");
    if (c.omega_tuning != OmegaTuning::value) {
      if (!ens.scalar("omega_beta")) ens.fail(ens.field("omega_beta"), ens.line("omega_beta"), "required with preset: custom");
      ens.fail(ens.field("omega_beta"), ens.line("omega_beta"), "resonant needs the co2 preset");
    }
    read_custom(custom, c.ensemble);
  }
  c.refresh_ensemble();
  if (c.ensemble.level == ApproximationLevel::D && c.ensemble.collective_strength() >= 1.0)
    ens.fail(ens.field("level"), ens.line("level"), "D level has no stable photon mode at this coupling (gamma^2 <= 1/2)");
  ens.finish();

  Section cav = top.child("cavity");
  c.physical_volume = optional_number(cav, "physical_volume");
  if (c.physical_volume) require(*c.physical_volume > 0.0, cav, "physical_volume", "must be positive");
  cav.finish();

  Section th = top.child("thermostat");
  th.read("temperature", "a number", c.thermostat.temperature);
  th.read("friction", "a number", c.thermostat.friction);
  c.thermostat.photon_friction = optional_number(th, "photon_friction");
  th.read("dt", "a number", c.thermostat.dt);
  th.read("seed", "a non-negative integer", c.thermostat.seed);
  require(c.thermostat.temperature >= 0.0, th, "temperature", "must be non-negative");
  require(c.thermostat.friction >= 0.0, th, "friction", "must be non-negative");
  require(c.thermostat.photon_gamma() >= 0.0, th, "photon_friction", "must be non-negative");
  require(c.thermostat.dt > 0.0, th, "dt", "must be positive");
  th.finish();

  Section run = top.child("run");
  run.read("n_steps", "an integer", c.n_steps);
  run.read("sample_stride", "an integer", c.sample_stride);
  run.read("init_radius", "a number", c.init_radius);
  run.read("blowup_bound", "a number", c.blowup_bound);
  require(c.n_steps >= 1, run, "n_steps", "must be >= 1");
  require(c.sample_stride >= 1, run, "sample_stride", "must be >= 1");
  require(c.init_radius >= 0.0, run, "init_radius", "must be non-negative");
  require(c.blowup_bound > 0.0, run, "blowup_bound", "must be positive");
  run.finish();

  Section sp = top.child("spectrum");
  if (auto taper = sp.scalar("taper")) {
    try {
      c.spectrum.taper = parse_taper(*taper);
    } catch (const SpectrumError& err) {
      sp.fail(sp.field("taper"), sp.line("taper"), err.what());
    }
  }
  sp.read("padding", "an integer", c.spectrum.padding);
  sp.read("max_lag", "an integer", c.spectrum.max_lag);
  sp.read("n_seeds", "an integer", c.n_seeds);
  sp.read("peak_threshold", "a number", c.peak_threshold);
  require(c.spectrum.padding >= 1, sp, "padding", "must be >= 1");
  require(c.spectrum.max_lag >= 0, sp, "max_lag", "must be >= 0 (0 selects n/32)");
  require(c.n_seeds >= 1, sp, "n_seeds", "must be >= 1");
  require(c.peak_threshold > 0.0 && c.peak_threshold < 1.0, sp, "peak_threshold", "must lie in (0, 1)");
  sp.finish();

  Section out = top.child("output");
  out.read("directory", "a string", c.output_dir);
  require(!c.output_dir.empty(), out, "directory", "must not be empty");
  out.finish();

  top.finish();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'", "", 0);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

namespace {

std::string num(double v) { return fmt::format("{:.17g}", v); }

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

std::string list(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t k = 0; k < v.size(); ++k) out += (k ? ", " : "") + num(v[k]);
  return out + "]";
}

}  // namespace

std::string serialize_config(const RunConfig& c) {
  std::string s;
  auto line = [&s](const std::string& text) { s += text + "\n"; };
  const EnsembleConfig& e = c.ensemble;
  line(fmt::format("preset: {}", c.preset == Preset::co2 ? "co2" : "custom"));
  line("ensemble:");
  line(fmt::format("  n_molecules: {}", e.n_molecules));
  line("  lambda: " + num(e.lambda));
  line("  omega_beta: " + (c.omega_tuning == OmegaTuning::resonant           ? std::string("resonant")
                         : c.omega_tuning == OmegaTuning::dressed_resonant ? std::string("dressed_resonant")
                                                                           : num(e.omega_beta)));
  line(fmt::format("  level: {}", to_string(e.level)));
  if (c.preset == Preset::co2) {
    line("  co2:");
    line("    mass_o: " + num(c.co2.mass_o));
    line("    mass_c: " + num(c.co2.mass_c));
    line("    charge_o: " + num(c.co2.charge_o));
    line("    charge_c: " + num(c.co2.charge_c));
    line("    electron_charge: " + num(c.co2.electron_charge));
    line("    k_e: " + num(c.co2.k_e));
    line("    k_n: " + num(c.co2.k_n));
  } else {
    line("  custom:");
    line("    masses: " + list(e.nuclear_masses));
    line("    charges: " + list(e.nuclear_charges));
    line("    electron_charge: " + num(e.electron_charge));
    line("    k_e: " + num(e.k_e));
    line("    nuclear_potential:");
    line(fmt::format("      kind: {}", to_string(e.nuclear_potential.kind)));
    line("      k_n: " + num(e.nuclear_potential.k_n));
  }
  line("cavity:");
  line("  physical_volume: " + (c.physical_volume ? num(*c.physical_volume) : std::string("none")));
  line("thermostat:");
  line("  temperature: " + num(c.thermostat.temperature));
  line("  friction: " + num(c.thermostat.friction));
  line("  photon_friction: " +
       (c.thermostat.photon_friction ? num(*c.thermostat.photon_friction) : std::string("none")));
  line("  dt: " + num(c.thermostat.dt));
  line(fmt::format("  seed: {}", c.thermostat.seed));
  line("run:");
  line(fmt::format("  n_steps: {}", c.n_steps));
  line(fmt::format("  sample_stride: {}", c.sample_stride));
  line("  init_radius: " + num(c.init_radius));
  line("  blowup_bound: " + num(c.blowup_bound));
  line("spectrum:");
  line(fmt::format("  taper: {}", to_string(c.spectrum.taper)));
  line(fmt::format("  padding: {}", c.spectrum.padding));
  line(fmt::format("  max_lag: {}", c.spectrum.max_lag));
  line(fmt::format("  n_seeds: {}", c.n_seeds));
  line("  peak_threshold: " + num(c.peak_threshold));
  line("output:");
  line("  directory: " + quoted(c.output_dir));
  return s;
}

void save_config(const RunConfig& config, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write config file '" + path + "'", "", 0);
  out << serialize_config(config);
}

std::string config_hash(const RunConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : serialize_config(config)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

}  // namespace vsc
