#include "vsc/integrator.hpp"

#include <cmath>
#include <string>

#include "vsc/errors.hpp"

namespace vsc {

void ThermostatParams::validate() const {
  if (!(dt > 0.0)) throw ModelError("thermostat dt must be positive");
  if (!(friction >= 0.0)) throw ModelError("thermostat friction must be non-negative");
  if (!(photon_gamma() >= 0.0)) throw ModelError("thermostat photon_friction must be non-negative");
  if (!(temperature >= 0.0)) throw ModelError("thermostat temperature must be non-negative");
}

LangevinIntegrator::LangevinIntegrator(const EnsembleConfig& config, ApproximationLevel level,
                                       const ThermostatParams& thermostat, bool parallel_forces)
    : field_(config, level), thermostat_(thermostat), parallel_(parallel_forces), rng_(thermostat.seed) {
  thermostat_.validate();
  const double kt = thermostat_.temperature;
  const double half = 0.5 * thermostat_.dt;
  const int nn = config.nuclei_per_molecule();
  c1_.resize(static_cast<std::size_t>(nn));
  noise_.resize(static_cast<std::size_t>(nn));
  const double c1 = std::exp(-thermostat_.friction * half);
  for (int n = 0; n < nn; ++n) {
    c1_[static_cast<std::size_t>(n)] = c1;
    noise_[static_cast<std::size_t>(n)] = std::sqrt((1.0 - c1 * c1) * config.nuclear_masses[static_cast<std::size_t>(n)] * kt);
  }
  c1_photon_ = std::exp(-thermostat_.photon_gamma() * half);
  noise_photon_ = std::sqrt((1.0 - c1_photon_ * c1_photon_) * kt);
}

void LangevinIntegrator::compute_forces(const SystemState& state) {
  if (parallel_)
    field_.evaluate_parallel(state, forces_);
  else
    field_.evaluate_serial(state, forces_);
  forces_valid_ = true;
}

void LangevinIntegrator::ornstein_uhlenbeck(SystemState& state) {
  const std::size_t nn = c1_.size();
  if (thermostat_.friction > 0.0) {
    for (std::size_t k = 0; k < state.momenta.size(); ++k) {
      const std::size_t n = k % nn;
      state.momenta[k] = c1_[n] * state.momenta[k] + noise_[n] * normal_(rng_);
    }
  }
  if (thermostat_.photon_gamma() > 0.0) state.p_beta = c1_photon_ * state.p_beta + noise_photon_ * normal_(rng_);
}

void LangevinIntegrator::step(SystemState& state) {
  if (!forces_valid_) compute_forces(state);
  const double dt = thermostat_.dt;
  const double half = 0.5 * dt;
  const auto& masses = field_.config().nuclear_masses;
  const std::size_t nn = masses.size();

  ornstein_uhlenbeck(state);
  for (std::size_t k = 0; k < state.momenta.size(); ++k) state.momenta[k] += half * forces_.nuclear[k];
  state.p_beta += half * forces_.photon;
  for (std::size_t k = 0; k < state.positions.size(); ++k) state.positions[k] += dt * state.momenta[k] / masses[k % nn];
  state.q_beta += dt * state.p_beta;
  compute_forces(state);
  for (std::size_t k = 0; k < state.momenta.size(); ++k) state.momenta[k] += half * forces_.nuclear[k];
  state.p_beta += half * forces_.photon;
  ornstein_uhlenbeck(state);
}

SystemState langevin_step(const EnsembleConfig& config, SystemState state, const ThermostatParams& thermostat,
                          std::mt19937_64& rng) {
  ThermostatParams t = thermostat;
  t.seed = rng();
  LangevinIntegrator integrator(config, config.level, t, false);
  integrator.step(state);
  return state;
}

std::vector<double> Trajectory::local_dipole(int molecule) const {
  std::vector<double> out;
  if (local_dipoles.empty()) return out;
  out.reserve(size());
  for (std::size_t s = 0; s < size(); ++s)
    out.push_back(local_dipoles[s * static_cast<std::size_t>(n_molecules) + static_cast<std::size_t>(molecule)]);
  return out;
}

std::vector<double> Trajectory::bond_length(int molecule) const {
  std::vector<double> out;
  if (bond_lengths.empty()) return out;
  out.reserve(size());
  for (std::size_t s = 0; s < size(); ++s)
    out.push_back(bond_lengths[s * static_cast<std::size_t>(n_molecules) + static_cast<std::size_t>(molecule)]);
  return out;
}

SystemState initial_state(const EnsembleConfig& config, double radius, std::uint64_t seed) {
  if (!(radius >= 0.0)) throw ModelError("init_radius must be non-negative");
  SystemState s = SystemState::zeros(config);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-radius, radius);
  for (double& r : s.positions) r = radius > 0.0 ? u(rng) : 0.0;
  return s;
}

double bond_length(const SystemState& state, int i) {
  if (state.nuclei_per_molecule < 2) return state.position(i, 0);
  return state.position(i, 1) - state.position(i, 0);
}

namespace {

void check_bounds(const SystemState& s, double bound, long step) {
  auto bad = [bound](double v) { return !(std::abs(v) <= bound); };
  bool blown = bad(s.q_beta) || bad(s.p_beta);
  for (std::size_t k = 0; !blown && k < s.positions.size(); ++k) blown = bad(s.positions[k]) || bad(s.momenta[k]);
  if (blown)
    throw BlowUpError("trajectory left the blow-up bound " + std::to_string(bound) + " at step " + std::to_string(step),
                      step);
}

void record(Trajectory& t, const LangevinIntegrator& integrator, const SystemState& s, long step,
            const PropagationOptions& opt) {
  const ForceField& ff = integrator.force_field();
  const EnsembleConfig& c = ff.config();
  const DressedElectronSolution el = solve_dressed_electrons(c, s, ff.level());
  t.steps.push_back(step);
  t.q_beta.push_back(s.q_beta);
  t.collective_dipole.push_back(collective_dipole(c, s, el));
  t.local_dipole_first.push_back(molecular_dipole(c, s, el, 0));
  t.bond_length_first.push_back(bond_length(s, 0));
  t.kinetic_energy.push_back(ff.kinetic_energy(s));
  t.e_perp.push_back(el.e_perp);
  if (opt.record_energy && ff.level() != ApproximationLevel::be) t.potential_energy.push_back(ff.potential_energy(s));
  if (opt.record_per_molecule)
    for (int i = 0; i < c.n_molecules; ++i) {
      t.local_dipoles.push_back(molecular_dipole(c, s, el, i));
      t.bond_lengths.push_back(bond_length(s, i));
    }
}

}  // namespace

Trajectory propagate(const EnsembleConfig& config, const ThermostatParams& thermostat,
                     const PropagationOptions& options, SystemState initial) {
  if (options.n_steps < 1) throw ModelError("n_steps must be >= 1");
  if (options.sample_stride < 1) throw ModelError("sample_stride must be >= 1");
  if (!(options.blowup_bound > 0.0)) throw ModelError("blowup_bound must be positive");
  initial.check_shape(config);

  LangevinIntegrator integrator(config, config.level, thermostat, options.parallel_forces);
  Trajectory t;
  t.dt = thermostat.dt;
  t.sample_stride = options.sample_stride;
  t.n_molecules = config.n_molecules;
  const std::size_t n_samples = static_cast<std::size_t>(options.n_steps / options.sample_stride) + 1;
  for (auto* v : {&t.q_beta, &t.collective_dipole, &t.local_dipole_first, &t.bond_length_first, &t.kinetic_energy,
                  &t.e_perp})
    v->reserve(n_samples);
  if (options.record_per_molecule) {
    t.local_dipoles.reserve(n_samples * static_cast<std::size_t>(config.n_molecules));
    t.bond_lengths.reserve(n_samples * static_cast<std::size_t>(config.n_molecules));
  }

  SystemState s = std::move(initial);
  check_bounds(s, options.blowup_bound, 0);
  record(t, integrator, s, 0, options);
  for (long step = 1; step <= options.n_steps; ++step) {
    integrator.step(s);
    if (step % options.sample_stride == 0) {
      check_bounds(s, options.blowup_bound, step);
      record(t, integrator, s, step, options);
    }
  }
  check_bounds(s, options.blowup_bound, options.n_steps);
  t.final_state = std::move(s);
  return t;
}

}  // namespace vsc
