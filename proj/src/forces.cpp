#include "vsc/forces.hpp"

#include <algorithm>

#include "vsc/errors.hpp"

namespace vsc {

ForceField::ForceField(EnsembleConfig config, ApproximationLevel level)
    : config_(std::move(config)), level_(level) {
  config_.validate();
  nn_ = config_.nuclei_per_molecule();
  alpha_i_ = config_.single_polarizability();
  gamma2_ = gamma_squared(config_.n_molecules, config_.lambda, alpha_i_);
  screened_charge_.resize(static_cast<std::size_t>(nn_));
  effective_charge_.resize(static_cast<std::size_t>(nn_));
  for (int n = 0; n < nn_; ++n) {
    const auto un = static_cast<std::size_t>(n);
    screened_charge_[un] = config_.screened_charge(n);
    effective_charge_[un] = level_ == ApproximationLevel::be ? config_.nuclear_charges[un] : screened_charge_[un];
  }
  switch (level_) {
    case ApproximationLevel::sc:
      photon_stiffness_ = gamma2_;
      photon_coupling_ = gamma2_;
      break;
    case ApproximationLevel::be:
      photon_stiffness_ = 1.0;
      photon_coupling_ = 1.0;
      break;
    case ApproximationLevel::D:
      photon_stiffness_ = 1.0 - config_.collective_strength();
      photon_coupling_ = 1.0;
      break;
  }
}

void ForceField::molecule_partials(const SystemState& state, int i, double* screened, double* field) const {
  double x = 0.0;
  for (int n = 0; n < nn_; ++n) x += screened_charge_[static_cast<std::size_t>(n)] * state.position(i, n);
  *screened = x;
  *field = state.field_on(i);
}

double ForceField::driving_field(const SystemState& state, const Sums& s) const {
  const double lam = config_.lambda;
  const double wq = config_.omega_beta * state.q_beta;
  switch (level_) {
    case ApproximationLevel::sc:
      return gamma2_ * lam * (wq - s.screened + lam * alpha_i_ * s.field);
    case ApproximationLevel::be:
      return lam * (wq - s.screened + lam * alpha_i_ * s.field);
    case ApproximationLevel::D:
      return lam * wq;
  }
  return 0.0;
}

void ForceField::molecule_forces(const SystemState& state, int i, double e_drive, double* out) const {
  const auto mol = state.molecule(i);
  std::fill(out, out + nn_, 0.0);
  config_.nuclear_potential.add_gradient(mol, std::span<double>(out, static_cast<std::size_t>(nn_)));
  const double field_pull = config_.electron_charge / nn_ * state.field_on(i);
  for (int n = 0; n < nn_; ++n)
    out[n] = -out[n] + effective_charge_[static_cast<std::size_t>(n)] * e_drive + field_pull;
}

double ForceField::photon_force(const SystemState& state, const Sums& s) const {
  const double w = config_.omega_beta;
  const double drive = s.screened - config_.lambda * alpha_i_ * s.field;
  return -photon_stiffness_ * w * w * state.q_beta + photon_coupling_ * w * drive;
}

void ForceField::evaluate_serial(const SystemState& state, ForceResult& out) const {
  const int n_mol = config_.n_molecules;
  Sums s;
  for (int i = 0; i < n_mol; ++i) {
    double x = 0.0, e = 0.0;
    molecule_partials(state, i, &x, &e);
    s.screened += x;
    s.field += e;
  }
  s.screened *= config_.lambda;

  out.nuclear.resize(state.positions.size());
  out.e_perp = driving_field(state, s);
  for (int i = 0; i < n_mol; ++i)
    molecule_forces(state, i, out.e_perp, out.nuclear.data() + static_cast<std::ptrdiff_t>(i) * nn_);
  out.photon = photon_force(state, s);
}

void ForceField::evaluate_parallel(const SystemState& state, ForceResult& out) const {
  const int n_mol = config_.n_molecules;
  out.scratch.resize(2 * static_cast<std::size_t>(n_mol));
  out.nuclear.resize(state.positions.size());
  double* partial = out.scratch.data();
  const bool threaded = n_mol >= kParallelThreshold;

#pragma omp parallel for schedule(static) if (threaded)
  for (int i = 0; i < n_mol; ++i) molecule_partials(state, i, partial + 2 * i, partial + 2 * i + 1);

  // Deterministic reduction in molecule order.
  Sums s;
  for (int i = 0; i < n_mol; ++i) {
    s.screened += partial[2 * i];
    s.field += partial[2 * i + 1];
  }
  s.screened *= config_.lambda;

  const double e_drive = driving_field(state, s);
  out.e_perp = e_drive;
  double* forces = out.nuclear.data();
#pragma omp parallel for schedule(static) if (threaded)
  for (int i = 0; i < n_mol; ++i) molecule_forces(state, i, e_drive, forces + static_cast<std::ptrdiff_t>(i) * nn_);
  out.photon = photon_force(state, s);
}

ForceResult ForceField::evaluate(const SystemState& state) const {
  ForceResult r;
  evaluate_serial(state, r);
  return r;
}

double ForceField::potential_energy(const SystemState& state) const {
  if (level_ == ApproximationLevel::be)
    throw ModelError("the be equations of motion are not conservative; no potential energy");
  const double lam = config_.lambda;
  const double w = config_.omega_beta;
  const double q = state.q_beta;
  double w_sum = 0.0;
  double screened = 0.0;
  double field = 0.0;
  double field_work = 0.0;
  for (int i = 0; i < config_.n_molecules; ++i) {
    w_sum += config_.nuclear_potential.energy(state.molecule(i));
    double x = 0.0, e = 0.0, sum_r = 0.0;
    molecule_partials(state, i, &x, &e);
    for (double r : state.molecule(i)) sum_r += r;
    screened += x;
    field += e;
    field_work += config_.electron_charge / nn_ * e * sum_r;
  }
  screened *= lam;
  const double shifted = screened - lam * alpha_i_ * field;
  if (level_ == ApproximationLevel::sc) {
    const double d = w * q - shifted;
    return w_sum + 0.5 * gamma2_ * d * d - field_work;
  }
  return w_sum + 0.5 * photon_stiffness_ * w * w * q * q - w * q * shifted - field_work;
}

double ForceField::kinetic_energy(const SystemState& state) const {
  double k = 0.0;
  for (int i = 0; i < config_.n_molecules; ++i)
    for (int n = 0; n < nn_; ++n) {
      const double p = state.momenta[static_cast<std::size_t>(i * nn_ + n)];
      k += p * p / (2.0 * config_.nuclear_masses[static_cast<std::size_t>(n)]);
    }
  return k + 0.5 * state.p_beta * state.p_beta;
}

}  // namespace vsc
