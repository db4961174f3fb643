#include "vsc/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vsc/errors.hpp"

namespace vsc {

std::string_view to_string(ApproximationLevel level) {
  switch (level) {
    case ApproximationLevel::sc:
      return "sc";
    case ApproximationLevel::be:
      return "be";
    case ApproximationLevel::D:
      return "D";
  }
  return "?";
}

ApproximationLevel parse_level(std::string_view text) {
  if (text == "sc") return ApproximationLevel::sc;
  if (text == "be") return ApproximationLevel::be;
  if (text == "D" || text == "d") return ApproximationLevel::D;
  throw ModelError("unknown approximation level '" + std::string(text) + "' (expected sc, be or D)");
}

std::string_view to_string(NuclearPotential::Kind kind) {
  return kind == NuclearPotential::Kind::none ? "none" : "chain";
}

NuclearPotential::Kind parse_potential_kind(std::string_view text) {
  if (text == "none") return NuclearPotential::Kind::none;
  if (text == "chain") return NuclearPotential::Kind::chain;
  throw ModelError("unknown nuclear potential '" + std::string(text) + "' (expected none or chain)");
}

double NuclearPotential::energy(std::span<const double> molecule) const {
  if (kind == Kind::none) return 0.0;
  double e = 0.0;
  for (std::size_t n = 0; n + 1 < molecule.size(); ++n) {
    const double d = molecule[n] - molecule[n + 1];
    e += 0.5 * k_n * d * d;
  }
  return e;
}

void NuclearPotential::add_gradient(std::span<const double> molecule, std::span<double> grad) const {
  if (kind == Kind::none) return;
  for (std::size_t n = 0; n + 1 < molecule.size(); ++n) {
    const double f = k_n * (molecule[n] - molecule[n + 1]);
    grad[n] += f;
    grad[n + 1] -= f;
  }
}

std::vector<double> NuclearPotential::hessian(int nuclei) const {
  const auto nn = static_cast<std::size_t>(nuclei);
  std::vector<double> h(nn * nn, 0.0);
  if (kind == Kind::none) return h;
  for (std::size_t n = 0; n + 1 < nn; ++n) {
    h[n * nn + n] += k_n;
    h[(n + 1) * nn + n + 1] += k_n;
    h[n * nn + n + 1] -= k_n;
    h[(n + 1) * nn + n] -= k_n;
  }
  return h;
}

double EnsembleConfig::screened_charge(int n) const {
  return nuclear_charges[static_cast<std::size_t>(n)] - electron_charge / nuclei_per_molecule();
}

double EnsembleConfig::total_nuclear_charge() const {
  double z = 0.0;
  for (double c : nuclear_charges) z += c;
  return z;
}

bool EnsembleConfig::is_neutral(double tol) const {
  return std::abs(total_nuclear_charge() - electron_charge) <= tol * std::max(1.0, std::abs(electron_charge));
}

double EnsembleConfig::single_polarizability() const {
  return electron_charge * electron_charge / (nuclei_per_molecule() * k_e);
}

double EnsembleConfig::collective_strength() const {
  return lambda * lambda * n_molecules * single_polarizability();
}

void EnsembleConfig::validate() const {
  if (n_molecules < 1) throw ModelError("n_molecules must be >= 1");
  if (nuclear_masses.empty()) throw ModelError("nuclei_per_molecule must be >= 1");
  if (nuclear_charges.size() != nuclear_masses.size())
    throw ModelError("nuclear_charges must have one entry per nucleus");
  for (double m : nuclear_masses)
    if (!(m > 0.0)) throw ModelError("nuclear_masses must be positive");
  if (!(k_e > 0.0)) throw ModelError("k_e must be positive");
  if (!(omega_beta > 0.0)) throw ModelError("omega_beta must be positive");
  if (!(lambda >= 0.0)) throw ModelError("lambda must be non-negative");
  if (!std::isfinite(electron_charge)) throw ModelError("electron_charge must be finite");
  if (nuclear_potential.kind == NuclearPotential::Kind::chain && !(nuclear_potential.k_n >= 0.0))
    throw ModelError("nuclear_potential.k_n must be non-negative");
}

SystemState SystemState::zeros(const EnsembleConfig& config) {
  SystemState s;
  s.n_molecules = config.n_molecules;
  s.nuclei_per_molecule = config.nuclei_per_molecule();
  s.positions.assign(static_cast<std::size_t>(config.nuclear_dofs()), 0.0);
  s.momenta.assign(static_cast<std::size_t>(config.nuclear_dofs()), 0.0);
  return s;
}

double SystemState::field_on(int i) const {
  return local_fields.empty() ? global_field : global_field + local_fields[static_cast<std::size_t>(i)];
}

bool SystemState::has_external_field() const {
  if (global_field != 0.0) return true;
  for (double e : local_fields)
    if (e != 0.0) return true;
  return false;
}

void SystemState::check_shape(const EnsembleConfig& config) const {
  const auto dofs = static_cast<std::size_t>(config.nuclear_dofs());
  if (n_molecules != config.n_molecules || nuclei_per_molecule != config.nuclei_per_molecule() ||
      positions.size() != dofs || momenta.size() != dofs)
    throw ModelError("state shape does not match the ensemble configuration");
  if (!local_fields.empty() && local_fields.size() != static_cast<std::size_t>(n_molecules))
    throw ModelError("local_fields must be empty or hold one value per molecule");
}

double gamma_squared(int n, double lambda, double alpha_i) { return 1.0 / (1.0 + lambda * lambda * n * alpha_i); }

double screened_polarization(const EnsembleConfig& config, const SystemState& state) {
  const int nn = config.nuclei_per_molecule();
  double sum = 0.0;
  for (int i = 0; i < config.n_molecules; ++i) {
    double mol = 0.0;
    for (int n = 0; n < nn; ++n) mol += config.screened_charge(n) * state.position(i, n);
    sum += mol;
  }
  return config.lambda * sum;
}

namespace {

struct NuclearSums {
  std::vector<double> per_molecule;  // S_i = sum_n R_in
  double total = 0.0;                // sum_i S_i
  double polarization = 0.0;         // X = lambda sum Z_n R_in
  double field_total = 0.0;          // sum_i E_i
};

NuclearSums nuclear_sums(const EnsembleConfig& config, const SystemState& state) {
  NuclearSums s;
  const int nn = config.nuclei_per_molecule();
  s.per_molecule.resize(static_cast<std::size_t>(config.n_molecules));
  double x = 0.0;
  for (int i = 0; i < config.n_molecules; ++i) {
    double si = 0.0;
    double xi = 0.0;
    for (int n = 0; n < nn; ++n) {
      si += state.position(i, n);
      xi += config.nuclear_charges[static_cast<std::size_t>(n)] * state.position(i, n);
    }
    s.per_molecule[static_cast<std::size_t>(i)] = si;
    s.total += si;
    x += xi;
    s.field_total += state.field_on(i);
  }
  s.polarization = config.lambda * x;
  return s;
}

}  // namespace

DressedElectronSolution solve_dressed_electrons(const EnsembleConfig& config, const SystemState& state,
                                                ApproximationLevel level) {
  config.validate();
  state.check_shape(config);

  const int n_mol = config.n_molecules;
  const int nn = config.nuclei_per_molecule();
  const double lam = config.lambda;
  const double ze = config.electron_charge;
  const double ke = config.k_e;
  const double omega = config.omega_beta;
  const double q = state.q_beta;
  const double alpha_i = config.single_polarizability();
  const NuclearSums sums = nuclear_sums(config, state);
  const double x_screened = screened_polarization(config, state);

  DressedElectronSolution sol;
  sol.level = level;
  sol.r_expect.resize(static_cast<std::size_t>(n_mol));
  sol.nu1.resize(static_cast<std::size_t>(n_mol));
  sol.eta.resize(static_cast<std::size_t>(n_mol));

  // <r_i> = S_i / N_n + Z_e (E_i - E_perp) / (N_n k_e); E_perp is zero for be
  // because bare electrons do not see the cavity.
  const double response = ze / (nn * ke);
  double r_sum = 0.0;
  switch (level) {
    case ApproximationLevel::sc: {
      const double g2 = gamma_squared(n_mol, lam, alpha_i);
      sol.e_perp = g2 * lam * (omega * q - x_screened + lam * alpha_i * sums.field_total);
      sol.nu2 = std::sqrt(lam * lam * ze * ze + nn * ke);
      for (int i = 0; i < n_mol; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        sol.r_expect[ui] = sums.per_molecule[ui] / nn + response * (state.field_on(i) - sol.e_perp);
        r_sum += sol.r_expect[ui];
      }
      // Closed form of the lambda-weighted sum, regular at lambda = 0.
      const double a = config.collective_strength();
      sol.x_expect = g2 * (-(lam * ze / nn) * sums.total - a * (sums.polarization - omega * q) -
                           lam * alpha_i * sums.field_total);
      for (int i = 0; i < n_mol; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        const double mu = lam * ze * (r_sum - sol.r_expect[ui]);
        sol.nu1[ui] = -ke * sums.per_molecule[ui] + ze * lam * (-sums.polarization + omega * q + mu) -
                      ze * state.field_on(i);
      }
      break;
    }
    case ApproximationLevel::be: {
      sol.nu2 = std::sqrt(nn * ke);
      for (int i = 0; i < n_mol; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        sol.r_expect[ui] = sums.per_molecule[ui] / nn + response * state.field_on(i);
        sol.nu1[ui] = -ke * sums.per_molecule[ui] - ze * state.field_on(i);
        r_sum += sol.r_expect[ui];
      }
      sol.x_expect = -lam * ze * r_sum;
      sol.e_perp = lam * (omega * q - x_screened + lam * alpha_i * sums.field_total);
      break;
    }
    case ApproximationLevel::D: {
      sol.nu2 = std::sqrt(nn * ke);
      sol.e_perp = lam * omega * q;
      for (int i = 0; i < n_mol; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        sol.r_expect[ui] = sums.per_molecule[ui] / nn + response * (state.field_on(i) - sol.e_perp);
        sol.nu1[ui] = -ke * sums.per_molecule[ui] + ze * lam * omega * q - ze * state.field_on(i);
        r_sum += sol.r_expect[ui];
      }
      sol.x_expect = -lam * ze * r_sum;
      break;
    }
  }

  const double eta_scale = 1.0 / std::sqrt(2.0 * sol.nu2 * sol.nu2 * sol.nu2);
  for (std::size_t i = 0; i < sol.nu1.size(); ++i) sol.eta[i] = sol.nu1[i] * eta_scale;
  return sol;
}

double electronic_energy(const EnsembleConfig& config, const SystemState& state, ApproximationLevel level) {
  const DressedElectronSolution sol = solve_dressed_electrons(config, state, level);
  double e = 0.0;
  for (double nu1 : sol.nu1) e += 0.5 * sol.nu2 - nu1 * nu1 / (2.0 * sol.nu2 * sol.nu2);
  if (level != ApproximationLevel::sc) return e;

  const double zl2 = config.electron_charge * config.electron_charge * config.lambda * config.lambda;
  double r2 = 0.0;
  for (double r : sol.r_expect) r2 += r * r;
  return e - 0.5 * (sol.x_expect * sol.x_expect - zl2 * r2);
}

double molecular_dipole(const EnsembleConfig& config, const SystemState& state, const DressedElectronSolution& electrons,
                        int i) {
  double d = 0.0;
  for (int n = 0; n < config.nuclei_per_molecule(); ++n)
    d += config.nuclear_charges[static_cast<std::size_t>(n)] * state.position(i, n);
  return d - config.electron_charge * electrons.r_expect[static_cast<std::size_t>(i)];
}

double collective_dipole(const EnsembleConfig& config, const SystemState& state,
                         const DressedElectronSolution& electrons) {
  double d = 0.0;
  for (int i = 0; i < config.n_molecules; ++i) d += molecular_dipole(config, state, electrons, i);
  return d;
}

}  // namespace vsc
