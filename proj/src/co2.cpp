#include "vsc/co2.hpp"

#include <algorithm>
#include <cmath>

#include "vsc/errors.hpp"

namespace vsc {

CO2Preset CO2Preset::standard() {
  CO2Preset p;
  const double k_a = kTargetSqrtKa * kTargetSqrtKa;
  p.k_n = k_a * p.mass_o * p.mass_c / p.total_mass();
  return p;
}

double CO2Preset::epsilon_a() const {
  const double m = total_mass();
  return std::sqrt(2.0 * m) * (charge_c - charge_o) / (3.0 * std::sqrt(mass_c) * std::sqrt(mass_o));
}

bool CO2Preset::is_neutral(double tol) const {
  return std::abs(2.0 * charge_o + charge_c - electron_charge) <= tol * std::max(1.0, std::abs(electron_charge));
}

EnsembleConfig CO2Preset::make_ensemble(int n_molecules, double lambda, double omega_beta,
                                        ApproximationLevel level) const {
  EnsembleConfig c;
  c.n_molecules = n_molecules;
  c.nuclear_masses = {mass_o, mass_c, mass_o};
  c.nuclear_charges = {charge_o, charge_c, charge_o};
  c.electron_charge = electron_charge;
  c.k_e = k_e;
  c.nuclear_potential = {NuclearPotential::Kind::chain, k_n};
  c.lambda = lambda;
  c.omega_beta = omega_beta;
  c.level = level;
  return c;
}

CO2Preset CO2Preset::from_ensemble(const EnsembleConfig& config) {
  if (config.nuclei_per_molecule() != 3 || config.nuclear_potential.kind != NuclearPotential::Kind::chain)
    throw ModelError("CO2 mode analysis needs three nuclei bound by a chain potential");
  const auto& m = config.nuclear_masses;
  const auto& z = config.nuclear_charges;
  if (m[0] != m[2] || z[0] != z[2]) throw ModelError("CO2 mode analysis needs a symmetric O-C-O molecule");
  CO2Preset p;
  p.mass_o = m[0];
  p.mass_c = m[1];
  p.charge_o = z[0];
  p.charge_c = z[1];
  p.electron_charge = config.electron_charge;
  p.k_e = config.k_e;
  p.k_n = config.nuclear_potential.k_n;
  if (!p.is_neutral()) throw ModelError("CO2 mode analysis only holds for neutral molecules (2 Z_O + Z_C = Z_e)");
  return p;
}

namespace {

struct ModeCoefficients {
  std::array<double, 3> t, s, a;
};

// rho_k = sum_n c_kn R_n; rows are orthonormal under the inverse-mass metric.
ModeCoefficients coefficients(const CO2Preset& p) {
  const double m = p.total_mass();
  const double st = 1.0 / std::sqrt(m);
  const double ss = std::sqrt(p.mass_o / 2.0);
  const double sa = std::sqrt(p.mass_o * p.mass_c / (2.0 * m));
  return {{p.mass_o * st, p.mass_c * st, p.mass_o * st}, {ss, 0.0, -ss}, {sa, -2.0 * sa, sa}};
}

}  // namespace

NormalModes normal_mode_transform(const CO2Preset& preset, std::span<const double> positions) {
  if (positions.size() % 3 != 0) throw ModelError("CO2 positions must hold three nuclei per molecule");
  const ModeCoefficients c = coefficients(preset);
  const std::size_t n = positions.size() / 3;
  NormalModes out;
  out.epsilon_a = preset.epsilon_a();
  out.rho_t.resize(n);
  out.rho_s.resize(n);
  out.rho_a.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* r = positions.data() + 3 * i;
    out.rho_t[i] = c.t[0] * r[0] + c.t[1] * r[1] + c.t[2] * r[2];
    out.rho_s[i] = c.s[0] * r[0] + c.s[2] * r[2];
    out.rho_a[i] = c.a[0] * r[0] + c.a[1] * r[1] + c.a[2] * r[2];
    out.rho_a_collective += out.rho_a[i];
  }
  return out;
}

std::vector<double> inverse_normal_mode_transform(const CO2Preset& preset, const NormalModes& modes) {
  const std::size_t n = modes.rho_t.size();
  if (modes.rho_s.size() != n || modes.rho_a.size() != n) throw ModelError("normal mode arrays differ in length");
  const ModeCoefficients c = coefficients(preset);
  const std::array<double, 3> mass{preset.mass_o, preset.mass_c, preset.mass_o};
  std::vector<double> r(3 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < 3; ++k)
      r[3 * i + k] = (c.t[k] * modes.rho_t[i] + c.s[k] * modes.rho_s[i] + c.a[k] * modes.rho_a[i]) / mass[k];
  return r;
}

ModeDynamicsReport analytic_mode_dynamics(const EnsembleConfig& config) {
  config.validate();
  if (config.level != ApproximationLevel::sc) throw ModelError("analytic mode dynamics is derived for the sc level");
  const CO2Preset p = CO2Preset::from_ensemble(config);

  ModeDynamicsReport r;
  const int n = config.n_molecules;
  const double lam = config.lambda;
  const double w = config.omega_beta;
  r.k_s = p.k_s();
  r.k_a = p.k_a();
  r.epsilon_a = p.epsilon_a();
  r.gamma2 = gamma_squared(n, lam, config.single_polarizability());
  const double coupling = r.epsilon_a * lam * r.gamma2;
  r.k_tilde_a = r.k_a + n * r.epsilon_a * coupling * lam;
  r.omega_tilde = std::sqrt(r.gamma2) * w;
  r.matrix = {{{r.k_tilde_a, n * coupling * w}, {coupling * w, r.gamma2 * w * w}}};

  const double trace = r.matrix[0][0] + r.matrix[1][1];
  // det = k_a gamma^2 omega^2 exactly; the lower root from det / upper avoids
  // cancellation when the coupling is weak.
  const double det = r.k_a * r.gamma2 * w * w;
  const double diff = r.matrix[0][0] - r.matrix[1][1];
  const double disc = std::sqrt(diff * diff + 4.0 * r.matrix[0][1] * r.matrix[1][0]);
  const double upper_sq = 0.5 * (trace + disc);
  const double lower_sq = det / upper_sq;
  r.upper_polariton = std::sqrt(upper_sq);
  r.lower_polariton = std::sqrt(lower_sq);
  r.dark_frequency = std::sqrt(r.k_a);
  r.symmetric_frequency = std::sqrt(r.k_s);
  r.rabi_splitting = r.upper_polariton - r.lower_polariton;
  return r;
}

std::vector<double> analytic_frequency_spectrum(const EnsembleConfig& config) {
  const ModeDynamicsReport r = analytic_mode_dynamics(config);
  const auto n = static_cast<std::size_t>(config.n_molecules);
  std::vector<double> f;
  f.reserve(3 * n + 1);
  f.insert(f.end(), n, 0.0);
  f.insert(f.end(), n, r.symmetric_frequency);
  f.insert(f.end(), n - 1, r.dark_frequency);
  f.push_back(r.lower_polariton);
  f.push_back(r.upper_polariton);
  std::sort(f.begin(), f.end());
  return f;
}

}  // namespace vsc
