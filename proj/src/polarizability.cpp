#include "vsc/polarizability.hpp"

#include <algorithm>
#include <cmath>

#include "vsc/errors.hpp"

namespace vsc {

std::string_view to_string(PolarizabilityKind kind) {
  const bool ens_resp = kind.response == ResponseScope::ensemble;
  const bool ens_pert = kind.perturbation == PerturbationScope::ensemble;
  if (ens_resp && ens_pert) return "ensemble";
  if (!ens_resp && ens_pert) return "local";
  if (ens_resp) return "ensemble_from_local_field";
  return "local_from_local_field";
}

std::string_view to_string(PolarizabilityMethod method) {
  switch (method) {
    case PolarizabilityMethod::self_consistent:
      return "self_consistent";
    case PolarizabilityMethod::truncated_feedback:
      return "truncated_feedback";
    case PolarizabilityMethod::perturbative:
      return "perturbative";
    case PolarizabilityMethod::bare:
      return "bare";
  }
  return "?";
}

BarePolarizability bare_polarizability(const EnsembleConfig& config) {
  config.validate();
  const double alpha_i = config.single_polarizability();
  return {config.n_molecules * alpha_i, alpha_i};
}

namespace {

void check_index(const EnsembleConfig& config, int idx, const char* name) {
  if (idx < 0 || idx >= config.n_molecules)
    throw ModelError(std::string("molecule index ") + name + " out of range");
}

// Exact static response. The response matrix of molecule dipoles to
// molecule fields is alpha_i (delta_ij - lambda^2 alpha_i gamma^2(N)).
double exact_value(PolarizabilityKind kind, int n, double lambda, double alpha_i, bool same) {
  const double g2 = gamma_squared(n, lambda, alpha_i);
  const double off = -lambda * lambda * alpha_i * alpha_i * g2;
  if (kind.perturbation == PerturbationScope::ensemble)
    return kind.response == ResponseScope::ensemble ? n * alpha_i * g2 : alpha_i * g2;
  if (kind.response == ResponseScope::ensemble) return alpha_i * g2;
  return same ? alpha_i + off : off;
}

double truncated_value(PolarizabilityKind kind, int n, double lambda, double alpha_i, double ze, bool same) {
  if (kind.perturbation == PerturbationScope::ensemble) return exact_value(kind, n, lambda, alpha_i, same);
  const double g2_single = gamma_squared(1, lambda, alpha_i);
  const double feedback = lambda * lambda * ze * ze;
  if (kind.response == ResponseScope::ensemble) return alpha_i * g2_single * (1.0 - (n - 1) * feedback);
  return same ? alpha_i * g2_single : -feedback * alpha_i * g2_single;
}

}  // namespace

PolarizabilityReport self_consistent_polarizability(PolarizabilityKind kind, const EnsembleConfig& config, int i,
                                                    int j, PolarizabilityMethod method) {
  config.validate();
  check_index(config, i, "i");
  check_index(config, j, "j");
  if (method == PolarizabilityMethod::perturbative)
    throw ModelError("use perturbative_polarizability for the sum-over-states route");

  const int n = config.n_molecules;
  const double alpha_i = config.single_polarizability();
  const bool same = i == j;

  PolarizabilityReport report;
  report.kind = kind;
  report.method = method;
  report.n = n;
  report.lambda = config.lambda;

  switch (method) {
    case PolarizabilityMethod::bare:
      report.value = exact_value(kind, n, 0.0, alpha_i, same);
      return report;
    case PolarizabilityMethod::truncated_feedback:
      report.value = truncated_value(kind, n, config.lambda, alpha_i, config.electron_charge, same);
      break;
    default:
      report.value = exact_value(kind, n, config.lambda, alpha_i, same);
      break;
  }
  report.tc_limit = tavis_cummings_limit(kind, config.lambda * std::sqrt(static_cast<double>(n)), config, same, method);
  return report;
}

PolarizabilityReport perturbative_polarizability(ResponseScope scope, const EnsembleConfig& config) {
  config.validate();
  const double ze = config.electron_charge;
  // Only the first excited state of the shifted oscillator contributes:
  // 2 Z_e^2 |<0|r|1>|^2 / nu2 = Z_e^2 / nu2^2.
  const double nu2_sq = config.lambda * config.lambda * ze * ze + config.nuclei_per_molecule() * config.k_e;
  const double local = ze * ze / nu2_sq;

  PolarizabilityReport report;
  report.kind = scope == ResponseScope::ensemble ? kEnsembleResponse : kLocalResponse;
  report.method = PolarizabilityMethod::perturbative;
  report.n = config.n_molecules;
  report.lambda = config.lambda;
  report.value = scope == ResponseScope::ensemble ? config.n_molecules * local : local;
  // At fixed lambda_col the perturbative local response tends to alpha_i.
  report.tc_limit = config.single_polarizability();
  return report;
}

double tavis_cummings_limit(PolarizabilityKind kind, double lambda_col, const EnsembleConfig& config,
                            bool same_molecule, PolarizabilityMethod method) {
  if (!(lambda_col >= 0.0)) throw ModelError("lambda_col must be non-negative");
  const double alpha_i = config.single_polarizability();
  const double g2_col = gamma_squared(1, lambda_col, alpha_i);
  const bool local_field = kind.perturbation == PerturbationScope::local;

  if (method == PolarizabilityMethod::bare || method == PolarizabilityMethod::perturbative) {
    if (local_field && kind.response == ResponseScope::local && !same_molecule) return 0.0;
    return alpha_i;
  }
  if (!local_field) return alpha_i * g2_col;
  if (kind.response == ResponseScope::local) return same_molecule ? alpha_i : 0.0;
  if (method == PolarizabilityMethod::truncated_feedback) {
    const double ze = config.electron_charge;
    return (1.0 - lambda_col * lambda_col * ze * ze) * alpha_i;
  }
  return alpha_i * g2_col;
}

ScalingRecipeReport verify_scaling_recipe(const EnsembleConfig& config, double lambda_col) {
  config.validate();
  if (!(lambda_col >= 0.0)) throw ModelError("lambda_col must be non-negative");

  ScalingRecipeReport r;
  r.n = config.n_molecules;
  r.lambda_col = lambda_col;

  EnsembleConfig ensemble = config;
  ensemble.lambda = lambda_col / std::sqrt(static_cast<double>(config.n_molecules));
  EnsembleConfig single = config;
  single.n_molecules = 1;
  single.lambda = lambda_col;

  r.ensemble_local = self_consistent_polarizability(kLocalResponse, ensemble).value;
  r.single_strong = self_consistent_polarizability(kLocalResponse, single).value;
  r.single_perturbative = perturbative_polarizability(ResponseScope::local, single).value;
  r.ensemble_perturbative = perturbative_polarizability(ResponseScope::local, ensemble).value;

  const double ref = r.single_strong;
  r.identity_error = std::max({std::abs(r.ensemble_local - ref), std::abs(r.single_perturbative - ref)}) / std::abs(ref);
  r.perturbative_gap = std::abs(r.ensemble_perturbative - ref) / std::abs(ref);

  if (r.identity_error > 1e-12)
    throw ModelError("scaling identity violated: relative error " + std::to_string(r.identity_error));

  const bool expect_gap = config.n_molecules >= 2 && lambda_col > 0.0;
  r.passed = expect_gap ? r.perturbative_gap > 1e-12 : r.perturbative_gap <= 1e-12;
  return r;
}

}  // namespace vsc
