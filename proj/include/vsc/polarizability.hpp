#pragma once

#include <optional>
#include <string_view>

#include "vsc/model.hpp"

namespace vsc {

/// Which dipole responds (whole ensemble or molecule i) to which field
/// (applied to every molecule or only to molecule j).
enum class ResponseScope { ensemble, local };
enum class PerturbationScope { ensemble, local };

struct PolarizabilityKind {
  ResponseScope response = ResponseScope::ensemble;
  PerturbationScope perturbation = PerturbationScope::ensemble;
};

/// Named shorthands for the four static responses.
inline constexpr PolarizabilityKind kEnsembleResponse{ResponseScope::ensemble, PerturbationScope::ensemble};
inline constexpr PolarizabilityKind kLocalResponse{ResponseScope::local, PerturbationScope::ensemble};
inline constexpr PolarizabilityKind kEnsembleToLocalField{ResponseScope::ensemble, PerturbationScope::local};
inline constexpr PolarizabilityKind kLocalToLocalField{ResponseScope::local, PerturbationScope::local};

/// How a polarizability was obtained.
///   self_consistent    : exact linear response of the dressed ensemble
///   truncated_feedback : dressed single-molecule response with the
///                        intermolecular feedback kept to first order in
///                        lambda^2 Z_e^2 (only differs for local fields)
///   perturbative       : sum over states of the dressed shifted oscillator
///   bare               : no cavity
enum class PolarizabilityMethod { self_consistent, truncated_feedback, perturbative, bare };

std::string_view to_string(PolarizabilityKind kind);
std::string_view to_string(PolarizabilityMethod method);

struct PolarizabilityReport {
  PolarizabilityKind kind;
  PolarizabilityMethod method = PolarizabilityMethod::self_consistent;
  double value = 0.0;
  int n = 1;
  double lambda = 0.0;
  /// N -> infinity value at fixed lambda_col = lambda sqrt(N), when defined.
  std::optional<double> tc_limit;
};

struct BarePolarizability {
  double ensemble = 0.0;  ///< N alpha_i
  double single = 0.0;    ///< alpha_i
};

BarePolarizability bare_polarizability(const EnsembleConfig& config);

/// i and j are zero-based molecule indices; they only matter for the
/// local/local kind, where i == j selects the diagonal response.
PolarizabilityReport self_consistent_polarizability(
    PolarizabilityKind kind, const EnsembleConfig& config, int i = 0, int j = 0,
    PolarizabilityMethod method = PolarizabilityMethod::self_consistent);

/// Sum-over-states response of one molecule (local) or of the ensemble.
PolarizabilityReport perturbative_polarizability(ResponseScope scope, const EnsembleConfig& config);

/// Large-N limit at lambda = lambda_col / sqrt(N). For the ensemble/ensemble
/// kind the limit of the value divided by N is returned.
double tavis_cummings_limit(PolarizabilityKind kind, double lambda_col, const EnsembleConfig& config,
                            bool same_molecule = true,
                            PolarizabilityMethod method = PolarizabilityMethod::self_consistent);

struct ScalingRecipeReport {
  int n = 1;
  double lambda_col = 0.0;
  double ensemble_local = 0.0;          ///< exact local response, N molecules at lambda_col / sqrt(N)
  double single_strong = 0.0;           ///< exact local response, 1 molecule at lambda_col
  double single_perturbative = 0.0;     ///< perturbative local response, 1 molecule at lambda_col
  double ensemble_perturbative = 0.0;   ///< perturbative local response, N molecules at lambda_col / sqrt(N)
  double identity_error = 0.0;          ///< max relative spread of the first three values
  double perturbative_gap = 0.0;        ///< relative gap of the fourth value
  bool passed = false;
};

/// Checks that the collectively dressed local response equals the response of
/// a single molecule at the collective coupling, and that the perturbative
/// ensemble value does not. Throws ModelError when the identity is violated
/// beyond 1e-12 relative.
ScalingRecipeReport verify_scaling_recipe(const EnsembleConfig& config, double lambda_col);

}  // namespace vsc
