#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "vsc/model.hpp"
#include "vsc/polarizability.hpp"

// Brute-force reference: the full electron + nucleus + photon quadratic
// potential assembled term by term and handled with dense linear algebra.
// Nothing here calls the closed-form solvers.
namespace vsc::oracle {

/// Largest coordinate count the dense routines accept.
inline constexpr int kMaxCoordinates = 400;

struct ExternalField {
  double global = 0.0;
  std::vector<double> local;  ///< empty or one entry per molecule
  double on(int i) const { return local.empty() ? global : global + local[static_cast<std::size_t>(i)]; }
};

/// Potential 1/2 z^T K z + f^T z over z = (electrons, nuclei, photon).
/// `electronic` is the stiffness the electrons relax in; `force` is the one
/// the nuclei and photon feel. They differ only at the be level.
struct QuadraticModel {
  ApproximationLevel level = ApproximationLevel::sc;
  int n_molecules = 0;
  int nuclei_per_molecule = 0;
  Eigen::VectorXd mass;
  Eigen::MatrixXd electronic;
  Eigen::MatrixXd force;
  Eigen::VectorXd linear;
  Eigen::VectorXd dipole;  ///< lambda-weighted dipole coefficients of each coordinate
  double omega_beta = 0.0;
  double lambda = 0.0;
  double electron_charge = 0.0;

  int size() const { return static_cast<int>(mass.size()); }
  int electron(int i) const { return i; }
  int nucleus(int i, int n) const { return n_molecules + i * nuclei_per_molecule + n; }
  int photon() const { return size() - 1; }
  int slow_size() const { return size() - n_molecules; }
  std::vector<std::string> labels() const;
};

QuadraticModel build_quadratic(const EnsembleConfig& config, ApproximationLevel level,
                               const ExternalField& field = {}, double electron_mass = 1.0);

/// Slow coordinates (nuclei then photon) from a state.
Eigen::VectorXd slow_coordinates(const SystemState& state);

struct ElectronicMinimum {
  Eigen::VectorXd electrons;
  double total_energy = 0.0;       ///< full potential at the minimum
  double electronic_energy = 0.0;  ///< electron-dependent part plus mean-field zero point
  double zero_point_mean_field = 0.0;
  double zero_point_exact = 0.0;
};

/// Solves the stationarity condition of the electron block at fixed slow
/// coordinates. Throws ModelError when that block is not positive definite.
ElectronicMinimum electronic_minimize(const QuadraticModel& model, const Eigen::VectorXd& slow);

/// Gauss-Seidel relaxation, one electron at a time in the field of the others.
Eigen::VectorXd electronic_fixed_point(const QuadraticModel& model, const Eigen::VectorXd& slow, double tol = 1e-14,
                                       int max_sweeps = 100000);

/// -dV/dz on the slow coordinates with the electrons at their minimum.
Eigen::VectorXd hellmann_feynman_forces(const QuadraticModel& model, const Eigen::VectorXd& slow);
/// Central-difference gradient of the electron-minimized potential.
Eigen::VectorXd finite_difference_forces(const QuadraticModel& model, const Eigen::VectorXd& slow, double step = 1e-5);
double born_oppenheimer_energy(const QuadraticModel& model, const Eigen::VectorXd& slow);

/// Transverse field lambda (omega q - d) seen at the minimum; the D level has
/// no dipole feedback and returns lambda omega q.
double transverse_field(const QuadraticModel& model, const Eigen::VectorXd& slow, const Eigen::VectorXd& electrons);

struct NormalModeResult {
  std::vector<double> direct;     ///< full system, signed frequencies, ascending
  std::vector<double> adiabatic;  ///< slow subspace after electron elimination
  double clamped_photon = 0.0;    ///< sqrt of the photon diagonal of the eliminated stiffness
  double min_eigenvalue = 0.0;    ///< of the mass-weighted adiabatic matrix
  bool unstable = false;          ///< some eigenvalue below -tol or complex
};

/// Signed frequency: sign(e) sqrt(|e|).
NormalModeResult full_normal_modes(const QuadraticModel& model);

/// Electron-eliminated slow stiffness K_ss - K_se Kee^-1 K_es.
Eigen::MatrixXd effective_stiffness(const QuadraticModel& model);

struct StaticResponse {
  double linear_solve = 0.0;
  double finite_difference = 0.0;
  double richardson = 0.0;
};

/// Response of the electronic polarization Z_e sum_i r_i (all i, or one i) to
/// a unit field on every molecule or on molecule j, at fixed slow coordinates.
StaticResponse static_response(const EnsembleConfig& config, PolarizabilityKind kind, int i = 0, int j = 0,
                               double step = 1e-4);

/// Single-molecule polarizability by diagonalizing the dressed electron in a
/// truncated oscillator basis and summing over excited states.
double sum_over_states_polarizability(const EnsembleConfig& config, int basis_size = 60);

struct CheckResult {
  std::string name;
  int count = 0;
  double max_error = 0.0;
  double tolerance = 0.0;
  bool passed() const { return max_error <= tolerance; }
};

struct SweepReport {
  int draws = 0;
  std::uint64_t seed = 0;
  double seconds = 0.0;
  std::vector<CheckResult> checks;
  bool passed() const;
};

/// Random configurations with N in [1, 8], N_n in [1, 4], lambda in
/// [0, 0.5]; compares every closed form against this module.
SweepReport verification_sweep(int draws = 200, std::uint64_t seed = 20240601, double tolerance = 1e-8);

/// max |a - b| / max(|a|, |b|, floor)
double relative_error(double a, double b, double floor = 1e-12);
double relative_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double floor = 1e-12);

}  // namespace vsc::oracle
