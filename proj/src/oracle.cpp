#include "vsc/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "vsc/cavity.hpp"
#include "vsc/co2.hpp"
#include "vsc/errors.hpp"
#include "vsc/forces.hpp"

namespace vsc::oracle {

using Eigen::MatrixXd;
using Eigen::VectorXd;

std::vector<std::string> QuadraticModel::labels() const {
  std::vector<std::string> out;
  for (int i = 0; i < n_molecules; ++i) out.push_back("r_" + std::to_string(i));
  for (int i = 0; i < n_molecules; ++i)
    for (int n = 0; n < nuclei_per_molecule; ++n) out.push_back("R_" + std::to_string(i) + "_" + std::to_string(n));
  out.push_back("q");
  return out;
}

QuadraticModel build_quadratic(const EnsembleConfig& config, ApproximationLevel level, const ExternalField& field,
                               double electron_mass) {
  config.validate();
  if (!(electron_mass > 0.0)) throw ModelError("electron mass must be positive");
  const int n_mol = config.n_molecules;
  const int nn = config.nuclei_per_molecule();
  const int dim = n_mol * (1 + nn) + 1;
  if (dim > kMaxCoordinates) throw ModelError("oracle is limited to " + std::to_string(kMaxCoordinates) + " coordinates");
  if (!field.local.empty() && static_cast<int>(field.local.size()) != n_mol)
    throw ModelError("local field needs one entry per molecule");

  QuadraticModel m;
  m.level = level;
  m.n_molecules = n_mol;
  m.nuclei_per_molecule = nn;
  m.omega_beta = config.omega_beta;
  m.lambda = config.lambda;
  m.electron_charge = config.electron_charge;
  m.mass = VectorXd::Ones(dim);
  m.linear = VectorXd::Zero(dim);
  m.dipole = VectorXd::Zero(dim);

  const double ke = config.k_e;
  const double lam = config.lambda;
  const double w = config.omega_beta;
  const int q = dim - 1;

  // Matter: electron-nucleus springs, W and the compensating term of V_i.
  MatrixXd matter = MatrixXd::Zero(dim, dim);
  const std::vector<double> w_hess = config.nuclear_potential.hessian(nn);
  for (int i = 0; i < n_mol; ++i) {
    const int e = m.electron(i);
    m.mass(e) = electron_mass;
    for (int n = 0; n < nn; ++n) {
      const int a = m.nucleus(i, n);
      m.mass(a) = config.nuclear_masses[static_cast<std::size_t>(n)];
      matter(a, a) += ke;
      matter(e, e) += ke;
      matter(a, e) -= ke;
      matter(e, a) -= ke;
      for (int k = 0; k < nn; ++k) {
        const int b = m.nucleus(i, k);
        matter(a, b) += w_hess[static_cast<std::size_t>(n * nn + k)] + ke / nn - (n == k ? ke : 0.0);
      }
    }
    m.linear(e) = -config.electron_charge * field.on(i);
    m.dipole(e) = -lam * config.electron_charge;
    for (int n = 0; n < nn; ++n) m.dipole(m.nucleus(i, n)) = lam * config.nuclear_charges[static_cast<std::size_t>(n)];
  }

  // Photon: 1/2 w^2 q^2 - w q d + 1/2 d^2 with d the lambda-weighted dipole.
  MatrixXd photon_linear = MatrixXd::Zero(dim, dim);
  photon_linear(q, q) = w * w;
  for (int k = 0; k < q; ++k) {
    photon_linear(q, k) -= w * m.dipole(k);
    photon_linear(k, q) -= w * m.dipole(k);
  }
  MatrixXd self_energy = MatrixXd::Zero(dim, dim);
  self_energy.topLeftCorner(q, q) = m.dipole.head(q) * m.dipole.head(q).transpose();

  switch (level) {
    case ApproximationLevel::sc:
      m.force = matter + photon_linear + self_energy;
      m.electronic = m.force;
      break;
    case ApproximationLevel::be: {
      m.force = matter + photon_linear + self_energy;
      m.electronic = m.force;
      // Bare electrons: no photon and no dipole feedback on the electron rows.
      for (int i = 0; i < n_mol; ++i) {
        const int e = m.electron(i);
        m.electronic.row(e) = matter.row(e);
        m.electronic.col(e) = matter.col(e);
      }
      break;
    }
    case ApproximationLevel::D:
      m.force = matter + photon_linear;
      m.electronic = m.force;
      break;
  }
  return m;
}

VectorXd slow_coordinates(const SystemState& state) {
  VectorXd s(static_cast<Eigen::Index>(state.positions.size()) + 1);
  for (std::size_t k = 0; k < state.positions.size(); ++k) s(static_cast<Eigen::Index>(k)) = state.positions[k];
  s(s.size() - 1) = state.q_beta;
  return s;
}

namespace {

struct Blocks {
  MatrixXd ee, es;
  VectorXd fe;
};

Blocks electron_blocks(const QuadraticModel& m) {
  const int ne = m.n_molecules;
  const int ns = m.slow_size();
  return {m.electronic.topLeftCorner(ne, ne), m.electronic.topRightCorner(ne, ns), m.linear.head(ne)};
}

VectorXd assemble(const QuadraticModel& m, const VectorXd& electrons, const VectorXd& slow) {
  VectorXd z(m.size());
  z.head(m.n_molecules) = electrons;
  z.tail(m.slow_size()) = slow;
  return z;
}

void check_slow(const QuadraticModel& m, const VectorXd& slow) {
  if (slow.size() != m.slow_size()) throw ModelError("slow coordinate vector has the wrong length");
}

}  // namespace

ElectronicMinimum electronic_minimize(const QuadraticModel& m, const VectorXd& slow) {
  check_slow(m, slow);
  const Blocks b = electron_blocks(m);
  Eigen::LLT<MatrixXd> llt(b.ee);
  if (llt.info() != Eigen::Success) throw ModelError("electronic block is not positive definite; no ground state");
  const VectorXd g = b.es * slow + b.fe;
  ElectronicMinimum out;
  out.electrons = llt.solve(-g);
  const VectorXd z = assemble(m, out.electrons, slow);
  out.total_energy = 0.5 * z.dot(m.force * z) + m.linear.dot(z);
  for (int i = 0; i < m.n_molecules; ++i) out.zero_point_mean_field += 0.5 * std::sqrt(b.ee(i, i));
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(b.ee, Eigen::EigenvaluesOnly);
  for (int i = 0; i < m.n_molecules; ++i) out.zero_point_exact += 0.5 * std::sqrt(eig.eigenvalues()(i));
  out.electronic_energy = 0.5 * g.dot(out.electrons) + out.zero_point_mean_field;
  return out;
}

VectorXd electronic_fixed_point(const QuadraticModel& m, const VectorXd& slow, double tol, int max_sweeps) {
  check_slow(m, slow);
  const Blocks b = electron_blocks(m);
  const VectorXd g = b.es * slow + b.fe;
  VectorXd r = VectorXd::Zero(m.n_molecules);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double change = 0.0, scale = 0.0;
    for (int i = 0; i < m.n_molecules; ++i) {
      const double rest = b.ee.row(i).dot(r) - b.ee(i, i) * r(i);
      const double next = -(g(i) + rest) / b.ee(i, i);
      change = std::max(change, std::abs(next - r(i)));
      scale = std::max(scale, std::abs(next));
      r(i) = next;
    }
    if (change <= tol * std::max(scale, 1.0)) return r;
  }
  throw ModelError("electronic fixed point did not converge");
}

VectorXd hellmann_feynman_forces(const QuadraticModel& m, const VectorXd& slow) {
  const ElectronicMinimum em = electronic_minimize(m, slow);
  const VectorXd z = assemble(m, em.electrons, slow);
  return -(m.force * z + m.linear).tail(m.slow_size());
}

double born_oppenheimer_energy(const QuadraticModel& m, const VectorXd& slow) {
  return electronic_minimize(m, slow).total_energy;
}

VectorXd finite_difference_forces(const QuadraticModel& m, const VectorXd& slow, double step) {
  VectorXd f(slow.size());
  for (Eigen::Index k = 0; k < slow.size(); ++k) {
    VectorXd p = slow, n = slow;
    p(k) += step;
    n(k) -= step;
    f(k) = -(born_oppenheimer_energy(m, p) - born_oppenheimer_energy(m, n)) / (2.0 * step);
  }
  return f;
}

double transverse_field(const QuadraticModel& m, const VectorXd& slow, const VectorXd& electrons) {
  const double q = slow(slow.size() - 1);
  if (m.level == ApproximationLevel::D) return m.lambda * m.omega_beta * q;
  const VectorXd z = assemble(m, electrons, slow);
  const double d = m.dipole.dot(z);
  return m.lambda * m.omega_beta * q - m.lambda * d;
}

MatrixXd effective_stiffness(const QuadraticModel& m) {
  const int ne = m.n_molecules;
  const int ns = m.slow_size();
  const Blocks b = electron_blocks(m);
  Eigen::LLT<MatrixXd> llt(b.ee);
  if (llt.info() != Eigen::Success) throw ModelError("electronic block is not positive definite; no ground state");
  const MatrixXd f_se = m.force.bottomLeftCorner(ns, ne);
  return m.force.bottomRightCorner(ns, ns) - f_se * llt.solve(b.es);
}

namespace {

double signed_sqrt(double e) { return e >= 0.0 ? std::sqrt(e) : -std::sqrt(-e); }

}  // namespace

NormalModeResult full_normal_modes(const QuadraticModel& m) {
  NormalModeResult out;
  const bool conservative = m.level != ApproximationLevel::be;

  if (conservative) {
    const VectorXd inv_sqrt = m.mass.cwiseSqrt().cwiseInverse();
    const MatrixXd mw = inv_sqrt.asDiagonal() * m.force * inv_sqrt.asDiagonal();
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(0.5 * (mw + mw.transpose()), Eigen::EigenvaluesOnly);
    for (Eigen::Index k = 0; k < eig.eigenvalues().size(); ++k) out.direct.push_back(signed_sqrt(eig.eigenvalues()(k)));
  }

  const MatrixXd keff = effective_stiffness(m);
  out.clamped_photon = signed_sqrt(keff(keff.rows() - 1, keff.cols() - 1));
  const VectorXd slow_inv = m.mass.tail(m.slow_size()).cwiseSqrt().cwiseInverse();
  const MatrixXd mw = slow_inv.asDiagonal() * keff * slow_inv.asDiagonal();
  std::vector<double> eigs;
  double scale = 0.0;
  if (conservative) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(0.5 * (mw + mw.transpose()), Eigen::EigenvaluesOnly);
    for (Eigen::Index k = 0; k < eig.eigenvalues().size(); ++k) eigs.push_back(eig.eigenvalues()(k));
  } else {
    Eigen::EigenSolver<MatrixXd> eig(mw, false);
    for (Eigen::Index k = 0; k < eig.eigenvalues().size(); ++k) {
      const auto v = eig.eigenvalues()(k);
      scale = std::max(scale, std::abs(v));
      if (std::abs(v.imag()) > 1e-10 * std::max(std::abs(v), 1e-300)) out.unstable = true;
      eigs.push_back(v.real());
    }
  }
  std::sort(eigs.begin(), eigs.end());
  for (double e : eigs) {
    scale = std::max(scale, std::abs(e));
    out.adiabatic.push_back(signed_sqrt(e));
  }
  out.min_eigenvalue = eigs.empty() ? 0.0 : eigs.front();
  if (out.min_eigenvalue < -1e-10 * scale) out.unstable = true;
  return out;
}

namespace {

ExternalField unit_field(const EnsembleConfig& config, PolarizabilityKind kind, int j, double strength) {
  ExternalField f;
  if (kind.perturbation == PerturbationScope::ensemble) {
    f.global = strength;
  } else {
    f.local.assign(static_cast<std::size_t>(config.n_molecules), 0.0);
    f.local[static_cast<std::size_t>(j)] = strength;
  }
  return f;
}

double polarization(const EnsembleConfig& config, PolarizabilityKind kind, int i, const VectorXd& electrons) {
  const double ze = config.electron_charge;
  if (kind.response == ResponseScope::local) return ze * electrons(i);
  return ze * electrons.sum();
}

double response_at(const EnsembleConfig& config, PolarizabilityKind kind, int i, int j, double strength) {
  const QuadraticModel m = build_quadratic(config, ApproximationLevel::sc, unit_field(config, kind, j, strength));
  const ElectronicMinimum em = electronic_minimize(m, VectorXd::Zero(m.slow_size()));
  return polarization(config, kind, i, em.electrons);
}

}  // namespace

StaticResponse static_response(const EnsembleConfig& config, PolarizabilityKind kind, int i, int j, double step) {
  if (i < 0 || j < 0 || i >= config.n_molecules || j >= config.n_molecules)
    throw ModelError("molecule index out of range");
  StaticResponse out;
  // Exact for a quadratic model: response of the minimizer to the field term.
  {
    const QuadraticModel m = build_quadratic(config, ApproximationLevel::sc, unit_field(config, kind, j, 1.0));
    const Blocks b = electron_blocks(m);
    const VectorXd r = b.ee.llt().solve(-b.fe);
    out.linear_solve = polarization(config, kind, i, r);
  }
  const double d1 = (response_at(config, kind, i, j, step) - response_at(config, kind, i, j, -step)) / (2.0 * step);
  const double h = 0.5 * step;
  const double d2 = (response_at(config, kind, i, j, h) - response_at(config, kind, i, j, -h)) / (2.0 * h);
  out.finite_difference = d1;
  out.richardson = (4.0 * d2 - d1) / 3.0;
  return out;
}

double sum_over_states_polarizability(const EnsembleConfig& config, int basis_size) {
  if (config.n_molecules != 1) throw ModelError("sum over states is implemented for a single molecule");
  if (basis_size < 4) throw ModelError("basis_size must be >= 4");
  const QuadraticModel m = build_quadratic(config, ApproximationLevel::sc);
  const double k = m.electronic(0, 0);
  // Basis of the bare oscillator; the cavity adds a pure r^2 perturbation.
  const double nu = std::sqrt(config.nuclei_per_molecule() * config.k_e);
  const int big = basis_size + 2;
  MatrixXd r = MatrixXd::Zero(big, big);
  for (int n = 0; n + 1 < big; ++n) {
    r(n, n + 1) = std::sqrt((n + 1) / (2.0 * nu));
    r(n + 1, n) = r(n, n + 1);
  }
  const MatrixXd r2 = (r * r).topLeftCorner(basis_size, basis_size);
  MatrixXd h = 0.5 * (k - nu * nu) * r2;
  for (int n = 0; n < basis_size; ++n) h(n, n) += nu * (n + 0.5);
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(h);
  const MatrixXd& v = eig.eigenvectors();
  const VectorXd& e = eig.eigenvalues();
  const VectorXd dip = config.electron_charge * (r.topLeftCorner(basis_size, basis_size) * v.col(0));
  double alpha = 0.0;
  for (int l = 1; l < basis_size; ++l) {
    const double t = v.col(l).dot(dip);
    alpha += 2.0 * t * t / (e(l) - e(0));
  }
  return alpha;
}

double relative_error(double a, double b, double floor) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

double relative_error(const VectorXd& a, const VectorXd& b, double floor) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  if (a.size() == 0) return 0.0;
  const double scale = std::max({a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff(), floor});
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

bool SweepReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed(); });
}

namespace {

enum Check {
  kElectrons,
  kDipole,
  kTransverse,
  kForces,
  kForcesFd,
  kElectronicEnergy,
  kFixedPoint,
  kPolEnsemble,
  kPolLocal,
  kPolEnsembleFromLocal,
  kPolLocalSame,
  kPolLocalOther,
  kPolFiniteDifference,
  kPhoton,
  kPolaritons,
  kCheckCount
};

const char* check_name(int c) {
  static const char* names[] = {"electron positions <r_i>",
                                "electronic dipole <x>",
                                "transverse field E_perp",
                                "forces (Hellmann-Feynman)",
                                "forces (finite difference)",
                                "electronic energy",
                                "fixed-point electrons",
                                "polarizability ensemble",
                                "polarizability local",
                                "polarizability ensemble <- local field",
                                "polarizability local <- own field",
                                "polarizability local <- other field",
                                "polarizability finite difference",
                                "renormalized photon gamma*omega",
                                "CO2 mode frequencies"};
  return names[c];
}

struct DrawErrors {
  std::array<double, kCheckCount> err{};
  std::array<int, kCheckCount> count{};
  void add(int c, double e) {
    err[static_cast<std::size_t>(c)] = std::max(err[static_cast<std::size_t>(c)], std::isnan(e) ? INFINITY : e);
    ++count[static_cast<std::size_t>(c)];
  }
};

VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

DrawErrors run_draw(std::uint64_t seed, int draw) {
  std::mt19937_64 rng(seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(draw + 1));
  auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  DrawErrors out;

  EnsembleConfig c;
  c.n_molecules = pick(1, 8);
  const int nn = pick(1, 4);
  for (int n = 0; n < nn; ++n) {
    c.nuclear_masses.push_back(uni(1e3, 5e4));
    c.nuclear_charges.push_back(uni(0.2, 3.0));
  }
  c.electron_charge = uni(0.5, 3.0);
  c.k_e = uni(0.5, 2.0);
  c.nuclear_potential = {NuclearPotential::Kind::chain, uni(0.1, 2.0)};
  c.lambda = uni(0.0, 0.5);
  c.omega_beta = uni(0.01, 1.0);

  SystemState s = SystemState::zeros(c);
  for (double& r : s.positions) r = uni(-1.0, 1.0);
  s.q_beta = uni(-1.0, 1.0);
  if (draw % 2 == 1) {
    s.global_field = uni(-0.5, 0.5);
    s.local_fields.resize(static_cast<std::size_t>(c.n_molecules));
    for (double& e : s.local_fields) e = uni(-0.5, 0.5);
  }
  ExternalField field;
  field.global = s.global_field;
  field.local = s.local_fields;
  const VectorXd slow = slow_coordinates(s);

  for (ApproximationLevel level : {ApproximationLevel::sc, ApproximationLevel::be, ApproximationLevel::D}) {
    const QuadraticModel m = build_quadratic(c, level, field);
    const ElectronicMinimum em = electronic_minimize(m, slow);
    const DressedElectronSolution sol = solve_dressed_electrons(c, s, level);
    out.add(kElectrons, relative_error(to_vector(sol.r_expect), em.electrons));
    out.add(kDipole, relative_error(sol.x_expect, -c.lambda * c.electron_charge * em.electrons.sum()));
    out.add(kTransverse, relative_error(sol.e_perp, transverse_field(m, slow, em.electrons)));
    out.add(kElectronicEnergy, relative_error(electronic_energy(c, s, level), em.electronic_energy));

    const ForceField ff(c, level);
    const ForceResult fr = ff.evaluate(s);
    VectorXd analytic(slow.size());
    analytic.head(slow.size() - 1) = to_vector(fr.nuclear);
    analytic(slow.size() - 1) = fr.photon;
    out.add(kForces, relative_error(analytic, hellmann_feynman_forces(m, slow)));
    if (level != ApproximationLevel::be) out.add(kForcesFd, relative_error(analytic, finite_difference_forces(m, slow)));
    if (level == ApproximationLevel::sc) out.add(kFixedPoint, relative_error(to_vector(sol.r_expect), electronic_fixed_point(m, slow)));
  }

  const int i = pick(0, c.n_molecules - 1);
  int j = pick(0, c.n_molecules - 1);
  auto pol = [&](int check, PolarizabilityKind kind, int a, int b) {
    const double analytic = self_consistent_polarizability(kind, c, a, b).value;
    const StaticResponse ref = static_response(c, kind, a, b);
    out.add(check, relative_error(analytic, ref.linear_solve));
    out.add(kPolFiniteDifference, relative_error(ref.richardson, ref.linear_solve, 1e-6));
  };
  pol(kPolEnsemble, kEnsembleResponse, i, j);
  pol(kPolLocal, kLocalResponse, i, j);
  pol(kPolEnsembleFromLocal, kEnsembleToLocalField, i, j);
  pol(kPolLocalSame, kLocalToLocalField, i, i);
  if (c.n_molecules > 1) {
    if (j == i) j = (i + 1) % c.n_molecules;
    pol(kPolLocalOther, kLocalToLocalField, i, j);
  }

  {
    const QuadraticModel m = build_quadratic(c, ApproximationLevel::sc);
    const MatrixXd keff = effective_stiffness(m);
    const double clamped = std::sqrt(keff(keff.rows() - 1, keff.cols() - 1));
    out.add(kPhoton, relative_error(renormalized_frequency(ApproximationLevel::sc, c).omega_out, clamped));
  }

  {
    const CO2Preset p = CO2Preset::standard();
    const double w = uni(0.5, 1.5) * std::sqrt(p.k_a());
    const EnsembleConfig co2 = p.make_ensemble(c.n_molecules, c.lambda, w);
    const std::vector<double> analytic = analytic_frequency_spectrum(co2);
    const NormalModeResult modes = full_normal_modes(build_quadratic(co2, ApproximationLevel::sc));
    // Skip the N translations, which are zero on both sides.
    const auto skip = static_cast<std::size_t>(co2.n_molecules);
    std::vector<double> a(analytic.begin() + static_cast<std::ptrdiff_t>(skip), analytic.end());
    std::vector<double> b(modes.adiabatic.begin() + static_cast<std::ptrdiff_t>(skip), modes.adiabatic.end());
    out.add(kPolaritons, relative_error(to_vector(a), to_vector(b)));
    const ModeDynamicsReport rep = analytic_mode_dynamics(co2);
    for (double f : {rep.lower_polariton, rep.upper_polariton}) {
      double best = INFINITY;
      for (double g : b) best = std::min(best, relative_error(f, g));
      out.add(kPolaritons, best);
    }
  }
  return out;
}

}  // namespace

SweepReport verification_sweep(int draws, std::uint64_t seed, double tolerance) {
  if (draws < 1) throw ModelError("draws must be >= 1");
  const auto start = std::chrono::steady_clock::now();
  std::vector<DrawErrors> results(static_cast<std::size_t>(draws));
#pragma omp parallel for schedule(dynamic)
  for (int d = 0; d < draws; ++d) results[static_cast<std::size_t>(d)] = run_draw(seed, d);

  SweepReport report;
  report.draws = draws;
  report.seed = seed;
  for (int c = 0; c < kCheckCount; ++c) {
    CheckResult r;
    r.name = check_name(c);
    // Finite differences carry round-off of order eps * |V| / step.
    r.tolerance = (c == kForcesFd || c == kPolFiniteDifference) ? 1e-6 : tolerance;
    for (const DrawErrors& d : results) {
      r.max_error = std::max(r.max_error, d.err[static_cast<std::size_t>(c)]);
      r.count += d.count[static_cast<std::size_t>(c)];
    }
    report.checks.push_back(r);
  }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace vsc::oracle
