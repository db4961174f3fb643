#pragma once

namespace vsc::units {

// Hartree atomic units internally; wavenumbers only at I/O boundaries.
inline constexpr double kWavenumberPerHartree = 219474.6313632;

constexpr double hartree_to_wavenumber(double e) { return e * kWavenumberPerHartree; }
constexpr double wavenumber_to_hartree(double k) { return k / kWavenumberPerHartree; }

}  // namespace vsc::units
