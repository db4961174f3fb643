#pragma once

#include <string>
#include <utility>
#include <vector>

#include "vsc/integrator.hpp"
#include "vsc/spectra.hpp"

namespace vsc {

/// Provenance written at the top of every output file.
struct OutputHeader {
  std::string config_hash;
  std::string version;
  std::vector<std::pair<std::string, std::string>> extra;
};

/// Generic CSV: `#` metadata lines, one column-name row, then rows.
void write_csv(const std::string& path, const OutputHeader& header, const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows);

/// step, q_beta, collective_dipole, local_dipole_1, bond_length_1, kinetic_energy
void write_trajectory_csv(const std::string& path, const Trajectory& trajectory, const OutputHeader& header);

/// Reads back what write_trajectory_csv wrote (dt and stride from the header).
Trajectory read_trajectory_csv(const std::string& path);

/// frequency_au, frequency_cm1, intensity, observable; spectra are stacked.
void write_spectrum_csv(const std::string& path, const std::vector<Spectrum>& spectra, const OutputHeader& header);

struct PeakRecord {
  Observable observable = Observable::collective_dipole;
  Peak peak;          ///< corrected to the physical frequency
  double md_frequency = 0.0;
};

/// One JSON object per line; the first line carries the header.
void write_peaks_jsonl(const std::string& path, const std::vector<PeakRecord>& peaks, const OutputHeader& header);

/// Shortest round-trip decimal form used in all CSV cells.
std::string format_number(double v);

}  // namespace vsc
