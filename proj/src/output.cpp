#include "vsc/output.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "vsc/errors.hpp"
#include "vsc/units.hpp"

namespace vsc {

namespace {

std::ofstream open_output(const std::string& path) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  return out;
}

void write_header(std::ostream& out, const OutputHeader& h) {
  out << "# vsc " << h.version << "\n";
  out << "# config_hash " << h.config_hash << "\n";
  for (const auto& [k, v] : h.extra) out << "# " << k << " " << v << "\n";
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  return fmt::format("{}", v);
}

void write_csv(const std::string& path, const OutputHeader& header, const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out = open_output(path);
  write_header(out, header);
  for (std::size_t k = 0; k < columns.size(); ++k) out << (k ? "," : "") << columns[k];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << row[k];
    out << "\n";
  }
}

void write_trajectory_csv(const std::string& path, const Trajectory& t, const OutputHeader& header) {
  OutputHeader h = header;
  h.extra.emplace_back("dt", format_number(t.dt));
  h.extra.emplace_back("sample_stride", std::to_string(t.sample_stride));
  h.extra.emplace_back("n_molecules", std::to_string(t.n_molecules));
  std::ofstream out = open_output(path);
  write_header(out, h);
  out << "step,q_beta,collective_dipole,local_dipole_1,bond_length_1,kinetic_energy\n";
  for (std::size_t s = 0; s < t.size(); ++s)
    out << t.steps[s] << ',' << format_number(t.q_beta[s]) << ',' << format_number(t.collective_dipole[s]) << ','
        << format_number(t.local_dipole_first[s]) << ',' << format_number(t.bond_length_first[s]) << ','
        << format_number(t.kinetic_energy[s]) << '\n';
}

Trajectory read_trajectory_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read trajectory '" + path + "'");
  Trajectory t;
  std::string line;
  int line_no = 0;
  bool have_columns = false;
  auto parse = [&](std::string_view cell) {
    double v = 0.0;
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (res.ec != std::errc() && cell != "nan") throw Error(fmt::format("{}:{}: bad number '{}'", path, line_no, cell));
    return cell == "nan" ? NAN : v;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream meta(line.substr(1));
      std::string key, value;
      meta >> key >> value;
      if (key == "dt") t.dt = parse(value);
      if (key == "sample_stride") t.sample_stride = static_cast<int>(parse(value));
      if (key == "n_molecules") t.n_molecules = static_cast<int>(parse(value));
      continue;
    }
    if (!have_columns) {
      if (line != "step,q_beta,collective_dipole,local_dipole_1,bond_length_1,kinetic_energy")
        throw Error(fmt::format("{}:{}: unexpected trajectory columns", path, line_no));
      have_columns = true;
      continue;
    }
    std::vector<double> cells;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      cells.push_back(parse(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (cells.size() != 6) throw Error(fmt::format("{}:{}: expected 6 columns", path, line_no));
    t.steps.push_back(static_cast<long>(cells[0]));
    t.q_beta.push_back(cells[1]);
    t.collective_dipole.push_back(cells[2]);
    t.local_dipole_first.push_back(cells[3]);
    t.bond_length_first.push_back(cells[4]);
    t.kinetic_energy.push_back(cells[5]);
  }
  if (!(t.dt > 0.0)) throw Error(path + ": missing '# dt' header line");
  return t;
}

void write_spectrum_csv(const std::string& path, const std::vector<Spectrum>& spectra, const OutputHeader& header) {
  std::ofstream out = open_output(path);
  write_header(out, header);
  out << "frequency_au,frequency_cm1,intensity,observable\n";
  for (const Spectrum& s : spectra) {
    const std::string_view name = to_string(s.source);
    for (std::size_t k = 0; k < s.frequencies.size(); ++k)
      out << format_number(s.frequencies[k]) << ',' << format_number(units::hartree_to_wavenumber(s.frequencies[k]))
          << ',' << format_number(s.intensities[k]) << ',' << name << '\n';
  }
}

void write_peaks_jsonl(const std::string& path, const std::vector<PeakRecord>& peaks, const OutputHeader& header) {
  std::ofstream out = open_output(path);
  nlohmann::ordered_json h;
  h["vsc"] = header.version;
  h["config_hash"] = header.config_hash;
  for (const auto& [k, v] : header.extra) h[k] = v;
  out << h.dump() << "\n";
  for (const PeakRecord& r : peaks) {
    nlohmann::ordered_json j;
    j["observable"] = std::string(to_string(r.observable));
    j["frequency_au"] = r.peak.frequency;
    j["frequency_cm1"] = units::hartree_to_wavenumber(r.peak.frequency);
    j["md_frequency_au"] = r.md_frequency;
    j["intensity"] = r.peak.intensity;
    j["fwhm_cm1"] = units::hartree_to_wavenumber(r.peak.fwhm);
    out << j.dump() << "\n";
  }
}

}  // namespace vsc
