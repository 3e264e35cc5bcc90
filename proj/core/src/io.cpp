#include "spectrode/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace spectrode {

using nlohmann::json;

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string psd_to_json(const PopulationSpectrum& psd) {
  json j;
  j["atoms"] = json::array();
  for (const auto& a : psd.atoms()) j["atoms"].push_back({a.t, a.w});
  j["uniforms"] = json::array();
  for (const auto& u : psd.uniforms()) j["uniforms"].push_back({u.a, u.b, u.w});
  return j.dump();
}

PopulationSpectrum psd_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::FileError, std::string("bad PSD JSON: ") + e.what());
  }
  std::vector<Atom> atoms;
  std::vector<UniformComponent> uniforms;
  try {
    if (j.contains("atoms"))
      for (const auto& a : j["atoms"])
        atoms.push_back({a.at(0).get<double>(), a.at(1).get<double>()});
    if (j.contains("uniforms"))
      for (const auto& u : j["uniforms"])
        uniforms.push_back({u.at(0).get<double>(), u.at(1).get<double>(),
                            u.at(2).get<double>()});
  } catch (const json::exception& e) {
    throw Error(ErrorCode::FileError,
                std::string("bad PSD component: ") + e.what());
  }
  return validate_psd(std::move(atoms), std::move(uniforms));
}

PopulationSpectrum load_psd(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::FileError, "cannot open PSD file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return psd_from_json(buffer.str());
}

void esd_to_csv(const SpectralDensity& esd, std::ostream& out) {
  out << "x,density,interval_index\n";
  for (std::size_t k = 0; k < esd.intervals.size(); ++k) {
    const auto& iv = esd.intervals[k];
    for (std::size_t j = 0; j < iv.grid.size(); ++j) {
      out << format_double(iv.grid[j]) << ',' << format_double(iv.values[j])
          << ',' << k << '\n';
    }
  }
}

std::string esd_to_json(const SpectralDensity& esd) {
  json j;
  j["gamma"] = esd.gamma;
  j["zero_mass"] = esd.zero_mass;
  j["intervals"] = json::array();
  for (const auto& iv : esd.intervals) {
    json item;
    item["lower"] = iv.lower;
    item["upper"] = iv.upper;
    item["x"] = iv.grid;
    item["density"] = iv.values;
    j["intervals"].push_back(std::move(item));
  }
  return j.dump();
}

std::string support_to_json(const SupportReport& report, double gamma) {
  json j;
  j["K"] = report.K();
  j["intervals"] = json::array();
  for (const auto& e : report.endpoints)
    j["intervals"].push_back({e.lower, e.upper});
  j["zero_mass"] = gamma > 1.0 ? 1.0 - 1.0 / gamma : 0.0;
  return j.dump();
}

}  // namespace spectrode
