#pragma once

#include <iosfwd>
#include <string>

#include "spectrode/esd.hpp"
#include "spectrode/psd.hpp"
#include "spectrode/support.hpp"

namespace spectrode {

/// PSD wire format: {"atoms": [[t, w], ...], "uniforms": [[a, b, w], ...]}.
std::string psd_to_json(const PopulationSpectrum& psd);
PopulationSpectrum psd_from_json(const std::string& text);
PopulationSpectrum load_psd(const std::string& path);

/// 17 significant digits: doubles survive a print/parse round trip.
std::string format_double(double value);

/// CSV columns: x, density, interval_index.
void esd_to_csv(const SpectralDensity& esd, std::ostream& out);
std::string esd_to_json(const SpectralDensity& esd);

/// {"K": ..., "intervals": [[l, u], ...], "zero_mass": ...}.
std::string support_to_json(const SupportReport& report, double gamma);

}  // namespace spectrode
