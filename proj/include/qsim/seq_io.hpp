#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "qsim/experiment.hpp"
#include "qsim/pulses.hpp"

namespace qsim {

// Pulse-sequence file schema (one JSON document per sequence):
//   system: {spin: "7/2" | number, larmor_hz, spacing_hz}
//   events: [{kind, transitions (letters or [r,s] pairs), flip_pi,
//             phase_deg, duration_ms, model}]
// flip angles are in units of pi, phases in degrees, durations in ms.
nlohmann::json sequence_to_json(const PulseSequence& seq);
PulseSequence sequence_from_json(const nlohmann::json& j);

void save_sequence(const PulseSequence& seq, const std::string& path);
PulseSequence load_sequence(const std::string& path);

// gate-spec file: {dim, phases_pi: [...]}
DiagonalGateSpec gate_spec_from_json(const nlohmann::json& j);

std::string format_spin(double spin);
double parse_spin(const std::string& text);

std::string spectrum_csv(const std::vector<SpectralLine>& lines);
std::string spectrum_ascii(const std::vector<SpectralLine>& lines);

}  // namespace qsim
