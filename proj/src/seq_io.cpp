#include "qsim/seq_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace qsim {

using nlohmann::json;

namespace {

std::string kind_name(PulseKind k) {
  switch (k) {
    case PulseKind::selective: return "selective";
    case PulseKind::multi_frequency: return "multi_frequency";
    case PulseKind::hard: return "hard";
    case PulseKind::delay: return "delay";
  }
  throw std::logic_error("unreachable");
}

PulseKind kind_from_name(const std::string& s) {
  if (s == "selective") return PulseKind::selective;
  if (s == "multi_frequency") return PulseKind::multi_frequency;
  if (s == "hard") return PulseKind::hard;
  if (s == "delay") return PulseKind::delay;
  throw std::invalid_argument("unknown pulse kind: " + s);
}

std::string model_name(PulseModel m) {
  switch (m) {
    case PulseModel::ideal: return "ideal";
    case PulseModel::refocused_ideal: return "refocused_ideal";
    case PulseModel::time_domain: return "time_domain";
  }
  throw std::logic_error("unreachable");
}

PulseModel model_from_name(const std::string& s) {
  if (s == "ideal") return PulseModel::ideal;
  if (s == "refocused_ideal" || s == "refocused") return PulseModel::refocused_ideal;
  if (s == "time_domain" || s == "timedomain") return PulseModel::time_domain;
  throw std::invalid_argument("unknown pulse model: " + s);
}

}  // namespace

std::string format_spin(double spin) {
  const long twice = std::lround(2.0 * spin);
  if (twice % 2 == 0) return std::to_string(twice / 2);
  return std::to_string(twice) + "/2";
}

double parse_spin(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) return std::stod(text);
  return std::stod(text.substr(0, slash)) / std::stod(text.substr(slash + 1));
}

json sequence_to_json(const PulseSequence& seq) {
  json j;
  j["system"] = {{"spin", format_spin(seq.system.spin)},
                 {"larmor_hz", seq.system.larmor_hz},
                 {"spacing_hz", seq.system.line_spacing_hz}};
  j["events"] = json::array();
  for (const auto& ev : seq.events) {
    json e;
    e["kind"] = kind_name(ev.kind);
    e["model"] = model_name(ev.model);
    e["duration_ms"] = ev.duration * 1e3;
    if (ev.kind == PulseKind::selective || ev.kind == PulseKind::multi_frequency) {
      json tr = json::array(), fl = json::array(), ph = json::array();
      for (std::size_t t = 0; t < ev.transitions.size(); ++t) {
        tr.push_back(std::string(1, transition_label(ev.transitions[t].first)));
        fl.push_back(ev.flip[t] / kPi);
        ph.push_back(ev.phase[t] * 180.0 / kPi);
      }
      e["transitions"] = tr;
      e["flip_pi"] = fl;
      e["phase_deg"] = ph;
    } else if (ev.kind == PulseKind::hard) {
      e["flip_pi"] = ev.flip.front() / kPi;
      e["phase_deg"] = ev.phase.front() * 180.0 / kPi;
    }
    j["events"].push_back(e);
  }
  return j;
}

PulseSequence sequence_from_json(const json& j) {
  const json& sys = j.at("system");
  double spin;
  if (sys.at("spin").is_string())
    spin = parse_spin(sys.at("spin").get<std::string>());
  else
    spin = sys.at("spin").get<double>();
  PulseSequence seq{SpinSystem(spin, sys.value("larmor_hz", 0.0),
                               sys.at("spacing_hz").get<double>()),
                    {}};
  for (const json& e : j.at("events")) {
    PulseEvent ev;
    ev.kind = kind_from_name(e.at("kind").get<std::string>());
    ev.model = model_from_name(e.value("model", "ideal"));
    ev.duration = e.value("duration_ms", 0.0) * 1e-3;
    if (ev.kind == PulseKind::selective || ev.kind == PulseKind::multi_frequency) {
      for (const json& t : e.at("transitions")) {
        int r;
        if (t.is_string()) {
          const std::string s = t.get<std::string>();
          if (s.size() != 1)
            throw std::invalid_argument("bad transition label: " + s);
          r = transition_index(s[0]);
        } else if (t.is_array()) {
          if (t.size() != 2 || t[1].get<int>() != t[0].get<int>() + 1)
            throw std::invalid_argument("transition pair must be (r, r+1)");
          r = t[0].get<int>();
        } else {
          r = t.get<int>();
        }
        ev.transitions.emplace_back(r, r + 1);
      }
      for (const json& f : e.at("flip_pi")) ev.flip.push_back(f.get<double>() * kPi);
      for (const json& p : e.at("phase_deg"))
        ev.phase.push_back(p.get<double>() * kPi / 180.0);
      if (ev.flip.size() != ev.transitions.size() ||
          ev.phase.size() != ev.transitions.size())
        throw std::invalid_argument("event field lengths disagree");
      if (ev.kind == PulseKind::selective && ev.transitions.size() != 1)
        throw std::invalid_argument("selective event needs exactly one transition");
    } else if (ev.kind == PulseKind::hard) {
      ev.flip = {e.at("flip_pi").get<double>() * kPi};
      ev.phase = {e.at("phase_deg").get<double>() * kPi / 180.0};
    }
    seq.events.push_back(std::move(ev));
  }
  return seq;
}

void save_sequence(const PulseSequence& seq, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << sequence_to_json(seq).dump(2) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

PulseSequence load_sequence(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return sequence_from_json(j);
}

DiagonalGateSpec gate_spec_from_json(const json& j) {
  DiagonalGateSpec spec;
  spec.dim = j.at("dim").get<int>();
  for (const json& p : j.at("phases_pi"))
    spec.phases.push_back(p.get<double>() * kPi);
  if (static_cast<int>(spec.phases.size()) != spec.dim)
    throw std::invalid_argument("phases_pi length must equal dim");
  return spec;
}

std::string spectrum_csv(const std::vector<SpectralLine>& lines) {
  std::ostringstream out;
  out << "label,frequency_hz,intensity,phase_deg\n";
  out << std::setprecision(12);
  for (const auto& line : lines)
    out << line.label << "," << line.frequency_hz << "," << line.intensity()
        << "," << line.phase_deg() << "\n";
  return out.str();
}

std::string spectrum_ascii(const std::vector<SpectralLine>& lines) {
  double max_intensity = 0.0;
  for (const auto& line : lines)
    max_intensity = std::max(max_intensity, line.intensity());
  std::ostringstream out;
  out << std::fixed << std::setprecision(1);
  for (const auto& line : lines) {
    // signed stick: projection onto the reference (real) axis
    const double value =
        max_intensity > 0.0
            ? line.amplitude.real() / max_intensity
            : 0.0;
    const int width = 30;
    const int len = static_cast<int>(std::lround(std::abs(value) * width));
    out << line.label << " " << std::setw(9) << line.frequency_hz << " Hz |";
    if (value >= 0) {
      out << std::string(width, ' ') << "|" << std::string(len, '#')
          << std::string(width - len, ' ');
    } else {
      out << std::string(width - len, ' ') << std::string(len, '#') << "|"
          << std::string(width, ' ');
    }
    out << "| " << line.intensity() << "\n";
  }
  return out.str();
}

}  // namespace qsim
