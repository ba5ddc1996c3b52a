#pragma once

#include <set>
#include <string>
#include <vector>

#include "qsim/operators.hpp"
#include "qsim/pulses.hpp"
#include "qsim/synth.hpp"

namespace qsim {

struct DensityMatrix {
  enum class Kind { full, deviation };
  Matrix rho;
  Kind kind = Kind::deviation;
};

struct SpectralLine {
  char label;           // a..g
  int r;                // line connects levels (r, r+1)
  double frequency_hz;  // rotating-frame offset
  Complex amplitude;    // rho_{r,r+1} * (Ix)_{r+1,r}

  double intensity() const { return std::abs(amplitude); }
  double phase_deg() const { return std::arg(amplitude) * 180.0 / kPi; }
};

enum class Classification { constant, balanced };

struct ClassifyResult {
  Classification classification = Classification::constant;
  std::set<char> inverted;
};

/// Oracle selector for the DJ pipeline: one of the two constant functions or
/// a balanced U(1,k,l,m).
struct OracleSpec {
  enum class Kind { constant1, constant2, balanced };
  Kind kind = Kind::constant1;
  int k = 0, l = 0, m = 0;

  static OracleSpec constant(int which = 1);
  static OracleSpec balanced(int k, int l, int m);
  static OracleSpec parse(const std::string& text);
  std::string name() const;
};

struct DJOutcome {
  OracleSpec oracle;
  std::string pulse_program;  // e.g. "(2pi)^{a,c,e,g}.(2pi)^{b,f}"
  std::vector<SpectralLine> spectrum;
  std::set<char> inverted;
  Classification classification = Classification::constant;
  double oracle_fidelity = 1.0;  // compiled plan vs target
};

DensityMatrix equilibrium_state(const SpinSystem& sys);  // deviation rho = Iz

// idealized |000> pseudo-pure preparation: level 1 keeps its equilibrium
// population, the others are set to their common average, coherences zeroed
DensityMatrix pps_000(const SpinSystem& sys);

DensityMatrix dephase(const DensityMatrix& rho);

DensityMatrix evolve(const DensityMatrix& rho, const Matrix& u);

std::vector<SpectralLine> detect_spectrum(const DensityMatrix& rho,
                                          const SpinSystem& sys);

// spectrum after a small non-selective flip; sets *coherence_warning when the
// input is not a pure population state
std::vector<SpectralLine> small_angle_readout(const DensityMatrix& rho,
                                              double theta,
                                              const SpinSystem& sys,
                                              bool* coherence_warning = nullptr);

// inverted = lines whose phase relative to the reference is within 15 degrees
// of 180 and whose intensity is non-negligible; balanced iff any inverted
ClassifyResult classify(const std::vector<SpectralLine>& spectrum,
                        const std::vector<SpectralLine>& reference);

// reference (constant-function) spectrum: superposition readout
std::vector<SpectralLine> superposition_spectrum(const SpinSystem& sys);

DJOutcome run_dj(const OracleSpec& oracle, const SpinSystem& sys,
                 PulseModel model = PulseModel::ideal);

std::string describe_plan(const GatePlan& plan);

}  // namespace qsim
