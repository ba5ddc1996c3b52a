#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "qsim/operators.hpp"

namespace qsim {

enum class PulseKind { selective, multi_frequency, hard, delay };
enum class PulseModel { ideal, refocused_ideal, time_domain };

/// One entry of a pulse sequence. Selective and multi-frequency events carry
/// one flip angle and one phase per transition; hard events act through the
/// full Ix/Iy operators and carry a single flip/phase; delays carry only a
/// duration. Ideal events are instantaneous (duration 0).
struct PulseEvent {
  PulseKind kind = PulseKind::selective;
  std::vector<std::pair<int, int>> transitions;  // (r, r+1) pairs
  std::vector<double> flip;   // rad, per transition (one entry for hard)
  std::vector<double> phase;  // rad, per transition (one entry for hard)
  double duration = 0.0;      // seconds
  PulseModel model = PulseModel::ideal;

  static PulseEvent selective_pulse(int r, double flip, double phase,
                                    PulseModel model = PulseModel::ideal);
  static PulseEvent multi_frequency_pulse(std::vector<int> rs,
                                          std::vector<double> flips,
                                          std::vector<double> phases,
                                          PulseModel model = PulseModel::ideal);
  static PulseEvent hard_pulse(double flip, double phase);
  static PulseEvent delay(double duration);
};

struct PulseSequence {
  SpinSystem system;
  std::vector<PulseEvent> events;
};

/// Multi-frequency RF envelope sampled on a fixed grid: each component is a
/// carrier offset (Hz, rotating frame) with per-step amplitude (rad/s) and
/// phase (rad). All components share the grid.
struct RfComponent {
  double offset_hz = 0.0;
  std::vector<double> amplitude;
  std::vector<double> phase;
};

struct RfWaveform {
  double dt = 0.0;
  std::size_t steps = 0;
  std::vector<RfComponent> components;

  double duration() const { return dt * static_cast<double>(steps); }
};

// cos(phase)*Ix^(r,s) + sin(phase)*Iy^(r,s): the fictitious spin-1/2
// generator of the (r,s) subspace embedded in an n-level system
Matrix subspace_generator(int n, int r, int s, double phase);

Matrix ideal_selective_propagator(const PulseEvent& ev, int dim);

Matrix hard_pulse_propagator(int dim, double flip, double phase);

// smallest t (times n) with exp(-i H_Q t) proportional to identity;
// returns 0 when H_Q vanishes (any duration refocuses)
double refocus_duration(const SpinSystem& sys, int n = 1);

// combine selective/MF events on pairwise-unconnected transitions into one
// multi-frequency event; throws if any two transitions share a level
PulseEvent merge_unconnected(const std::vector<PulseEvent>& events);

// constant-envelope selective pulse resonant with transition (r, r+1), with
// amplitude calibrated by the transition moment 2*(Ix)_{r,r+1} so the flip
// angle comes out right; dt <= 0 picks a step satisfying the rotation bound
RfWaveform soft_pulse_waveform(const SpinSystem& sys, int r, double flip,
                               double phase, double duration, double dt = 0.0);

RfWaveform soft_multi_frequency_waveform(const SpinSystem& sys,
                                         const std::vector<int>& rs,
                                         const std::vector<double>& flips,
                                         const std::vector<double>& phases,
                                         double duration, double dt = 0.0);

// piecewise-constant integration of H_Q + RF drive; exact exponential per step
Matrix time_domain_propagator(const RfWaveform& wave, const SpinSystem& sys);

Matrix event_propagator(const PulseEvent& ev, const SpinSystem& sys);

Matrix sequence_propagator(const PulseSequence& seq);

}  // namespace qsim
