#pragma once

#include <array>
#include <string>
#include <vector>

#include "qsim/operators.hpp"
#include "qsim/pulses.hpp"

namespace qsim {

/// Diagonal unitary target diag(e^{i phi_1}, ..., e^{i phi_N}), defined up to
/// a global phase.
struct DiagonalGateSpec {
  int dim = 0;
  std::vector<double> phases;  // radians

  static DiagonalGateSpec identity(int dim);
  static DiagonalGateSpec single_level(int k, double phi, int dim);
  // diag with -1 at positions 1, k, l, m (N = 8)
  static DiagonalGateSpec dj_oracle(int k, int l, int m);
  static DiagonalGateSpec constant_minus(int dim);  // -1 everywhere
};

Matrix target_unitary(const DiagonalGateSpec& spec);

/// Geometric phase gate u_{(r,r+1)}^phi: two pi pulses on one transition with
/// phases theta and theta+pi+phi, imparting e^{+i phi} at level r and
/// e^{-i phi} at level r+1 (up to global phase, independent of theta).
struct PhasePair {
  int r = 1;               // transition (r, r+1)
  double phi = 0.0;        // radians
  double theta = kPi / 2;  // base pulse phase, default y
};

struct GatePlan {
  int dim = 0;
  // each layer holds pairs on pairwise-unconnected transitions
  std::vector<std::vector<PhasePair>> layers;
  std::string provenance;

  std::size_t pair_count() const;
};

// the two pi-pulse events realizing one pair; a phi = pi pair collapses to a
// single 2pi pulse (the two pulse phases coincide)
PulseSequence phase_pair_sequence(const PhasePair& p, const SpinSystem& sys,
                                  PulseModel model = PulseModel::ideal);

PulseSequence plan_to_sequence(const GatePlan& plan, const SpinSystem& sys,
                               PulseModel model = PulseModel::ideal);

// ideal-model propagator realized by the plan
Matrix plan_propagator(const GatePlan& plan);

// chain of N-1 pairs putting e^{i phi} on level k alone (up to global phase)
GatePlan synth_single_level_phase(int k, double phi, int dim);

// general diagonal synthesis: accumulate one pair angle per transition,
// choosing the global-phase offset that minimizes the number of pulses
GatePlan synth_diagonal(const DiagonalGateSpec& spec);

// phi = pi pairs on the chains (1..k) and (l..m), merged; at most two layers
GatePlan synth_dj_oracle(int k, int l, int m);

std::vector<std::array<int, 3>> enumerate_balanced_oracles();

// greedy repacking into minimal multi-frequency layers; realized unitary is
// checked to be unchanged up to global phase
GatePlan merge_plan(const GatePlan& plan);

double verify_plan(const GatePlan& plan, const DiagonalGateSpec& spec);

/// Parsed CLI gate expression: "Uk(phi)", "U(1,k,l,m)", or explicit phases.
struct GateExpr {
  enum class Kind { single_level, oracle, explicit_phases };
  Kind kind = Kind::explicit_phases;
  int k = 0, l = 0, m = 0;
  double phi = 0.0;
  std::vector<double> phases;
  int dim = 8;

  DiagonalGateSpec spec() const;
  GatePlan synthesize() const;  // merged plan
};

GateExpr parse_gate_expr(const std::string& text);

// "pi", "pi/2", "3pi/4", "-pi", or plain radians
double parse_angle(const std::string& text);

double wrap_angle(double a);  // to (-pi, pi]

}  // namespace qsim
