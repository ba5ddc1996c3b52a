#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace qsim {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

constexpr double kUnitaryTol = 1e-10;
constexpr double kHermitianTol = 1e-12;

/// An N-level ladder spin: spin quantum number I, Larmor frequency, and the
/// observed spacing between adjacent single-quantum lines. The internal
/// quadrupolar constant is derived from the observed spacing so that the
/// simulated spectrum has adjacent lines separated by exactly line_spacing_hz.
struct SpinSystem {
  double spin;             // I (half-integer)
  double larmor_hz;        // omega_0 / 2pi
  double line_spacing_hz;  // spacing between adjacent single-quantum lines

  SpinSystem(double spin, double larmor_hz, double line_spacing_hz);

  int dim() const { return static_cast<int>(2.0 * spin) + 1; }

  // internal coupling lambda such that H_Q = 2*pi*lambda*(3Iz^2 - I(I+1));
  // adjacent lines then come out spaced by line_spacing_hz
  double internal_coupling_hz() const { return line_spacing_hz / 6.0; }
};

/// Basis-state label: index 1..N (descending M), the qubit-style bit string,
/// and the magnetic quantum number M = I - (index-1). Index 1 is M = +I.
struct LevelLabel {
  int index;
  std::string bit_string;
  double m_quantum;
};

LevelLabel level_label(double spin, int index);
int level_index_from_m(double spin, double m);

// raising/lowering operators in the |I,M> basis ordered M = +I ... -I
std::pair<Matrix, Matrix> ladder_operators(double spin);

struct SpinOps {
  Matrix ix, iy, iz;
};
SpinOps spin_operators(double spin);

// H_Q = 2*pi*lambda*(3Iz^2 - I(I+1)) in rad/s
Matrix quadrupolar_hamiltonian(const SpinSystem& sys);

// internal Hamiltonian in the frame rotating at the central-transition
// frequency; the Zeeman term cancels there, leaving H_Q alone
Matrix rotating_frame_hamiltonian(const SpinSystem& sys);

/// One single-quantum line: connects levels (r, r+1), labeled 'a' + (r-1).
struct Transition {
  char label;
  int r;  // upper-M level index; the line connects (r, r+1)
  double frequency_hz;  // offset in the rotating frame
};

std::vector<Transition> transition_frequencies(const SpinSystem& sys);

char transition_label(int r);
int transition_index(char label);  // 'a' -> 1, ...

// U = exp(-i H t) for Hermitian H (rad/s) and duration t (s)
Matrix hermitian_propagator(const Matrix& h, double t);

bool is_hermitian(const Matrix& m, double tol = kHermitianTol);
bool is_unitary(const Matrix& m, double tol = kUnitaryTol);

// |Tr(a^dag b)| / N; equals 1 iff a and b differ only by a global phase
double unitary_fidelity(const Matrix& a, const Matrix& b);

}  // namespace qsim
