#include "qsim/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace qsim {

namespace {

void check_spin(double spin) {
  if (spin < 0.5) throw std::invalid_argument("spin must be >= 1/2");
  const double twice = 2.0 * spin;
  if (std::abs(twice - std::round(twice)) > 1e-9)
    throw std::invalid_argument("spin must be a half-integer");
}

}  // namespace

SpinSystem::SpinSystem(double spin_, double larmor_hz_, double line_spacing_hz_)
    : spin(spin_), larmor_hz(larmor_hz_), line_spacing_hz(line_spacing_hz_) {
  check_spin(spin);
  if (line_spacing_hz < 0.0)
    throw std::invalid_argument("line spacing must be non-negative");
}

LevelLabel level_label(double spin, int index) {
  check_spin(spin);
  const int n = static_cast<int>(2.0 * spin) + 1;
  if (index < 1 || index > n) throw std::invalid_argument("level index out of range");
  int bits = 0;
  while ((1 << bits) < n) ++bits;
  if (bits == 0) bits = 1;
  std::string s(bits, '0');
  for (int b = 0; b < bits; ++b)
    if ((index - 1) >> (bits - 1 - b) & 1) s[b] = '1';
  return LevelLabel{index, s, spin - (index - 1)};
}

int level_index_from_m(double spin, double m) {
  check_spin(spin);
  const double idx = spin - m + 1.0;
  if (std::abs(idx - std::round(idx)) > 1e-9 || idx < 1 ||
      idx > 2.0 * spin + 1.0)
    throw std::invalid_argument("m is not a level of this spin");
  return static_cast<int>(std::round(idx));
}

std::pair<Matrix, Matrix> ladder_operators(double spin) {
  check_spin(spin);
  const int n = static_cast<int>(2.0 * spin) + 1;
  Matrix ip = Matrix::Zero(n, n);
  // row j connects M = I-j+1 from M = I-j (0-based row j-1 <- row j)
  for (int j = 1; j < n; ++j) {
    const double m = spin - j;  // state being raised
    ip(j - 1, j) = std::sqrt((spin - m) * (spin + m + 1.0));
  }
  Matrix im = ip.adjoint();
  return {ip, im};
}

SpinOps spin_operators(double spin) {
  auto [ip, im] = ladder_operators(spin);
  SpinOps ops;
  ops.ix = (ip + im) / 2.0;
  ops.iy = (ip - im) / Complex(0.0, 2.0);
  const int n = ip.rows();
  ops.iz = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j) ops.iz(j, j) = spin - j;
  return ops;
}

Matrix quadrupolar_hamiltonian(const SpinSystem& sys) {
  const int n = sys.dim();
  Matrix h = Matrix::Zero(n, n);
  const double scale = kTwoPi * sys.internal_coupling_hz();
  for (int j = 0; j < n; ++j) {
    const double m = sys.spin - j;
    h(j, j) = scale * (3.0 * m * m - sys.spin * (sys.spin + 1.0));
  }
  return h;
}

Matrix rotating_frame_hamiltonian(const SpinSystem& sys) {
  return quadrupolar_hamiltonian(sys);
}

char transition_label(int r) {
  if (r < 1 || r > 26) throw std::invalid_argument("transition index out of range");
  return static_cast<char>('a' + r - 1);
}

int transition_index(char label) {
  if (label < 'a' || label > 'z')
    throw std::invalid_argument("transition label must be a lowercase letter");
  return label - 'a' + 1;
}

std::vector<Transition> transition_frequencies(const SpinSystem& sys) {
  const int n = sys.dim();
  std::vector<Transition> out;
  out.reserve(n - 1);
  for (int r = 1; r < n; ++r) {
    // E_r - E_{r+1} under H_Q, in Hz: lines come out equally spaced by the
    // observed spacing and centered on zero (central transition at 0)
    const double f = 0.5 * sys.line_spacing_hz * (2.0 * sys.spin - 2.0 * r + 1.0);
    out.push_back(Transition{transition_label(r), r, f});
  }
  return out;
}

Matrix hermitian_propagator(const Matrix& h, double t) {
  if (!is_hermitian(h, 1e-9 * std::max(1.0, h.norm())))
    throw std::domain_error("propagator requires a Hermitian generator");
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const Eigen::VectorXd evals = es.eigenvalues();
  const Matrix& v = es.eigenvectors();
  Eigen::VectorXcd phases(evals.size());
  for (int j = 0; j < evals.size(); ++j)
    phases(j) = std::exp(Complex(0.0, -evals(j) * t));
  return v * phases.asDiagonal() * v.adjoint();
}

bool is_hermitian(const Matrix& m, double tol) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() < tol;
}

bool is_unitary(const Matrix& m, double tol) {
  const Matrix id = Matrix::Identity(m.rows(), m.cols());
  return (m.adjoint() * m - id).cwiseAbs().maxCoeff() < tol;
}

double unitary_fidelity(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("fidelity requires equal dimensions");
  return std::abs((a.adjoint() * b).trace()) / static_cast<double>(a.rows());
}

}  // namespace qsim
