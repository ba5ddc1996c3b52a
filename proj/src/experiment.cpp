#include "qsim/experiment.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qsim {

namespace {

void check_density(const DensityMatrix& rho) {
  if (!is_hermitian(rho.rho, 1e-10 * std::max(1.0, rho.rho.norm())))
    throw std::invalid_argument("density matrix must be Hermitian");
}

bool is_diagonal(const Matrix& m, double tol) {
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (i != j && std::abs(m(i, j)) > tol) return false;
  return true;
}

}  // namespace

OracleSpec OracleSpec::constant(int which) {
  if (which != 1 && which != 2)
    throw std::invalid_argument("constant oracle is 1 or 2");
  OracleSpec s;
  s.kind = which == 1 ? Kind::constant1 : Kind::constant2;
  return s;
}

OracleSpec OracleSpec::balanced(int k, int l, int m) {
  DiagonalGateSpec::dj_oracle(k, l, m);  // validates
  OracleSpec s;
  s.kind = Kind::balanced;
  s.k = k;
  s.l = l;
  s.m = m;
  return s;
}

OracleSpec OracleSpec::parse(const std::string& text) {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t == "constant" || t == "constant1" || t == "constant-1" || t == "c1")
    return constant(1);
  if (t == "constant2" || t == "constant-2" || t == "c2") return constant(2);
  const GateExpr e = parse_gate_expr(t);
  if (e.kind != GateExpr::Kind::oracle)
    throw std::invalid_argument("not a DJ oracle: " + text);
  return balanced(e.k, e.l, e.m);
}

std::string OracleSpec::name() const {
  switch (kind) {
    case Kind::constant1:
      return "constant-1";
    case Kind::constant2:
      return "constant-2";
    case Kind::balanced:
      return "U(1," + std::to_string(k) + "," + std::to_string(l) + "," +
             std::to_string(m) + ")";
  }
  return {};
}

DensityMatrix equilibrium_state(const SpinSystem& sys) {
  return DensityMatrix{spin_operators(sys.spin).iz, DensityMatrix::Kind::deviation};
}

DensityMatrix pps_000(const SpinSystem& sys) {
  const int n = sys.dim();
  Matrix rho = Matrix::Zero(n, n);
  rho(0, 0) = sys.spin;
  const double avg = -sys.spin / (n - 1);  // equilibrium populations average
  for (int j = 1; j < n; ++j) rho(j, j) = avg;
  return DensityMatrix{rho, DensityMatrix::Kind::deviation};
}

DensityMatrix dephase(const DensityMatrix& rho) {
  DensityMatrix out = rho;
  for (int i = 0; i < out.rho.rows(); ++i)
    for (int j = 0; j < out.rho.cols(); ++j)
      if (i != j) out.rho(i, j) = 0.0;
  return out;
}

DensityMatrix evolve(const DensityMatrix& rho, const Matrix& u) {
  check_density(rho);
  if (u.rows() != rho.rho.rows())
    throw std::invalid_argument("dimension mismatch");
  if (!is_unitary(u, 1e-8))
    throw std::invalid_argument("evolution requires a unitary operator");
  return DensityMatrix{u * rho.rho * u.adjoint(), rho.kind};
}

std::vector<SpectralLine> detect_spectrum(const DensityMatrix& rho,
                                          const SpinSystem& sys) {
  check_density(rho);
  const SpinOps ops = spin_operators(sys.spin);
  const auto freqs = transition_frequencies(sys);
  std::vector<SpectralLine> lines;
  lines.reserve(freqs.size());
  for (const auto& tr : freqs) {
    const Complex amp = rho.rho(tr.r - 1, tr.r) * ops.ix(tr.r, tr.r - 1);
    lines.push_back(SpectralLine{tr.label, tr.r, tr.frequency_hz, amp});
  }
  return lines;
}

std::vector<SpectralLine> small_angle_readout(const DensityMatrix& rho,
                                              double theta,
                                              const SpinSystem& sys,
                                              bool* coherence_warning) {
  if (coherence_warning)
    *coherence_warning = !is_diagonal(rho.rho, 1e-9 * std::max(1.0, rho.rho.norm()));
  // linear response: the small tip converts each adjacent population
  // difference into a single-quantum coherence, so the line amplitude is
  // theta * (p_m - p_{m+1}) * |<m|Ix|m+1>|^2.  Higher-order transfer between
  // non-adjacent levels is deliberately dropped here; use evolve() +
  // detect_spectrum() for the full propagation.
  const SpinOps ops = spin_operators(sys.spin);
  auto lines = detect_spectrum(DensityMatrix{Matrix::Zero(sys.dim(), sys.dim()),
                                             DensityMatrix::Kind::deviation},
                               sys);
  for (auto& line : lines) {
    const int m = line.r - 1;
    const double diff = rho.rho(m, m).real() - rho.rho(m + 1, m + 1).real();
    line.amplitude = theta * diff * std::norm(ops.ix(m, m + 1));
  }
  return lines;
}

ClassifyResult classify(const std::vector<SpectralLine>& spectrum,
                        const std::vector<SpectralLine>& reference) {
  if (spectrum.size() != reference.size())
    throw std::invalid_argument("spectra have different line sets");
  double max_intensity = 0.0;
  for (const auto& line : spectrum)
    max_intensity = std::max(max_intensity, line.intensity());
  ClassifyResult result;
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    if (spectrum[i].label != reference[i].label)
      throw std::invalid_argument("spectra have different line sets");
    if (spectrum[i].intensity() < 1e-6 * max_intensity) continue;
    const double rel =
        wrap_angle((spectrum[i].phase_deg() - reference[i].phase_deg()) * kPi /
                   180.0) *
        180.0 / kPi;
    if (std::abs(std::abs(rel) - 180.0) <= 15.0)
      result.inverted.insert(spectrum[i].label);
  }
  result.classification = result.inverted.empty() ? Classification::constant
                                                  : Classification::balanced;
  return result;
}

std::vector<SpectralLine> superposition_spectrum(const SpinSystem& sys) {
  const Matrix h = hard_pulse_propagator(sys.dim(), kPi / 2, kPi / 2);
  return detect_spectrum(evolve(pps_000(sys), h), sys);
}

std::string describe_plan(const GatePlan& plan) {
  std::ostringstream out;
  bool first_layer = true;
  for (const auto& layer : plan.layers) {
    if (layer.empty()) continue;
    if (!first_layer) out << ".";
    first_layer = false;
    bool all_pi = true;
    for (const auto& p : layer)
      all_pi = all_pi && std::abs(wrap_angle(p.phi - kPi)) < 1e-9;
    if (all_pi) {
      out << "(2pi)^{";
      bool first = true;
      for (const auto& p : layer) {
        if (!first) out << ",";
        first = false;
        out << transition_label(p.r);
      }
      out << "}";
    } else {
      out << "pair^{";
      bool first = true;
      for (const auto& p : layer) {
        if (!first) out << ",";
        first = false;
        out << transition_label(p.r) << ":" << p.phi / kPi << "pi";
      }
      out << "}";
    }
  }
  if (first_layer) out << "(none)";
  return out.str();
}

DJOutcome run_dj(const OracleSpec& oracle, const SpinSystem& sys,
                 PulseModel model) {
  DJOutcome out;
  out.oracle = oracle;

  DensityMatrix rho = pps_000(sys);
  rho = evolve(rho, hard_pulse_propagator(sys.dim(), kPi / 2, kPi / 2));

  if (oracle.kind == OracleSpec::Kind::balanced) {
    const GatePlan plan = synth_dj_oracle(oracle.k, oracle.l, oracle.m);
    out.pulse_program = describe_plan(plan);
    out.oracle_fidelity =
        verify_plan(plan, DiagonalGateSpec::dj_oracle(oracle.k, oracle.l, oracle.m));
    rho = evolve(rho, sequence_propagator(plan_to_sequence(plan, sys, model)));
  } else {
    // both constant oracles are the identity up to a global phase: no pulse
    out.pulse_program = "(none)";
    out.oracle_fidelity = 1.0;
  }

  out.spectrum = detect_spectrum(rho, sys);
  const ClassifyResult res = classify(out.spectrum, superposition_spectrum(sys));
  out.inverted = res.inverted;
  out.classification = res.classification;
  return out;
}

}  // namespace qsim
