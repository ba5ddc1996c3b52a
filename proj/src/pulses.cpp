#include "qsim/pulses.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace qsim {

namespace {

void check_transition(int n, int r, int s) {
  if (r < 1 || s > n || r >= s)
    throw std::invalid_argument("invalid transition (" + std::to_string(r) +
                                "," + std::to_string(s) + ") for dim " +
                                std::to_string(n));
}

// throws when two transitions share a level (their generators do not commute)
void check_unconnected(const std::vector<std::pair<int, int>>& transitions) {
  std::set<int> levels;
  for (const auto& [r, s] : transitions) {
    if (!levels.insert(r).second || !levels.insert(s).second)
      throw std::invalid_argument(
          "merge conflict: transitions share a level and cannot be combined");
  }
}

double max_abs_eigenvalue(const SpinSystem& sys) {
  const Matrix hq = quadrupolar_hamiltonian(sys);
  double m = 0.0;
  for (int j = 0; j < hq.rows(); ++j) m = std::max(m, std::abs(hq(j, j).real()));
  return m;
}

}  // namespace

PulseEvent PulseEvent::selective_pulse(int r, double flip, double phase,
                                       PulseModel model) {
  PulseEvent ev;
  ev.kind = PulseKind::selective;
  ev.transitions = {{r, r + 1}};
  ev.flip = {flip};
  ev.phase = {phase};
  ev.model = model;
  return ev;
}

PulseEvent PulseEvent::multi_frequency_pulse(std::vector<int> rs,
                                             std::vector<double> flips,
                                             std::vector<double> phases,
                                             PulseModel model) {
  if (rs.size() != flips.size() || rs.size() != phases.size())
    throw std::invalid_argument("multi-frequency pulse: length mismatch");
  PulseEvent ev;
  ev.kind = PulseKind::multi_frequency;
  for (int r : rs) ev.transitions.emplace_back(r, r + 1);
  ev.flip = std::move(flips);
  ev.phase = std::move(phases);
  ev.model = model;
  check_unconnected(ev.transitions);
  return ev;
}

PulseEvent PulseEvent::hard_pulse(double flip, double phase) {
  PulseEvent ev;
  ev.kind = PulseKind::hard;
  ev.flip = {flip};
  ev.phase = {phase};
  return ev;
}

PulseEvent PulseEvent::delay(double duration) {
  PulseEvent ev;
  ev.kind = PulseKind::delay;
  ev.duration = duration;
  return ev;
}

Matrix subspace_generator(int n, int r, int s, double phase) {
  check_transition(n, r, s);
  Matrix g = Matrix::Zero(n, n);
  g(r - 1, s - 1) = 0.5 * std::exp(Complex(0.0, -phase));
  g(s - 1, r - 1) = 0.5 * std::exp(Complex(0.0, phase));
  return g;
}

Matrix ideal_selective_propagator(const PulseEvent& ev, int dim) {
  if (ev.kind != PulseKind::selective && ev.kind != PulseKind::multi_frequency)
    throw std::invalid_argument("not a selective pulse event");
  if (ev.kind == PulseKind::multi_frequency) check_unconnected(ev.transitions);
  Matrix g = Matrix::Zero(dim, dim);
  for (std::size_t t = 0; t < ev.transitions.size(); ++t) {
    const auto& [r, s] = ev.transitions[t];
    g += ev.flip[t] * subspace_generator(dim, r, s, ev.phase[t]);
  }
  return hermitian_propagator(g, 1.0);
}

Matrix hard_pulse_propagator(int dim, double flip, double phase) {
  if (dim < 2) throw std::invalid_argument("dimension must be >= 2");
  const double spin = (dim - 1) / 2.0;
  const SpinOps ops = spin_operators(spin);
  const Matrix g = std::cos(phase) * ops.ix + std::sin(phase) * ops.iy;
  return hermitian_propagator(flip * g, 1.0);
}

double refocus_duration(const SpinSystem& sys, int n) {
  if (n < 1) throw std::invalid_argument("multiple must be positive");
  // eigenvalues of (3Iz^2 - I(I+1)) differ by integers; the refocus time is
  // set by their gcd
  const int dim = sys.dim();
  std::vector<double> e(dim);
  for (int j = 0; j < dim; ++j) {
    const double m = sys.spin - j;
    e[j] = 3.0 * m * m - sys.spin * (sys.spin + 1.0);
  }
  long g = 0;
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) {
      const double d = std::abs(e[i] - e[j]);
      const long di = std::lround(d);
      if (std::abs(d - di) > 1e-9)
        throw std::logic_error("non-integer quadrupolar eigenvalue spacing");
      g = std::gcd(g, di);
    }
  if (g == 0) return 0.0;  // H_Q proportional to identity: any duration refocuses
  if (sys.line_spacing_hz <= 0.0)
    throw std::runtime_error("no refocus time: line spacing is zero");
  return n / (sys.internal_coupling_hz() * static_cast<double>(g));
}

PulseEvent merge_unconnected(const std::vector<PulseEvent>& events) {
  if (events.empty()) throw std::invalid_argument("nothing to merge");
  PulseEvent out;
  out.kind = PulseKind::multi_frequency;
  out.model = events.front().model;
  for (const auto& ev : events) {
    if (ev.kind != PulseKind::selective && ev.kind != PulseKind::multi_frequency)
      throw std::invalid_argument("only selective pulses can be merged");
    out.transitions.insert(out.transitions.end(), ev.transitions.begin(),
                           ev.transitions.end());
    out.flip.insert(out.flip.end(), ev.flip.begin(), ev.flip.end());
    out.phase.insert(out.phase.end(), ev.phase.begin(), ev.phase.end());
    out.duration = std::max(out.duration, ev.duration);
  }
  check_unconnected(out.transitions);
  return out;
}

RfWaveform soft_pulse_waveform(const SpinSystem& sys, int r, double flip,
                               double phase, double duration, double dt) {
  return soft_multi_frequency_waveform(sys, {r}, {flip}, {phase}, duration, dt);
}

RfWaveform soft_multi_frequency_waveform(const SpinSystem& sys,
                                         const std::vector<int>& rs,
                                         const std::vector<double>& flips,
                                         const std::vector<double>& phases,
                                         double duration, double dt) {
  if (rs.size() != flips.size() || rs.size() != phases.size())
    throw std::invalid_argument("waveform: length mismatch");
  if (duration <= 0.0) throw std::invalid_argument("duration must be positive");
  const SpinOps ops = spin_operators(sys.spin);
  const auto freqs = transition_frequencies(sys);

  RfWaveform wave;
  double amp_total = 0.0;
  for (std::size_t k = 0; k < rs.size(); ++k) {
    const int r = rs[k];
    check_transition(sys.dim(), r, r + 1);
    // nutation rate on (r, r+1) is amplitude * 2*(Ix)_{r,r+1}
    const double moment = 2.0 * ops.ix(r - 1, r).real();
    const double amp = flips[k] / (duration * moment);
    amp_total += std::abs(amp);
    RfComponent c;
    c.offset_hz = freqs[r - 1].frequency_hz;
    c.amplitude.assign(1, amp);  // resized below once dt is fixed
    c.phase.assign(1, phases[k]);
    wave.components.push_back(std::move(c));
  }

  if (dt <= 0.0) {
    const double h_bound = max_abs_eigenvalue(sys) + amp_total * sys.spin;
    dt = duration / 100.0;
    if (h_bound > 0.0) dt = std::min(dt, 0.05 / h_bound);
  }
  wave.steps = static_cast<std::size_t>(std::ceil(duration / dt));
  wave.dt = duration / static_cast<double>(wave.steps);
  for (auto& c : wave.components) {
    c.amplitude.assign(wave.steps, c.amplitude.front());
    c.phase.assign(wave.steps, c.phase.front());
  }
  return wave;
}

Matrix time_domain_propagator(const RfWaveform& wave, const SpinSystem& sys) {
  const int n = sys.dim();
  const SpinOps ops = spin_operators(sys.spin);
  const Matrix hq = quadrupolar_hamiltonian(sys);
  for (const auto& c : wave.components)
    if (c.amplitude.size() != wave.steps || c.phase.size() != wave.steps)
      throw std::invalid_argument("waveform samples do not match step count");

  Matrix u = Matrix::Identity(n, n);
  for (std::size_t i = 0; i < wave.steps; ++i) {
    const double t_mid = (static_cast<double>(i) + 0.5) * wave.dt;
    Matrix h = hq;
    for (const auto& c : wave.components) {
      const double arg = kTwoPi * c.offset_hz * t_mid + c.phase[i];
      h += c.amplitude[i] * (std::cos(arg) * ops.ix + std::sin(arg) * ops.iy);
    }
    // Gershgorin bound on the per-step rotation angle
    const double bound = h.cwiseAbs().rowwise().sum().maxCoeff() * wave.dt;
    if (bound >= 0.1)
      throw std::runtime_error("time step too coarse for this waveform");
    u = hermitian_propagator(h, wave.dt) * u;
  }
  return u;
}

Matrix event_propagator(const PulseEvent& ev, const SpinSystem& sys) {
  const int n = sys.dim();
  switch (ev.kind) {
    case PulseKind::delay:
      return hermitian_propagator(rotating_frame_hamiltonian(sys), ev.duration);
    case PulseKind::hard:
      return hard_pulse_propagator(n, ev.flip.front(), ev.phase.front());
    case PulseKind::selective:
    case PulseKind::multi_frequency:
      break;
  }
  switch (ev.model) {
    case PulseModel::ideal:
      return ideal_selective_propagator(ev, n);
    case PulseModel::refocused_ideal: {
      const double t = ev.duration > 0.0 ? ev.duration : refocus_duration(sys);
      return hermitian_propagator(rotating_frame_hamiltonian(sys), t) *
             ideal_selective_propagator(ev, n);
    }
    case PulseModel::time_domain: {
      const double t =
          ev.duration > 0.0 ? ev.duration : refocus_duration(sys, 10);
      std::vector<int> rs;
      for (const auto& [r, s] : ev.transitions) rs.push_back(r);
      return time_domain_propagator(
          soft_multi_frequency_waveform(sys, rs, ev.flip, ev.phase, t), sys);
    }
  }
  throw std::logic_error("unreachable pulse model");
}

Matrix sequence_propagator(const PulseSequence& seq) {
  Matrix u = Matrix::Identity(seq.system.dim(), seq.system.dim());
  for (const auto& ev : seq.events) u = event_propagator(ev, seq.system) * u;
  return u;
}

}  // namespace qsim
