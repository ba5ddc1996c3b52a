#include "qsim/synth.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace qsim {

namespace {

constexpr double kAngleEps = 1e-9;

SpinSystem plan_system(int dim) {
  // placeholder system for ideal-model propagators; only the dimension matters
  return SpinSystem((dim - 1) / 2.0, 0.0, 1.0);
}

bool is_pi_pair(double phi) { return std::abs(wrap_angle(phi - kPi)) < kAngleEps; }

void append_layer_events(PulseSequence& seq, const std::vector<PhasePair>& layer,
                         PulseModel model) {
  std::vector<int> rs;
  std::vector<double> flips, first_phases, second_phases;
  bool all_pi = true;
  for (const auto& p : layer) {
    rs.push_back(p.r);
    flips.push_back(kPi);
    first_phases.push_back(p.theta + kPi + p.phi);
    second_phases.push_back(p.theta);
    all_pi = all_pi && is_pi_pair(p.phi);
  }
  if (all_pi) {
    // both pulse phases coincide: emit one 2pi pulse per transition
    std::vector<double> flips2(rs.size(), 2.0 * kPi);
    seq.events.push_back(
        PulseEvent::multi_frequency_pulse(rs, flips2, second_phases, model));
  } else {
    seq.events.push_back(
        PulseEvent::multi_frequency_pulse(rs, flips, first_phases, model));
    seq.events.push_back(
        PulseEvent::multi_frequency_pulse(rs, flips, second_phases, model));
  }
}

}  // namespace

double wrap_angle(double a) {
  double w = std::remainder(a, kTwoPi);
  if (w <= -kPi + 1e-15) w += kTwoPi;
  return w;
}

DiagonalGateSpec DiagonalGateSpec::identity(int dim) {
  return DiagonalGateSpec{dim, std::vector<double>(dim, 0.0)};
}

DiagonalGateSpec DiagonalGateSpec::single_level(int k, double phi, int dim) {
  if (k < 1 || k > dim) throw std::invalid_argument("level index out of range");
  DiagonalGateSpec s{dim, std::vector<double>(dim, 0.0)};
  s.phases[k - 1] = phi;
  return s;
}

DiagonalGateSpec DiagonalGateSpec::dj_oracle(int k, int l, int m) {
  if (!(2 <= k && k < l && l < m && m <= 8 && k <= 6))
    throw std::invalid_argument("invalid oracle: need 2 <= k < l < m <= 8");
  DiagonalGateSpec s{8, std::vector<double>(8, 0.0)};
  s.phases[0] = kPi;
  s.phases[k - 1] = kPi;
  s.phases[l - 1] = kPi;
  s.phases[m - 1] = kPi;
  return s;
}

DiagonalGateSpec DiagonalGateSpec::constant_minus(int dim) {
  return DiagonalGateSpec{dim, std::vector<double>(dim, kPi)};
}

Matrix target_unitary(const DiagonalGateSpec& spec) {
  Matrix u = Matrix::Zero(spec.dim, spec.dim);
  for (int j = 0; j < spec.dim; ++j)
    u(j, j) = std::exp(Complex(0.0, spec.phases[j]));
  return u;
}

std::size_t GatePlan::pair_count() const {
  std::size_t n = 0;
  for (const auto& layer : layers) n += layer.size();
  return n;
}

PulseSequence phase_pair_sequence(const PhasePair& p, const SpinSystem& sys,
                                  PulseModel model) {
  if (p.r < 1 || p.r + 1 > sys.dim())
    throw std::invalid_argument("phase pair on a non-existent transition");
  PulseSequence seq{sys, {}};
  append_layer_events(seq, {p}, model);
  return seq;
}

PulseSequence plan_to_sequence(const GatePlan& plan, const SpinSystem& sys,
                               PulseModel model) {
  if (sys.dim() != plan.dim)
    throw std::invalid_argument("plan dimension does not match system");
  PulseSequence seq{sys, {}};
  for (const auto& layer : plan.layers)
    if (!layer.empty()) append_layer_events(seq, layer, model);
  return seq;
}

Matrix plan_propagator(const GatePlan& plan) {
  return sequence_propagator(plan_to_sequence(plan, plan_system(plan.dim)));
}

GatePlan synth_single_level_phase(int k, double phi, int dim) {
  if (k < 1 || k > dim) throw std::invalid_argument("level index out of range");
  GatePlan plan;
  plan.dim = dim;
  plan.provenance = "U" + std::to_string(k) + "^phi";
  for (int j = 1; j < dim; ++j) {
    const double a =
        j < k ? -j * phi / dim : (dim - j) * phi / dim;
    const double w = wrap_angle(a);
    if (std::abs(w) > kAngleEps) plan.layers.push_back({PhasePair{j, w}});
  }
  return plan;
}

GatePlan synth_diagonal(const DiagonalGateSpec& spec) {
  const int n = spec.dim;
  if (n < 2 || static_cast<int>(spec.phases.size()) != n)
    throw std::invalid_argument("invalid diagonal gate spec");
  std::vector<double> cum(n);
  double s = 0.0;
  for (int j = 0; j < n; ++j) {
    s += spec.phases[j];
    cum[j] = s;
  }
  // pair angle on (j, j+1) is cum_j - j*c; the free global-phase offset c must
  // close the chain, cum_{n} - n*c = 0 (mod 2pi), leaving n valid choices.
  // pick the one that leaves the fewest nonzero angles
  std::vector<double> candidates;
  for (int t = 0; t < n; ++t)
    candidates.push_back((cum[n - 1] - kTwoPi * t) / n);

  std::vector<double> best;
  std::size_t best_count = static_cast<std::size_t>(-1);
  for (double c : candidates) {
    std::vector<double> alpha(n - 1);
    std::size_t count = 0;
    for (int j = 1; j < n; ++j) {
      alpha[j - 1] = wrap_angle(cum[j - 1] - j * c);
      if (std::abs(alpha[j - 1]) > kAngleEps) ++count;
    }
    if (count < best_count) {
      best_count = count;
      best = alpha;
    }
  }

  GatePlan plan;
  plan.dim = n;
  plan.provenance = "diagonal";
  for (int j = 1; j < n; ++j)
    if (std::abs(best[j - 1]) > kAngleEps)
      plan.layers.push_back({PhasePair{j, best[j - 1]}});
  return plan;
}

GatePlan synth_dj_oracle(int k, int l, int m) {
  DiagonalGateSpec::dj_oracle(k, l, m);  // validates
  GatePlan plan;
  plan.dim = 8;
  plan.provenance = "U(1," + std::to_string(k) + "," + std::to_string(l) + "," +
                    std::to_string(m) + ")";
  for (int j = 1; j < k; ++j) plan.layers.push_back({PhasePair{j, kPi}});
  for (int j = l; j < m; ++j) plan.layers.push_back({PhasePair{j, kPi}});
  GatePlan merged = merge_plan(plan);
  if (merged.layers.size() > 2)
    throw std::logic_error("oracle plan did not merge into two layers");
  return merged;
}

std::vector<std::array<int, 3>> enumerate_balanced_oracles() {
  std::vector<std::array<int, 3>> out;
  for (int k = 2; k <= 6; ++k)
    for (int l = k + 1; l <= 7; ++l)
      for (int m = l + 1; m <= 8; ++m) out.push_back({k, l, m});
  return out;
}

GatePlan merge_plan(const GatePlan& plan) {
  GatePlan out;
  out.dim = plan.dim;
  out.provenance = plan.provenance;
  std::vector<std::set<int>> levels;  // levels touched per output layer
  for (const auto& layer : plan.layers) {
    for (const auto& p : layer) {
      std::size_t slot = 0;
      while (slot < out.layers.size() &&
             (levels[slot].count(p.r) || levels[slot].count(p.r + 1)))
        ++slot;
      if (slot == out.layers.size()) {
        out.layers.emplace_back();
        levels.emplace_back();
      }
      out.layers[slot].push_back(p);
      levels[slot].insert(p.r);
      levels[slot].insert(p.r + 1);
    }
  }
  if (unitary_fidelity(plan_propagator(plan), plan_propagator(out)) <
      1.0 - 1e-9)
    throw std::logic_error("merge changed the realized unitary");
  return out;
}

double verify_plan(const GatePlan& plan, const DiagonalGateSpec& spec) {
  if (plan.dim != spec.dim)
    throw std::invalid_argument("plan/spec dimension mismatch");
  return unitary_fidelity(target_unitary(spec), plan_propagator(plan));
}

DiagonalGateSpec GateExpr::spec() const {
  switch (kind) {
    case Kind::single_level:
      return DiagonalGateSpec::single_level(k, phi, dim);
    case Kind::oracle:
      return DiagonalGateSpec::dj_oracle(k, l, m);
    case Kind::explicit_phases:
      return DiagonalGateSpec{dim, phases};
  }
  throw std::logic_error("unreachable");
}

GatePlan GateExpr::synthesize() const {
  switch (kind) {
    case Kind::single_level:
      return merge_plan(synth_single_level_phase(k, phi, dim));
    case Kind::oracle:
      return synth_dj_oracle(k, l, m);
    case Kind::explicit_phases:
      return merge_plan(synth_diagonal(spec()));
  }
  throw std::logic_error("unreachable");
}

double parse_angle(const std::string& text) {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) throw std::invalid_argument("empty angle");
  double sign = 1.0;
  if (t[0] == '-') {
    sign = -1.0;
    t = t.substr(1);
  } else if (t[0] == '+') {
    t = t.substr(1);
  }
  const auto pi_pos = t.find("pi");
  if (pi_pos == std::string::npos) {
    std::size_t used = 0;
    const double v = std::stod(t, &used);
    if (used != t.size()) throw std::invalid_argument("bad angle: " + text);
    return sign * v;
  }
  const std::string coeff = t.substr(0, pi_pos);
  std::string rest = t.substr(pi_pos + 2);
  double num = coeff.empty() ? 1.0 : std::stod(coeff);
  double den = 1.0;
  if (!rest.empty()) {
    if (rest[0] != '/') throw std::invalid_argument("bad angle: " + text);
    den = std::stod(rest.substr(1));
  }
  return sign * num * kPi / den;
}

GateExpr parse_gate_expr(const std::string& text) {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  GateExpr e;
  if (t.rfind("U(", 0) == 0 && t.back() == ')') {
    const std::string body = t.substr(2, t.size() - 3);
    std::vector<int> idx;
    std::size_t pos = 0;
    while (pos < body.size()) {
      auto comma = body.find(',', pos);
      if (comma == std::string::npos) comma = body.size();
      idx.push_back(std::stoi(body.substr(pos, comma - pos)));
      pos = comma + 1;
    }
    if (idx.size() != 4 || idx[0] != 1)
      throw std::invalid_argument("oracle must have the form U(1,k,l,m)");
    e.kind = GateExpr::Kind::oracle;
    e.k = idx[1];
    e.l = idx[2];
    e.m = idx[3];
    DiagonalGateSpec::dj_oracle(e.k, e.l, e.m);  // validates
    return e;
  }
  if (t.size() > 1 && t[0] == 'U' && std::isdigit(static_cast<unsigned char>(t[1]))) {
    const auto open = t.find('(');
    if (open == std::string::npos || t.back() != ')')
      throw std::invalid_argument("expected Uk(phi)");
    e.kind = GateExpr::Kind::single_level;
    e.k = std::stoi(t.substr(1, open - 1));
    e.phi = parse_angle(t.substr(open + 1, t.size() - open - 2));
    if (e.k < 1 || e.k > e.dim)
      throw std::invalid_argument("level index out of range in " + text);
    return e;
  }
  throw std::invalid_argument("unrecognized gate expression: " + text);
}

}  // namespace qsim
