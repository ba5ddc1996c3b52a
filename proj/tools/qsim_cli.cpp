#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qsim/experiment.hpp"
#include "qsim/seq_io.hpp"
#include "qsim/synth.hpp"

namespace {

using namespace qsim;

struct Config {
  std::string spin = "7/2";
  double spacing_hz = 6856.0;
  double larmor_hz = 65.59e6;
  std::string model = "ideal";
  std::string format = "report";
  std::string out_path;
  unsigned seed = 1;

  SpinSystem system() const {
    return SpinSystem(parse_spin(spin), larmor_hz, spacing_hz);
  }
  PulseModel pulse_model() const {
    if (model == "ideal") return PulseModel::ideal;
    if (model == "refocused") return PulseModel::refocused_ideal;
    if (model == "timedomain") return PulseModel::time_domain;
    throw CLI::ValidationError("--model", "unknown model " + model);
  }
};

int write_output(const Config& cfg, const std::string& text) {
  if (cfg.out_path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(cfg.out_path);
  out << text;
  if (!out) {
    std::cerr << "error: cannot write " << cfg.out_path << "\n";
    return 1;
  }
  return 0;
}

std::string render_spectrum(const Config& cfg,
                            const std::vector<SpectralLine>& lines) {
  if (cfg.format == "csv") return spectrum_csv(lines);
  if (cfg.format == "ascii") return spectrum_ascii(lines);
  std::ostringstream out;
  out << spectrum_csv(lines);
  return out.str();
}

int cmd_spectrum(const Config& cfg, const std::string& state) {
  const SpinSystem sys = cfg.system();
  std::vector<SpectralLine> lines;
  if (state == "equilibrium") {
    const Matrix u = hard_pulse_propagator(sys.dim(), kPi / 2, kPi / 2);
    lines = detect_spectrum(evolve(equilibrium_state(sys), u), sys);
  } else if (state == "pps") {
    lines = small_angle_readout(pps_000(sys), 5.0 * kPi / 180.0, sys);
  } else if (state == "superposition") {
    lines = superposition_spectrum(sys);
  } else {
    std::cerr << "error: unknown state " << state << "\n";
    return 2;
  }
  return write_output(cfg, render_spectrum(cfg, lines));
}

int cmd_synth(const Config& cfg, const std::string& expr,
              const std::string& spec_file, const std::string& seq_path) {
  const SpinSystem sys = cfg.system();
  DiagonalGateSpec spec;
  GatePlan plan;
  std::string name;
  if (!spec_file.empty()) {
    std::ifstream in(spec_file);
    if (!in) {
      std::cerr << "error: cannot open " << spec_file << "\n";
      return 1;
    }
    nlohmann::json j;
    in >> j;
    spec = gate_spec_from_json(j);
    plan = merge_plan(synth_diagonal(spec));
    name = "diagonal spec from " + spec_file;
  } else {
    const GateExpr e = parse_gate_expr(expr);
    spec = e.spec();
    plan = e.synthesize();
    name = expr;
  }
  if (spec.dim != sys.dim()) {
    std::cerr << "error: gate dimension " << spec.dim
              << " does not match spin system dimension " << sys.dim() << "\n";
    return 2;
  }
  const double fid = verify_plan(plan, spec);
  const PulseSequence seq = plan_to_sequence(plan, sys, cfg.pulse_model());
  if (!seq_path.empty()) save_sequence(seq, seq_path);

  std::ostringstream out;
  out << "gate: " << name << "\n"
      << "pulse program: " << describe_plan(plan) << "\n"
      << "layers: " << plan.layers.size() << "  pairs: " << plan.pair_count()
      << "\n"
      << "fidelity: " << std::setprecision(15) << fid << "\n";
  if (!seq_path.empty()) out << "sequence file: " << seq_path << "\n";
  const int rc = write_output(cfg, out.str());
  if (rc != 0) return rc;
  return fid >= 1.0 - 1e-9 ? 0 : 3;
}

int cmd_dj(const Config& cfg, const std::string& oracle_expr, bool all) {
  const SpinSystem sys = cfg.system();
  const PulseModel model = cfg.pulse_model();
  std::vector<OracleSpec> oracles;
  if (all) {
    oracles.push_back(OracleSpec::constant(1));
    oracles.push_back(OracleSpec::constant(2));
    for (const auto& [k, l, m] : enumerate_balanced_oracles())
      oracles.push_back(OracleSpec::balanced(k, l, m));
  } else {
    oracles.push_back(OracleSpec::parse(oracle_expr));
  }

  std::ostringstream out;
  bool all_correct = true;
  out << "oracle        pulse program                  inverted  result\n";
  for (const auto& oracle : oracles) {
    const DJOutcome res = run_dj(oracle, sys, model);
    std::string inv;
    for (char c : res.inverted) inv += c;
    if (inv.empty()) inv = "-";
    const bool expect_balanced = oracle.kind == OracleSpec::Kind::balanced;
    const bool got_balanced = res.classification == Classification::balanced;
    if (expect_balanced != got_balanced) all_correct = false;
    out << std::left << std::setw(14) << oracle.name() << std::setw(31)
        << res.pulse_program << std::setw(10) << inv
        << (got_balanced ? "balanced" : "constant")
        << (expect_balanced == got_balanced ? "" : "  MISCLASSIFIED") << "\n";
  }
  const int rc = write_output(cfg, out.str());
  if (rc != 0) return rc;
  return all_correct ? 0 : 3;
}

int cmd_verify(const Config& cfg, int trials) {
  const SpinSystem sys = cfg.system();
  std::mt19937 rng(cfg.seed);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  std::uniform_int_distribution<int> pick_r(1, sys.dim() - 1);

  int failures = 0;
  for (int t = 0; t < trials; ++t) {
    const int r = pick_r(rng);
    const double phi = angle(rng), theta = angle(rng);
    const Matrix u = sequence_propagator(
        phase_pair_sequence(PhasePair{r, phi, theta}, sys));
    const Matrix u_ref =
        sequence_propagator(phase_pair_sequence(PhasePair{r, phi, kPi / 2}, sys));
    Matrix target = Matrix::Identity(sys.dim(), sys.dim());
    target(r - 1, r - 1) = std::exp(Complex(0.0, phi));
    target(r, r) = std::exp(Complex(0.0, -phi));
    if (unitary_fidelity(u, u_ref) < 1.0 - 1e-10 ||
        unitary_fidelity(u, target) < 1.0 - 1e-10)
      ++failures;
  }

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int t = 0; t < trials; ++t) {
    GatePlan plan;
    plan.dim = sys.dim();
    const int n_pairs = 1 + static_cast<int>(unit(rng) * 10);
    for (int p = 0; p < n_pairs; ++p)
      plan.layers.push_back({PhasePair{pick_r(rng), angle(rng)}});
    const GatePlan merged = merge_plan(plan);
    if (unitary_fidelity(plan_propagator(plan), plan_propagator(merged)) <
        1.0 - 1e-10)
      ++failures;
  }

  std::ostringstream out;
  out << "trials: " << 2 * trials << "  failures: " << failures << "\n";
  const int rc = write_output(cfg, out.str());
  if (rc != 0) return rc;
  return failures == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"N-level ladder spin simulator and phase-gate pulse compiler"};
  app.require_subcommand(1);
  app.fallthrough();  // allow the global options after the subcommand too

  Config cfg;
  app.add_option("--spin", cfg.spin, "spin quantum number, e.g. 7/2");
  app.add_option("--spacing-hz", cfg.spacing_hz, "adjacent line spacing in Hz");
  app.add_option("--larmor-hz", cfg.larmor_hz, "Larmor frequency in Hz");
  app.add_option("--model", cfg.model, "pulse model: ideal|refocused|timedomain");
  app.add_option("--format", cfg.format, "output format: csv|report|ascii");
  app.add_option("--out", cfg.out_path, "output path (default stdout)");
  app.add_option("--seed", cfg.seed, "seed for randomized verification");

  auto* sp = app.add_subcommand("spectrum", "simulate a stick spectrum");
  std::string state = "equilibrium";
  sp->add_option("--state", state, "equilibrium|pps|superposition");

  auto* sy = app.add_subcommand("synth", "compile a diagonal gate to pulses");
  std::string gate_expr, spec_file, seq_path;
  sy->add_option("gate", gate_expr, "gate expression, e.g. U1(pi/2) or U(1,4,5,8)");
  sy->add_option("--spec-file", spec_file, "JSON gate spec {dim, phases_pi}");
  sy->add_option("--emit", seq_path, "write the pulse-sequence file here");

  auto* dj = app.add_subcommand("dj", "run the Deutsch-Jozsa pipeline");
  std::string oracle = "constant";
  bool all = false;
  dj->add_option("oracle", oracle, "constant | U(1,k,l,m)");
  dj->add_flag("--all", all, "run every constant and balanced oracle");

  auto* ve = app.add_subcommand("verify", "randomized self-checks");
  int trials = 100;
  ve->add_option("--trials", trials, "trials per property");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sp->parsed()) return cmd_spectrum(cfg, state);
    if (sy->parsed()) {
      if (gate_expr.empty() && spec_file.empty()) {
        std::cerr << "error: synth needs a gate expression or --spec-file\n";
        return 2;
      }
      return cmd_synth(cfg, gate_expr, spec_file, seq_path);
    }
    if (dj->parsed()) return cmd_dj(cfg, oracle, all);
    if (ve->parsed()) return cmd_verify(cfg, trials);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
