#include <cstdio>
#include <fstream>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "qsim/seq_io.hpp"
#include "qsim/synth.hpp"

using namespace qsim;
using nlohmann::json;

namespace {
const SpinSystem kCs{3.5, 65.59e6, 6856.0};
}

TEST_CASE("spin formatting") {
  CHECK(format_spin(3.5) == "7/2");
  CHECK(format_spin(1.0) == "1");
  CHECK(parse_spin("7/2") == doctest::Approx(3.5));
  CHECK(parse_spin("3.5") == doctest::Approx(3.5));
}

TEST_CASE("sequence round trip") {
  PulseSequence seq{kCs, {}};
  seq.events.push_back(PulseEvent::hard_pulse(kPi / 2, kPi / 2));
  seq.events.push_back(PulseEvent::multi_frequency_pulse(
      {1, 3, 5, 7}, std::vector<double>(4, 2 * kPi),
      std::vector<double>(4, kPi / 2)));
  auto refocused = PulseEvent::selective_pulse(4, kPi, 0.25 * kPi,
                                               PulseModel::refocused_ideal);
  refocused.duration = refocus_duration(kCs);
  seq.events.push_back(refocused);
  seq.events.push_back(PulseEvent::delay(1e-3));

  const json j = sequence_to_json(seq);
  const PulseSequence back = sequence_from_json(j);
  REQUIRE(back.events.size() == seq.events.size());
  CHECK(back.system.spin == seq.system.spin);
  CHECK(back.system.line_spacing_hz == seq.system.line_spacing_hz);
  CHECK(unitary_fidelity(sequence_propagator(seq), sequence_propagator(back)) >=
        1.0 - 1e-12);

  SUBCASE("emit is stable under re-parsing") {
    const json j2 = sequence_to_json(sequence_from_json(j));
    CHECK(j == j2);
  }
}

TEST_CASE("transitions accepted as letters or index pairs") {
  const char* text = R"({
    "system": {"spin": "7/2", "spacing_hz": 6856.0},
    "events": [
      {"kind": "multi_frequency", "transitions": ["a", [3, 4]],
       "flip_pi": [2, 2], "phase_deg": [90, 90]}
    ]
  })";
  const PulseSequence seq = sequence_from_json(json::parse(text));
  REQUIRE(seq.events.size() == 1);
  CHECK(seq.events[0].transitions ==
        std::vector<std::pair<int, int>>{{1, 2}, {3, 4}});
  CHECK(seq.events[0].flip[0] == doctest::Approx(2 * kPi));
}

TEST_CASE("malformed sequences rejected") {
  CHECK_THROWS(sequence_from_json(json::parse(R"({"events": []})")));
  CHECK_THROWS(sequence_from_json(json::parse(R"({
    "system": {"spin": "7/2", "spacing_hz": 100},
    "events": [{"kind": "selective", "transitions": ["a", "c"],
                "flip_pi": [1, 1], "phase_deg": [0, 0]}]
  })")));
  CHECK_THROWS(sequence_from_json(json::parse(R"({
    "system": {"spin": "7/2", "spacing_hz": 100},
    "events": [{"kind": "selective", "transitions": [[1, 3]],
                "flip_pi": [1], "phase_deg": [0]}]
  })")));
  CHECK_THROWS(sequence_from_json(json::parse(R"({
    "system": {"spin": "7/2", "spacing_hz": 100},
    "events": [{"kind": "wiggle"}]
  })")));
}

TEST_CASE("file save and load") {
  const std::string path = "test_seq_tmp.json";
  const GatePlan plan = synth_dj_oracle(4, 5, 8);
  const PulseSequence seq = plan_to_sequence(plan, kCs);
  save_sequence(seq, path);
  const PulseSequence back = load_sequence(path);
  CHECK(unitary_fidelity(sequence_propagator(back),
                         target_unitary(DiagonalGateSpec::dj_oracle(4, 5, 8))) >=
        1.0 - 1e-9);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_sequence("does_not_exist.json"), std::runtime_error);
}

TEST_CASE("gate spec from JSON") {
  const DiagonalGateSpec spec = gate_spec_from_json(
      json::parse(R"({"dim": 8, "phases_pi": [1, 0, 0, 1, 1, 0, 0, 1]})"));
  CHECK(spec.dim == 8);
  CHECK(spec.phases[0] == doctest::Approx(kPi));
  CHECK(spec.phases[1] == 0.0);
  CHECK_THROWS(gate_spec_from_json(json::parse(R"({"dim": 8, "phases_pi": [1]})")));
}

TEST_CASE("spectrum CSV") {
  const Matrix u = hard_pulse_propagator(8, kPi / 2, kPi / 2);
  const auto lines = detect_spectrum(evolve(equilibrium_state(kCs), u), kCs);
  const std::string csv = spectrum_csv(lines);
  CHECK(csv.rfind("label,frequency_hz,intensity,phase_deg\n", 0) == 0);
  CHECK(csv.find("\na,") != std::string::npos);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 8);
  // deterministic output
  CHECK(csv == spectrum_csv(lines));
}

TEST_CASE("spectrum ascii plot shows signs") {
  const DJOutcome out = run_dj(OracleSpec::balanced(2, 3, 4), kCs);
  const std::string plot = spectrum_ascii(out.spectrum);
  CHECK(plot.find('#') != std::string::npos);
  CHECK(std::count(plot.begin(), plot.end(), '\n') == 7);
}
