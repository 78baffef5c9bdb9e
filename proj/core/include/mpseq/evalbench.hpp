#pragma once

#include "mpseq/synth.hpp"
#include "mpseq/types.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace mpseq {

/// One representation scenario: a synthetic corpus trained at several ranks.
struct ScenarioConfig {
  std::string name;
  SynthSpec spec;
  std::vector<int> rank_values{1, 3, 5};
  int kernel_count = 20;
};

/// One joining scenario: a chain of identical-type segments built from the
/// named representation scenario's corpus, run through both joining methods.
struct JoinScenarioConfig {
  std::string name;
  std::string scenario;  // name of the ScenarioConfig supplying the corpus
  int segments = 2;
  int rank = 5;
};

struct BenchConfig {
  std::uint64_t seed = 42;
  std::vector<ScenarioConfig> scenarios;
  std::vector<JoinScenarioConfig> join_scenarios;
};

/// Config with the two paper-style corpora (sharp turn at low speed, lane
/// change at medium speed) and one two-segment joining scenario per corpus.
BenchConfig default_bench_config();

/// Parses the JSON benchmark config. Unknown scenario kinds and malformed
/// schemas are errors.
BenchConfig parse_bench_config(const std::string& text);

/// Chain conditions for `segments` consecutive executions of one type: each
/// segment applies the corpus's mean displacement rotated onto the course
/// realized at the end of the previous segment, with the mean duration.
std::vector<InitialCondition> make_chain_conditions(
    const std::string& id, const std::vector<Trajectory>& demos, int segments);

struct BenchReport {
  std::string json_text;     // deterministic given config (no timestamps)
  bool gates_passed = true;  // monotone fidelity + smoothness-ratio gates
  std::vector<std::pair<std::string, Trajectory>> trajectories;  // for CSV dumps
};

/// Trains per scenario, evaluates the representation deviations per rank,
/// runs both joining methods per join scenario, and emits a machine-readable
/// report echoing every metric, seed, and config field.
BenchReport run_benchmark(const BenchConfig& config, const DynamicsParams& params);

}  // namespace mpseq
