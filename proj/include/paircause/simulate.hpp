#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "paircause/discovery.hpp"
#include "paircause/experiment.hpp"

namespace paircause {

inline constexpr std::uint64_t kDefaultSeed = 1729;

// Generative model for synthetic experiment records under a known causal
// structure. Outcomes are Bernoulli on the logit scale:
//   base_logit + ability_i + instruction_shift + format_shift
//   (+ interaction_shift for CwM, on intervened-instruction x structured
//   cells), with ability_i ~ N(0, ability_sd^2) shared by every condition
//   of sample i — the source of cross-stratum correlation.
struct SimConfig {
  DagStructure structure = DagStructure::IND;
  int n_samples = 200;
  int instruction_levels = 5;
  int format_levels = 2;
  double base_logit = 0.0;
  double format_shift = 0.0;                 // logit units, structured formats
  std::vector<double> instruction_shifts;    // one per non-baseline level
  double ability_sd = 0.0;
  double interaction_shift = 0.0;            // CwM only
  std::uint64_t seed = kDefaultSeed;

  void validate() const;  // enforces structure/shift consistency
  Design design() const;
  nlohmann::json to_json() const;
};

// Full factorial record set, deterministic for a given config. The random
// stream is mt19937_64 seeded with config.seed (recorded in manifests).
std::vector<ExperimentRecord> simulate(const SimConfig& config);

// Fraction of replicates whose discovered structure matches the generator,
// with Monte Carlo standard errors; replicate r runs at seed ^ r.
struct RecoveryCell {
  SimConfig config;
  int replicates = 0;
  std::map<std::string, int> verdict_counts;
  double recovery_rate = 0.0;
  double mc_se = 0.0;
};

struct RecoveryReport {
  double alpha = 0.05;
  CorrectionMode correction = CorrectionMode::none;
  std::vector<RecoveryCell> cells;
};

RecoveryReport recovery_study(const std::vector<SimConfig>& grid,
                              int replicates, const DiscoveryConfig& config,
                              double alpha);

std::string render_recovery(const RecoveryReport& report);
nlohmann::json recovery_to_json(const RecoveryReport& report);

}  // namespace paircause
