#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "paircause/experiment.hpp"
#include "paircause/glmm.hpp"
#include "paircause/stat_tests.hpp"

namespace paircause {

// The five candidate structures over {instruction, format, generation}.
enum class DagStructure { IND, FMT, INS, CwoM, CwM };

std::string to_string(DagStructure s);
DagStructure dag_structure_from_string(const std::string& s);

struct EffectEstimate {
  double baseline_rate = 0.0;
  double intervened_rate = 0.0;
  double delta = 0.0;  // intervened - baseline
};

enum class CorrectionMode { none, per_dag };

std::string to_string(CorrectionMode m);

struct DiscoveryConfig {
  std::vector<double> alphas{0.05, 0.1};
  double rho = 0.3;
  CorrectionMode correction = CorrectionMode::none;
  McNemarMode mcnemar_mode = McNemarMode::chisq;
  int quadrature_nodes = 20;

  void validate() const;
};

// One pooled hypothesis test: the per-stratum results, the Stouffer
// combination, and the intervention contrast.
struct HypothesisResult {
  CombinedTest combined;
  EffectEstimate effect;
  std::vector<TestResult> per_stratum;
  std::vector<std::string> stratum_labels;
};

// Format effect (one McNemar per instruction stratum, pooled over the k
// instruction levels).
HypothesisResult test_format_effect(std::span<const ExperimentRecord> records,
                                    const Design& design,
                                    const std::string& format,
                                    const DiscoveryConfig& config);

// Instruction effect (one Cochran's Q per format stratum in
// {baseline, format}, pooled with k = 2).
HypothesisResult test_instruction_effect(
    std::span<const ExperimentRecord> records, const Design& design,
    const std::string& format, const DiscoveryConfig& config);

struct DagVerdict {
  DagStructure structure = DagStructure::IND;
  double alpha_used = 0.0;
  double p_format = 1.0;
  double p_instruction = 1.0;
  std::optional<double> p_mbias;
  CorrectionMode correction = CorrectionMode::none;
  EffectEstimate format_effect;
  EffectEstimate instruction_effect;
};

// Classification rule: neither effect significant -> IND; only format ->
// FMT; only instruction -> INS; both -> the conditional-association test
// decides CwM (significant) versus CwoM. The provider is invoked lazily,
// only when both effects are significant. With per_dag correction, A and B
// are first judged at alpha/2 and, when the second stage is reached, all
// three tests are re-judged at alpha/3.
DagVerdict classify(double p_format, double p_instruction,
                    const std::function<double()>& p_mbias_provider,
                    double alpha,
                    CorrectionMode correction = CorrectionMode::none);

// Full discovery over one (dataset, trial): per structured format, per
// alpha.
struct FormatDiscovery {
  std::string format;
  HypothesisResult format_test;       // hypothesis A
  HypothesisResult instruction_test;  // hypothesis B
  std::optional<TestResult> mbias;    // hypothesis C, when invoked
  std::vector<DagVerdict> verdicts;   // one per alpha
};

struct DiscoveryReport {
  std::string dataset_id;
  int trial_id = 0;
  DiscoveryConfig config;
  std::vector<FormatDiscovery> formats;
};

DiscoveryReport discover(std::span<const ExperimentRecord> records,
                         const Design& design, const DiscoveryConfig& config);

// DOT rendering of one verdict (nodes Instruction, Format, Generation;
// dashed bidirected Instruction-Format edge marks m-bias).
std::string to_dot(const DagVerdict& verdict);

// Aligned-text report: accuracy rows with parenthesized p-values and a
// derived-DAG row per format. Values print to three decimals; 0.000 means
// a value below 0.0005.
std::string render_table(const DiscoveryReport& report);

std::string format_p_value(double p);

nlohmann::json report_to_json(const DiscoveryReport& report);
nlohmann::json verdict_to_json(const DagVerdict& verdict);

// Sensitivity of the pooled p-values (and the classifications they imply)
// to the correlation assumption.
struct SensitivityRow {
  double rho = 0.0;
  std::string format;
  double p_format = 1.0;
  double p_instruction = 1.0;
  std::vector<DagVerdict> verdicts;  // one per alpha
};

struct SensitivityReport {
  std::string dataset_id;
  int trial_id = 0;
  std::vector<double> rho_grid;
  std::vector<double> alphas;
  std::vector<SensitivityRow> rows;
  // formats whose verdict changes anywhere across the grid, per alpha
  std::vector<std::string> verdict_flips;
};

SensitivityReport sensitivity(std::span<const ExperimentRecord> records,
                              const Design& design,
                              const std::vector<double>& rho_grid,
                              const std::vector<double>& alphas,
                              const DiscoveryConfig& base_config);

std::string render_sensitivity(const SensitivityReport& report);
nlohmann::json sensitivity_to_json(const SensitivityReport& report);

}  // namespace paircause
