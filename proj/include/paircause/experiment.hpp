#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace paircause {

enum class Factor { instruction, format };

std::string to_string(Factor f);

// One level of a two-level-or-more factor, e.g. instruction="standard" or
// format="json".
struct FactorLevel {
  Factor factor = Factor::instruction;
  std::string level;
  bool is_baseline = false;

  bool operator==(const FactorLevel&) const = default;
};

// One (sample, instruction, format, trial) observation with a binary
// outcome. Sample identity is preserved so downstream paired tests can
// match observations of the same sample across conditions.
struct ExperimentRecord {
  std::string sample_id;
  std::string dataset_id;
  int trial_id = 0;
  FactorLevel instruction;
  FactorLevel format;
  int outcome = 0;  // 1 = correct
  std::optional<std::string> raw_response;
};

// The factorial layout: level lists per factor plus the designated
// baselines. Baselines must appear in the lists; each factor needs at
// least two levels.
struct Design {
  std::vector<std::string> instruction_levels;
  std::vector<std::string> format_levels;
  std::string baseline_instruction;
  std::string baseline_format;

  void validate() const;  // throws std::invalid_argument on violation
  bool has_instruction(const std::string& level) const;
  bool has_format(const std::string& level) const;
  FactorLevel instruction_level(const std::string& level) const;
  FactorLevel format_level(const std::string& level) const;
  // Structured / intervened formats: every format level except the baseline.
  std::vector<std::string> alternative_formats() const;
  std::vector<std::string> alternative_instructions() const;

  static Design from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

enum class RecordFormat { json_lines, csv };

// Reads and validates records. Rows are checked against the design; any
// malformed row raises std::invalid_argument naming the 1-based position.
std::vector<ExperimentRecord> load_records(std::istream& source,
                                           RecordFormat format,
                                           const Design& design);

void write_records_jsonl(std::ostream& out,
                         std::span<const ExperimentRecord> records);

nlohmann::json record_to_json(const ExperimentRecord& rec);

// Complete-block binary outcome matrix within one stratum: rows are
// samples, columns are the varied conditions.
struct PairedTable {
  std::vector<std::string> condition_labels;
  std::vector<std::string> sample_ids;
  std::vector<int> outcomes;  // row-major, n x k
  std::string stratum_label;

  int n() const { return static_cast<int>(sample_ids.size()); }
  int k() const { return static_cast<int>(condition_labels.size()); }
  int at(int row, int col) const { return outcomes[row * k() + col]; }
  std::vector<int> column(int col) const;
  int column_sum(int col) const;
  int row_sum(int row) const;
};

// Builds the n x k outcome matrix for the stratum where `stratify_by`
// holds, varying `vary` over `include_levels`. All records must belong to
// one (dataset, trial); the block must be complete.
PairedTable build_paired_table(std::span<const ExperimentRecord> records,
                               const FactorLevel& stratify_by, Factor vary,
                               const std::vector<std::string>& include_levels);

struct MissingCell {
  std::string dataset_id;
  int trial_id = 0;
  std::string sample_id;
  std::string instruction;
  std::string format;

  bool operator==(const MissingCell&) const = default;
};

// Report-only completeness check: which (sample x instruction x format)
// cells of the full factorial are absent, per (dataset, trial).
std::vector<MissingCell> validate_design(
    std::span<const ExperimentRecord> records, const Design& design);

// (dataset_id, trial_id) pairs present in a record set, in sorted order.
std::vector<std::pair<std::string, int>> dataset_trials(
    std::span<const ExperimentRecord> records);

// The subset belonging to one (dataset, trial), preserving input order.
std::vector<ExperimentRecord> filter_dataset_trial(
    std::span<const ExperimentRecord> records, const std::string& dataset_id,
    int trial_id);

}  // namespace paircause
