#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace paircause {

enum class OutputFormat { standard, json, xml, yaml };
enum class ParseMode { lenient, strict };
enum class QuestionType { single, multiple };

std::string to_string(OutputFormat f);
OutputFormat output_format_from_string(const std::string& s);

struct ParseOptions {
  ParseMode mode = ParseMode::lenient;
  // Standard-format answer extraction: the last line beginning with this
  // prefix (case-insensitive, followed by ':' or whitespace) is the answer;
  // if no such line exists the last non-empty line is used. The rule that
  // fired is recorded in diagnostics.
  std::string answer_prefix = "answer";
};

// A model response split into its reasoning and answer components.
// conformant means both fields were extracted from the positions the
// format's schema mandates; failures carry diagnostics instead of throwing.
struct ParsedGeneration {
  OutputFormat format = OutputFormat::standard;
  std::string reasoning;
  std::string answer;
  bool conformant = false;
  std::vector<std::string> diagnostics;
};

ParsedGeneration parse_response(std::string_view raw, OutputFormat format,
                                const ParseOptions& options = {});

// Renders a (reasoning, answer) pair through the format's response
// template. parse_response(render_response(r, a, f), f) recovers (r, a)
// for strings free of the format's own delimiters.
std::string render_response(std::string_view reasoning,
                            std::string_view answer, OutputFormat format);

// --- scoring -------------------------------------------------------------

enum class RuleKind {
  exact_match,
  choice_label,
  binary_label,
  ellc_single,
  ellc_multiple
};
enum class Normalizer { lowercase_trim, none };

struct ScoreRule {
  RuleKind kind = RuleKind::exact_match;
  Normalizer normalizer = Normalizer::lowercase_trim;
};

// Gold label: a single string for exact/choice/binary rules, a word set
// for the ellc rules.
struct Gold {
  std::optional<std::string> text;
  std::optional<std::set<std::string>> words;

  static Gold of(std::string s) { return {std::move(s), std::nullopt}; }
  static Gold of(std::set<std::string> w) { return {std::nullopt, std::move(w)}; }
};

// Lowercase, trim, collapse internal whitespace (for lowercase_trim).
std::string normalize(std::string_view s, Normalizer normalizer);

// Splits a free-form answer on commas and whitespace into a normalized
// word set.
std::set<std::string> split_answer_words(std::string_view answer);

// Binary outcome for one parsed answer against its gold label. Throws on
// gold-shape mismatch; everything else scores 0 or 1.
int score(std::string_view parsed_answer, const Gold& gold,
          const ScoreRule& rule);

// single: 1 iff any produced word is a target; multiple: 1 iff the
// produced set equals the target set exactly. An empty answer set scores 0.
int score_ellc(const std::set<std::string>& answers,
               const std::set<std::string>& targets,
               QuestionType question_type);

// --- per-dataset scoring configuration ------------------------------------

enum class NonconformantPolicy { exclude, as_false };

struct DatasetScoring {
  ScoreRule rule;
  std::string answer_prefix = "answer";
  NonconformantPolicy policy = NonconformantPolicy::exclude;
};

struct ScoringConfig {
  std::map<std::string, DatasetScoring> by_dataset;

  const DatasetScoring& for_dataset(const std::string& dataset_id) const;
  static ScoringConfig from_json(const nlohmann::json& j);
};

}  // namespace paircause
