#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "paircause/parsing.hpp"

namespace paircause {

enum class LetterPosition { last, middle };

std::string to_string(LetterPosition p);
std::string to_string(QuestionType q);
LetterPosition letter_position_from_string(const std::string& s);
QuestionType question_type_from_string(const std::string& s);

// One benchmark sample: the puzzle items, the letters they yield, and the
// complete set of valid rearrangements.
struct EllcSample {
  std::vector<std::string> items;  // 4 or 6 words, original case
  LetterPosition position = LetterPosition::last;
  std::vector<char> letters;       // extracted, lowercase, item order
  std::set<std::string> targets;   // lowercase, non-empty
  QuestionType question_type = QuestionType::single;
  std::string question_text;

  nlohmann::json to_json() const;
  static EllcSample from_json(const nlohmann::json& j);
};

// Word sources: a frequency-filtered common list (candidate words and
// target filter), a broad validity lexicon, and the pool of puzzle items.
// common_words is not assumed to be a subset of broad_words.
struct Lexicons {
  std::set<std::string> common_words;  // lowercase
  std::set<std::string> broad_words;   // lowercase
  std::vector<std::string> item_pool;  // original case, unique
};

// One word per line; an optional second column (e.g. a frequency) is
// ignored. Blank lines and lines starting with '#' are skipped.
std::vector<std::string> load_word_list(std::istream& in);

// The letter at the configured position: last character, or the middle
// character (exact center for odd length, left-central for even length).
// Lowercased. The word must be non-empty and alphabetic.
char extract_letter(std::string_view word, LetterPosition position);

struct EllcGenConfig {
  int max_samples = 0;  // cap on emitted combinations; 0 = unlimited
  std::uint64_t seed = 1729;
  std::vector<std::string> blocklist;  // lowercase substrings
};

struct SkipReport {
  int candidates_considered = 0;
  int combinations_emitted = 0;
  std::map<std::string, int> skipped;  // reason -> count

  nlohmann::json to_json() const;
};

struct EllcGenResult {
  std::vector<EllcSample> samples;  // two per combination (single, multiple)
  SkipReport skips;
};

// Builds samples for every common word of the given length: each of its
// letters is mapped to a pool item with that extracted letter (sampled
// uniformly without replacement under a per-candidate derived seed), the
// letter multiset is permuted exhaustively, and permutations present in
// both lexicons become the target set. Candidates are processed in sorted
// order, so output is canonical for a given (lexicons, config).
EllcGenResult generate(const Lexicons& lexicons, int word_length,
                       LetterPosition position, const EllcGenConfig& config);

struct VerifyResult {
  bool ok = true;
  std::vector<std::string> violations;
};

// Independent re-derivation: re-extracts the letters, re-enumerates the
// permutations against both lexicons, and compares the recomputed target
// set with the sample's.
VerifyResult verify(const EllcSample& sample, const Lexicons& lexicons);

// Plain last-letter concatenation gold label for a whitespace-separated
// item string, case preserved.
std::string llc_gold(std::string_view item_string);

}  // namespace paircause
