#include "paircause/ellc.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace paircause {

namespace {

using nlohmann::json;

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

bool all_alpha(std::string_view s) {
  return !s.empty() &&
         std::all_of(s.begin(), s.end(), [](unsigned char c) {
           return std::isalpha(c) != 0;
         });
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D4A68B971BCB3DULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// All words formable from the letter multiset that appear in both the
// broad lexicon and the common list; distinct permutations only.
std::set<std::string> targets_for(std::vector<char> letters,
                                  const Lexicons& lexicons) {
  std::sort(letters.begin(), letters.end());
  std::set<std::string> found;
  std::string perm(letters.begin(), letters.end());
  do {
    if (lexicons.broad_words.count(perm) && lexicons.common_words.count(perm))
      found.insert(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return found;
}

std::string letters_phrase(LetterPosition position) {
  return position == LetterPosition::last ? "last letters" : "middle letters";
}

std::string question_for(const std::vector<std::string>& items,
                         LetterPosition position, QuestionType type) {
  std::string joined;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) joined += ' ';
    joined += items[i];
  }
  std::string text = "Take the " + letters_phrase(position) +
                     " of each words in \"" + joined +
                     "\" and rearrange these selected letters to form valid "
                     "English word(s), each word using each letter exactly "
                     "once. ";
  if (type == QuestionType::multiple) {
    text +=
        "The output may be a single word or multiple words, but must "
        "include every possible valid combination. What are the word(s)?";
  } else {
    text += "The output must be a single valid word. What is the word?";
  }
  return text;
}

}  // namespace

std::string to_string(LetterPosition p) {
  return p == LetterPosition::last ? "last" : "middle";
}

std::string to_string(QuestionType q) {
  return q == QuestionType::single ? "single" : "multiple";
}

LetterPosition letter_position_from_string(const std::string& s) {
  if (s == "last") return LetterPosition::last;
  if (s == "middle") return LetterPosition::middle;
  throw std::invalid_argument("unknown letter position '" + s + "'");
}

QuestionType question_type_from_string(const std::string& s) {
  if (s == "single") return QuestionType::single;
  if (s == "multiple") return QuestionType::multiple;
  throw std::invalid_argument("unknown question type '" + s + "'");
}

json EllcSample::to_json() const {
  return json{{"items", items},
              {"position", to_string(position)},
              {"letters", std::string(letters.begin(), letters.end())},
              {"targets", std::vector<std::string>(targets.begin(), targets.end())},
              {"question_type", to_string(question_type)},
              {"question_text", question_text}};
}

EllcSample EllcSample::from_json(const nlohmann::json& j) {
  EllcSample s;
  s.items = j.at("items").get<std::vector<std::string>>();
  s.position = letter_position_from_string(j.at("position").get<std::string>());
  std::string letters = j.at("letters").get<std::string>();
  s.letters.assign(letters.begin(), letters.end());
  auto targets = j.at("targets").get<std::vector<std::string>>();
  s.targets.insert(targets.begin(), targets.end());
  s.question_type =
      question_type_from_string(j.at("question_type").get<std::string>());
  s.question_text = j.value("question_text", std::string());
  return s;
}

std::vector<std::string> load_word_list(std::istream& in) {
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string word;
    if (!(row >> word)) continue;
    if (word[0] == '#') continue;
    words.push_back(word);
  }
  return words;
}

char extract_letter(std::string_view word, LetterPosition position) {
  if (!all_alpha(word))
    throw std::invalid_argument("extract_letter: word must be non-empty and "
                                "alphabetic: '" +
                                std::string(word) + "'");
  std::size_t index;
  if (position == LetterPosition::last) {
    index = word.size() - 1;
  } else {
    // Exact center for odd length, left-central for even length.
    index = (word.size() - 1) / 2;
  }
  return static_cast<char>(
      std::tolower(static_cast<unsigned char>(word[index])));
}

EllcGenResult generate(const Lexicons& lexicons, int word_length,
                       LetterPosition position, const EllcGenConfig& config) {
  if (word_length != 4 && word_length != 6)
    throw std::invalid_argument("ellc: word_length must be 4 or 6");
  if (lexicons.common_words.empty() || lexicons.broad_words.empty() ||
      lexicons.item_pool.empty())
    throw std::invalid_argument("ellc: lexicons must be non-empty");

  // Index the pool by extracted letter. Items that cannot yield a letter
  // (non-alphabetic) are dropped up front.
  std::map<char, std::vector<int>> items_by_letter;
  std::vector<std::string> pool;
  for (const auto& raw : lexicons.item_pool) {
    if (!all_alpha(raw)) continue;
    pool.push_back(raw);
  }
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  for (int i = 0; i < static_cast<int>(pool.size()); ++i)
    items_by_letter[extract_letter(pool[i], position)].push_back(i);

  EllcGenResult result;
  auto& skips = result.skips;

  std::vector<std::string> candidates;
  for (const auto& w : lexicons.common_words)
    if (static_cast<int>(w.size()) == word_length && all_alpha(w))
      candidates.push_back(lower(w));
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());

  for (const auto& candidate : candidates) {
    if (config.max_samples > 0 &&
        skips.combinations_emitted >= config.max_samples)
      break;
    ++skips.candidates_considered;

    // Per-candidate derived seed keeps output independent of scheduling.
    std::mt19937_64 rng(splitmix64(config.seed ^ fnv1a64(candidate)));

    std::vector<std::string> items;
    std::set<int> used;
    bool feasible = true;
    for (char c : candidate) {
      auto it = items_by_letter.find(c);
      std::vector<int> eligible;
      if (it != items_by_letter.end()) {
        for (int idx : it->second)
          if (!used.count(idx)) eligible.push_back(idx);
      }
      if (eligible.empty()) {
        ++skips.skipped["no_item_for_letter"];
        feasible = false;
        break;
      }
      std::uniform_int_distribution<std::size_t> pick(0, eligible.size() - 1);
      int chosen = eligible[pick(rng)];
      used.insert(chosen);
      items.push_back(pool[chosen]);
    }
    if (!feasible) continue;

    std::vector<char> letters(candidate.begin(), candidate.end());
    std::set<std::string> targets = targets_for(letters, lexicons);
    if (targets.empty()) {
      ++skips.skipped["no_valid_target"];
      continue;
    }
    bool blocked = false;
    for (const auto& target : targets) {
      for (const auto& banned : config.blocklist) {
        if (!banned.empty() && target.find(lower(banned)) != std::string::npos) {
          blocked = true;
          break;
        }
      }
      if (blocked) break;
    }
    if (blocked) {
      ++skips.skipped["blocklist"];
      continue;
    }

    for (QuestionType type : {QuestionType::single, QuestionType::multiple}) {
      EllcSample sample;
      sample.items = items;
      sample.position = position;
      sample.letters = letters;
      sample.targets = targets;
      sample.question_type = type;
      sample.question_text = question_for(items, position, type);
      result.samples.push_back(std::move(sample));
    }
    ++skips.combinations_emitted;
  }
  return result;
}

VerifyResult verify(const EllcSample& sample, const Lexicons& lexicons) {
  VerifyResult r;
  auto violation = [&](const std::string& v) {
    r.ok = false;
    r.violations.push_back(v);
  };

  if (sample.items.size() != 4 && sample.items.size() != 6)
    violation("item count must be 4 or 6");
  if (sample.targets.empty()) violation("empty target set");

  std::vector<char> letters;
  for (const auto& item : sample.items) {
    try {
      letters.push_back(extract_letter(item, sample.position));
    } catch (const std::invalid_argument&) {
      violation("item '" + item + "' yields no letter");
      return r;
    }
  }
  if (letters != sample.letters)
    violation("stored letters disagree with re-extraction");

  std::vector<char> sorted_letters = letters;
  std::sort(sorted_letters.begin(), sorted_letters.end());
  for (const auto& target : sample.targets) {
    std::string t = lower(target);
    std::string sorted_target = t;
    std::sort(sorted_target.begin(), sorted_target.end());
    if (sorted_target != std::string(sorted_letters.begin(), sorted_letters.end()))
      violation("target '" + target + "' is not an anagram of the letters");
    if (!lexicons.broad_words.count(t))
      violation("target '" + target + "' not in broad lexicon");
    if (!lexicons.common_words.count(t))
      violation("target '" + target + "' not in common list");
  }

  std::set<std::string> expected = targets_for(letters, lexicons);
  for (const auto& t : expected)
    if (!sample.targets.count(t))
      violation("incomplete target set: missing '" + t + "'");
  return r;
}

std::string llc_gold(std::string_view item_string) {
  std::istringstream in{std::string(item_string)};
  std::string item;
  std::string gold;
  while (in >> item) gold.push_back(item.back());
  if (gold.empty())
    throw std::invalid_argument("llc_gold: no items in input");
  return gold;
}

json SkipReport::to_json() const {
  return json{{"candidates_considered", candidates_considered},
              {"combinations_emitted", combinations_emitted},
              {"skipped", skipped}};
}

}  // namespace paircause
