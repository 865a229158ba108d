#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <string>

#include "paircause/parsing.hpp"

using namespace paircause;

TEST_CASE("json response with reasoning and answer") {
  auto p = parse_response(R"({"reasoning":"16-3-4=9; 9*2=18","answer":"18"})",
                          OutputFormat::json);
  CHECK(p.conformant);
  CHECK(p.reasoning == "16-3-4=9; 9*2=18");
  CHECK(p.answer == "18");
}

TEST_CASE("xml minimal schema instance") {
  auto p = parse_response(
      "<root><reasoning>r</reasoning><answer>a</answer></root>",
      OutputFormat::xml);
  CHECK(p.conformant);
  CHECK(p.reasoning == "r");
  CHECK(p.answer == "a");
}

TEST_CASE("yaml well-formed example") {
  auto p = parse_response("reasoning: \"bar\"\nanswer: \"baz\"\n",
                          OutputFormat::yaml);
  CHECK(p.conformant);
  CHECK(p.reasoning == "bar");
  CHECK(p.answer == "baz");
}

TEST_CASE("ill-formed json is diagnosed, not repaired") {
  // Missing comma plus a stray bracket.
  const char* bad = "{\n\"reasoning\": \"bar\"\n\"answer\": \"baz\"\n]}";
  for (ParseMode mode : {ParseMode::lenient, ParseMode::strict}) {
    auto p = parse_response(bad, OutputFormat::json, {mode, "answer"});
    CHECK_FALSE(p.conformant);
    REQUIRE_FALSE(p.diagnostics.empty());
  }
}

TEST_CASE("ill-formed xml is diagnosed") {
  const char* bad =
      "<root>\n<reasoning>bar</reasoning>\n<answer>baz<answer>";
  for (ParseMode mode : {ParseMode::lenient, ParseMode::strict}) {
    auto p = parse_response(bad, OutputFormat::xml, {mode, "answer"});
    CHECK_FALSE(p.conformant);
    CHECK_FALSE(p.diagnostics.empty());
  }
}

TEST_CASE("ill-formed yaml is diagnosed") {
  const char* bad = "reasoning: \"bar\"]}";
  for (ParseMode mode : {ParseMode::lenient, ParseMode::strict}) {
    auto p = parse_response(bad, OutputFormat::yaml, {mode, "answer"});
    CHECK_FALSE(p.conformant);
    CHECK_FALSE(p.diagnostics.empty());
  }
}

TEST_CASE("lenient mode strips code fences and prose; strict refuses") {
  std::string fenced = "Here you go:\n```json\n{\"reasoning\": \"r\", "
                       "\"answer\": \"a\"}\n```\nHope that helps.";
  auto lenient = parse_response(fenced, OutputFormat::json);
  CHECK(lenient.conformant);
  CHECK(lenient.answer == "a");
  auto strict =
      parse_response(fenced, OutputFormat::json, {ParseMode::strict, "answer"});
  CHECK_FALSE(strict.conformant);

  std::string yaml_prose =
      "Sure!\nreasoning: \"it follows\"\nanswer: \"42\"\nAnything else?";
  auto y = parse_response(yaml_prose, OutputFormat::yaml);
  CHECK(y.conformant);
  CHECK(y.answer == "42");

  std::string xml_prose =
      "Result: <root><reasoning>x</reasoning><answer>y</answer></root> done";
  auto x = parse_response(xml_prose, OutputFormat::xml);
  CHECK(x.conformant);
  CHECK(x.answer == "y");
}

TEST_CASE("missing keys are reported") {
  auto p = parse_response(R"({"reasoning":"only"})", OutputFormat::json);
  CHECK_FALSE(p.conformant);
  bool mentions_answer = false;
  for (const auto& d : p.diagnostics)
    mentions_answer = mentions_answer || d.find("answer") != std::string::npos;
  CHECK(mentions_answer);
}

TEST_CASE("standard format answer extraction") {
  auto p = parse_response("step one\nstep two\nAnswer: 18",
                          OutputFormat::standard);
  CHECK(p.conformant);
  CHECK(p.reasoning == "step one\nstep two");
  CHECK(p.answer == "18");

  // Fallback to last non-empty line, recorded in diagnostics.
  auto q = parse_response("thinking...\n42\n\n", OutputFormat::standard);
  CHECK(q.conformant);
  CHECK(q.answer == "42");
  bool noted = false;
  for (const auto& d : q.diagnostics)
    noted = noted || d.find("last non-empty line") != std::string::npos;
  CHECK(noted);

  // "answers" is a word, not the delimiter.
  auto r = parse_response("answers vary\nfinal", OutputFormat::standard);
  CHECK(r.answer == "final");

  auto empty = parse_response("", OutputFormat::standard);
  CHECK_FALSE(empty.conformant);
  CHECK_FALSE(empty.diagnostics.empty());
}

namespace {

std::string random_printable(std::mt19937_64& rng, bool multiline) {
  std::uniform_int_distribution<int> len(0, 40);
  std::uniform_int_distribution<int> ch(32, 126);
  std::string s;
  int n = len(rng);
  for (int i = 0; i < n; ++i) {
    if (multiline && rng() % 17 == 0)
      s.push_back('\n');
    else
      s.push_back(static_cast<char>(ch(rng)));
  }
  return s;
}

// The standard format's delimiters: answer lines are single-line and
// trimmed, and the reasoning must not itself contain an answer line.
bool standard_safe(const std::string& reasoning, const std::string& answer) {
  if (answer.find('\n') != std::string::npos) return false;
  if (!answer.empty() &&
      (std::isspace(static_cast<unsigned char>(answer.front())) ||
       std::isspace(static_cast<unsigned char>(answer.back()))))
    return false;
  std::string low;
  for (char c : reasoning)
    low.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  std::size_t pos = 0;
  while ((pos = low.find("answer", pos)) != std::string::npos) {
    std::size_t line_start = low.rfind('\n', pos);
    line_start = line_start == std::string::npos ? 0 : line_start + 1;
    std::size_t scan = line_start;
    while (scan < pos && std::isspace(static_cast<unsigned char>(low[scan])))
      ++scan;
    if (scan == pos) return false;  // a line starting with "answer"
    ++pos;
  }
  return !reasoning.empty() || !answer.empty();
}

}  // namespace

TEST_CASE("render-then-parse is identity per format") {
  std::mt19937_64 rng(2024);
  int standard_checked = 0;
  for (int trial = 0; trial < 400; ++trial) {
    std::string reasoning = random_printable(rng, true);
    std::string answer = random_printable(rng, false);

    for (OutputFormat fmt :
         {OutputFormat::json, OutputFormat::xml, OutputFormat::yaml}) {
      std::string rendered = render_response(reasoning, answer, fmt);
      for (ParseMode mode : {ParseMode::lenient, ParseMode::strict}) {
        auto p = parse_response(rendered, fmt, {mode, "answer"});
        REQUIRE(p.conformant);
        CHECK(p.reasoning == reasoning);
        CHECK(p.answer == answer);
      }
    }
    if (standard_safe(reasoning, answer)) {
      ++standard_checked;
      auto p = parse_response(render_response(reasoning, answer,
                                              OutputFormat::standard),
                              OutputFormat::standard);
      REQUIRE(p.conformant);
      CHECK(p.reasoning == reasoning);
      CHECK(p.answer == answer);
    }
  }
  CHECK(standard_checked > 100);
}

TEST_CASE("parsing never throws, whatever the bytes") {
  std::mt19937_64 rng(31337);
  std::uniform_int_distribution<int> len(0, 200);
  std::uniform_int_distribution<int> byte(0, 255);
  // Bias toward structural characters so deep/broken nesting gets hit.
  const std::string structural = "{}[]<>:\"'\\,\n`&;|-";
  for (int trial = 0; trial < 1500; ++trial) {
    std::string raw;
    int n = len(rng);
    for (int i = 0; i < n; ++i) {
      if (rng() % 3 == 0)
        raw.push_back(structural[rng() % structural.size()]);
      else
        raw.push_back(static_cast<char>(byte(rng)));
    }
    for (OutputFormat fmt : {OutputFormat::standard, OutputFormat::json,
                             OutputFormat::xml, OutputFormat::yaml}) {
      for (ParseMode mode : {ParseMode::lenient, ParseMode::strict}) {
        ParsedGeneration p;
        REQUIRE_NOTHROW(p = parse_response(raw, fmt, {mode, "answer"}));
        if (!p.conformant) CHECK_FALSE(p.diagnostics.empty());
      }
    }
  }
}

TEST_CASE("score exact match") {
  ScoreRule rule{RuleKind::exact_match, Normalizer::lowercase_trim};
  CHECK(score("18", Gold::of("18"), rule) == 1);
  CHECK(score(" 18 ", Gold::of("18"), rule) == 1);
  CHECK(score("19", Gold::of("18"), rule) == 0);
  CHECK(score("Black Ball", Gold::of("black  ball"), rule) == 1);
}

TEST_CASE("score choice label") {
  ScoreRule rule{RuleKind::choice_label, Normalizer::lowercase_trim};
  CHECK(score("B", Gold::of("B"), rule) == 1);
  CHECK(score("b)", Gold::of("B"), rule) == 1);
  CHECK(score("(c)", Gold::of("C"), rule) == 1);
  CHECK(score("B) Analyze the source", Gold::of("B"), rule) == 1);
  CHECK(score("A", Gold::of("B"), rule) == 0);
  CHECK(score("Analyze", Gold::of("B"), rule) == 0);
}

TEST_CASE("score binary label") {
  ScoreRule rule{RuleKind::binary_label, Normalizer::lowercase_trim};
  CHECK(score("True", Gold::of("True"), rule) == 1);
  CHECK(score("yes", Gold::of("True"), rule) == 1);
  CHECK(score("No.", Gold::of("no"), rule) == 1);
  CHECK(score("False", Gold::of("True"), rule) == 0);
  CHECK(score("maybe", Gold::of("True"), rule) == 0);
  CHECK_THROWS(score("yes", Gold::of("many"), rule));
}

TEST_CASE("gold shape must match the rule") {
  CHECK_THROWS(score("x", Gold::of(std::set<std::string>{"x"}),
                     ScoreRule{RuleKind::exact_match, Normalizer::lowercase_trim}));
  CHECK_THROWS(score("x", Gold::of("x"),
                     ScoreRule{RuleKind::ellc_single, Normalizer::lowercase_trim}));
}

TEST_CASE("ellc scoring") {
  std::set<std::string> targets{"note", "tone"};
  CHECK(score_ellc({"tone"}, targets, QuestionType::single) == 1);
  CHECK(score_ellc({"note"}, targets, QuestionType::multiple) == 0);
  CHECK(score_ellc({"note", "tone"}, targets, QuestionType::multiple) == 1);
  CHECK(score_ellc({}, targets, QuestionType::single) == 0);
  CHECK(score_ellc({}, targets, QuestionType::multiple) == 0);
  CHECK_THROWS(score_ellc({"x"}, {}, QuestionType::single));
}

TEST_CASE("ellc rules through score() split the answer text") {
  ScoreRule multi{RuleKind::ellc_multiple, Normalizer::lowercase_trim};
  ScoreRule single{RuleKind::ellc_single, Normalizer::lowercase_trim};
  Gold gold = Gold::of(std::set<std::string>{"note", "tone"});
  CHECK(score("note, tone", gold, multi) == 1);
  CHECK(score("Note,Tone", gold, multi) == 1);
  CHECK(score("note", gold, multi) == 0);
  CHECK(score("note", gold, single) == 1);
}

TEST_CASE("normalization is idempotent") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 200; ++i) {
    std::string s = random_printable(rng, true);
    std::string once = normalize(s, Normalizer::lowercase_trim);
    CHECK(normalize(once, Normalizer::lowercase_trim) == once);
  }
}

TEST_CASE("multiple-correct implies single-correct on non-empty sets") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> nwords(1, 4);
  auto word = [&](int i) { return "w" + std::to_string(i); };
  for (int trial = 0; trial < 200; ++trial) {
    std::set<std::string> targets, answers;
    int nt = nwords(rng);
    for (int i = 0; i < nt; ++i) targets.insert(word(static_cast<int>(rng() % 6)));
    int na = nwords(rng);
    for (int i = 0; i < na; ++i) answers.insert(word(static_cast<int>(rng() % 6)));
    if (answers.empty()) continue;
    if (score_ellc(answers, targets, QuestionType::multiple) == 1)
      CHECK(score_ellc(answers, targets, QuestionType::single) == 1);
  }
}

TEST_CASE("scoring config parses and dispatches") {
  auto j = nlohmann::json::parse(R"({
    "gsm8k": {"rule": "exact_match"},
    "opseval": {"rule": "choice_label", "normalizer": "lowercase_trim"},
    "xcodeeval": {"rule": "binary_label", "nonconformant": "as-false"},
    "ellc": {"rule": "ellc_multiple", "delimiter": "final"}
  })");
  auto cfg = ScoringConfig::from_json(j);
  CHECK(cfg.for_dataset("gsm8k").rule.kind == RuleKind::exact_match);
  CHECK(cfg.for_dataset("xcodeeval").policy == NonconformantPolicy::as_false);
  CHECK(cfg.for_dataset("ellc").answer_prefix == "final");
  CHECK_THROWS(cfg.for_dataset("unknown"));
  CHECK_THROWS(ScoringConfig::from_json(nlohmann::json::parse(
      R"({"d": {"rule": "nope"}})")));
}
