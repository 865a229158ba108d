#include "paircause/parsing.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

#include <yaml-cpp/yaml.h>

namespace paircause {

namespace {

using nlohmann::json;

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n';
}

std::string trim_view(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_lines(std::string_view s) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == '\n') {
      std::string line(s.substr(start, i - start));
      if (!line.empty() && line.back() == '\r') line.pop_back();
      lines.push_back(std::move(line));
      start = i + 1;
    }
  }
  return lines;
}

std::string join_lines(const std::vector<std::string>& lines, std::size_t from,
                       std::size_t to) {
  std::string out;
  for (std::size_t i = from; i < to; ++i) {
    if (i > from) out.push_back('\n');
    out += lines[i];
  }
  return out;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

// Removes Markdown code fences (``` or ```lang) delimiting the body, if
// present, and returns the inner text.
std::string strip_code_fences(const std::string& body) {
  auto lines = split_lines(body);
  int first = -1, last = -1;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim_view(lines[i]).rfind("```", 0) == 0) {
      if (first < 0)
        first = static_cast<int>(i);
      else
        last = static_cast<int>(i);
    }
  }
  if (first < 0 || last < 0 || last <= first) return body;
  return join_lines(lines, first + 1, last);
}

// Finds the first balanced top-level JSON object, honoring strings and
// escapes. Returns npos-pair when none exists.
std::pair<std::size_t, std::size_t> find_json_object(const std::string& s) {
  std::size_t start = s.find('{');
  if (start == std::string::npos) return {std::string::npos, std::string::npos};
  int depth = 0;
  bool in_string = false, escaped = false;
  for (std::size_t i = start; i < s.size(); ++i) {
    char c = s[i];
    if (in_string) {
      if (escaped)
        escaped = false;
      else if (c == '\\')
        escaped = true;
      else if (c == '"')
        in_string = false;
      continue;
    }
    if (c == '"') in_string = true;
    else if (c == '{') ++depth;
    else if (c == '}') {
      if (--depth == 0) return {start, i + 1};
    }
  }
  return {start, std::string::npos};
}

// Pulls a string-valued field out of a parsed JSON object. Non-string
// scalars are stringified in lenient mode with a diagnostic.
bool json_field(const json& obj, const char* key, ParseMode mode,
                std::string& out, std::vector<std::string>& diagnostics) {
  if (!obj.contains(key)) {
    diagnostics.push_back(std::string("missing key: ") + key);
    return false;
  }
  const json& v = obj.at(key);
  if (v.is_string()) {
    out = v.get<std::string>();
    return true;
  }
  if (mode == ParseMode::lenient && v.is_primitive()) {
    out = v.dump();
    diagnostics.push_back(std::string("non-string value for '") + key +
                          "' stringified");
    return true;
  }
  diagnostics.push_back(std::string("value for '") + key + "' is not a string");
  return false;
}

ParsedGeneration parse_json_response(const std::string& raw,
                                     const ParseOptions& options) {
  ParsedGeneration out;
  out.format = OutputFormat::json;
  std::string body = trim_view(raw);
  if (options.mode == ParseMode::lenient) {
    body = trim_view(strip_code_fences(body));
    auto [b, e] = find_json_object(body);
    if (b == std::string::npos) {
      out.diagnostics.push_back("no JSON object found");
      return out;
    }
    if (e == std::string::npos) {
      out.diagnostics.push_back("malformed JSON: unbalanced braces");
      return out;
    }
    if (b > 0) out.diagnostics.push_back("leading text before JSON object ignored");
    if (e < body.size() && !trim_view(body.substr(e)).empty())
      out.diagnostics.push_back("trailing text after JSON object ignored");
    body = body.substr(b, e - b);
  }
  json obj = json::parse(body, nullptr, false);
  if (obj.is_discarded()) {
    out.diagnostics.push_back("malformed JSON structure");
    return out;
  }
  if (!obj.is_object()) {
    out.diagnostics.push_back("top-level JSON value is not an object");
    return out;
  }
  bool ok_r = json_field(obj, "reasoning", options.mode, out.reasoning,
                         out.diagnostics);
  bool ok_a = json_field(obj, "answer", options.mode, out.answer,
                         out.diagnostics);
  out.conformant = ok_r && ok_a;
  return out;
}

// --- minimal XML reader for the flat <root><reasoning/><answer/> schema ---

bool xml_decode_entities(std::string_view in, std::string& out,
                         std::string& err) {
  out.clear();
  for (std::size_t i = 0; i < in.size(); ++i) {
    char c = in[i];
    if (c == '<') {
      err = "unescaped '<' inside element text";
      return false;
    }
    if (c != '&') {
      out.push_back(c);
      continue;
    }
    std::size_t semi = in.find(';', i);
    if (semi == std::string_view::npos) {
      err = "unterminated entity";
      return false;
    }
    std::string_view name = in.substr(i + 1, semi - i - 1);
    if (name == "lt") out.push_back('<');
    else if (name == "gt") out.push_back('>');
    else if (name == "amp") out.push_back('&');
    else if (name == "quot") out.push_back('"');
    else if (name == "apos") out.push_back('\'');
    else if (!name.empty() && name[0] == '#') {
      int code = 0;
      try {
        code = name[1] == 'x' || name[1] == 'X'
                   ? std::stoi(std::string(name.substr(2)), nullptr, 16)
                   : std::stoi(std::string(name.substr(1)));
      } catch (const std::exception&) {
        err = "bad numeric entity &" + std::string(name) + ";";
        return false;
      }
      if (code < 0 || code > 0x10FFFF) {
        err = "numeric entity out of range";
        return false;
      }
      // UTF-8 encode.
      unsigned cp = static_cast<unsigned>(code);
      if (cp < 0x80) out.push_back(static_cast<char>(cp));
      else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
      } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
      } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
      }
    } else {
      err = "unknown entity &" + std::string(name) + ";";
      return false;
    }
    i = semi;
  }
  return true;
}

std::string xml_encode(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

ParsedGeneration parse_xml_response(const std::string& raw,
                                    const ParseOptions& options) {
  ParsedGeneration out;
  out.format = OutputFormat::xml;
  std::string body = trim_view(raw);
  if (options.mode == ParseMode::lenient) {
    body = trim_view(strip_code_fences(body));
    std::size_t b = body.find("<root");
    if (b == std::string::npos) {
      out.diagnostics.push_back("no <root> element found");
      return out;
    }
    if (b > 0) out.diagnostics.push_back("leading text before <root> ignored");
    std::size_t e = body.find("</root>", b);
    if (e != std::string::npos) {
      std::size_t close = e + 7;
      if (close < body.size() && !trim_view(body.substr(close)).empty())
        out.diagnostics.push_back("trailing text after </root> ignored");
      body = body.substr(b, close - b);
    } else {
      body = body.substr(b);
    }
  }
  // Optional XML declaration.
  if (body.rfind("<?xml", 0) == 0) {
    std::size_t e = body.find("?>");
    if (e == std::string::npos) {
      out.diagnostics.push_back("malformed XML declaration");
      return out;
    }
    body = trim_view(body.substr(e + 2));
  }
  if (body.rfind("<root>", 0) != 0) {
    out.diagnostics.push_back("expected <root> as the document element");
    return out;
  }
  std::size_t pos = 6;  // past <root>
  std::map<std::string, std::string> fields;
  while (true) {
    while (pos < body.size() && is_space(body[pos])) ++pos;
    if (pos >= body.size()) {
      out.diagnostics.push_back("malformed XML: missing </root>");
      return out;
    }
    if (body.compare(pos, 7, "</root>") == 0) {
      pos += 7;
      break;
    }
    if (body[pos] != '<') {
      out.diagnostics.push_back("malformed XML: stray text inside <root>");
      return out;
    }
    std::size_t name_end = body.find('>', pos);
    if (name_end == std::string::npos || name_end == pos + 1) {
      out.diagnostics.push_back("malformed XML: unterminated tag");
      return out;
    }
    std::string name = body.substr(pos + 1, name_end - pos - 1);
    if (name.empty() || name[0] == '/') {
      out.diagnostics.push_back("malformed XML: unexpected closing tag");
      return out;
    }
    std::string close = "</" + name + ">";
    std::size_t text_begin = name_end + 1;
    std::size_t close_pos = body.find(close, text_begin);
    if (close_pos == std::string::npos) {
      out.diagnostics.push_back("malformed XML: <" + name + "> never closed");
      return out;
    }
    std::string decoded, err;
    if (!xml_decode_entities(
            std::string_view(body).substr(text_begin, close_pos - text_begin),
            decoded, err)) {
      out.diagnostics.push_back("malformed XML in <" + name + ">: " + err);
      return out;
    }
    if (!fields.emplace(name, std::move(decoded)).second) {
      out.diagnostics.push_back("duplicate element <" + name + ">");
      return out;
    }
    pos = close_pos + close.size();
  }
  std::string rest = trim_view(std::string_view(body).substr(pos));
  if (!rest.empty()) {
    out.diagnostics.push_back(rest[0] == '<'
                                  ? "multiple root elements"
                                  : "trailing text after </root>");
    if (options.mode == ParseMode::strict) return out;
  }
  bool ok = true;
  for (const char* key : {"reasoning", "answer"}) {
    if (!fields.count(key)) {
      out.diagnostics.push_back(std::string("missing key: ") + key);
      ok = false;
    }
  }
  if (!ok) return out;
  out.reasoning = fields.at("reasoning");
  out.answer = fields.at("answer");
  out.conformant = true;
  return out;
}

// --- YAML ------------------------------------------------------------------

bool yaml_field(const YAML::Node& node, const char* key, std::string& out,
                std::vector<std::string>& diagnostics) {
  if (!node[key]) {
    diagnostics.push_back(std::string("missing key: ") + key);
    return false;
  }
  if (!node[key].IsScalar()) {
    diagnostics.push_back(std::string("value for '") + key +
                          "' is not a scalar");
    return false;
  }
  out = node[key].as<std::string>();
  return true;
}

bool looks_like_yaml_key(const std::string& line) {
  std::size_t colon = line.find(':');
  if (colon == std::string::npos || colon == 0) return false;
  if (!std::isalpha(static_cast<unsigned char>(line[0]))) return false;
  for (std::size_t i = 0; i < colon; ++i) {
    char c = line[i];
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-')
      return false;
  }
  return true;
}

ParsedGeneration parse_yaml_response(const std::string& raw,
                                     const ParseOptions& options) {
  ParsedGeneration out;
  out.format = OutputFormat::yaml;
  std::string body = trim_view(raw);
  if (options.mode == ParseMode::lenient)
    body = trim_view(strip_code_fences(body));

  auto try_parse = [&](const std::string& text,
                       std::vector<std::string>& diagnostics) -> bool {
    YAML::Node node;
    try {
      node = YAML::Load(text);
    } catch (const YAML::Exception& e) {
      diagnostics.push_back(std::string("malformed YAML: ") + e.what());
      return false;
    }
    if (!node.IsMap()) {
      diagnostics.push_back("top-level YAML value is not a mapping");
      return false;
    }
    bool ok_r = yaml_field(node, "reasoning", out.reasoning, diagnostics);
    bool ok_a = yaml_field(node, "answer", out.answer, diagnostics);
    return ok_r && ok_a;
  };

  if (try_parse(body, out.diagnostics)) {
    out.conformant = true;
    out.diagnostics.clear();
    return out;
  }
  if (options.mode == ParseMode::strict) return out;

  // Lenient fallback: cut away surrounding prose, keeping the span from the
  // first recognizable top-level key line through the last line that still
  // belongs to the mapping (key line, indented continuation, or blank).
  auto lines = split_lines(body);
  std::size_t first = lines.size();
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string low = lower(lines[i]);
    if (low.rfind("reasoning", 0) == 0 || low.rfind("answer", 0) == 0) {
      if (looks_like_yaml_key(lines[i])) {
        first = i;
        break;
      }
    }
  }
  if (first == lines.size()) return out;
  std::size_t last = first;
  for (std::size_t i = first + 1; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty() || is_space(line[0]) || looks_like_yaml_key(line))
      last = i;
    else
      break;
  }
  std::vector<std::string> fallback_diags{"surrounding prose ignored"};
  if (try_parse(join_lines(lines, first, last + 1), fallback_diags)) {
    out.conformant = true;
    out.diagnostics = std::move(fallback_diags);
  } else {
    out.diagnostics.insert(out.diagnostics.end(), fallback_diags.begin() + 1,
                           fallback_diags.end());
  }
  return out;
}

// --- standard (unstructured) -----------------------------------------------

// True when `line` starts with the answer prefix followed by ':',
// whitespace, or end of line.
bool is_answer_line(const std::string& line, const std::string& prefix) {
  std::string t = lower(trim_view(line));
  if (t.size() < prefix.size()) return false;
  if (t.compare(0, prefix.size(), lower(prefix)) != 0) return false;
  if (t.size() == prefix.size()) return true;
  char next = t[prefix.size()];
  return next == ':' || next == ' ' || next == '\t';
}

std::string answer_line_payload(const std::string& line,
                                const std::string& prefix) {
  std::string t = trim_view(line);
  std::string rest = t.substr(std::min(prefix.size(), t.size()));
  // At most one separating colon; anything after it belongs to the answer.
  std::size_t i = 0;
  while (i < rest.size() && (rest[i] == ' ' || rest[i] == '\t')) ++i;
  if (i < rest.size() && rest[i] == ':') ++i;
  while (i < rest.size() && (rest[i] == ' ' || rest[i] == '\t')) ++i;
  return rest.substr(i);
}

ParsedGeneration parse_standard_response(const std::string& raw,
                                         const ParseOptions& options) {
  ParsedGeneration out;
  out.format = OutputFormat::standard;
  if (trim_view(raw).empty()) {
    out.diagnostics.push_back("empty response");
    return out;
  }
  auto lines = split_lines(raw);
  // Last line carrying the answer prefix wins.
  for (std::size_t i = lines.size(); i-- > 0;) {
    if (is_answer_line(lines[i], options.answer_prefix)) {
      out.answer = answer_line_payload(lines[i], options.answer_prefix);
      out.reasoning = join_lines(lines, 0, i);
      out.conformant = true;
      out.diagnostics.push_back("answer delimiter '" + options.answer_prefix +
                                "' matched");
      return out;
    }
  }
  for (std::size_t i = lines.size(); i-- > 0;) {
    if (!trim_view(lines[i]).empty()) {
      out.answer = trim_view(lines[i]);
      out.reasoning = join_lines(lines, 0, i);
      out.conformant = true;
      out.diagnostics.push_back("no answer delimiter; used last non-empty line");
      return out;
    }
  }
  out.diagnostics.push_back("no non-empty line found");
  return out;
}

std::string json_quote(std::string_view s) {
  return json(std::string(s)).dump();
}

std::string yaml_quote(std::string_view s) {
  // Double-quoted YAML scalar with JSON-compatible escapes (YAML is a JSON
  // superset for this style).
  return json_quote(s);
}

}  // namespace

std::string to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::standard: return "standard";
    case OutputFormat::json: return "json";
    case OutputFormat::xml: return "xml";
    case OutputFormat::yaml: return "yaml";
  }
  return "unknown";
}

OutputFormat output_format_from_string(const std::string& s) {
  if (s == "standard") return OutputFormat::standard;
  if (s == "json") return OutputFormat::json;
  if (s == "xml") return OutputFormat::xml;
  if (s == "yaml") return OutputFormat::yaml;
  throw std::invalid_argument("unknown output format '" + s + "'");
}

ParsedGeneration parse_response(std::string_view raw, OutputFormat format,
                                const ParseOptions& options) {
  std::string body(raw);
  switch (format) {
    case OutputFormat::json: return parse_json_response(body, options);
    case OutputFormat::xml: return parse_xml_response(body, options);
    case OutputFormat::yaml: return parse_yaml_response(body, options);
    case OutputFormat::standard: return parse_standard_response(body, options);
  }
  throw std::logic_error("unreachable");
}

std::string render_response(std::string_view reasoning,
                            std::string_view answer, OutputFormat format) {
  switch (format) {
    case OutputFormat::json:
      return "{\"reasoning\": " + json_quote(reasoning) +
             ", \"answer\": " + json_quote(answer) + "}";
    case OutputFormat::xml:
      return "<root>\n<reasoning>" + xml_encode(reasoning) +
             "</reasoning>\n<answer>" + xml_encode(answer) +
             "</answer>\n</root>";
    case OutputFormat::yaml:
      return "reasoning: " + yaml_quote(reasoning) + "\nanswer: " +
             yaml_quote(answer) + "\n";
    case OutputFormat::standard:
      return std::string(reasoning) + "\nAnswer: " + std::string(answer);
  }
  throw std::logic_error("unreachable");
}

std::string normalize(std::string_view s, Normalizer normalizer) {
  if (normalizer == Normalizer::none) return std::string(s);
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : s) {
    if (is_space(c)) {
      if (!out.empty()) pending_space = true;
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

std::set<std::string> split_answer_words(std::string_view answer) {
  std::set<std::string> words;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) {
      words.insert(normalize(cur, Normalizer::lowercase_trim));
      cur.clear();
    }
  };
  for (char c : answer) {
    if (c == ',' || is_space(c))
      flush();
    else
      cur.push_back(c);
  }
  flush();
  return words;
}

int score_ellc(const std::set<std::string>& answers,
               const std::set<std::string>& targets,
               QuestionType question_type) {
  if (targets.empty())
    throw std::invalid_argument("score_ellc: targets must be non-empty");
  if (answers.empty()) return 0;
  if (question_type == QuestionType::single) {
    for (const auto& a : answers)
      if (targets.count(a)) return 1;
    return 0;
  }
  return answers == targets ? 1 : 0;
}

namespace {

// Pulls a bare option letter out of answers like "B", "b)", "(C).".
std::optional<char> extract_choice_letter(std::string_view answer) {
  std::size_t i = 0;
  while (i < answer.size() &&
         !std::isalnum(static_cast<unsigned char>(answer[i])))
    ++i;
  if (i == answer.size()) return std::nullopt;
  char c = answer[i];
  if (!std::isalpha(static_cast<unsigned char>(c))) return std::nullopt;
  if (i + 1 < answer.size() &&
      std::isalnum(static_cast<unsigned char>(answer[i + 1])))
    return std::nullopt;  // a word, not a label
  return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

// -1 unknown, 0 negative class, 1 positive class. Edge punctuation is
// ignored ("Yes." classifies like "yes").
int binary_class(std::string normalized) {
  while (!normalized.empty() &&
         !std::isalnum(static_cast<unsigned char>(normalized.back())))
    normalized.pop_back();
  while (!normalized.empty() &&
         !std::isalnum(static_cast<unsigned char>(normalized.front())))
    normalized.erase(normalized.begin());
  if (normalized == "yes" || normalized == "true" || normalized == "y" ||
      normalized == "t" || normalized == "1")
    return 1;
  if (normalized == "no" || normalized == "false" || normalized == "n" ||
      normalized == "f" || normalized == "0")
    return 0;
  return -1;
}

}  // namespace

int score(std::string_view parsed_answer, const Gold& gold,
          const ScoreRule& rule) {
  bool needs_set =
      rule.kind == RuleKind::ellc_single || rule.kind == RuleKind::ellc_multiple;
  if (needs_set && !gold.words)
    throw std::invalid_argument("score: rule requires a gold word set");
  if (!needs_set && !gold.text)
    throw std::invalid_argument("score: rule requires a gold string");

  switch (rule.kind) {
    case RuleKind::exact_match:
      return normalize(parsed_answer, rule.normalizer) ==
                     normalize(*gold.text, rule.normalizer)
                 ? 1
                 : 0;
    case RuleKind::choice_label: {
      auto gold_letter = extract_choice_letter(trim_view(*gold.text));
      if (!gold_letter)
        throw std::invalid_argument("score: gold is not a choice label");
      auto got = extract_choice_letter(trim_view(parsed_answer));
      return got && *got == *gold_letter ? 1 : 0;
    }
    case RuleKind::binary_label: {
      int g = binary_class(normalize(*gold.text, Normalizer::lowercase_trim));
      if (g < 0)
        throw std::invalid_argument("score: gold is not a binary label");
      int a = binary_class(normalize(parsed_answer, Normalizer::lowercase_trim));
      return a == g ? 1 : 0;
    }
    case RuleKind::ellc_single:
    case RuleKind::ellc_multiple: {
      std::set<std::string> targets;
      for (const auto& w : *gold.words)
        targets.insert(normalize(w, Normalizer::lowercase_trim));
      return score_ellc(split_answer_words(parsed_answer), targets,
                        rule.kind == RuleKind::ellc_single
                            ? QuestionType::single
                            : QuestionType::multiple);
    }
  }
  throw std::logic_error("unreachable");
}

namespace {

RuleKind rule_kind_from_string(const std::string& s) {
  if (s == "exact_match") return RuleKind::exact_match;
  if (s == "choice_label") return RuleKind::choice_label;
  if (s == "binary_label") return RuleKind::binary_label;
  if (s == "ellc_single") return RuleKind::ellc_single;
  if (s == "ellc_multiple") return RuleKind::ellc_multiple;
  throw std::invalid_argument("unknown score rule '" + s + "'");
}

}  // namespace

const DatasetScoring& ScoringConfig::for_dataset(
    const std::string& dataset_id) const {
  auto it = by_dataset.find(dataset_id);
  if (it == by_dataset.end())
    throw std::invalid_argument("no scoring rule for dataset '" + dataset_id +
                                "'");
  return it->second;
}

ScoringConfig ScoringConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object())
    throw std::invalid_argument("scoring config: expected an object");
  ScoringConfig cfg;
  for (const auto& [dataset, spec] : j.items()) {
    DatasetScoring ds;
    ds.rule.kind = rule_kind_from_string(spec.at("rule").get<std::string>());
    std::string norm = spec.value("normalizer", std::string("lowercase_trim"));
    if (norm == "lowercase_trim")
      ds.rule.normalizer = Normalizer::lowercase_trim;
    else if (norm == "none")
      ds.rule.normalizer = Normalizer::none;
    else
      throw std::invalid_argument("unknown normalizer '" + norm + "'");
    ds.answer_prefix = spec.value("delimiter", std::string("answer"));
    std::string policy = spec.value("nonconformant", std::string("exclude"));
    if (policy == "exclude")
      ds.policy = NonconformantPolicy::exclude;
    else if (policy == "as-false")
      ds.policy = NonconformantPolicy::as_false;
    else
      throw std::invalid_argument("unknown nonconformant policy '" + policy +
                                  "'");
    cfg.by_dataset[dataset] = std::move(ds);
  }
  return cfg;
}

}  // namespace paircause
