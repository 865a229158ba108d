#include "paircause/experiment.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace paircause {

namespace {

using nlohmann::json;

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void row_error(std::size_t row, const std::string& what) {
  throw std::invalid_argument("row " + std::to_string(row) + ": " + what);
}

int parse_outcome(const json& v, std::size_t row) {
  long long o;
  if (v.is_boolean()) {
    o = v.get<bool>() ? 1 : 0;
  } else if (v.is_number_integer()) {
    o = v.get<long long>();
  } else {
    row_error(row, "outcome must be binary");
  }
  if (o != 0 && o != 1) row_error(row, "outcome must be binary");
  return static_cast<int>(o);
}

void check_levels(ExperimentRecord& rec, const Design& design,
                  std::size_t row) {
  if (!design.has_instruction(rec.instruction.level))
    row_error(row, "unknown instruction level '" + rec.instruction.level + "'");
  if (!design.has_format(rec.format.level))
    row_error(row, "unknown format level '" + rec.format.level + "'");
  rec.instruction = design.instruction_level(rec.instruction.level);
  rec.format = design.format_level(rec.format.level);
}

using RecordKey = std::tuple<std::string, std::string, int, std::string, std::string>;

RecordKey key_of(const ExperimentRecord& r) {
  return {r.sample_id, r.dataset_id, r.trial_id, r.instruction.level,
          r.format.level};
}

std::string key_string(const RecordKey& k) {
  return "(" + std::get<0>(k) + ", " + std::get<1>(k) + ", " +
         std::to_string(std::get<2>(k)) + ", " + std::get<3>(k) + ", " +
         std::get<4>(k) + ")";
}

}  // namespace

std::string to_string(Factor f) {
  return f == Factor::instruction ? "instruction" : "format";
}

void Design::validate() const {
  if (instruction_levels.size() < 2)
    throw std::invalid_argument("design: need at least 2 instruction levels");
  if (format_levels.size() < 2)
    throw std::invalid_argument("design: need at least 2 format levels");
  auto check_unique = [](const std::vector<std::string>& levels,
                         const char* name) {
    std::set<std::string> seen(levels.begin(), levels.end());
    if (seen.size() != levels.size())
      throw std::invalid_argument(std::string("design: duplicate ") + name +
                                  " level");
  };
  check_unique(instruction_levels, "instruction");
  check_unique(format_levels, "format");
  if (!has_instruction(baseline_instruction))
    throw std::invalid_argument(
        "design: baseline_instruction not among instruction_levels");
  if (!has_format(baseline_format))
    throw std::invalid_argument(
        "design: baseline_format not among format_levels");
}

bool Design::has_instruction(const std::string& level) const {
  return std::find(instruction_levels.begin(), instruction_levels.end(),
                   level) != instruction_levels.end();
}

bool Design::has_format(const std::string& level) const {
  return std::find(format_levels.begin(), format_levels.end(), level) !=
         format_levels.end();
}

FactorLevel Design::instruction_level(const std::string& level) const {
  return {Factor::instruction, level, level == baseline_instruction};
}

FactorLevel Design::format_level(const std::string& level) const {
  return {Factor::format, level, level == baseline_format};
}

std::vector<std::string> Design::alternative_formats() const {
  std::vector<std::string> out;
  for (const auto& f : format_levels)
    if (f != baseline_format) out.push_back(f);
  return out;
}

std::vector<std::string> Design::alternative_instructions() const {
  std::vector<std::string> out;
  for (const auto& l : instruction_levels)
    if (l != baseline_instruction) out.push_back(l);
  return out;
}

Design Design::from_json(const nlohmann::json& j) {
  Design d;
  try {
    d.instruction_levels = j.at("instruction_levels").get<std::vector<std::string>>();
    d.format_levels = j.at("format_levels").get<std::vector<std::string>>();
    d.baseline_instruction = j.at("baseline_instruction").get<std::string>();
    d.baseline_format = j.at("baseline_format").get<std::string>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("design file: ") + e.what());
  }
  d.validate();
  return d;
}

nlohmann::json Design::to_json() const {
  return json{{"instruction_levels", instruction_levels},
              {"format_levels", format_levels},
              {"baseline_instruction", baseline_instruction},
              {"baseline_format", baseline_format}};
}

std::vector<ExperimentRecord> load_records(std::istream& source,
                                           RecordFormat format,
                                           const Design& design) {
  design.validate();
  std::vector<ExperimentRecord> records;
  std::set<RecordKey> seen;
  std::string line;
  std::size_t row = 0;

  auto push = [&](ExperimentRecord rec) {
    check_levels(rec, design, row);
    auto key = key_of(rec);
    if (!seen.insert(key).second)
      row_error(row, "duplicate key " + key_string(key));
    records.push_back(std::move(rec));
  };

  if (format == RecordFormat::json_lines) {
    while (std::getline(source, line)) {
      ++row;
      if (trim(line).empty()) continue;
      json j = json::parse(line, nullptr, false);
      if (j.is_discarded()) row_error(row, "malformed JSON");
      if (!j.is_object()) row_error(row, "expected a JSON object");
      ExperimentRecord rec;
      try {
        rec.sample_id = j.at("sample_id").get<std::string>();
        rec.dataset_id = j.at("dataset_id").get<std::string>();
        rec.trial_id = j.value("trial_id", 0);
        rec.instruction.level = j.at("instruction").get<std::string>();
        rec.format.level = j.at("format").get<std::string>();
      } catch (const json::exception& e) {
        row_error(row, e.what());
      }
      if (rec.trial_id < 0) row_error(row, "trial_id must be >= 0");
      if (!j.contains("outcome")) row_error(row, "missing field 'outcome'");
      rec.outcome = parse_outcome(j.at("outcome"), row);
      if (j.contains("raw_response")) {
        if (!j.at("raw_response").is_string())
          row_error(row, "raw_response must be a string");
        rec.raw_response = j.at("raw_response").get<std::string>();
      }
      push(std::move(rec));
    }
    return records;
  }

  // CSV: header row, then sample_id,dataset_id,trial_id,instruction,format,outcome.
  // trial_id column may be omitted and defaults to 0.
  if (!std::getline(source, line))
    throw std::invalid_argument("csv: missing header row");
  ++row;
  auto header = split_csv_line(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[trim(header[i])] = i;
  for (const char* required :
       {"sample_id", "dataset_id", "instruction", "format", "outcome"})
    if (!col.count(required))
      throw std::invalid_argument(std::string("csv: missing column '") +
                                  required + "'");
  bool has_trial = col.count("trial_id") > 0;

  while (std::getline(source, line)) {
    ++row;
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() < header.size())
      row_error(row, "expected " + std::to_string(header.size()) + " fields");
    auto field = [&](const char* name) { return trim(fields[col.at(name)]); };
    ExperimentRecord rec;
    rec.sample_id = field("sample_id");
    rec.dataset_id = field("dataset_id");
    rec.instruction.level = field("instruction");
    rec.format.level = field("format");
    if (has_trial) {
      try {
        rec.trial_id = std::stoi(field("trial_id"));
      } catch (const std::exception&) {
        row_error(row, "trial_id must be an integer");
      }
      if (rec.trial_id < 0) row_error(row, "trial_id must be >= 0");
    }
    std::string o = field("outcome");
    if (o != "0" && o != "1") row_error(row, "outcome must be binary");
    rec.outcome = o == "1" ? 1 : 0;
    push(std::move(rec));
  }
  return records;
}

nlohmann::json record_to_json(const ExperimentRecord& rec) {
  json j{{"sample_id", rec.sample_id},   {"dataset_id", rec.dataset_id},
         {"trial_id", rec.trial_id},     {"instruction", rec.instruction.level},
         {"format", rec.format.level},   {"outcome", rec.outcome}};
  if (rec.raw_response) j["raw_response"] = *rec.raw_response;
  return j;
}

void write_records_jsonl(std::ostream& out,
                         std::span<const ExperimentRecord> records) {
  for (const auto& rec : records) out << record_to_json(rec).dump() << '\n';
}

std::vector<int> PairedTable::column(int col) const {
  std::vector<int> v(n());
  for (int i = 0; i < n(); ++i) v[i] = at(i, col);
  return v;
}

int PairedTable::column_sum(int col) const {
  int s = 0;
  for (int i = 0; i < n(); ++i) s += at(i, col);
  return s;
}

int PairedTable::row_sum(int row) const {
  int s = 0;
  for (int j = 0; j < k(); ++j) s += at(row, j);
  return s;
}

PairedTable build_paired_table(std::span<const ExperimentRecord> records,
                               const FactorLevel& stratify_by, Factor vary,
                               const std::vector<std::string>& include_levels) {
  if (include_levels.size() < 2)
    throw std::invalid_argument("paired table: need at least 2 conditions");
  if (stratify_by.factor == vary)
    throw std::invalid_argument(
        "paired table: stratum factor equals varied factor");

  std::map<std::string, int> col_of;
  for (std::size_t j = 0; j < include_levels.size(); ++j)
    col_of[include_levels[j]] = static_cast<int>(j);

  // Collect outcomes per (sample, condition) inside the stratum.
  std::map<std::string, std::map<int, int>> cells;  // sample -> col -> outcome
  const std::string* dataset = nullptr;
  int trial = 0;
  for (const auto& rec : records) {
    const FactorLevel& fixed =
        stratify_by.factor == Factor::instruction ? rec.instruction : rec.format;
    if (fixed.level != stratify_by.level) continue;
    const FactorLevel& varied =
        vary == Factor::instruction ? rec.instruction : rec.format;
    auto it = col_of.find(varied.level);
    if (it == col_of.end()) continue;
    if (dataset == nullptr) {
      dataset = &rec.dataset_id;
      trial = rec.trial_id;
    } else if (rec.dataset_id != *dataset || rec.trial_id != trial) {
      throw std::invalid_argument(
          "paired table: records span multiple (dataset, trial) pairs");
    }
    cells[rec.sample_id][it->second] = rec.outcome;
  }
  if (cells.empty())
    throw std::invalid_argument("paired table: empty stratum '" +
                                stratify_by.level + "'");

  std::vector<std::string> missing;
  PairedTable table;
  table.condition_labels = include_levels;
  table.stratum_label = to_string(stratify_by.factor) + "=" + stratify_by.level;
  table.sample_ids.reserve(cells.size());
  table.outcomes.reserve(cells.size() * include_levels.size());
  for (const auto& [sample, byc] : cells) {
    for (std::size_t j = 0; j < include_levels.size(); ++j) {
      if (!byc.count(static_cast<int>(j)))
        missing.push_back("(" + sample + ", " + include_levels[j] + ")");
    }
    if (missing.empty()) {
      table.sample_ids.push_back(sample);
      for (std::size_t j = 0; j < include_levels.size(); ++j)
        table.outcomes.push_back(byc.at(static_cast<int>(j)));
    }
  }
  if (!missing.empty()) {
    std::string what = "paired table: incomplete block, missing";
    for (const auto& m : missing) what += " " + m;
    throw std::invalid_argument(what);
  }
  return table;
}

std::vector<MissingCell> validate_design(
    std::span<const ExperimentRecord> records, const Design& design) {
  design.validate();
  // Samples are scoped per (dataset, trial): the expected factorial for a
  // sample covers every instruction x format combination.
  std::map<std::pair<std::string, int>, std::set<std::string>> samples;
  std::set<RecordKey> present;
  for (const auto& rec : records) {
    samples[{rec.dataset_id, rec.trial_id}].insert(rec.sample_id);
    present.insert(key_of(rec));
  }
  std::vector<MissingCell> missing;
  for (const auto& [dt, ids] : samples) {
    for (const auto& sample : ids) {
      for (const auto& instr : design.instruction_levels) {
        for (const auto& fmt : design.format_levels) {
          RecordKey key{sample, dt.first, dt.second, instr, fmt};
          if (!present.count(key))
            missing.push_back({dt.first, dt.second, sample, instr, fmt});
        }
      }
    }
  }
  return missing;
}

std::vector<std::pair<std::string, int>> dataset_trials(
    std::span<const ExperimentRecord> records) {
  std::set<std::pair<std::string, int>> seen;
  for (const auto& rec : records) seen.insert({rec.dataset_id, rec.trial_id});
  return {seen.begin(), seen.end()};
}

std::vector<ExperimentRecord> filter_dataset_trial(
    std::span<const ExperimentRecord> records, const std::string& dataset_id,
    int trial_id) {
  std::vector<ExperimentRecord> out;
  for (const auto& rec : records)
    if (rec.dataset_id == dataset_id && rec.trial_id == trial_id)
      out.push_back(rec);
  return out;
}

}  // namespace paircause
