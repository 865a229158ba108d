// Command-line front end: ingestion, scoring, causal discovery, rho
// sensitivity, simulation, recovery studies, and ELLC generation. Every
// run writes a manifest (config snapshot + input digests + seeds) next to
// its outputs; all randomness defaults to the fixed seed 1729.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "paircause/discovery.hpp"
#include "paircause/ellc.hpp"
#include "paircause/experiment.hpp"
#include "paircause/glmm.hpp"
#include "paircause/manifest.hpp"
#include "paircause/parsing.hpp"
#include "paircause/simulate.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace paircause;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;

// Thrown for input/validation problems that map to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path.string() + "'");
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded())
    throw UsageError("malformed JSON in '" + path.string() + "'");
  return j;
}

Design load_design(const fs::path& path) {
  try {
    return Design::from_json(read_json_file(path));
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string(e.what()) + " ('" + path.string() + "')");
  }
}

std::vector<ExperimentRecord> load_records_file(const fs::path& path,
                                                const std::string& format,
                                                const Design& design) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path.string() + "'");
  RecordFormat fmt;
  if (format == "jsonl") fmt = RecordFormat::json_lines;
  else if (format == "csv") fmt = RecordFormat::csv;
  else throw UsageError("records format must be jsonl or csv");
  try {
    return load_records(in, fmt, design);
  } catch (const std::invalid_argument& e) {
    throw UsageError("'" + path.string() + "': " + e.what());
  }
}

void ensure_out_dir(const fs::path& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw UsageError("cannot create output directory '" + out.string() +
                           "': " + ec.message());
}

std::vector<double> parse_double_list(const std::string& csv,
                                      const char* what) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw UsageError(std::string("bad ") + what + " value '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError(std::string("empty ") + what + " list");
  return out;
}

CorrectionMode parse_correction(const std::string& s) {
  if (s == "none") return CorrectionMode::none;
  if (s == "per_dag") return CorrectionMode::per_dag;
  throw UsageError("correction must be none or per_dag");
}

McNemarMode parse_mcnemar(const std::string& s) {
  if (s == "chisq") return McNemarMode::chisq;
  if (s == "corrected") return McNemarMode::chisq_corrected;
  if (s == "exact") return McNemarMode::exact;
  throw UsageError("mcnemar mode must be chisq, corrected, or exact");
}

void check_rho(double rho) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw UsageError("rho must lie in [0,1]");
}

std::string alpha_tag(double alpha) {
  std::ostringstream s;
  s << alpha;
  return s.str();
}

// --- discover ---------------------------------------------------------------

struct DiscoverArgs {
  std::string records_path, design_path, out_dir;
  std::string records_format = "jsonl";
  std::string alpha_csv = "0.05,0.1";
  double rho = 0.3;
  std::string correction = "none";
  std::string mcnemar_mode = "chisq";
  int quadrature_nodes = 20;
};

int run_discover(const DiscoverArgs& args) {
  DiscoveryConfig config;
  config.alphas = parse_double_list(args.alpha_csv, "alpha");
  check_rho(args.rho);
  config.rho = args.rho;
  config.correction = parse_correction(args.correction);
  config.mcnemar_mode = parse_mcnemar(args.mcnemar_mode);
  config.quadrature_nodes = args.quadrature_nodes;
  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  Design design = load_design(args.design_path);
  auto records =
      load_records_file(args.records_path, args.records_format, design);
  if (records.empty())
    throw UsageError("'" + args.records_path + "' contains no records");
  auto missing = validate_design(records, design);
  if (!missing.empty()) {
    std::ostringstream what;
    what << "records are not a complete factorial; " << missing.size()
         << " missing cell(s), first: (" << missing[0].sample_id << ", "
         << missing[0].instruction << ", " << missing[0].format << ")";
    throw UsageError(what.str());
  }

  ensure_out_dir(args.out_dir);
  fs::path out(args.out_dir);
  json all_reports = json::array();
  std::string tables;
  bool single_group = dataset_trials(records).size() == 1;
  for (const auto& [dataset, trial] : dataset_trials(records)) {
    auto group = filter_dataset_trial(records, dataset, trial);
    DiscoveryReport report = discover(group, design, config);
    all_reports.push_back(report_to_json(report));
    tables += render_table(report) + "\n";
    for (const auto& fd : report.formats) {
      for (const auto& v : fd.verdicts) {
        std::string name = single_group
                               ? "dag_" + fd.format + "_" + alpha_tag(v.alpha_used)
                               : "dag_" + dataset + "_" + std::to_string(trial) +
                                     "_" + fd.format + "_" +
                                     alpha_tag(v.alpha_used);
        write_file_atomic(out / (name + ".dot"), to_dot(v));
      }
    }
  }
  write_file_atomic(out / "verdicts.json", all_reports.dump(2) + "\n");
  write_file_atomic(out / "report.txt", tables);

  RunManifest manifest;
  manifest.command = "discover";
  manifest.config = {{"alphas", config.alphas},
                     {"rho", config.rho},
                     {"correction", to_string(config.correction)},
                     {"mcnemar", args.mcnemar_mode},
                     {"quadrature_nodes", config.quadrature_nodes},
                     {"records_format", args.records_format}};
  manifest.inputs = {{args.records_path, digest_file(args.records_path)},
                     {args.design_path, digest_file(args.design_path)}};
  write_manifest(out, manifest);
  std::cout << tables;
  return kExitOk;
}

// --- score -------------------------------------------------------------------

struct ScoreArgs {
  std::string responses_path, config_path, out_dir;
  std::string nonconformant;  // optional override: exclude | as-false
  std::string mode = "lenient";
};

int run_score(const ScoreArgs& args) {
  ScoringConfig config;
  try {
    config = ScoringConfig::from_json(read_json_file(args.config_path));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (!args.nonconformant.empty() && args.nonconformant != "exclude" &&
      args.nonconformant != "as-false")
    throw UsageError("--nonconformant must be exclude or as-false");
  if (args.mode != "lenient" && args.mode != "strict")
    throw UsageError("--mode must be lenient or strict");

  std::ifstream in(args.responses_path);
  if (!in) throw UsageError("cannot open '" + args.responses_path + "'");

  ensure_out_dir(args.out_dir);
  fs::path out(args.out_dir);
  std::ostringstream records_out;
  int total = 0, excluded = 0, counted_false = 0, nonconformant = 0;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded())
      throw UsageError("responses row " + std::to_string(row) +
                       ": malformed JSON");
    ++total;
    std::string dataset, fmt_level;
    try {
      dataset = j.at("dataset_id").get<std::string>();
      fmt_level = j.at("format").get<std::string>();
    } catch (const json::exception& e) {
      throw UsageError("responses row " + std::to_string(row) + ": " +
                       e.what());
    }
    const DatasetScoring& rule = config.for_dataset(dataset);
    NonconformantPolicy policy = rule.policy;
    if (args.nonconformant == "exclude") policy = NonconformantPolicy::exclude;
    if (args.nonconformant == "as-false") policy = NonconformantPolicy::as_false;

    OutputFormat fmt;
    try {
      fmt = output_format_from_string(fmt_level);
    } catch (const std::invalid_argument& e) {
      throw UsageError("responses row " + std::to_string(row) + ": " +
                       e.what());
    }
    ParseOptions popt;
    popt.mode = args.mode == "strict" ? ParseMode::strict : ParseMode::lenient;
    popt.answer_prefix = rule.answer_prefix;
    std::string raw = j.value("response", std::string());
    ParsedGeneration parsed = parse_response(raw, fmt, popt);

    Gold gold;
    if (!j.contains("gold"))
      throw UsageError("responses row " + std::to_string(row) +
                       ": missing gold");
    if (j.at("gold").is_array()) {
      std::set<std::string> words;
      for (const auto& w : j.at("gold")) words.insert(w.get<std::string>());
      gold = Gold::of(std::move(words));
    } else {
      gold = Gold::of(j.at("gold").get<std::string>());
    }

    int outcome = 0;
    if (parsed.conformant) {
      outcome = score(parsed.answer, gold, rule.rule);
    } else {
      ++nonconformant;
      if (policy == NonconformantPolicy::exclude) {
        ++excluded;
        continue;
      }
      ++counted_false;
    }
    json rec{{"sample_id", j.at("sample_id").get<std::string>()},
             {"dataset_id", dataset},
             {"trial_id", j.value("trial_id", 0)},
             {"instruction", j.at("instruction").get<std::string>()},
             {"format", fmt_level},
             {"outcome", outcome}};
    records_out << rec.dump() << '\n';
  }

  write_file_atomic(out / "records.jsonl", records_out.str());
  json summary{{"responses", total},
               {"nonconformant", nonconformant},
               {"excluded", excluded},
               {"counted_as_false", counted_false},
               {"mode", args.mode}};
  write_file_atomic(out / "summary.json", summary.dump(2) + "\n");

  RunManifest manifest;
  manifest.command = "score";
  manifest.config = {{"mode", args.mode},
                     {"nonconformant_override",
                      args.nonconformant.empty() ? "none" : args.nonconformant}};
  manifest.inputs = {{args.responses_path, digest_file(args.responses_path)},
                     {args.config_path, digest_file(args.config_path)}};
  write_manifest(out, manifest);
  std::cerr << "scored " << total << " responses, " << nonconformant
            << " nonconformant (" << excluded << " excluded, " << counted_false
            << " as false)\n";
  return kExitOk;
}

// --- simulate / recovery -----------------------------------------------------

struct SimArgs {
  std::string structure = "ind";
  int n = 200;
  int instruction_levels = 5;
  int format_levels = 2;
  double base_logit = 0.0;
  double format_shift = 0.0;
  std::string instruction_shifts;  // comma list
  double ability_sd = 0.0;
  double interaction_shift = 0.0;
  std::uint64_t seed = kDefaultSeed;
  std::string out_dir;
};

SimConfig sim_config_from(const SimArgs& args, const std::string& structure) {
  SimConfig cfg;
  std::string upper = structure;
  if (upper == "ind") cfg.structure = DagStructure::IND;
  else if (upper == "fmt") cfg.structure = DagStructure::FMT;
  else if (upper == "ins") cfg.structure = DagStructure::INS;
  else if (upper == "cwom") cfg.structure = DagStructure::CwoM;
  else if (upper == "cwm") cfg.structure = DagStructure::CwM;
  else throw UsageError("structure must be ind, fmt, ins, cwom, or cwm");
  cfg.n_samples = args.n;
  cfg.instruction_levels = args.instruction_levels;
  cfg.format_levels = args.format_levels;
  cfg.base_logit = args.base_logit;
  cfg.format_shift = args.format_shift;
  if (!args.instruction_shifts.empty())
    cfg.instruction_shifts =
        parse_double_list(args.instruction_shifts, "instruction shift");
  cfg.ability_sd = args.ability_sd;
  cfg.interaction_shift = args.interaction_shift;
  cfg.seed = args.seed;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

int run_simulate(const SimArgs& args) {
  SimConfig cfg = sim_config_from(args, args.structure);
  auto records = simulate(cfg);
  ensure_out_dir(args.out_dir);
  fs::path out(args.out_dir);
  std::ostringstream body;
  write_records_jsonl(body, records);
  write_file_atomic(out / "records.jsonl", body.str());
  write_file_atomic(out / "design.json", cfg.design().to_json().dump(2) + "\n");

  RunManifest manifest;
  manifest.command = "simulate";
  manifest.config = cfg.to_json();
  manifest.seeds = {cfg.seed};
  write_manifest(out, manifest);
  std::cerr << "wrote " << records.size() << " records\n";
  return kExitOk;
}

struct RecoveryArgs {
  SimArgs sim;
  std::string structures = "ind";
  int replicates = 100;
  double alpha = 0.05;
  double rho = 0.3;
  std::string correction = "per_dag";
};

int run_recovery(const RecoveryArgs& args) {
  std::vector<SimConfig> grid;
  std::stringstream ss(args.structures);
  std::string item;
  while (std::getline(ss, item, ','))
    grid.push_back(sim_config_from(args.sim, item));
  if (grid.empty()) throw UsageError("no structures given");

  DiscoveryConfig disc;
  check_rho(args.rho);
  disc.rho = args.rho;
  disc.correction = parse_correction(args.correction);
  if (!(args.alpha > 0.0 && args.alpha < 1.0))
    throw UsageError("alpha must lie in (0, 1)");
  RecoveryReport report;
  try {
    report = recovery_study(grid, args.replicates, disc, args.alpha);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  ensure_out_dir(args.sim.out_dir);
  fs::path out(args.sim.out_dir);
  write_file_atomic(out / "recovery.json", recovery_to_json(report).dump(2) + "\n");
  std::string text = render_recovery(report);
  write_file_atomic(out / "recovery.txt", text);

  RunManifest manifest;
  manifest.command = "recovery";
  json cells = json::array();
  for (const auto& cfg : grid) cells.push_back(cfg.to_json());
  manifest.config = {{"grid", cells},
                     {"replicates", args.replicates},
                     {"alpha", args.alpha},
                     {"rho", args.rho},
                     {"correction", args.correction}};
  manifest.seeds = {args.sim.seed};
  write_manifest(out, manifest);
  std::cout << text;
  return kExitOk;
}

// --- sensitivity ---------------------------------------------------------

struct SensitivityArgs {
  std::string records_path, design_path, out_dir;
  std::string records_format = "jsonl";
  std::string rho_csv = "0.1,0.2,0.3,0.4,0.5";
  std::string alpha_csv = "0.05,0.1";
};

int run_sensitivity(const SensitivityArgs& args) {
  auto rho_grid = parse_double_list(args.rho_csv, "rho");
  for (double r : rho_grid) check_rho(r);
  auto alphas = parse_double_list(args.alpha_csv, "alpha");
  for (double a : alphas)
    if (!(a > 0.0 && a < 1.0)) throw UsageError("alpha must lie in (0, 1)");
  Design design = load_design(args.design_path);
  auto records =
      load_records_file(args.records_path, args.records_format, design);
  if (records.empty())
    throw UsageError("'" + args.records_path + "' contains no records");

  ensure_out_dir(args.out_dir);
  fs::path out(args.out_dir);
  json all = json::array();
  std::string text;
  for (const auto& [dataset, trial] : dataset_trials(records)) {
    auto group = filter_dataset_trial(records, dataset, trial);
    SensitivityReport report;
    try {
      report = sensitivity(group, design, rho_grid, alphas, DiscoveryConfig{});
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    all.push_back(sensitivity_to_json(report));
    text += render_sensitivity(report) + "\n";
  }
  write_file_atomic(out / "sensitivity.json", all.dump(2) + "\n");
  write_file_atomic(out / "sensitivity.txt", text);

  RunManifest manifest;
  manifest.command = "sensitivity";
  manifest.config = {{"rho_grid", rho_grid}, {"alphas", alphas}};
  manifest.inputs = {{args.records_path, digest_file(args.records_path)},
                     {args.design_path, digest_file(args.design_path)}};
  write_manifest(out, manifest);
  std::cout << text;
  return kExitOk;
}

// --- ellc ----------------------------------------------------------------

struct EllcArgs {
  std::string common_path, broad_path, pool_path, out_dir;
  int length = 4;
  std::string position = "last";
  int max_samples = 0;
  std::uint64_t seed = kDefaultSeed;
  std::string blocklist_path;
  std::string verify_path;  // verify mode when non-empty
};

Lexicons load_lexicons(const EllcArgs& args) {
  auto load = [](const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open '" + path + "'");
    return load_word_list(in);
  };
  Lexicons lex;
  for (auto& w : load(args.common_path)) {
    std::string low = w;
    for (auto& c : low) c = static_cast<char>(std::tolower(
        static_cast<unsigned char>(c)));
    lex.common_words.insert(low);
  }
  for (auto& w : load(args.broad_path)) {
    std::string low = w;
    for (auto& c : low) c = static_cast<char>(std::tolower(
        static_cast<unsigned char>(c)));
    lex.broad_words.insert(low);
  }
  lex.item_pool = load(args.pool_path);
  return lex;
}

int run_ellc(const EllcArgs& args) {
  Lexicons lex = load_lexicons(args);

  if (!args.verify_path.empty()) {
    json samples = read_json_file(args.verify_path);
    if (!samples.is_array()) throw UsageError("verify: expected a JSON array");
    int failures = 0;
    for (const auto& j : samples) {
      EllcSample sample = EllcSample::from_json(j);
      auto result = verify(sample, lex);
      if (!result.ok) {
        ++failures;
        for (const auto& v : result.violations)
          std::cerr << "violation: " << v << "\n";
      }
    }
    std::cerr << samples.size() << " sample(s), " << failures << " failed\n";
    return failures == 0 ? kExitOk : kExitUsage;
  }

  EllcGenConfig cfg;
  cfg.max_samples = args.max_samples;
  cfg.seed = args.seed;
  if (!args.blocklist_path.empty()) {
    std::ifstream in(args.blocklist_path);
    if (!in) throw UsageError("cannot open '" + args.blocklist_path + "'");
    cfg.blocklist = load_word_list(in);
  }
  LetterPosition position;
  try {
    position = letter_position_from_string(args.position);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  EllcGenResult result;
  try {
    result = generate(lex, args.length, position, cfg);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  ensure_out_dir(args.out_dir);
  fs::path out(args.out_dir);
  json samples = json::array();
  for (const auto& s : result.samples) samples.push_back(s.to_json());
  write_file_atomic(out / "samples.json", samples.dump(2) + "\n");
  write_file_atomic(out / "skip_report.json",
                    result.skips.to_json().dump(2) + "\n");

  RunManifest manifest;
  manifest.command = "ellc";
  manifest.config = {{"length", args.length},
                     {"position", args.position},
                     {"max_samples", args.max_samples}};
  manifest.seeds = {cfg.seed};
  manifest.inputs = {{args.common_path, digest_file(args.common_path)},
                     {args.broad_path, digest_file(args.broad_path)},
                     {args.pool_path, digest_file(args.pool_path)}};
  if (!args.blocklist_path.empty())
    manifest.inputs.push_back(
        {args.blocklist_path, digest_file(args.blocklist_path)});
  write_manifest(out, manifest);
  std::cerr << "wrote " << result.samples.size() << " samples ("
            << result.skips.combinations_emitted << " combinations)\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Causal-structure discovery for paired two-factor experiments "
               "with binary outcomes"};
  app.require_subcommand(1);

  DiscoverArgs discover_args;
  auto* cmd_discover = app.add_subcommand(
      "discover", "Classify the causal structure per structured format");
  cmd_discover->add_option("--records", discover_args.records_path)->required();
  cmd_discover->add_option("--design", discover_args.design_path)->required();
  cmd_discover->add_option("--records-format", discover_args.records_format,
                           "jsonl or csv");
  cmd_discover->add_option("--alpha", discover_args.alpha_csv,
                           "comma-separated significance levels");
  cmd_discover->add_option("--rho", discover_args.rho);
  cmd_discover->add_option("--correction", discover_args.correction,
                           "none or per_dag");
  cmd_discover->add_option("--mcnemar", discover_args.mcnemar_mode,
                           "chisq, corrected, or exact");
  cmd_discover->add_option("--quadrature-nodes", discover_args.quadrature_nodes);
  cmd_discover->add_option("--out", discover_args.out_dir)->required();

  ScoreArgs score_args;
  auto* cmd_score = app.add_subcommand(
      "score", "Parse raw responses and score them into records");
  cmd_score->add_option("--responses", score_args.responses_path)->required();
  cmd_score->add_option("--config", score_args.config_path)->required();
  cmd_score->add_option("--nonconformant", score_args.nonconformant,
                        "exclude or as-false (overrides the config)");
  cmd_score->add_option("--mode", score_args.mode, "lenient or strict");
  cmd_score->add_option("--out", score_args.out_dir)->required();

  SimArgs sim_args;
  auto* cmd_simulate = app.add_subcommand(
      "simulate", "Generate records from a known causal structure");
  auto add_sim_options = [](CLI::App* cmd, SimArgs& args) {
    cmd->add_option("--n", args.n);
    cmd->add_option("--instruction-levels", args.instruction_levels);
    cmd->add_option("--format-levels", args.format_levels);
    cmd->add_option("--base-logit", args.base_logit);
    cmd->add_option("--format-shift", args.format_shift);
    cmd->add_option("--instruction-shifts", args.instruction_shifts,
                    "comma-separated, one per non-baseline level");
    cmd->add_option("--ability-sd", args.ability_sd);
    cmd->add_option("--interaction-shift", args.interaction_shift);
    cmd->add_option("--seed", args.seed);
    cmd->add_option("--out", args.out_dir)->required();
  };
  cmd_simulate->add_option("--structure", sim_args.structure,
                           "ind, fmt, ins, cwom, or cwm");
  add_sim_options(cmd_simulate, sim_args);

  RecoveryArgs recovery_args;
  auto* cmd_recovery = app.add_subcommand(
      "recovery", "Verdict recovery rates over seeded replicates");
  cmd_recovery->add_option("--structure", recovery_args.structures,
                           "comma-separated ground-truth structures");
  cmd_recovery->add_option("--replicates", recovery_args.replicates);
  cmd_recovery->add_option("--alpha", recovery_args.alpha);
  cmd_recovery->add_option("--rho", recovery_args.rho);
  cmd_recovery->add_option("--correction", recovery_args.correction);
  add_sim_options(cmd_recovery, recovery_args.sim);

  SensitivityArgs sens_args;
  auto* cmd_sens = app.add_subcommand(
      "sensitivity", "Pooled p-values across a rho grid");
  cmd_sens->add_option("--records", sens_args.records_path)->required();
  cmd_sens->add_option("--design", sens_args.design_path)->required();
  cmd_sens->add_option("--records-format", sens_args.records_format);
  cmd_sens->add_option("--rho", sens_args.rho_csv, "comma-separated grid");
  cmd_sens->add_option("--alpha", sens_args.alpha_csv);
  cmd_sens->add_option("--out", sens_args.out_dir)->required();

  EllcArgs ellc_args;
  auto* cmd_ellc = app.add_subcommand(
      "ellc", "Generate or verify letter-rearrangement benchmark samples");
  cmd_ellc->add_option("--common", ellc_args.common_path)->required();
  cmd_ellc->add_option("--broad", ellc_args.broad_path)->required();
  cmd_ellc->add_option("--pool", ellc_args.pool_path)->required();
  cmd_ellc->add_option("--length", ellc_args.length, "4 or 6");
  cmd_ellc->add_option("--position", ellc_args.position, "last or middle");
  cmd_ellc->add_option("--max-samples", ellc_args.max_samples,
                       "cap on combinations; 0 = unlimited");
  cmd_ellc->add_option("--seed", ellc_args.seed);
  cmd_ellc->add_option("--blocklist", ellc_args.blocklist_path);
  cmd_ellc->add_option("--verify", ellc_args.verify_path,
                       "samples.json to check instead of generating");
  cmd_ellc->add_option("--out", ellc_args.out_dir);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (app.got_subcommand(cmd_discover)) return run_discover(discover_args);
    if (app.got_subcommand(cmd_score)) return run_score(score_args);
    if (app.got_subcommand(cmd_simulate)) return run_simulate(sim_args);
    if (app.got_subcommand(cmd_recovery)) return run_recovery(recovery_args);
    if (app.got_subcommand(cmd_sens)) return run_sensitivity(sens_args);
    if (app.got_subcommand(cmd_ellc)) {
      if (ellc_args.verify_path.empty() && ellc_args.out_dir.empty())
        throw UsageError("ellc needs --out (generation) or --verify");
      return run_ellc(ellc_args);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
