#include "paircause/discovery.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace paircause {

namespace {

using nlohmann::json;

int sign_of(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

double column_rate(const PairedTable& table, int col) {
  return table.n() > 0 ? static_cast<double>(table.column_sum(col)) / table.n()
                       : 0.0;
}

}  // namespace

std::string to_string(DagStructure s) {
  switch (s) {
    case DagStructure::IND: return "IND";
    case DagStructure::FMT: return "FMT";
    case DagStructure::INS: return "INS";
    case DagStructure::CwoM: return "CwoM";
    case DagStructure::CwM: return "CwM";
  }
  return "unknown";
}

DagStructure dag_structure_from_string(const std::string& s) {
  if (s == "IND") return DagStructure::IND;
  if (s == "FMT") return DagStructure::FMT;
  if (s == "INS") return DagStructure::INS;
  if (s == "CwoM") return DagStructure::CwoM;
  if (s == "CwM") return DagStructure::CwM;
  throw std::invalid_argument("unknown DAG structure '" + s + "'");
}

std::string to_string(CorrectionMode m) {
  return m == CorrectionMode::none ? "none" : "per_dag";
}

void DiscoveryConfig::validate() const {
  if (alphas.empty())
    throw std::invalid_argument("config: need at least one alpha");
  for (double a : alphas)
    if (!(a > 0.0 && a < 1.0))
      throw std::invalid_argument("config: alpha must lie in (0, 1)");
  if (!(rho >= 0.0 && rho <= 1.0))
    throw std::invalid_argument("rho must lie in [0,1]");
  if (quadrature_nodes < 1)
    throw std::invalid_argument("config: quadrature_nodes >= 1");
}

HypothesisResult test_format_effect(std::span<const ExperimentRecord> records,
                                    const Design& design,
                                    const std::string& format,
                                    const DiscoveryConfig& config) {
  design.validate();
  config.validate();
  if (!design.has_format(format) || format == design.baseline_format)
    throw std::invalid_argument("format effect: '" + format +
                                "' is not an intervened format level");

  HypothesisResult result;
  std::vector<double> ps;
  std::vector<int> signs;
  double base_successes = 0.0, base_total = 0.0;
  double int_successes = 0.0, int_total = 0.0;

  // One McNemar per instruction stratum; pooling spans all k instruction
  // levels so the conclusion is not tied to a single variant.
  for (const auto& instr : design.instruction_levels) {
    PairedTable table = build_paired_table(
        records, design.instruction_level(instr), Factor::format,
        {design.baseline_format, format});
    auto baseline = table.column(0);
    auto intervened = table.column(1);
    TestResult t = mcnemar(baseline, intervened, config.mcnemar_mode);
    double rate_base = column_rate(table, 0);
    double rate_int = column_rate(table, 1);
    t.detail["rate_baseline"] = rate_base;
    t.detail["rate_intervened"] = rate_int;
    ps.push_back(t.p_value);
    signs.push_back(sign_of(rate_base - rate_int));
    result.per_stratum.push_back(std::move(t));
    result.stratum_labels.push_back(table.stratum_label);
    base_successes += table.column_sum(0);
    int_successes += table.column_sum(1);
    base_total += table.n();
    int_total += table.n();
  }

  result.combined = stouffer_combine(ps, signs, config.rho);
  result.effect.baseline_rate = base_successes / base_total;
  result.effect.intervened_rate = int_successes / int_total;
  result.effect.delta =
      result.effect.intervened_rate - result.effect.baseline_rate;
  return result;
}

HypothesisResult test_instruction_effect(
    std::span<const ExperimentRecord> records, const Design& design,
    const std::string& format, const DiscoveryConfig& config) {
  design.validate();
  config.validate();
  if (!design.has_format(format) || format == design.baseline_format)
    throw std::invalid_argument("instruction effect: '" + format +
                                "' is not an intervened format level");

  HypothesisResult result;
  std::vector<double> ps;
  std::vector<int> signs;
  double std_successes = 0.0, std_total = 0.0;
  double alt_successes = 0.0, alt_total = 0.0;

  // One omnibus Cochran's Q per format stratum (baseline and the examined
  // format), k = 2 strata pooled.
  for (const std::string& fmt : {design.baseline_format, format}) {
    PairedTable table =
        build_paired_table(records, design.format_level(fmt),
                           Factor::instruction, design.instruction_levels);
    TestResult t = cochran_q(table);

    // Direction: +1 when the intervened (non-baseline) instructions do
    // worse than the standard instruction within this stratum.
    double std_rate = 0.0, alt_rate = 0.0;
    int alt_cols = 0;
    for (int j = 0; j < table.k(); ++j) {
      if (table.condition_labels[j] == design.baseline_instruction) {
        std_rate = column_rate(table, j);
        std_successes += table.column_sum(j);
        std_total += table.n();
      } else {
        alt_rate += column_rate(table, j);
        alt_successes += table.column_sum(j);
        alt_total += table.n();
        ++alt_cols;
      }
    }
    if (alt_cols > 0) alt_rate /= alt_cols;
    t.detail["rate_standard"] = std_rate;
    t.detail["rate_alternative"] = alt_rate;
    ps.push_back(t.p_value);
    signs.push_back(sign_of(std_rate - alt_rate));
    result.per_stratum.push_back(std::move(t));
    result.stratum_labels.push_back(table.stratum_label);
  }

  result.combined = stouffer_combine(ps, signs, config.rho);
  result.effect.baseline_rate = std_successes / std_total;
  result.effect.intervened_rate = alt_successes / alt_total;
  result.effect.delta =
      result.effect.intervened_rate - result.effect.baseline_rate;
  return result;
}

DagVerdict classify(double p_format, double p_instruction,
                    const std::function<double()>& p_mbias_provider,
                    double alpha, CorrectionMode correction) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("classify: alpha must lie in (0, 1)");
  if (p_format < 0.0 || p_format > 1.0 || p_instruction < 0.0 ||
      p_instruction > 1.0)
    throw std::invalid_argument("classify: p-values must lie in [0, 1]");

  DagVerdict v;
  v.alpha_used = alpha;
  v.p_format = p_format;
  v.p_instruction = p_instruction;
  v.correction = correction;

  // Stage 1: are the two intervention effects significant? Two tests are
  // consulted, so per_dag divides by 2 here.
  double stage1 = correction == CorrectionMode::per_dag ? bonferroni(alpha, 2)
                                                        : alpha;
  bool sig_format = p_format < stage1;
  bool sig_instruction = p_instruction < stage1;
  if (!sig_format && !sig_instruction) {
    v.structure = DagStructure::IND;
    return v;
  }
  if (sig_format && !sig_instruction) {
    v.structure = DagStructure::FMT;
    return v;
  }
  if (!sig_format && sig_instruction) {
    v.structure = DagStructure::INS;
    return v;
  }

  // Stage 2: both effects significant, the collider test is consulted.
  // Three tests now derive the DAG, so per_dag re-judges all of them at
  // alpha/3.
  v.p_mbias = p_mbias_provider();
  if (!(*v.p_mbias >= 0.0 && *v.p_mbias <= 1.0))
    throw std::invalid_argument("classify: m-bias p must lie in [0, 1]");
  double stage2 = correction == CorrectionMode::per_dag ? bonferroni(alpha, 3)
                                                        : alpha;
  bool sig_format2 = p_format < stage2;
  bool sig_instruction2 = p_instruction < stage2;
  if (sig_format2 && sig_instruction2)
    v.structure = *v.p_mbias < stage2 ? DagStructure::CwM : DagStructure::CwoM;
  else if (sig_format2)
    v.structure = DagStructure::FMT;
  else if (sig_instruction2)
    v.structure = DagStructure::INS;
  else
    v.structure = DagStructure::IND;
  return v;
}

DiscoveryReport discover(std::span<const ExperimentRecord> records,
                         const Design& design, const DiscoveryConfig& config) {
  design.validate();
  config.validate();
  if (records.empty()) throw std::invalid_argument("discover: no records");
  auto groups = dataset_trials(records);
  if (groups.size() != 1)
    throw std::invalid_argument(
        "discover: records must cover exactly one (dataset, trial); found " +
        std::to_string(groups.size()));

  DiscoveryReport report;
  report.dataset_id = groups[0].first;
  report.trial_id = groups[0].second;
  report.config = config;

  GlmmOptions glmm_options;
  glmm_options.quadrature_nodes = config.quadrature_nodes;

  for (const auto& fmt : design.alternative_formats()) {
    FormatDiscovery fd;
    fd.format = fmt;
    fd.format_test = test_format_effect(records, design, fmt, config);
    fd.instruction_test =
        test_instruction_effect(records, design, fmt, config);

    auto provider = [&]() -> double {
      if (!fd.mbias)
        fd.mbias = mbias_test(records, design, fmt, glmm_options);
      return fd.mbias->p_value;
    };
    for (double alpha : config.alphas) {
      DagVerdict v =
          classify(fd.format_test.combined.p_combined,
                   fd.instruction_test.combined.p_combined, provider, alpha,
                   config.correction);
      v.format_effect = fd.format_test.effect;
      v.instruction_effect = fd.instruction_test.effect;
      fd.verdicts.push_back(v);
    }
    report.formats.push_back(std::move(fd));
  }
  return report;
}

std::string to_dot(const DagVerdict& verdict) {
  std::ostringstream out;
  out << "digraph causal_structure {\n";
  out << "  label=\"" << to_string(verdict.structure)
      << " (alpha=" << verdict.alpha_used << ")\";\n";
  out << "  Instruction; Format; Generation;\n";
  switch (verdict.structure) {
    case DagStructure::IND:
      break;
    case DagStructure::FMT:
      out << "  Format -> Generation;\n";
      break;
    case DagStructure::INS:
      out << "  Instruction -> Generation;\n";
      break;
    case DagStructure::CwM:
      out << "  Instruction -> Generation;\n";
      out << "  Format -> Generation;\n";
      out << "  Instruction -> Format [dir=both, style=dashed];\n";
      break;
    case DagStructure::CwoM:
      out << "  Instruction -> Generation;\n";
      out << "  Format -> Generation;\n";
      break;
  }
  out << "}\n";
  return out.str();
}

std::string format_p_value(double p) {
  // Three decimals; 0.000 denotes a value below 0.0005.
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%.3f", p);
  return buf;
}

namespace {

std::string format_rate(double r) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%.3f", r);
  return buf;
}

}  // namespace

std::string render_table(const DiscoveryReport& report) {
  std::ostringstream out;
  out << "Dataset: " << report.dataset_id << "  trial " << report.trial_id
      << "  (rho=" << report.config.rho
      << ", correction=" << to_string(report.config.correction) << ")\n";
  out << "p-values in parentheses; 0.000 indicates a value below 0.0005\n\n";

  auto line = [&](const std::string& a, const std::string& b,
                  const std::string& c) {
    out << "  " << a;
    for (std::size_t i = a.size(); i < 14; ++i) out << ' ';
    out << b;
    for (std::size_t i = b.size(); i < 50; ++i) out << ' ';
    out << c << "\n";
  };

  line("Hypothesis", "Examined module", "Value");
  if (!report.formats.empty()) {
    const auto& first = report.formats.front();
    line("A", "Controlled (w/ baseline format)",
         format_rate(first.format_test.effect.baseline_rate));
  }
  for (const auto& fd : report.formats) {
    line("A", "Intervened (w/ " + fd.format + " format)",
         format_rate(fd.format_test.effect.intervened_rate) + " (" +
             format_p_value(fd.format_test.combined.p_combined) + ")");
  }
  for (const auto& fd : report.formats) {
    line("B", "Controlled (standard instruction, " + fd.format + " pair)",
         format_rate(fd.instruction_test.effect.baseline_rate));
    line("B", "Intervened (w/ alternative instruction)",
         format_rate(fd.instruction_test.effect.intervened_rate) + " (" +
             format_p_value(fd.instruction_test.combined.p_combined) + ")");
  }
  for (const auto& fd : report.formats) {
    line("C", fd.format + " format",
         fd.mbias ? "(" + format_p_value(fd.mbias->p_value) + ")" : "-");
  }
  for (const auto& fd : report.formats) {
    std::string labels;
    for (std::size_t i = 0; i < fd.verdicts.size(); ++i) {
      if (i) labels += ", ";
      labels += to_string(fd.verdicts[i].structure);
    }
    line("Derived DAGs", fd.format + " format", labels);
  }
  return out.str();
}

nlohmann::json verdict_to_json(const DagVerdict& v) {
  json j{{"structure", to_string(v.structure)},
         {"alpha", v.alpha_used},
         {"correction", to_string(v.correction)},
         {"p_format", v.p_format},
         {"p_instruction", v.p_instruction},
         {"format_effect",
          {{"baseline_rate", v.format_effect.baseline_rate},
           {"intervened_rate", v.format_effect.intervened_rate},
           {"delta", v.format_effect.delta}}},
         {"instruction_effect",
          {{"baseline_rate", v.instruction_effect.baseline_rate},
           {"intervened_rate", v.instruction_effect.intervened_rate},
           {"delta", v.instruction_effect.delta}}}};
  if (v.p_mbias) j["p_mbias"] = *v.p_mbias;
  return j;
}

namespace {

json hypothesis_to_json(const HypothesisResult& h) {
  json strata = json::array();
  for (std::size_t i = 0; i < h.per_stratum.size(); ++i) {
    const auto& t = h.per_stratum[i];
    json detail(t.detail);
    strata.push_back({{"stratum", h.stratum_labels[i]},
                      {"method", to_string(t.method)},
                      {"statistic", t.statistic},
                      {"df", t.df},
                      {"p", t.p_value},
                      {"sign", h.combined.stratum_sign[i]},
                      {"detail", detail}});
  }
  return json{{"p_combined", h.combined.p_combined},
              {"z_combined", h.combined.z_combined},
              {"rho", h.combined.rho},
              {"k", h.combined.k},
              {"z_mapping", CombinedTest::kZMapping},
              {"effect",
               {{"baseline_rate", h.effect.baseline_rate},
                {"intervened_rate", h.effect.intervened_rate},
                {"delta", h.effect.delta}}},
              {"strata", strata}};
}

}  // namespace

nlohmann::json report_to_json(const DiscoveryReport& report) {
  json formats = json::array();
  for (const auto& fd : report.formats) {
    json verdicts = json::array();
    for (const auto& v : fd.verdicts) verdicts.push_back(verdict_to_json(v));
    json entry{{"format", fd.format},
               {"hypothesis_format", hypothesis_to_json(fd.format_test)},
               {"hypothesis_instruction",
                hypothesis_to_json(fd.instruction_test)},
               {"verdicts", verdicts}};
    if (fd.mbias) {
      json detail(fd.mbias->detail);
      entry["hypothesis_mbias"] = {{"p", fd.mbias->p_value},
                                   {"statistic", fd.mbias->statistic},
                                   {"detail", detail}};
    }
    formats.push_back(std::move(entry));
  }
  return json{{"dataset_id", report.dataset_id},
              {"trial_id", report.trial_id},
              {"rho", report.config.rho},
              {"alphas", report.config.alphas},
              {"correction", to_string(report.config.correction)},
              {"formats", formats}};
}

SensitivityReport sensitivity(std::span<const ExperimentRecord> records,
                              const Design& design,
                              const std::vector<double>& rho_grid,
                              const std::vector<double>& alphas,
                              const DiscoveryConfig& base_config) {
  if (rho_grid.empty())
    throw std::invalid_argument("sensitivity: empty rho grid");
  for (double r : rho_grid)
    if (!(r >= 0.0 && r <= 1.0))
      throw std::invalid_argument("rho must lie in [0,1]");

  SensitivityReport report;
  auto groups = dataset_trials(records);
  if (groups.size() != 1)
    throw std::invalid_argument(
        "sensitivity: records must cover exactly one (dataset, trial)");
  report.dataset_id = groups[0].first;
  report.trial_id = groups[0].second;
  report.rho_grid = rho_grid;
  report.alphas = alphas;

  // Per-stratum tests do not depend on rho; combine once per grid point.
  // The collider test does not involve rho either, so it is fitted at most
  // once per format, lazily.
  GlmmOptions glmm_options;
  glmm_options.quadrature_nodes = base_config.quadrature_nodes;
  for (const auto& fmt : design.alternative_formats()) {
    DiscoveryConfig cfg = base_config;
    HypothesisResult a = test_format_effect(records, design, fmt, cfg);
    HypothesisResult b = test_instruction_effect(records, design, fmt, cfg);
    std::optional<TestResult> mbias;
    auto provider = [&]() -> double {
      if (!mbias) mbias = mbias_test(records, design, fmt, glmm_options);
      return mbias->p_value;
    };

    std::set<std::string> structures_seen;  // per alpha signature
    for (double rho : rho_grid) {
      CombinedTest ca =
          stouffer_combine(a.combined.stratum_p, a.combined.stratum_sign, rho);
      CombinedTest cb =
          stouffer_combine(b.combined.stratum_p, b.combined.stratum_sign, rho);
      SensitivityRow row{rho, fmt, ca.p_combined, cb.p_combined, {}};

      std::string signature;
      for (double alpha : alphas) {
        DagVerdict v = classify(ca.p_combined, cb.p_combined, provider, alpha,
                                base_config.correction);
        v.format_effect = a.effect;
        v.instruction_effect = b.effect;
        signature += to_string(v.structure) + "/";
        row.verdicts.push_back(std::move(v));
      }
      structures_seen.insert(signature);
      report.rows.push_back(std::move(row));
    }
    if (structures_seen.size() > 1) report.verdict_flips.push_back(fmt);
  }
  return report;
}

std::string render_sensitivity(const SensitivityReport& report) {
  std::ostringstream out;
  out << "Sensitivity of pooled p-values to rho  (dataset "
      << report.dataset_id << ", trial " << report.trial_id << ")\n\n";
  out << "  format      rho    p(format)  p(instruction)  verdicts\n";
  for (const auto& row : report.rows) {
    out << "  " << row.format;
    for (std::size_t i = row.format.size(); i < 12; ++i) out << ' ';
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.1f    %s      %s           ", row.rho,
                  format_p_value(row.p_format).c_str(),
                  format_p_value(row.p_instruction).c_str());
    out << buf;
    for (std::size_t i = 0; i < row.verdicts.size(); ++i) {
      if (i) out << ", ";
      out << to_string(row.verdicts[i].structure);
    }
    out << "\n";
  }
  if (!report.verdict_flips.empty()) {
    out << "\nVerdict changes across the grid: ";
    for (std::size_t i = 0; i < report.verdict_flips.size(); ++i) {
      if (i) out << ", ";
      out << report.verdict_flips[i];
    }
    out << "\n";
  }
  return out.str();
}

nlohmann::json sensitivity_to_json(const SensitivityReport& report) {
  json rows = json::array();
  for (const auto& row : report.rows) {
    json verdicts = json::array();
    for (const auto& v : row.verdicts) verdicts.push_back(verdict_to_json(v));
    rows.push_back({{"rho", row.rho},
                    {"format", row.format},
                    {"p_format", row.p_format},
                    {"p_instruction", row.p_instruction},
                    {"verdicts", verdicts}});
  }
  return json{{"dataset_id", report.dataset_id},
              {"trial_id", report.trial_id},
              {"rho_grid", report.rho_grid},
              {"alphas", report.alphas},
              {"rows", rows},
              {"verdict_flips", report.verdict_flips}};
}

}  // namespace paircause
