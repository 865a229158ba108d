// Acceptance suite: runs every release criterion at its pinned tolerance
// and prints one pass/fail line each. Exit code = number of failures.
//
// Simulation-based thresholds (criteria 4 and 5) were frozen after a
// single pilot run and are recorded inline next to each check.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../oracle_glmm.hpp"
#include "../oracle_quadrature.hpp"
#include "paircause/discovery.hpp"
#include "paircause/dist.hpp"
#include "paircause/ellc.hpp"
#include "paircause/glmm.hpp"
#include "paircause/parsing.hpp"
#include "paircause/simulate.hpp"
#include "paircause/stat_tests.hpp"

using namespace paircause;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void expect(bool condition, const std::string& what) {
    if (!condition) {
      ok = false;
      detail << (detail.str().empty() ? "" : "; ") << what;
    }
  }
};

// --- criterion 1: verdict reproduction ------------------------------------

struct ReferenceRow {
  const char* dataset;
  const char* format;
  double p_format;
  double p_instruction;
  double p_mbias;  // < 0 when the collider test was not consulted
  const char* dag05;
  const char* dag10;
};

// The 24 reference p-value tuples and their 48 derived labels.
const ReferenceRow kReference[] = {
    {"gsm8k", "json", 0.620, 0.273, -1, "IND", "IND"},
    {"llc", "json", 0.387, 0.159, -1, "IND", "IND"},
    {"ellc", "json", 0.251, 0.102, -1, "IND", "IND"},
    {"sot", "json", 0.030, 0.019, 0.693, "CwoM", "CwoM"},
    {"gcf", "json", 0.582, 0.556, -1, "IND", "IND"},
    {"gcc", "json", 0.250, 0.713, -1, "IND", "IND"},
    {"opseval", "json", 0.179, 0.398, -1, "IND", "IND"},
    {"xcodeeval", "json", 0.779, 0.379, -1, "IND", "IND"},
    {"gsm8k", "xml", 0.711, 0.248, -1, "IND", "IND"},
    {"llc", "xml", 0.667, 0.117, -1, "IND", "IND"},
    {"ellc", "xml", 0.300, 0.092, -1, "IND", "INS"},
    {"sot", "xml", 0.181, 0.095, -1, "IND", "INS"},
    {"gcf", "xml", 0.224, 0.175, -1, "IND", "IND"},
    {"gcc", "xml", 0.162, 0.023, -1, "INS", "INS"},
    {"opseval", "xml", 0.883, 0.532, -1, "IND", "IND"},
    {"xcodeeval", "xml", 0.263, 0.645, -1, "IND", "IND"},
    {"gsm8k", "yaml", 0.512, 0.143, -1, "IND", "IND"},
    {"llc", "yaml", 0.039, 0.099, 0.895, "FMT", "CwoM"},
    {"ellc", "yaml", 0.344, 0.296, -1, "IND", "IND"},
    {"sot", "yaml", 0.638, 0.148, -1, "IND", "IND"},
    {"gcf", "yaml", 0.287, 0.287, -1, "IND", "IND"},
    {"gcc", "yaml", 0.428, 0.394, -1, "IND", "IND"},
    {"opseval", "yaml", 0.903, 0.706, -1, "IND", "IND"},
    {"xcodeeval", "yaml", 0.051, 0.353, -1, "IND", "FMT"},
};

Check criterion_verdicts() {
  Check c;
  int matched = 0;
  for (const auto& row : kReference) {
    auto provider = [&row]() -> double {
      if (row.p_mbias < 0.0)
        throw std::logic_error("collider test consulted unexpectedly");
      return row.p_mbias;
    };
    for (auto [alpha, want] :
         {std::pair{0.05, row.dag05}, std::pair{0.1, row.dag10}}) {
      DagVerdict v;
      try {
        v = classify(row.p_format, row.p_instruction, provider, alpha,
                     CorrectionMode::none);
      } catch (const std::exception& e) {
        c.expect(false, std::string(row.dataset) + "/" + row.format + ": " +
                            e.what());
        continue;
      }
      if (to_string(v.structure) == want) {
        ++matched;
      } else {
        c.expect(false, std::string(row.dataset) + "/" + row.format +
                            " alpha=" + std::to_string(alpha) + ": got " +
                            to_string(v.structure) + ", want " + want);
      }
    }
  }
  c.detail << (c.detail.str().empty() ? "" : "; ") << matched
           << "/48 labels reproduced";
  c.expect(matched == 48, "not all labels reproduced");
  return c;
}

// --- criterion 2: rho rescaling anchors ------------------------------------

Check criterion_rho_anchors() {
  Check c;
  auto near = [&](double got, double want, const std::string& label) {
    c.detail << (c.detail.str().empty() ? "" : "; ") << label << "="
             << got;
    c.expect(std::fabs(got - want) <= 0.010,
             label + " outside +-0.010 of " + std::to_string(want));
  };
  near(rescale_combined_p(0.534, 5, 0.1, 0.3), 0.620, "k5@0.3");
  near(rescale_combined_p(0.534, 5, 0.1, 0.5), 0.671, "k5@0.5");
  near(rescale_combined_p(0.339, 2, 0.1, 0.3), 0.379, "k2@0.3");
  near(rescale_combined_p(0.339, 2, 0.1, 0.5), 0.413, "k2@0.5");
  return c;
}

// --- criterion 3: test oracles ---------------------------------------------

Check criterion_test_oracles() {
  Check c;
  // Cochran's Q at k = 2 equals uncorrected McNemar on 1,000 random blocks.
  std::mt19937_64 rng(20259);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double max_gap = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    int n = 2 + static_cast<int>(rng() % 60);
    double rate_a = 0.2 + 0.6 * unif(rng);
    double rate_b = 0.2 + 0.6 * unif(rng);
    PairedTable t;
    t.condition_labels = {"a", "b"};
    std::vector<int> a(n), b(n);
    for (int i = 0; i < n; ++i) {
      t.sample_ids.push_back("s" + std::to_string(i));
      a[i] = unif(rng) < rate_a ? 1 : 0;
      b[i] = unif(rng) < rate_b ? 1 : 0;
      t.outcomes.push_back(a[i]);
      t.outcomes.push_back(b[i]);
    }
    auto q = cochran_q(t);
    auto m = mcnemar(a, b, McNemarMode::chisq);
    max_gap = std::max(max_gap, std::fabs(q.statistic - m.statistic));
    max_gap = std::max(max_gap, std::fabs(q.p_value - m.p_value));
  }
  c.detail << "max |Q - McNemar| = " << max_gap;
  c.expect(max_gap < 1e-10, "Q/McNemar reduction exceeded 1e-10");

  // Closed-form distribution functions vs numerical integration.
  double max_cdf_err = 0.0;
  for (double x = -6.0; x <= 6.0001; x += 0.5)
    max_cdf_err = std::max(max_cdf_err,
                           std::fabs(dist::normal_cdf(x) - oracle::normal_cdf(x)));
  for (double df : {1.0, 2.0, 3.0, 5.0, 10.0})
    for (double x = 0.5; x <= 25.0001; x += 1.0)
      max_cdf_err = std::max(
          max_cdf_err,
          std::fabs(dist::chi_squared_sf(x, df) - oracle::chi2_sf(x, df)));
  c.detail << "; max CDF error = " << max_cdf_err;
  c.expect(max_cdf_err < 1e-10, "distribution oracle gap exceeded 1e-10");
  return c;
}

// --- criterion 4: glmm oracle ----------------------------------------------

Check criterion_glmm_oracle() {
  Check c;
  Eigen::VectorXd beta(5);
  beta << 0.0, 0.8, 0.0, -0.5, 0.0;
  struct Fixture { int n; unsigned seed; };
  // Seeds chosen so the variance estimate is interior (checked at pilot).
  const Fixture fixtures[] = {{500, 4242}, {2000, 777}, {2000, 555}};

  double worst_ll = 0.0, worst_beta = 0.0;
  for (const auto& fx_spec : fixtures) {
    auto fx = oracle::make_fixture(fx_spec.n, beta, 0.5, fx_spec.seed);
    GlmmFit fit = fit_glmm(fx.data);
    c.expect(fit.converged, "fit did not converge");
    c.expect(!fit.sigma_boundary, "fixture unexpectedly on the boundary");
    double sigma_hat = std::sqrt(fit.sigma2);

    double grid = oracle::grid_loglik(fx.cells, fit.beta, sigma_hat, 10001);
    worst_ll = std::max(worst_ll, std::fabs(fit.log_lik - grid));

    Eigen::VectorXd theta(6);
    theta.head(5) = fit.beta;
    theta(5) = std::log(sigma_hat);
    auto objective = [&](const Eigen::VectorXd& th) {
      return oracle::grid_loglik(fx.cells, th.head(5), std::exp(th(5)), 10001);
    };
    Eigen::VectorXd refined = oracle::newton_refine(objective, theta);
    for (int j = 0; j < 5; ++j)
      worst_beta = std::max(worst_beta, std::fabs(refined(j) - fit.beta(j)));
  }
  c.detail << "max |loglik gap| = " << worst_ll << ", max |beta gap| = "
           << worst_beta;
  c.expect(worst_ll < 1e-6, "log-likelihood gap exceeded 1e-6");
  c.expect(worst_beta < 1e-4, "beta gap exceeded 1e-4");

  // sigma^2 -> 0 path against an independent IRLS.
  auto fx0 = oracle::make_fixture(800, beta, 0.0, 90);
  GlmmOptions zero;
  zero.fix_sigma_zero = true;
  GlmmFit logistic = fit_glmm(fx0.data, zero);
  Eigen::VectorXd irls = oracle::irls_logistic(fx0.cells);
  double worst_logit = 0.0;
  for (int j = 0; j < 5; ++j)
    worst_logit = std::max(worst_logit, std::fabs(logistic.beta(j) - irls(j)));
  c.detail << ", |logistic gap| = " << worst_logit;
  c.expect(worst_logit < 1e-6, "sigma^2=0 path differs from the logistic MLE");

  // Type-I calibration of the conditional-association min-p rule. The
  // operational null is collider data without an interaction (the test is
  // only consulted once both intervention effects fired); effect sizes
  // frozen at the pilot: rate was 0.055-0.068 across two seed banks.
  SimConfig null_cfg;
  null_cfg.structure = DagStructure::CwoM;
  null_cfg.n_samples = 150;
  null_cfg.ability_sd = 0.8;
  null_cfg.base_logit = 0.7;
  null_cfg.format_shift = -1.0;
  null_cfg.instruction_shifts = {-1.5, -0.4, 0.7, -1.1};
  Design d = null_cfg.design();
  int rejections = 0;
  const int reps = 500;
  for (int r = 0; r < reps; ++r) {
    null_cfg.seed = 140000 + r;
    auto records = simulate(null_cfg);
    if (mbias_test(records, d, "structured").p_value < 0.05) ++rejections;
  }
  double rate = static_cast<double>(rejections) / reps;
  c.detail << ", min-p rejection rate = " << rate;
  c.expect(rate >= 0.005 && rate <= 0.12,
           "rejection rate outside [0.005, 0.12]");
  return c;
}

// --- criterion 5: dag recovery ----------------------------------------------

Check criterion_recovery() {
  Check c;
  DiscoveryConfig disc;
  disc.correction = CorrectionMode::per_dag;
  const int reps = 500;

  // Grid and thresholds frozen after the pilot run (pilot recoveries:
  // IND 1.00, FMT 1.00, INS 1.00, CwM 0.92, CwoM 1.00 at 100-150 reps).
  SimConfig ind;
  ind.structure = DagStructure::IND;
  ind.n_samples = 200;
  ind.ability_sd = 0.8;
  ind.seed = 101;

  SimConfig fmt;
  fmt.structure = DagStructure::FMT;
  fmt.n_samples = 300;
  fmt.ability_sd = 0.8;
  fmt.format_shift = -0.9163;  // odds ratio ~2.5
  fmt.seed = 202;

  SimConfig ins;
  ins.structure = DagStructure::INS;
  ins.n_samples = 300;
  ins.ability_sd = 0.8;
  ins.instruction_shifts = {-0.9163, -0.9163, -0.9163, -0.9163};
  ins.seed = 303;

  SimConfig cwm;
  cwm.structure = DagStructure::CwM;
  cwm.n_samples = 300;
  cwm.ability_sd = 0.8;
  cwm.format_shift = -0.6;
  cwm.instruction_shifts = {-0.6, -0.6, -0.6, -0.6};
  cwm.interaction_shift = -1.5;  // pilot-calibrated
  cwm.seed = 404;

  SimConfig cwom;  // context row for the confusion matrix
  cwom.structure = DagStructure::CwoM;
  cwom.n_samples = 300;
  cwom.ability_sd = 0.8;
  cwom.format_shift = -0.9163;
  cwom.instruction_shifts = {-0.9163, -0.9163, -0.9163, -0.9163};
  cwom.seed = 505;

  RecoveryReport report =
      recovery_study({ind, fmt, ins, cwm, cwom}, reps, disc, 0.05);

  const double thresholds[] = {0.85, 0.60, 0.60, 0.50, 0.0};
  for (std::size_t i = 0; i < report.cells.size(); ++i) {
    const auto& cell = report.cells[i];
    c.detail << (i ? ", " : "") << to_string(cell.config.structure) << "="
             << cell.recovery_rate;
    c.expect(cell.recovery_rate >= thresholds[i],
             to_string(cell.config.structure) + " recovery below threshold");
    int total = 0;
    for (const auto& [label, count] : cell.verdict_counts) total += count;
    c.expect(total == reps, "confusion row does not sum to replicates");
  }
  std::fputs(("  confusion matrix:\n" + render_recovery(report)).c_str(),
             stdout);
  return c;
}

// --- criterion 6: ellc integrity ---------------------------------------------

Check criterion_ellc() {
  Check c;
  Lexicons lex;
  lex.common_words = {"note", "tone", "stones"};
  lex.broad_words = {"note", "tone", "stones", "onset", "eunice"};
  lex.item_pool = {"Brayan", "Homero", "Herbert", "Eunice", "Sun",   "Milo",
                   "Pat",    "gas",    "its",     "cat",    "zoo",   "see",
                   "mess",   "anna",   "gnaw",    "howl",   "door",  "itch",
                   "stem",   "berg",   "bell",    "issue",  "essay", "visit"};

  int verified = 0, produced = 0;
  for (int length : {4, 6}) {
    for (LetterPosition position : {LetterPosition::last, LetterPosition::middle}) {
      EllcGenConfig cfg;
      cfg.seed = 7;
      auto result = generate(lex, length, position, cfg);
      bool saw_single = false, saw_multiple = false;
      for (const auto& sample : result.samples) {
        ++produced;
        if (verify(sample, lex).ok) ++verified;
        saw_single |= sample.question_type == QuestionType::single;
        saw_multiple |= sample.question_type == QuestionType::multiple;
      }
      std::string point = std::to_string(length) + "/" + to_string(position);
      c.expect(!result.samples.empty(), "no samples at " + point);
      c.expect(saw_single && saw_multiple,
               "question-type coverage missing at " + point);
    }
  }
  c.detail << verified << "/" << produced << " samples verified";
  c.expect(produced > 0 && verified == produced,
           "verification oracle rejected generated samples");

  c.expect(extract_letter("Herbert", LetterPosition::last) == 't',
           "last-letter fixture");
  c.expect(extract_letter("abc", LetterPosition::middle) == 'b',
           "odd middle fixture");
  c.expect(extract_letter("abcd", LetterPosition::middle) == 'b',
           "even middle fixture");

  struct GoldCase { const char* items; const char* want; };
  const GoldCase cases[] = {
      {"Camilo Becky Eliza Rebecca", "oyaa"},
      {"Claudia Cole Matthew Juan Pablo", "aewno"},
      {"Jorge Luis Mo Alexia Jerry", "esoay"},
      {"Miguel Angel Saul Brady Darryl", "lllyl"},
      {"Charity Svetlana Jamie Jose A", "yaeeA"},
      {"Marco Antonio Suzette Roland Isabel", "ooedl"},
  };
  for (const auto& gc : cases)
    c.expect(llc_gold(gc.items) == gc.want,
             std::string("llc gold mismatch for '") + gc.items + "'");
  return c;
}

// --- criterion 7: parser round-trips ------------------------------------------

std::string random_printable(std::mt19937_64& rng, bool multiline) {
  std::uniform_int_distribution<int> len(0, 60);
  std::uniform_int_distribution<int> ch(32, 126);
  std::string s;
  int n = len(rng);
  for (int i = 0; i < n; ++i) {
    if (multiline && rng() % 19 == 0)
      s.push_back('\n');
    else
      s.push_back(static_cast<char>(ch(rng)));
  }
  return s;
}

bool standard_safe(const std::string& reasoning, const std::string& answer) {
  if (answer.empty() || answer.find('\n') != std::string::npos) return false;
  if (std::isspace(static_cast<unsigned char>(answer.front())) ||
      std::isspace(static_cast<unsigned char>(answer.back())))
    return false;
  std::istringstream lines(reasoning);
  std::string line;
  while (std::getline(lines, line)) {
    std::size_t i = line.find_first_not_of(" \t");
    if (i == std::string::npos) continue;
    std::string low;
    for (char ch : line.substr(i))
      low.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    if (low.rfind("answer", 0) == 0) return false;
  }
  return true;
}

Check criterion_parser_roundtrip() {
  Check c;
  std::mt19937_64 rng(909);
  const int target = 1000;
  int failures = 0;
  for (OutputFormat fmt : {OutputFormat::json, OutputFormat::xml,
                           OutputFormat::yaml, OutputFormat::standard}) {
    int done = 0;
    while (done < target) {
      std::string reasoning = random_printable(rng, true);
      std::string answer = random_printable(rng, false);
      if (fmt == OutputFormat::standard && !standard_safe(reasoning, answer))
        continue;
      ++done;
      auto parsed =
          parse_response(render_response(reasoning, answer, fmt), fmt);
      if (!parsed.conformant || parsed.reasoning != reasoning ||
          parsed.answer != answer)
        ++failures;
    }
  }
  c.detail << failures << " round-trip failures over 4x1000 pairs";
  c.expect(failures == 0, "round-trip identity violated");

  // The reference ill-formed bodies: rejected in strict mode, diagnosed in
  // lenient mode.
  struct Bad { OutputFormat fmt; const char* body; };
  const Bad bad[] = {
      {OutputFormat::json, "{\n\"reasoning\": \"bar\"\n\"answer\": \"baz\"\n]}"},
      {OutputFormat::xml, "<root>\n<reasoning>bar</reasoning>\n<answer>baz<answer>"},
      {OutputFormat::yaml, "reasoning: \"bar\"]}"},
  };
  for (const auto& b : bad) {
    auto strict = parse_response(b.body, b.fmt, {ParseMode::strict, "answer"});
    c.expect(!strict.conformant, "strict mode accepted an ill-formed body");
    auto lenient = parse_response(b.body, b.fmt, {ParseMode::lenient, "answer"});
    c.expect(!lenient.conformant && !lenient.diagnostics.empty(),
             "lenient mode failed to diagnose an ill-formed body");
  }
  return c;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Check()> run;
  };
  const Criterion criteria[] = {
      {"1. verdict reproduction (24 reference tuples, both alphas)",
       criterion_verdicts},
      {"2. rho-rescaling anchors (k=5 and k=2)", criterion_rho_anchors},
      {"3. test oracles (Q reduction, distribution functions)",
       criterion_test_oracles},
      {"4. glmm against grid quadrature + type-I calibration",
       criterion_glmm_oracle},
      {"5. dag recovery thresholds (500 replicates each)",
       criterion_recovery},
      {"6. ellc generation integrity + gold labels", criterion_ellc},
      {"7. parser round-trips + ill-formed diagnosis",
       criterion_parser_roundtrip},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    auto start = std::chrono::steady_clock::now();
    Check c = criterion.run();
    auto sec = std::chrono::duration<double>(
                   std::chrono::steady_clock::now() - start)
                   .count();
    std::printf("[%s] %s (%.1fs) %s\n", c.ok ? "PASS" : "FAIL",
                criterion.name, sec, c.detail.str().c_str());
    if (!c.ok) ++failures;
  }
  return failures;
}
