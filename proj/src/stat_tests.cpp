#include "paircause/stat_tests.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "paircause/dist.hpp"

namespace paircause {

namespace {

// Exact zeros would map to an infinite z-score; clamp before the quantile.
double clamp_p(double p) {
  return p > 0.0 ? p : std::numeric_limits<double>::min();
}

// z = Phi^-1(1 - p/2), evaluated through the lower tail so tiny p keeps
// full precision.
double two_sided_z(double p) { return -dist::normal_quantile(0.5 * p); }

double pooling_denominator(int k, double rho) {
  return std::sqrt(k + rho * k * (k - 1.0));
}

}  // namespace

std::string to_string(TestMethod m) {
  switch (m) {
    case TestMethod::mcnemar_chisq: return "mcnemar_chisq";
    case TestMethod::mcnemar_exact: return "mcnemar_exact";
    case TestMethod::cochran_q: return "cochran_q";
    case TestMethod::wald: return "wald";
  }
  return "unknown";
}

TestResult mcnemar(std::span<const int> a, std::span<const int> b,
                   McNemarMode mode) {
  if (a.size() != b.size() || a.empty())
    throw std::invalid_argument("mcnemar: paired vectors of equal length >= 1");
  int b10 = 0, b01 = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 1 && b[i] == 0) ++b10;
    if (a[i] == 0 && b[i] == 1) ++b01;
  }
  TestResult r;
  r.method = mode == McNemarMode::exact ? TestMethod::mcnemar_exact
                                        : TestMethod::mcnemar_chisq;
  r.df = mode == McNemarMode::exact ? 0 : 1;
  r.detail["b10"] = b10;
  r.detail["b01"] = b01;
  int n_disc = b10 + b01;
  if (n_disc == 0) {
    r.detail["degenerate"] = 1.0;
    return r;  // statistic 0, p 1
  }
  switch (mode) {
    case McNemarMode::chisq: {
      double d = b10 - b01;
      r.statistic = d * d / n_disc;
      r.p_value = dist::chi_squared_sf(r.statistic, 1.0);
      break;
    }
    case McNemarMode::chisq_corrected: {
      double d = std::max(std::fabs(static_cast<double>(b10) - b01) - 1.0, 0.0);
      r.statistic = d * d / n_disc;
      r.p_value = dist::chi_squared_sf(r.statistic, 1.0);
      break;
    }
    case McNemarMode::exact: {
      int lo = std::min(b10, b01);
      r.statistic = lo;
      r.p_value = std::min(1.0, 2.0 * dist::binomial_cdf(lo, n_disc, 0.5));
      break;
    }
  }
  return r;
}

TestResult cochran_q(const PairedTable& table) {
  int k = table.k();
  int n = table.n();
  if (k < 2) throw std::invalid_argument("cochran_q: need k >= 2 conditions");
  if (n < 1) throw std::invalid_argument("cochran_q: empty table");

  double sum_c2 = 0.0, sum_r = 0.0, sum_r2 = 0.0;
  for (int j = 0; j < k; ++j) {
    double c = table.column_sum(j);
    sum_c2 += c * c;
  }
  for (int i = 0; i < n; ++i) {
    double ri = table.row_sum(i);
    sum_r += ri;
    sum_r2 += ri * ri;
  }
  double grand = sum_r;

  TestResult r;
  r.method = TestMethod::cochran_q;
  r.df = k - 1;
  double denom = k * grand - sum_r2;
  if (denom <= 0.0) {
    // Every row constant across conditions: no information.
    r.detail["degenerate"] = 1.0;
    return r;
  }
  r.statistic = (k - 1.0) * (k * sum_c2 - grand * grand) / denom;
  r.p_value = dist::chi_squared_sf(r.statistic, r.df);
  return r;
}

CombinedTest stouffer_combine(std::span<const double> stratum_p,
                              std::span<const int> stratum_sign, double rho) {
  if (stratum_p.empty() || stratum_p.size() != stratum_sign.size())
    throw std::invalid_argument(
        "stouffer_combine: p-values and signs of equal length >= 1");
  if (!(rho >= 0.0 && rho <= 1.0))
    throw std::invalid_argument("stouffer_combine: rho must lie in [0, 1]");

  CombinedTest c;
  c.rho = rho;
  c.k = static_cast<int>(stratum_p.size());
  c.stratum_p.assign(stratum_p.begin(), stratum_p.end());
  c.stratum_sign.assign(stratum_sign.begin(), stratum_sign.end());

  double z_sum = 0.0;
  for (int i = 0; i < c.k; ++i) {
    double p = c.stratum_p[i];
    if (p < 0.0 || p > 1.0)
      throw std::invalid_argument("stouffer_combine: p-values must lie in (0, 1]");
    int sign = c.stratum_sign[i];
    if (sign < -1 || sign > 1)
      throw std::invalid_argument("stouffer_combine: signs must be -1, 0, or +1");
    if (sign == 0) continue;
    z_sum += sign * two_sided_z(clamp_p(p));
  }
  c.z_combined = z_sum / pooling_denominator(c.k, rho);
  c.p_combined = 2.0 * dist::normal_sf(std::fabs(c.z_combined));
  if (c.p_combined > 1.0) c.p_combined = 1.0;
  return c;
}

double rescale_combined_p(double p_combined, int k, double rho_from,
                          double rho_to) {
  if (k < 1) throw std::invalid_argument("rescale_combined_p: k >= 1");
  if (!(p_combined > 0.0 && p_combined <= 1.0))
    throw std::invalid_argument("rescale_combined_p: p must lie in (0, 1]");
  double z = two_sided_z(p_combined);
  double z_to = z * pooling_denominator(k, rho_from) /
                pooling_denominator(k, rho_to);
  return std::min(1.0, 2.0 * dist::normal_sf(std::fabs(z_to)));
}

double bonferroni(double alpha, int m) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("bonferroni: alpha must lie in (0, 1)");
  if (m < 1) throw std::invalid_argument("bonferroni: m >= 1");
  return alpha / m;
}

}  // namespace paircause
