#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "paircause/experiment.hpp"
#include "paircause/stat_tests.hpp"

namespace paircause {

// Random-intercept logistic regression data: binary response, fixed-effect
// design (intercept first, then dummy columns with the reference level
// omitted), and a group index per row.
struct GlmmData {
  Eigen::VectorXd response;      // each entry 0 or 1
  Eigen::MatrixXd fixed_design;  // n x (M+1), first column all ones
  std::vector<int> group;        // values in [0, K)

  int n() const { return static_cast<int>(response.size()); }
  int n_coefficients() const { return static_cast<int>(fixed_design.cols()); }
  int n_groups() const;
  void validate() const;  // throws std::invalid_argument
};

struct GlmmOptions {
  int quadrature_nodes = 20;  // 1 reproduces the Laplace approximation
  int max_iter = 200;
  // Gradient max-norm at the optimum. The adaptive-quadrature gradient
  // carries re-centering noise around 1e-8, so tolerances much below 1e-6
  // are not reliably attainable.
  double tol = 1e-6;
  bool fix_sigma_zero = false;
};

struct GlmmFit {
  Eigen::VectorXd beta;
  Eigen::VectorXd se;
  Eigen::VectorXd z;  // beta / se
  Eigen::VectorXd p;  // 2 (1 - Phi(|z|))
  double sigma2 = 0.0;
  double log_lik = 0.0;
  bool converged = false;
  bool sigma_boundary = false;  // sigma^2 pinned at 0 by the profile check
  bool separation = false;      // quasi-separation, Wald p unreliable
  int iterations = 0;
  std::vector<std::string> notes;
};

// Gauss-Hermite nodes and weights for integral of e^{-x^2} f(x),
// descending node order.
std::vector<std::pair<double, double>> gauss_hermite(int n);

// Maximizes the marginal likelihood over (beta, sigma^2), integrating the
// scalar random intercept per group by adaptive Gauss-Hermite quadrature.
// Standard errors come from the inverse of the observed information at the
// optimum. Throws on degenerate (all-equal) responses; non-convergence is
// reported through converged=false, never silently.
GlmmFit fit_glmm(const GlmmData& data, const GlmmOptions& options = {});

// Ordinary logistic regression (the sigma^2 = 0 profile).
GlmmFit fit_logistic(const GlmmData& data, int max_iter = 100,
                     double tol = 1e-10);

// The conditional-association test: within strata of the generation
// outcome, does instruction predict output format? Builds the regression
// of the structured-format indicator on instruction dummies with the
// outcome stratum as a random intercept, and returns the minimum
// instruction-dummy Wald p-value as the test p. The detail map carries
// every coefficient, its Wald p, sigma^2, and fit flags.
TestResult mbias_test(std::span<const ExperimentRecord> records,
                      const Design& design,
                      const std::string& structured_format,
                      const GlmmOptions& options = {});

// Builds the m-bias regression data from records restricted to
// {baseline format, structured_format}. Exposed for direct fitting.
GlmmData mbias_data(std::span<const ExperimentRecord> records,
                    const Design& design,
                    const std::string& structured_format);

}  // namespace paircause
