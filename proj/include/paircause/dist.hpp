#pragma once

// Distribution functions used by the test machinery: standard normal CDF and
// quantile, chi-square survival function via the regularized incomplete
// gamma function, and binomial tail probabilities. All routines target
// absolute error below 1e-12 on the ranges the test suite exercises.

namespace paircause::dist {

// Standard normal CDF Phi(x).
double normal_cdf(double x);

// Upper tail 1 - Phi(x), computed without cancellation for large x.
double normal_sf(double x);

// Inverse CDF Phi^-1(p) for p in (0, 1). Accurate in both tails down to
// denormal arguments.
double normal_quantile(double p);

// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double regularized_gamma_p(double a, double x);

// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double regularized_gamma_q(double a, double x);

// Chi-square survival function P(X > x) with df degrees of freedom.
double chi_squared_sf(double x, double df);

double chi_squared_cdf(double x, double df);

// P(X <= k) for X ~ Binomial(n, p). Exact summation of the lower tail.
double binomial_cdf(int k, int n, double p);

}  // namespace paircause::dist
