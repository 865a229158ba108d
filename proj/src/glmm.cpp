#include "paircause/glmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "paircause/dist.hpp"

namespace paircause {

namespace {

constexpr double kLogSigmaFloor = -12.0;  // sigma below ~6e-6 is boundary
constexpr double kPi = 3.14159265358979323846;

double log1pexp(double x) {
  if (x > 35.0) return x;
  if (x < -35.0) return std::exp(x);
  return std::log1p(std::exp(x));
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Observations collapsed by (group, covariate row, response); the
// factorial designs this module sees have few distinct rows, which makes
// likelihood evaluations cheap regardless of n.
struct GroupPatterns {
  Eigen::MatrixXd x;  // P x (M+1)
  Eigen::VectorXd y;  // P
  Eigen::VectorXd w;  // P, counts
};

std::vector<GroupPatterns> collapse(const GlmmData& data) {
  int k_groups = data.n_groups();
  int m = data.n_coefficients();
  std::vector<std::map<std::vector<double>, double>> cells(k_groups);
  for (int i = 0; i < data.n(); ++i) {
    std::vector<double> key(m + 1);
    for (int j = 0; j < m; ++j) key[j] = data.fixed_design(i, j);
    key[m] = data.response(i);
    cells[data.group[i]][key] += 1.0;
  }
  std::vector<GroupPatterns> out(k_groups);
  for (int g = 0; g < k_groups; ++g) {
    int p = static_cast<int>(cells[g].size());
    out[g].x.resize(p, m);
    out[g].y.resize(p);
    out[g].w.resize(p);
    int row = 0;
    for (const auto& [key, count] : cells[g]) {
      for (int j = 0; j < m; ++j) out[g].x(row, j) = key[j];
      out[g].y(row) = key[m];
      out[g].w(row) = count;
      ++row;
    }
  }
  return out;
}

// Bernoulli-logit log likelihood of one group's patterns at intercept
// offset t, plus first and second derivatives in t.
struct GroupLik {
  double value, d1, d2;
};

GroupLik group_loglik(const GroupPatterns& g, const Eigen::VectorXd& eta0,
                      double t) {
  GroupLik r{0.0, 0.0, 0.0};
  for (int p = 0; p < g.y.size(); ++p) {
    double eta = eta0(p) + t;
    double mu = logistic(eta);
    r.value += g.w(p) * (g.y(p) * eta - log1pexp(eta));
    r.d1 += g.w(p) * (g.y(p) - mu);
    r.d2 -= g.w(p) * mu * (1.0 - mu);
  }
  return r;
}

struct Quadrature {
  std::vector<std::pair<double, double>> nodes;  // Gauss-Hermite
};

// Marginal log likelihood of one group by adaptive Gauss-Hermite, plus the
// posterior expectations behind its exact derivatives:
//   score_beta = E[ sum_p w_p (y_p - mu_p(t)) x_p ]
//   score_logsigma = E[ t^2 / sigma^2 - 1 ]
//   hess_beta = E[ d score/d beta ] + Cov[ score ]
struct GroupEval {
  double log_lik;
  Eigen::VectorXd score_beta;
  double score_logsigma;
  Eigen::MatrixXd hess_beta;
};

GroupEval evaluate_group(const GroupPatterns& g, const Eigen::VectorXd& beta,
                         double sigma, const Quadrature& quad,
                         bool want_hessian = false) {
  int m = static_cast<int>(beta.size());
  Eigen::VectorXd eta0 = g.x * beta;
  GroupEval out;
  out.score_beta = Eigen::VectorXd::Zero(m);
  if (want_hessian) out.hess_beta = Eigen::MatrixXd::Zero(m, m);

  if (sigma <= 0.0) {
    GroupLik l = group_loglik(g, eta0, 0.0);
    out.log_lik = l.value;
    for (int p = 0; p < g.y.size(); ++p) {
      double mu = logistic(eta0(p));
      out.score_beta += g.w(p) * (g.y(p) - mu) * g.x.row(p).transpose();
      if (want_hessian)
        out.hess_beta -= g.w(p) * mu * (1.0 - mu) * g.x.row(p).transpose() *
                         g.x.row(p);
    }
    out.score_logsigma = 0.0;
    return out;
  }

  // Inner Newton for the conditional mode of h(t) = loglik(t) - t^2/(2 s^2).
  double t_hat = 0.0;
  for (int it = 0; it < 100; ++it) {
    GroupLik l = group_loglik(g, eta0, t_hat);
    double h1 = l.d1 - t_hat / (sigma * sigma);
    double h2 = l.d2 - 1.0 / (sigma * sigma);
    double step = h1 / h2;
    t_hat -= step;
    if (std::fabs(step) < 1e-13 * (1.0 + std::fabs(t_hat))) break;
  }
  GroupLik at_mode = group_loglik(g, eta0, t_hat);
  double h2 = at_mode.d2 - 1.0 / (sigma * sigma);  // strictly negative
  double tau = 1.0 / std::sqrt(-h2);

  // log integrand at shifted nodes, with the Gaussian prior included.
  const double sqrt2 = std::sqrt(2.0);
  const double log_prior_norm = -std::log(sigma) - 0.5 * std::log(2.0 * kPi);
  int q = static_cast<int>(quad.nodes.size());
  std::vector<double> log_terms(q);
  std::vector<double> ts(q);
  double max_term = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < q; ++j) {
    double xj = quad.nodes[j].first;
    double wj = quad.nodes[j].second;
    double t = t_hat + sqrt2 * tau * xj;
    ts[j] = t;
    GroupLik l = group_loglik(g, eta0, t);
    double h = l.value - 0.5 * t * t / (sigma * sigma) + log_prior_norm;
    log_terms[j] = std::log(wj) + xj * xj + h;
    max_term = std::max(max_term, log_terms[j]);
  }
  double sum = 0.0;
  for (int j = 0; j < q; ++j) sum += std::exp(log_terms[j] - max_term);
  out.log_lik = max_term + std::log(sum) + std::log(sqrt2 * tau);

  // Posterior weights over nodes give the derivative expectations.
  out.score_logsigma = 0.0;
  Eigen::VectorXd node_score(m);
  for (int j = 0; j < q; ++j) {
    double qj = std::exp(log_terms[j] - max_term) / sum;
    if (qj <= 0.0) continue;
    node_score.setZero();
    for (int p = 0; p < g.y.size(); ++p) {
      double mu = logistic(eta0(p) + ts[j]);
      node_score += g.w(p) * (g.y(p) - mu) * g.x.row(p).transpose();
      if (want_hessian)
        out.hess_beta -= qj * g.w(p) * mu * (1.0 - mu) *
                         g.x.row(p).transpose() * g.x.row(p);
    }
    out.score_beta += qj * node_score;
    if (want_hessian) out.hess_beta += qj * node_score * node_score.transpose();
    out.score_logsigma += qj * (ts[j] * ts[j] / (sigma * sigma) - 1.0);
  }
  if (want_hessian)
    out.hess_beta -= out.score_beta * out.score_beta.transpose();
  return out;
}

struct Objective {
  const std::vector<GroupPatterns>& groups;
  const Quadrature& quad;
  int m;  // number of fixed-effect coefficients

  // theta = (beta, log sigma); returns log likelihood and its gradient.
  double eval(const Eigen::VectorXd& theta, Eigen::VectorXd& grad) const {
    Eigen::VectorXd beta = theta.head(m);
    double sigma = std::exp(theta(m));
    double ll = 0.0;
    grad = Eigen::VectorXd::Zero(m + 1);
    for (const auto& g : groups) {
      GroupEval e = evaluate_group(g, beta, sigma, quad);
      ll += e.log_lik;
      grad.head(m) += e.score_beta;
      grad(m) += e.score_logsigma;
    }
    return ll;
  }
};

struct ProfilePoint {
  Eigen::VectorXd beta;
  double log_lik = -std::numeric_limits<double>::infinity();
  bool converged = false;
  int iterations = 0;
};

// Maximizes the marginal log likelihood over beta at fixed sigma by damped
// Newton with the exact quadrature Hessian. The marginal likelihood is
// log-concave in beta, so this converges from any start.
ProfilePoint profile_beta(const std::vector<GroupPatterns>& groups,
                          const Quadrature& quad, double sigma,
                          Eigen::VectorXd beta, int max_iter, double tol) {
  int m = static_cast<int>(beta.size());
  ProfilePoint point;

  auto eval_all = [&](const Eigen::VectorXd& b, Eigen::VectorXd& grad,
                      Eigen::MatrixXd& hess) {
    double ll = 0.0;
    grad = Eigen::VectorXd::Zero(m);
    hess = Eigen::MatrixXd::Zero(m, m);
    for (const auto& g : groups) {
      GroupEval e = evaluate_group(g, b, sigma, quad, true);
      ll += e.log_lik;
      grad += e.score_beta;
      hess += e.hess_beta;
    }
    return ll;
  };

  Eigen::VectorXd grad(m);
  Eigen::MatrixXd hess(m, m);
  double ll = eval_all(beta, grad, hess);
  for (int it = 0; it < max_iter; ++it) {
    point.iterations = it + 1;
    if (grad.lpNorm<Eigen::Infinity>() < tol) {
      point.converged = true;
      break;
    }
    Eigen::MatrixXd neg = -hess;
    neg.diagonal().array() += 1e-10;
    Eigen::VectorXd step = neg.ldlt().solve(grad);
    double scale = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      Eigen::VectorXd cand = beta + scale * step;
      Eigen::VectorXd g2(m);
      Eigen::MatrixXd h2(m, m);
      double ll2 = eval_all(cand, g2, h2);
      if (std::isfinite(ll2) && ll2 >= ll - 1e-14) {
        // Accept equal values too: near the optimum the improvement can
        // sit below double resolution while the step still shrinks.
        bool no_progress = ll2 <= ll + 1e-14 &&
                           (scale * step).lpNorm<Eigen::Infinity>() < 1e-12;
        beta = cand;
        ll = ll2;
        grad = g2;
        hess = h2;
        accepted = !no_progress;
        break;
      }
      scale *= 0.5;
    }
    if (!accepted) break;
  }
  if (grad.lpNorm<Eigen::Infinity>() < tol) point.converged = true;
  point.beta = beta;
  point.log_lik = ll;
  return point;
}

// Central-difference Hessian of the log likelihood from analytic gradients.
Eigen::MatrixXd numeric_hessian(const Objective& obj,
                                const Eigen::VectorXd& theta) {
  int d = obj.m + 1;
  Eigen::MatrixXd h(d, d);
  for (int j = 0; j < d; ++j) {
    double step = 1e-5 * (1.0 + std::fabs(theta(j)));
    Eigen::VectorXd tp = theta, tm = theta;
    tp(j) += step;
    tm(j) -= step;
    Eigen::VectorXd gp(d), gm(d);
    obj.eval(tp, gp);
    obj.eval(tm, gm);
    h.col(j) = (gp - gm) / (2.0 * step);
  }
  return 0.5 * (h + h.transpose());
}

}  // namespace

int GlmmData::n_groups() const {
  int k = 0;
  for (int g : group) k = std::max(k, g + 1);
  return k;
}

void GlmmData::validate() const {
  int n_obs = n();
  if (n_obs == 0) throw std::invalid_argument("glmm: empty data");
  if (static_cast<int>(group.size()) != n_obs)
    throw std::invalid_argument("glmm: group vector length mismatch");
  if (fixed_design.rows() != n_obs)
    throw std::invalid_argument("glmm: design row count mismatch");
  if (n_obs <= n_coefficients() + 1)
    throw std::invalid_argument("glmm: need n > M + 1");
  for (int i = 0; i < n_obs; ++i) {
    if (response(i) != 0.0 && response(i) != 1.0)
      throw std::invalid_argument("glmm: response must be binary");
    if (fixed_design(i, 0) != 1.0)
      throw std::invalid_argument("glmm: design first column must be ones");
    if (group[i] < 0)
      throw std::invalid_argument("glmm: negative group index");
  }
  int k_groups = n_groups();
  std::vector<int> counts(k_groups, 0);
  for (int g : group) ++counts[g];
  for (int g = 0; g < k_groups; ++g)
    if (counts[g] == 0)
      throw std::invalid_argument("glmm: empty group " + std::to_string(g));
  double total = response.sum();
  if (total == 0.0 || total == static_cast<double>(n_obs))
    throw std::invalid_argument("glmm: degenerate response");
}

std::vector<std::pair<double, double>> gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: n >= 1");
  std::vector<double> x(n), w(n);
  const double eps = 1e-14;
  int m = (n + 1) / 2;
  double z = 0.0, pp = 0.0;
  for (int i = 0; i < m; ++i) {
    if (i == 0)
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    else if (i == 1)
      z -= 1.14 * std::pow(n, 0.426) / z;
    else if (i == 2)
      z = 1.86 * z - 0.86 * x[0];
    else if (i == 3)
      z = 1.91 * z - 0.91 * x[1];
    else
      z = 2.0 * z - x[i - 2];
    for (int it = 0; it < 100; ++it) {
      double p1 = 0.7511255444649425;  // pi^{-1/4}
      double p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      double dz = p1 / pp;
      z -= dz;
      if (std::fabs(dz) < eps) break;
    }
    x[i] = z;
    x[n - 1 - i] = -z;
    w[i] = 2.0 / (pp * pp);
    w[n - 1 - i] = w[i];
  }
  std::vector<std::pair<double, double>> out(n);
  for (int i = 0; i < n; ++i) out[i] = {x[i], w[i]};
  return out;
}

GlmmFit fit_logistic(const GlmmData& data, int max_iter, double tol) {
  data.validate();
  if (tol < 1e-12) tol = 1e-12;  // below double resolution of the gradient
  auto groups = collapse(data);
  // Pool all groups: sigma^2 = 0 removes the stratum structure.
  int m = data.n_coefficients();
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(m);
  GlmmFit fit;
  fit.notes.push_back("plain logistic (sigma^2 = 0)");

  auto loglik_grad_hess = [&](const Eigen::VectorXd& b, Eigen::VectorXd& grad,
                              Eigen::MatrixXd& hess) {
    double ll = 0.0;
    grad = Eigen::VectorXd::Zero(m);
    hess = Eigen::MatrixXd::Zero(m, m);
    for (const auto& g : groups) {
      Eigen::VectorXd eta = g.x * b;
      for (int p = 0; p < g.y.size(); ++p) {
        double mu = logistic(eta(p));
        ll += g.w(p) * (g.y(p) * eta(p) - log1pexp(eta(p)));
        grad += g.w(p) * (g.y(p) - mu) * g.x.row(p).transpose();
        hess -= g.w(p) * mu * (1.0 - mu) * g.x.row(p).transpose() * g.x.row(p);
      }
    }
    return ll;
  };

  Eigen::VectorXd grad(m);
  Eigen::MatrixXd hess(m, m);
  double ll = loglik_grad_hess(beta, grad, hess);
  for (int it = 0; it < max_iter; ++it) {
    fit.iterations = it + 1;
    if (grad.lpNorm<Eigen::Infinity>() < tol) {
      fit.converged = true;
      break;
    }
    Eigen::MatrixXd h_reg = -hess;
    h_reg.diagonal().array() += 1e-12;
    Eigen::VectorXd step = h_reg.ldlt().solve(grad);
    double scale = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 50; ++ls) {
      Eigen::VectorXd cand = beta + scale * step;
      Eigen::VectorXd g2(m);
      Eigen::MatrixXd h2(m, m);
      double ll2 = loglik_grad_hess(cand, g2, h2);
      if (std::isfinite(ll2) && ll2 >= ll - 1e-14) {
        bool no_progress = ll2 <= ll + 1e-14 &&
                           (scale * step).lpNorm<Eigen::Infinity>() < 1e-12;
        beta = cand;
        ll = ll2;
        grad = g2;
        hess = h2;
        accepted = !no_progress;
        break;
      }
      scale *= 0.5;
    }
    if (!accepted) break;
  }
  if (grad.lpNorm<Eigen::Infinity>() < tol) fit.converged = true;

  fit.beta = beta;
  fit.sigma2 = 0.0;
  fit.log_lik = ll;
  Eigen::MatrixXd info = -hess;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
  Eigen::MatrixXd cov = ldlt.solve(Eigen::MatrixXd::Identity(m, m));
  fit.se.resize(m);
  fit.z.resize(m);
  fit.p.resize(m);
  for (int j = 0; j < m; ++j) {
    double v = cov(j, j);
    fit.se(j) = v > 0.0 ? std::sqrt(v) : std::numeric_limits<double>::infinity();
    fit.z(j) = fit.beta(j) / fit.se(j);
    fit.p(j) = 2.0 * dist::normal_sf(std::fabs(fit.z(j)));
  }
  // Quasi-separation: diverging coefficients with saturated probabilities.
  for (const auto& g : groups) {
    Eigen::VectorXd eta = g.x * beta;
    for (int p = 0; p < g.y.size(); ++p) {
      double mu = logistic(eta(p));
      if ((mu > 1.0 - 1e-6 || mu < 1e-6) &&
          beta.lpNorm<Eigen::Infinity>() > 15.0) {
        fit.separation = true;
        fit.notes.push_back("quasi-separation: Wald p-values unreliable");
        break;
      }
    }
    if (fit.separation) break;
  }
  return fit;
}

GlmmFit fit_glmm(const GlmmData& data, const GlmmOptions& options) {
  data.validate();
  if (options.quadrature_nodes < 1)
    throw std::invalid_argument("glmm: quadrature_nodes >= 1");
  if (options.fix_sigma_zero)
    return fit_logistic(data, options.max_iter, options.tol);

  auto groups = collapse(data);
  Quadrature quad{gauss_hermite(options.quadrature_nodes)};
  int m = data.n_coefficients();

  GlmmFit start = fit_logistic(data, options.max_iter, options.tol);

  // The scalar variance is profiled: Newton over beta inside, a bracketed
  // 1-D search over log sigma outside. This stays robust where a joint
  // quasi-Newton crawls, because the likelihood goes flat in log sigma as
  // sigma -> 0.
  int profile_evals = 0;
  Eigen::VectorXd warm = start.beta;
  auto profile = [&](double log_sigma) {
    ++profile_evals;
    ProfilePoint p = profile_beta(groups, quad, std::exp(log_sigma), warm,
                                  options.max_iter, options.tol);
    warm = p.beta;
    return p;
  };

  const double lo_bound = kLogSigmaFloor, hi_bound = 2.5;
  double best_ls = lo_bound;
  ProfilePoint best = profile(lo_bound);
  for (double ls = -4.0; ls <= hi_bound + 1e-9; ls += 0.5) {
    ProfilePoint p = profile(ls);
    if (p.log_lik > best.log_lik) {
      best = p;
      best_ls = ls;
    }
  }
  // Golden-section refinement around the best grid point.
  {
    const double gr = 0.6180339887498949;
    double a = std::max(lo_bound, best_ls - 0.5);
    double b = std::min(hi_bound, best_ls + 0.5);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    ProfilePoint f1 = profile(x1), f2 = profile(x2);
    while (b - a > 1e-8) {
      if (f1.log_lik > f2.log_lik) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - gr * (b - a);
        f1 = profile(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + gr * (b - a);
        f2 = profile(x2);
      }
    }
    ProfilePoint candidate = f1.log_lik > f2.log_lik ? f1 : f2;
    double candidate_ls = f1.log_lik > f2.log_lik ? x1 : x2;
    if (candidate.log_lik > best.log_lik) {
      best = candidate;
      best_ls = candidate_ls;
    }
  }

  GlmmFit fit;
  fit.iterations = profile_evals;
  fit.converged = best.converged;
  fit.beta = best.beta;
  fit.sigma2 = std::exp(2.0 * best_ls);
  fit.log_lik = best.log_lik;

  // Boundary: the sigma^2 = 0 profile matching (or beating) the interior
  // optimum means the variance is estimated at zero and the interior
  // parameterization is merely flat.
  if (best_ls <= lo_bound + 1e-6 || start.log_lik >= fit.log_lik - 1e-8) {
    GlmmFit boundary = start;
    boundary.sigma_boundary = true;
    boundary.notes.push_back("sigma^2 maximized at the boundary");
    boundary.iterations += fit.iterations;
    return boundary;
  }

  Objective obj{groups, quad, m};
  Eigen::VectorXd theta(m + 1);
  theta.head(m) = fit.beta;
  theta(m) = best_ls;
  Eigen::MatrixXd info = -numeric_hessian(obj, theta);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
  Eigen::MatrixXd cov = ldlt.solve(Eigen::MatrixXd::Identity(m + 1, m + 1));
  bool singular = ldlt.info() != Eigen::Success;
  fit.se.resize(m);
  fit.z.resize(m);
  fit.p.resize(m);
  for (int j = 0; j < m; ++j) {
    double v = cov(j, j);
    if (!(v > 0.0)) {
      singular = true;
      v = std::numeric_limits<double>::infinity();
    }
    fit.se(j) = std::sqrt(v);
    fit.z(j) = fit.beta(j) / fit.se(j);
    fit.p(j) = 2.0 * dist::normal_sf(std::fabs(fit.z(j)));
  }
  if (singular) {
    fit.separation = true;
    fit.notes.push_back("observed information singular");
  }
  if (fit.beta.lpNorm<Eigen::Infinity>() > 15.0) {
    bool saturated = false;
    for (const auto& g : groups) {
      Eigen::VectorXd eta = g.x * fit.beta;
      for (int p = 0; p < g.y.size(); ++p) {
        double mu = logistic(eta(p));
        saturated = saturated || mu > 1.0 - 1e-6 || mu < 1e-6;
      }
    }
    if (saturated) {
      fit.separation = true;
      fit.notes.push_back("quasi-separation: Wald p-values unreliable");
    }
  }
  return fit;
}

GlmmData mbias_data(std::span<const ExperimentRecord> records,
                    const Design& design,
                    const std::string& structured_format) {
  design.validate();
  if (!design.has_format(structured_format))
    throw std::invalid_argument("mbias: unknown format '" + structured_format +
                                "'");
  if (structured_format == design.baseline_format)
    throw std::invalid_argument("mbias: structured format equals baseline");

  std::vector<const ExperimentRecord*> rows;
  for (const auto& rec : records) {
    if (rec.format.level == design.baseline_format ||
        rec.format.level == structured_format)
      rows.push_back(&rec);
  }
  auto alternatives = design.alternative_instructions();
  if (alternatives.empty())
    throw std::invalid_argument("mbias: need >= 2 instruction levels");
  std::map<std::string, int> dummy_of;
  for (std::size_t j = 0; j < alternatives.size(); ++j)
    dummy_of[alternatives[j]] = static_cast<int>(j);

  GlmmData data;
  int n = static_cast<int>(rows.size());
  int m = static_cast<int>(alternatives.size()) + 1;
  data.response.resize(n);
  data.fixed_design = Eigen::MatrixXd::Zero(n, m);
  data.group.resize(n);
  for (int i = 0; i < n; ++i) {
    const auto& rec = *rows[i];
    data.response(i) = rec.format.level == structured_format ? 1.0 : 0.0;
    data.fixed_design(i, 0) = 1.0;
    auto it = dummy_of.find(rec.instruction.level);
    if (it != dummy_of.end()) data.fixed_design(i, 1 + it->second) = 1.0;
    data.group[i] = rec.outcome;  // generation outcome strata
  }
  return data;
}

TestResult mbias_test(std::span<const ExperimentRecord> records,
                      const Design& design,
                      const std::string& structured_format,
                      const GlmmOptions& options) {
  GlmmData data = mbias_data(records, design, structured_format);

  TestResult r;
  r.method = TestMethod::wald;
  r.df = 1;

  // Outcome strata: all-correct or all-incorrect data cannot exhibit a
  // conditional association.
  bool has0 = false, has1 = false;
  for (int g : data.group) (g == 0 ? has0 : has1) = true;
  if (!has0 || !has1) {
    r.detail["degenerate"] = 1.0;
    return r;
  }

  GlmmFit fit = fit_glmm(data, options);
  int m = static_cast<int>(fit.beta.size());
  double min_p = 1.0;
  int argmin = 1;
  for (int j = 1; j < m; ++j) {
    r.detail["beta_" + std::to_string(j)] = fit.beta(j);
    r.detail["se_" + std::to_string(j)] = fit.se(j);
    r.detail["p_" + std::to_string(j)] = fit.p(j);
    if (fit.p(j) < min_p) {
      min_p = fit.p(j);
      argmin = j;
    }
  }
  r.detail["beta_0"] = fit.beta(0);
  r.detail["sigma2"] = fit.sigma2;
  r.detail["log_lik"] = fit.log_lik;
  r.detail["converged"] = fit.converged ? 1.0 : 0.0;
  r.detail["sigma_boundary"] = fit.sigma_boundary ? 1.0 : 0.0;
  if (fit.separation) r.detail["separation"] = 1.0;
  r.statistic = std::fabs(fit.z(argmin));
  r.p_value = min_p;
  return r;
}

}  // namespace paircause
