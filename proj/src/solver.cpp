#include "betagraph/solver.hpp"

#include <algorithm>
#include <span>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace betagraph {

void FitConfig::validate() const {
  if (!(tol > 0.0)) throw std::domain_error("tol must be positive");
  if (max_iter < 1) throw std::domain_error("max_iter must be at least 1");
  if (!(blowup > 0.0)) throw std::domain_error("blowup must be positive");
}

std::string_view to_string(FitStatus s) noexcept {
  switch (s) {
    case FitStatus::Converged: return "converged";
    case FitStatus::NonExistent: return "nonexistent";
    case FitStatus::MaxIterExceeded: return "maxiter";
  }
  return "unknown";
}

namespace {

void require_same_size(const BetaVector& beta, const DegreeSequence& d) {
  if (beta.size() != d.size()) throw std::domain_error("beta and degree lengths differ");
}

// log(1 + e^x) without overflow.
double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double sup_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Estimate of max_i |beta_i - beta*_i| from the residuals r = d - E[d],
// using the approximate inverse of the Fisher matrix: (S r)_i = r_i / v_ii +
// sum_j r_j / v.., bounded in absolute value.
double parameter_error_estimate(const std::vector<double>& beta, std::span<const int> deg) {
  const std::size_t t = beta.size();
  std::vector<double> r(t), vii(t, 0.0);
  double vdotdot = 0.0;
  for (std::size_t i = 0; i < t; ++i) {
    double expected = 0.0;
    for (std::size_t j = 0; j < t; ++j) {
      if (j == i) continue;
      const double p = logistic(beta[i] + beta[j]);
      expected += p;
      vii[i] += p * (1.0 - p);
    }
    r[i] = deg[i] - expected;
    vdotdot += vii[i];
  }
  double total = 0.0;
  for (double x : r) total += std::abs(x);
  double worst = 0.0;
  for (std::size_t i = 0; i < t; ++i) worst = std::max(worst, std::abs(r[i]) / vii[i]);
  return worst + total / vdotdot;
}

}  // namespace

double residual(const BetaVector& beta, const DegreeSequence& d) {
  require_same_size(beta, d);
  const std::size_t t = d.size();
  double worst = 0.0;
  for (Vertex i = 1; i <= t; ++i) {
    double expected = 0.0;
    for (Vertex j = 1; j <= t; ++j) {
      if (j != i) expected += edge_probability(beta, i, j);
    }
    worst = std::max(worst, std::abs(d[i] - expected));
  }
  return worst;
}

double log_likelihood(const BetaVector& beta, const DegreeSequence& d) {
  require_same_size(beta, d);
  const std::size_t t = d.size();
  double ll = 0.0;
  for (Vertex i = 1; i <= t; ++i) ll += beta[i] * d[i];
  for (Vertex i = 1; i <= t; ++i) {
    for (Vertex j = i + 1; j <= t; ++j) ll -= softplus(beta[i] + beta[j]);
  }
  return ll;
}

FitResult solve_mle(const DegreeSequence& d, const FitConfig& cfg,
                    const std::optional<BetaVector>& start) {
  cfg.validate();
  const std::size_t t = d.size();
  if (t < 3) throw std::domain_error("solve_mle: need t >= 3");
  if (start && start->size() != t) throw std::domain_error("solve_mle: start has wrong length");

  const auto deg = d.values();
  const int full = static_cast<int>(t) - 1;

  std::vector<double> beta(t);
  if (start) {
    std::copy(start->values().begin(), start->values().end(), beta.begin());
  } else {
    for (std::size_t i = 0; i < t; ++i) {
      const double q = static_cast<double>(deg[i]) / full;
      beta[i] = std::clamp(0.5 * std::log(q / (1.0 - q)), -cfg.blowup, cfg.blowup);
    }
  }

  auto finish = [&](FitStatus status, int iterations) {
    FitResult r;
    r.beta_hat = BetaVector(beta);
    r.status = status;
    r.iterations = iterations;
    r.residual = residual(r.beta_hat, d);
    r.log_likelihood = log_likelihood(r.beta_hat, d);
    return r;
  };

  if (std::any_of(deg.begin(), deg.end(), [&](int k) { return k == 0 || k == full; })) {
    return finish(FitStatus::NonExistent, 0);
  }

  std::vector<double> up(t), down(t), sums(t);
  std::vector<double> log_deg(t);
  for (std::size_t i = 0; i < t; ++i) log_deg[i] = std::log(static_cast<double>(deg[i]));

  const int midpoint = cfg.max_iter / 2;
  double norm_at_mid = 0.0;
  double residual_at_mid = 0.0;
  double sweep_residual = 0.0;
  double last_step = 0.0, prev_step = 0.0;

  for (int it = 0; it < cfg.max_iter; ++it) {
    for (std::size_t i = 0; i < t; ++i) {
      up[i] = std::exp(beta[i]);
      down[i] = std::exp(-beta[i]);
    }
    // sums[i] = sum_{j != i} 1 / (e^{-b_j} + e^{b_i}); the fitted degree is
    // e^{b_i} * sums[i].
    sweep_residual = 0.0;
    for (std::size_t i = 0; i < t; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < t; ++j) s += 1.0 / (down[j] + up[i]);
      s -= 1.0 / (down[i] + up[i]);
      sums[i] = s;
      sweep_residual = std::max(sweep_residual, std::abs(deg[i] - up[i] * s));
    }
    // The residual alone does not bound the parameter error when v_ii is
    // small, so the estimated distance to the fixed point must also fall
    // below tol, with a factor-two margin. For a linearly convergent sweep
    // with contraction rho the remaining error is about step * rho / (1 - rho).
    if (sweep_residual <= cfg.tol && residual(BetaVector(beta), d) <= cfg.tol) {
      double estimate = parameter_error_estimate(beta, deg);
      if (prev_step > 0.0) {
        const double rho = last_step / prev_step;
        estimate = std::max(estimate, rho < 1.0 ? last_step * rho / (1.0 - rho) : INFINITY);
      }
      if (estimate <= 0.5 * cfg.tol) return finish(FitStatus::Converged, it);
    }
    if (it == midpoint) {
      norm_at_mid = sup_norm(beta);
      residual_at_mid = sweep_residual;
    }
    prev_step = last_step;
    last_step = 0.0;
    for (std::size_t i = 0; i < t; ++i) {
      const double next = log_deg[i] - std::log(sums[i]);
      last_step = std::max(last_step, std::abs(next - beta[i]));
      beta[i] = next;
    }
    if (sup_norm(beta) > cfg.blowup) return finish(FitStatus::NonExistent, it + 1);
  }

  // Boundary sequences drift logarithmically toward infinity: the norm keeps
  // growing while the residual decays sub-geometrically.
  const bool growing = sup_norm(beta) > norm_at_mid;
  const bool sub_geometric = sweep_residual > 0.1 * residual_at_mid;
  if (cfg.max_iter >= 2 && growing && sub_geometric) {
    return finish(FitStatus::NonExistent, cfg.max_iter);
  }
  return finish(FitStatus::MaxIterExceeded, cfg.max_iter);
}

BetaVector regular_closed_form(std::size_t t, int k) {
  if (t < 3) throw std::domain_error("regular_closed_form: need t >= 3");
  if (k <= 0 || k >= static_cast<int>(t) - 1) {
    throw std::domain_error("regular_closed_form: k must lie strictly between 0 and t-1");
  }
  const double q = static_cast<double>(k) / static_cast<double>(t - 1);
  return BetaVector::constant(t, 0.5 * std::log(q / (1.0 - q)));
}

}  // namespace betagraph
