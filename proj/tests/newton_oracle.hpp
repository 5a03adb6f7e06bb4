#pragma once

// Test-only reference solver: damped Newton on the moment equations with the
// full t x t Jacobian, in long double. Shares no code with solve_mle.

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace betagraph::testing {

struct OracleFit {
  std::vector<long double> beta;
  long double residual;
};

inline long double logistic_ld(long double x) {
  return x >= 0 ? 1.0L / (1.0L + std::exp(-x)) : std::exp(x) / (1.0L + std::exp(x));
}

inline long double oracle_residual(std::span<const int> d, const std::vector<long double>& b,
                                   std::vector<long double>* f = nullptr) {
  const std::size_t t = d.size();
  long double worst = 0;
  for (std::size_t i = 0; i < t; ++i) {
    long double s = 0;
    for (std::size_t j = 0; j < t; ++j) {
      if (j != i) s += logistic_ld(b[i] + b[j]);
    }
    if (f) (*f)[i] = s - d[i];
    worst = std::max(worst, std::abs(s - d[i]));
  }
  return worst;
}

/// Gaussian elimination with partial pivoting; a is row-major n x n.
inline std::vector<long double> solve_dense(std::vector<long double> a, std::vector<long double> rhs) {
  const std::size_t n = rhs.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r * n + c]) > std::abs(a[piv * n + c])) piv = r;
    }
    if (piv != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a[c * n + k], a[piv * n + k]);
      std::swap(rhs[c], rhs[piv]);
    }
    for (std::size_t r = c + 1; r < n; ++r) {
      const long double m = a[r * n + c] / a[c * n + c];
      for (std::size_t k = c; k < n; ++k) a[r * n + k] -= m * a[c * n + k];
      rhs[r] -= m * rhs[c];
    }
  }
  std::vector<long double> x(n);
  for (std::size_t r = n; r-- > 0;) {
    long double s = rhs[r];
    for (std::size_t k = r + 1; k < n; ++k) s -= a[r * n + k] * x[k];
    x[r] = s / a[r * n + r];
  }
  return x;
}

/// Returns nullopt when Newton fails to reach `target` residual with bounded
/// iterates (the MLE is then treated as nonexistent). On the boundary of the
/// degree polytope Newton still drives the residual below `target`, with
/// |beta| near 16 at t = 5, so the bound must stay well below that.
inline std::optional<OracleFit> newton_oracle(std::span<const int> d, long double target = 1e-14L,
                                              int max_iter = 200, long double bound = 10.0L) {
  const std::size_t t = d.size();
  std::vector<long double> b(t, 0.0L);
  std::vector<long double> f(t);
  long double res = oracle_residual(d, b, &f);
  for (int it = 0; it < max_iter && res > target; ++it) {
    std::vector<long double> jac(t * t, 0.0L);
    for (std::size_t i = 0; i < t; ++i) {
      for (std::size_t j = 0; j < t; ++j) {
        if (i == j) continue;
        const long double p = logistic_ld(b[i] + b[j]);
        jac[i * t + j] = p * (1 - p);
        jac[i * t + i] += p * (1 - p);
      }
    }
    const auto step = solve_dense(jac, f);
    long double scale = 1.0L;
    std::vector<long double> trial(t), ftrial(t);
    long double trial_res = 0;
    for (int halvings = 0; halvings < 60; ++halvings, scale /= 2) {
      for (std::size_t i = 0; i < t; ++i) trial[i] = b[i] - scale * step[i];
      trial_res = oracle_residual(d, trial, &ftrial);
      if (trial_res < res) break;
    }
    if (!(trial_res < res)) return std::nullopt;
    b = trial;
    f = ftrial;
    res = trial_res;
    for (long double x : b) {
      if (std::abs(x) > bound) return std::nullopt;
    }
  }
  if (res > target) return std::nullopt;
  return OracleFit{b, res};
}

}  // namespace betagraph::testing
