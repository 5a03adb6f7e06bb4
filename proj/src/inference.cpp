#include "betagraph/inference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace betagraph {

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile: p must lie in (0, 1)");

  // Acklam's rational approximation (relative error below 1.2e-9), followed by
  // one Halley step against erfc.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  auto tail = [&](double q) {
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  };

  double x;
  if (p < p_low) {
    x = tail(std::sqrt(-2.0 * std::log(p)));
  } else if (p > 1.0 - p_low) {
    x = -tail(std::sqrt(-2.0 * std::log1p(-p)));
  } else {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }

  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

double critical_value(double level) {
  if (!(level > 0.0 && level < 1.0)) throw std::domain_error("confidence level must lie in (0, 1)");
  return normal_quantile(0.5 + 0.5 * level);
}

namespace {

void require_converged(const FitResult& fit) {
  if (!fit.converged()) {
    throw std::domain_error("inference requires a converged fit (status: " +
                            std::string(to_string(fit.status)) + ")");
  }
}

void require_vertex(const FisherMatrix& v, Vertex i) {
  if (i < 1 || i > v.size()) throw std::domain_error("vertex id out of range");
}

}  // namespace

double se_beta(const FisherMatrix& v, Vertex i) {
  require_vertex(v, i);
  return 1.0 / std::sqrt(v.diag(i));
}

double se_beta(const FitResult& fit, const FisherMatrix& v, Vertex i) {
  require_converged(fit);
  return se_beta(v, i);
}

IntervalEstimate ci_coordinate(const FitResult& fit, const FisherMatrix& v, Vertex i,
                               double level) {
  require_converged(fit);
  const double z = critical_value(level);
  const double se = se_beta(v, i);
  const double point = fit.beta_hat[i];
  return {Coordinate{i}, point, se, level, point - z * se, point + z * se};
}

IntervalEstimate ci_contrast(const FitResult& fit, const FisherMatrix& v, Vertex i, Vertex j,
                             double level) {
  require_converged(fit);
  if (i == j) throw std::domain_error("ci_contrast: i == j");
  require_vertex(v, i);
  require_vertex(v, j);
  const double z = critical_value(level);
  const double se = std::sqrt(1.0 / v.diag(i) + 1.0 / v.diag(j));
  const double point = fit.beta_hat[i] - fit.beta_hat[j];
  return {Contrast{i, j}, point, se, level, point - z * se, point + z * se};
}

std::vector<double> z_statistics(const FitResult& fit, const FisherMatrix& v_true,
                                 const BetaVector& beta_true) {
  require_converged(fit);
  const std::size_t t = beta_true.size();
  if (fit.beta_hat.size() != t || v_true.size() != t) {
    throw std::domain_error("z_statistics: size mismatch");
  }
  std::vector<double> z(t);
  for (Vertex i = 1; i <= t; ++i) {
    z[i - 1] = std::sqrt(v_true.diag(i)) * (fit.beta_hat[i] - beta_true[i]);
  }
  return z;
}

double qq_correlation(std::span<const double> sample) {
  const std::size_t n = sample.size();
  if (n < 2) throw std::domain_error("qq_correlation: need at least 2 values");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> q(n);
  for (std::size_t k = 0; k < n; ++k) q[k] = normal_quantile((k + 0.5) / n);

  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    mx += sorted[k];
    my += q[k];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sxy += (sorted[k] - mx) * (q[k] - my);
    sxx += (sorted[k] - mx) * (sorted[k] - mx);
    syy += (q[k] - my) * (q[k] - my);
  }
  if (sxx == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

SampleSummary summarize(std::span<const double> sample) {
  SampleSummary s;
  s.n = sample.size();
  if (s.n == 0) return s;
  double sum = 0.0;
  for (double x : sample) sum += x;
  s.mean = sum / s.n;
  if (s.n < 2) return s;
  double ss = 0.0;
  for (double x : sample) ss += (x - s.mean) * (x - s.mean);
  s.sd = std::sqrt(ss / (s.n - 1));
  s.qq_correlation = qq_correlation(sample);
  return s;
}

void write_inference_csv(std::ostream& out, const FitResult& fit, const FisherMatrix& v,
                         const InferenceCsvOptions& opts) {
  require_converged(fit);
  char buf[64];
  auto num = [&](double x) {
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return std::string(buf);
  };
  out << "vertex,beta_hat,se,ci_lo,ci_hi";
  if (opts.table2_compat) out << ",table2_compat";
  out << '\n';
  for (Vertex i = 1; i <= v.size(); ++i) {
    const auto ci = ci_coordinate(fit, v, i, opts.level);
    out << i << ',' << num(ci.point) << ',' << num(ci.se) << ',' << num(ci.lo) << ','
        << num(ci.hi);
    if (opts.table2_compat) out << ',' << num(std::sqrt(v.diag(i)));
    out << '\n';
  }
}

}  // namespace betagraph
