#include "betagraph/fisher.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace betagraph {

FisherMatrix::FisherMatrix(const BetaVector& beta) : t_(beta.size()), entries_(t_ * t_, 0.0) {
  if (t_ < 3) throw std::domain_error("Fisher matrix needs t >= 3");
  for (Vertex i = 1; i <= t_; ++i) {
    for (Vertex j = i + 1; j <= t_; ++j) {
      const double p = edge_probability(beta, i, j);
      const double v = p * (1.0 - p);
      entries_[(i - 1) * t_ + (j - 1)] = v;
      entries_[(j - 1) * t_ + (i - 1)] = v;
    }
  }
  // Row sums in a fixed order so diagonals are reproducible.
  for (std::size_t i = 0; i < t_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < t_; ++j) {
      if (j != i) s += entries_[i * t_ + j];
    }
    entries_[i * (t_ + 1)] = s;
    dotdot_ += s;
  }
}

Eigen::MatrixXd FisherMatrix::dense() const {
  Eigen::MatrixXd m(t_, t_);
  for (std::size_t i = 0; i < t_; ++i) {
    for (std::size_t j = 0; j < t_; ++j) m(i, j) = entries_[i * t_ + j];
  }
  return m;
}

ApproxInverse::ApproxInverse(const FisherMatrix& v)
    : diag_terms_(v.size()), global_term_(1.0 / v.dotdot()) {
  for (Vertex i = 1; i <= v.size(); ++i) diag_terms_[i - 1] = 1.0 / v.diag(i);
}

FisherMatrix build_v(const BetaVector& beta) { return FisherMatrix(beta); }

ApproxInverse build_s(const FisherMatrix& v) { return ApproxInverse(v); }

ExactInverse exact_inverse(const FisherMatrix& v) {
  const std::size_t t = v.size();
  if (t > kExactInverseMaxSize) throw std::domain_error("exact_inverse: t exceeds 500");
  const Eigen::MatrixXd dense = v.dense();
  Eigen::LLT<Eigen::MatrixXd> llt(dense);
  if (llt.info() != Eigen::Success) {
    throw NumericError("Fisher matrix is not numerically positive definite");
  }
  const Eigen::MatrixXd l = llt.matrixL();
  const double min_pivot = l.diagonal().array().square().minCoeff();
  if (!(min_pivot > 0.0)) throw NumericError("Cholesky pivot is not positive");
  Eigen::MatrixXd inverse = llt.solve(Eigen::MatrixXd::Identity(t, t));
  return {std::move(inverse), min_pivot};
}

double approx_error(const FisherMatrix& v) {
  const auto exact = exact_inverse(v);
  const ApproxInverse s(v);
  double worst = 0.0;
  for (Vertex i = 1; i <= v.size(); ++i) {
    for (Vertex j = 1; j <= v.size(); ++j) {
      worst = std::max(worst, std::abs(exact.inverse(i - 1, j - 1) - s(i, j)));
    }
  }
  return worst;
}

void dump_fisher_csv(std::ostream& out, const FisherMatrix& v) {
  const ApproxInverse s(v);
  const auto old = out.precision(17);
  out << "matrix,i,j,value\n";
  for (Vertex i = 1; i <= v.size(); ++i) {
    for (Vertex j = 1; j <= v.size(); ++j) out << "V," << i << ',' << j << ',' << v(i, j) << '\n';
  }
  for (Vertex i = 1; i <= v.size(); ++i) {
    for (Vertex j = 1; j <= v.size(); ++j) out << "S," << i << ',' << j << ',' << s(i, j) << '\n';
  }
  out.precision(old);
}

}  // namespace betagraph
