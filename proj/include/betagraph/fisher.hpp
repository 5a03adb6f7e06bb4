#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "betagraph/graph.hpp"

namespace betagraph {

/// Raised when a numerical factorization fails.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Covariance of the degree vector, equal to the Fisher information of beta:
/// v_ij = p_ij (1 - p_ij) off the diagonal and v_ii = sum_{j != i} v_ij.
class FisherMatrix {
 public:
  explicit FisherMatrix(const BetaVector& beta);

  std::size_t size() const noexcept { return t_; }
  /// 1-based entry access.
  double operator()(Vertex i, Vertex j) const { return entries_[(i - 1) * t_ + (j - 1)]; }
  double diag(Vertex i) const { return entries_[(i - 1) * (t_ + 1)]; }
  /// Sum of all off-diagonal entries.
  double dotdot() const noexcept { return dotdot_; }

  Eigen::MatrixXd dense() const;

 private:
  std::size_t t_;
  std::vector<double> entries_;
  double dotdot_ = 0.0;
};

/// Closed-form surrogate for the inverse Fisher matrix,
/// s_ij = delta_ij / v_ii - 1 / v.., stored as t diagonal terms and one scalar.
class ApproxInverse {
 public:
  explicit ApproxInverse(const FisherMatrix& v);

  std::size_t size() const noexcept { return diag_terms_.size(); }
  double operator()(Vertex i, Vertex j) const {
    return (i == j ? diag_terms_[i - 1] : 0.0) - global_term_;
  }
  double diag_term(Vertex i) const { return diag_terms_[i - 1]; }
  double global_term() const noexcept { return global_term_; }

 private:
  std::vector<double> diag_terms_;
  double global_term_;
};

FisherMatrix build_v(const BetaVector& beta);
ApproxInverse build_s(const FisherMatrix& v);

/// Largest size accepted by exact_inverse.
inline constexpr std::size_t kExactInverseMaxSize = 500;

struct ExactInverse {
  Eigen::MatrixXd inverse;
  double min_pivot;  ///< smallest diagonal entry of the Cholesky factor, squared
};

/// V^{-1} through a Cholesky factorization. Throws NumericError when V is not
/// numerically positive definite and std::domain_error for t outside [3, 500].
ExactInverse exact_inverse(const FisherMatrix& v);

/// max_ij |(V^{-1})_ij - s_ij|
double approx_error(const FisherMatrix& v);

/// Debug dump: "matrix,i,j,value" rows for V and the materialised S.
void dump_fisher_csv(std::ostream& out, const FisherMatrix& v);

}  // namespace betagraph
