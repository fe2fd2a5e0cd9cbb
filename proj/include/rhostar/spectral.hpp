#ifndef RHOSTAR_SPECTRAL_HPP
#define RHOSTAR_SPECTRAL_HPP

#include <Eigen/Dense>

#include <functional>

namespace rhostar {

/// Leading eigenpairs of a symmetric operator ordered by decreasing |lambda|.
struct Eigenpairs {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;  // orthonormal columns
  int iterations = 0;
};

/// Applies a symmetric n x n operator to an n x m block.
using BlockOperator = std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)>;

struct EigenOptions {
  /// Residual bound relative to |lambda_1|.
  double tolerance = 1e-11;
  int max_iterations = 2000;
  /// Extra subspace columns beyond the requested count.
  int oversample = 6;
  /// At or below this size the operator is materialized and solved densely.
  Eigen::Index dense_cutoff = 400;
};

/// Top-d eigenpairs by magnitude via subspace iteration with Rayleigh-Ritz
/// extraction (dense fallback for small n). Eigenvectors are oriented so their
/// largest-magnitude entry is positive. Throws EigensolverFailure.
Eigenpairs top_eigenpairs(const BlockOperator& op, Eigen::Index n, int d, const EigenOptions& options = {});

/// Convenience overload for an explicit dense symmetric matrix.
Eigenpairs top_eigenpairs(const Eigen::MatrixXd& M, int d, const EigenOptions& options = {});

}  // namespace rhostar

#endif
