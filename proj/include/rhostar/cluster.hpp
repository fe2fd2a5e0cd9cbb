#ifndef RHOSTAR_CLUSTER_HPP
#define RHOSTAR_CLUSTER_HPP

#include "rhostar/montecarlo.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace rhostar {

struct GmmOptions {
  int restarts = 5;
  int max_iterations = 300;
  /// Relative change in mean log-likelihood that stops EM.
  double tolerance = 1e-10;
  /// Covariance eigenvalue (after scaling the data to unit RMS spread) that counts as collapse.
  double collapse_eigenvalue = 1e-12;
};

struct GmmFit {
  std::vector<int> assignment;
  Eigen::VectorXd weights;
  Eigen::MatrixXd means;  // K x d
  std::vector<Eigen::MatrixXd> covariances;
  double log_likelihood = 0.0;
  int iterations = 0;
};

/// Full-covariance Gaussian mixture fitted by EM from k-means++ starts; the
/// best-likelihood restart wins. Throws EmDegenerate if every restart collapses.
GmmFit fit_gmm(const Eigen::MatrixXd& points, int K, std::uint64_t seed, const GmmOptions& options = {});

/// Fraction of disagreements between two labelings, minimized over
/// relabelings of `predicted` (exhaustive for K <= 6, Hungarian otherwise).
double permutation_error(const std::vector<int>& truth, const std::vector<int>& predicted, int K);

/// Optimal assignment maximizing sum_k score(k, perm[k]) for a square score matrix.
std::vector<int> hungarian_max(const Eigen::MatrixXd& score);

double clustering_error(const Eigen::MatrixXd& points, const std::vector<int>& labels, int K, std::uint64_t seed,
                        const GmmOptions& options = {});
double clustering_error(const Embedding& embedding, const std::vector<int>& labels, int K, std::uint64_t seed,
                        const GmmOptions& options = {});

}  // namespace rhostar

#endif
