#ifndef RHOSTAR_LIMITS_HPP
#define RHOSTAR_LIMITS_HPP

#include "rhostar/model.hpp"

#include <Eigen/Dense>

namespace rhostar {

/// Finite latent distribution: point k (row k of `points`) carries weight Pi_k.
struct DiscreteLatentDistribution {
  Eigen::MatrixXd points;
  Eigen::VectorXd weights;
  Signature signature;

  Eigen::Index size() const noexcept { return points.rows(); }
  Eigen::Index dim() const noexcept { return points.cols(); }
};

/// Checks that every indefinite inner product of support points lies in (0,1).
DiscreteLatentDistribution make_distribution(LatentConfiguration config, Eigen::VectorXd weights);
/// Spectral factorization of B paired with Pi.
DiscreteLatentDistribution latent_distribution(const BlockModel& model);

/// Block-conditional limiting law of an embedded vertex.
struct GaussianSummary {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
  /// Largest condition number among the matrices inverted on the way.
  double condition = 1.0;
};

/// Above this a result is still returned but callers should flag it.
inline constexpr double kConditionWarn = 1e10;
/// Above this inversion is refused.
inline constexpr double kConditionFail = 1e14;

/// E[X X^T] under the distribution. Throws DegenerateDistribution when the
/// smallest eigenvalue is below 1e-12.
Eigen::MatrixXd second_moment(const DiscreteLatentDistribution& dist);

/// mu = E[X].
Eigen::VectorXd latent_mean(const DiscreteLatentDistribution& dist);

/// Limiting ASE law at latent position x: mean x and covariance
/// I Delta^{-1} E[g(x,X) X X^T] Delta^{-1} I with g(x,y) = <Ix,y>(1 - <Ix,y>).
GaussianSummary ase_covariance(const DiscreteLatentDistribution& dist, const Eigen::VectorXd& x);

/// Rows are nu_k / sqrt(sum_l pi_l <I nu_l, nu_k>).
Eigen::MatrixXd lse_latent_positions(const DiscreteLatentDistribution& dist);

/// Limiting LSE law at x (degree-normalized mean, covariance in the
/// n-scaled coordinates of the Laplacian limit theorem).
GaussianSummary lse_covariance(const DiscreteLatentDistribution& dist, const Eigen::VectorXd& x);

/// Same covariance written as E[g~ w w^T] with
/// w = I Dt^{-1} X / <I mu, X> - x / (2 <I mu, x>). Used as a second route.
GaussianSummary lse_covariance_outer_form(const DiscreteLatentDistribution& dist, const Eigen::VectorXd& x);

}  // namespace rhostar

#endif
