#include "rhostar/limits.hpp"

#include "rhostar/error.hpp"

#include <cmath>
#include <sstream>

namespace rhostar {

namespace {

constexpr double kDegenerateEigenvalue = 1e-12;

struct GuardedInverse {
  Eigen::MatrixXd inverse;
  double condition;
};

// Symmetric PSD inversion with a condition-number guard.
GuardedInverse guarded_inverse(const Eigen::MatrixXd& M, const char* what) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::IllConditioned, std::string(what) + ": eigensolver failed");
  const Eigen::VectorXd& w = es.eigenvalues();
  const double lo = w.cwiseAbs().minCoeff();
  const double hi = w.cwiseAbs().maxCoeff();
  const double cond = lo > 0 ? hi / lo : INFINITY;
  if (!(cond <= kConditionFail)) {
    std::ostringstream os;
    os << what << " has condition number " << cond;
    throw Error(ErrorCode::IllConditioned, os.str());
  }
  Eigen::MatrixXd inv = es.eigenvectors() * w.cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
  return {0.5 * (inv + inv.transpose()), cond};
}

double indefinite_dot(const Eigen::VectorXd& metric, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  return x.cwiseProduct(metric).dot(y);
}

void check_inner_products(const DiscreteLatentDistribution& dist, const Eigen::VectorXd& x) {
  if (x.size() != dist.dim()) throw Error(ErrorCode::DimensionMismatch, "latent vector has wrong dimension");
  const Eigen::VectorXd metric = dist.signature.metric();
  for (Eigen::Index k = 0; k < dist.size(); ++k) {
    const double p = indefinite_dot(metric, x, dist.points.row(k).transpose());
    if (!(p > 0.0 && p < 1.0)) {
      std::ostringstream os;
      os << "<Ix, nu_" << k << "> = " << p << " is outside (0,1)";
      throw Error(ErrorCode::InnerProductOutOfRange, os.str());
    }
  }
}

// <I mu, nu_k> for every support point; all must be positive.
Eigen::VectorXd degrees(const DiscreteLatentDistribution& dist, const Eigen::VectorXd& mu) {
  const Eigen::VectorXd metric = dist.signature.metric();
  Eigen::VectorXd deg(dist.size());
  for (Eigen::Index k = 0; k < dist.size(); ++k) {
    deg(k) = indefinite_dot(metric, mu, dist.points.row(k).transpose());
    if (!(deg(k) > 0.0)) {
      std::ostringstream os;
      os << "expected degree of block " << k << " is " << deg(k);
      throw Error(ErrorCode::NonpositiveDegree, os.str());
    }
  }
  return deg;
}

struct LaplacianParts {
  Eigen::VectorXd mu;
  Eigen::VectorXd deg;
  Eigen::MatrixXd delta_tilde;
  GuardedInverse delta_tilde_inv;
  double x_degree;
};

LaplacianParts laplacian_parts(const DiscreteLatentDistribution& dist, const Eigen::VectorXd& x) {
  check_inner_products(dist, x);
  second_moment(dist);  // non-degeneracy
  const Eigen::VectorXd mu = latent_mean(dist);
  const Eigen::VectorXd deg = degrees(dist, mu);
  Eigen::MatrixXd dt = Eigen::MatrixXd::Zero(dist.dim(), dist.dim());
  for (Eigen::Index k = 0; k < dist.size(); ++k) {
    const Eigen::VectorXd v = dist.points.row(k).transpose();
    dt.noalias() += (dist.weights(k) / deg(k)) * v * v.transpose();
  }
  const double xdeg = indefinite_dot(dist.signature.metric(), mu, x);
  if (!(xdeg > 0.0)) throw Error(ErrorCode::NonpositiveDegree, "<I mu, x> must be positive");
  GuardedInverse inv = guarded_inverse(dt, "Delta~");
  return {mu, deg, std::move(dt), std::move(inv), xdeg};
}

}  // namespace

DiscreteLatentDistribution make_distribution(LatentConfiguration config, Eigen::VectorXd weights) {
  if (weights.size() != config.X.rows()) throw Error(ErrorCode::DimensionMismatch, "one weight per latent position");
  if (config.signature.dim() != config.X.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "signature does not match latent dimension");
  }
  if ((weights.array() <= 0.0).any() || std::abs(weights.sum() - 1.0) > 1e-12) {
    throw Error(ErrorCode::InvalidSimplex, "weights must be an interior simplex point");
  }
  DiscreteLatentDistribution dist{std::move(config.X), std::move(weights), config.signature};
  const Eigen::MatrixXd gram = dist.points * dist.signature.metric().asDiagonal() * dist.points.transpose();
  if ((gram.array() <= 0.0).any() || (gram.array() >= 1.0).any()) {
    throw Error(ErrorCode::InnerProductOutOfRange, "latent inner products must lie in (0,1)");
  }
  return dist;
}

DiscreteLatentDistribution latent_distribution(const BlockModel& model) {
  return make_distribution(factorize_spectral(model), model.Pi());
}

Eigen::MatrixXd second_moment(const DiscreteLatentDistribution& dist) {
  Eigen::MatrixXd delta = dist.points.transpose() * dist.weights.asDiagonal() * dist.points;
  delta = 0.5 * (delta + delta.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(delta, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < kDegenerateEigenvalue) {
    throw Error(ErrorCode::DegenerateDistribution, "second moment matrix is not full rank");
  }
  return delta;
}

Eigen::VectorXd latent_mean(const DiscreteLatentDistribution& dist) {
  return dist.points.transpose() * dist.weights;
}

GaussianSummary ase_covariance(const DiscreteLatentDistribution& dist, const Eigen::VectorXd& x) {
  check_inner_products(dist, x);
  const GuardedInverse dinv = guarded_inverse(second_moment(dist), "Delta");
  const Eigen::VectorXd metric = dist.signature.metric();
  Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(dist.dim(), dist.dim());
  for (Eigen::Index k = 0; k < dist.size(); ++k) {
    const Eigen::VectorXd v = dist.points.row(k).transpose();
    const double p = indefinite_dot(metric, x, v);
    expect.noalias() += dist.weights(k) * p * (1.0 - p) * v * v.transpose();
  }
  Eigen::MatrixXd cov = metric.asDiagonal() * dinv.inverse * expect * dinv.inverse * metric.asDiagonal();
  return {x, 0.5 * (cov + cov.transpose()), dinv.condition};
}

Eigen::MatrixXd lse_latent_positions(const DiscreteLatentDistribution& dist) {
  const Eigen::VectorXd deg = degrees(dist, latent_mean(dist));
  return deg.cwiseSqrt().cwiseInverse().asDiagonal() * dist.points;
}

GaussianSummary lse_covariance(const DiscreteLatentDistribution& dist, const Eigen::VectorXd& x) {
  const LaplacianParts parts = laplacian_parts(dist, x);
  const Eigen::VectorXd metric = dist.signature.metric();
  const Eigen::VectorXd shift = parts.delta_tilde * metric.asDiagonal() * x / (2.0 * parts.x_degree);
  Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(dist.dim(), dist.dim());
  for (Eigen::Index k = 0; k < dist.size(); ++k) {
    const Eigen::VectorXd v = dist.points.row(k).transpose();
    const double p = indefinite_dot(metric, x, v);
    const double g = p * (1.0 - p) / parts.x_degree;
    const Eigen::VectorXd w = v / parts.deg(k) - shift;
    expect.noalias() += dist.weights(k) * g * w * w.transpose();
  }
  const Eigen::MatrixXd& dti = parts.delta_tilde_inv.inverse;
  Eigen::MatrixXd cov = metric.asDiagonal() * dti * expect * dti * metric.asDiagonal();
  return {x / std::sqrt(parts.x_degree), 0.5 * (cov + cov.transpose()), parts.delta_tilde_inv.condition};
}

GaussianSummary lse_covariance_outer_form(const DiscreteLatentDistribution& dist, const Eigen::VectorXd& x) {
  const LaplacianParts parts = laplacian_parts(dist, x);
  const Eigen::VectorXd metric = dist.signature.metric();
  const Eigen::MatrixXd proj = metric.asDiagonal() * parts.delta_tilde_inv.inverse;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(dist.dim(), dist.dim());
  for (Eigen::Index k = 0; k < dist.size(); ++k) {
    const Eigen::VectorXd v = dist.points.row(k).transpose();
    const double p = indefinite_dot(metric, x, v);
    const double g = p * (1.0 - p) / parts.x_degree;
    const Eigen::VectorXd w = proj * v / parts.deg(k) - x / (2.0 * parts.x_degree);
    cov.noalias() += dist.weights(k) * g * w * w.transpose();
  }
  return {x / std::sqrt(parts.x_degree), 0.5 * (cov + cov.transpose()), parts.delta_tilde_inv.condition};
}

}  // namespace rhostar
