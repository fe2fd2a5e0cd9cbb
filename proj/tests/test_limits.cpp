#include "rhostar/closed_forms.hpp"
#include "rhostar/error.hpp"
#include "rhostar/limits.hpp"
#include "rhostar/model.hpp"

#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

using namespace rhostar;

namespace {

DiscreteLatentDistribution homogeneous_dist(int K, double a, double b) {
  return make_distribution(cholesky_homogeneous(K, a, b), Eigen::VectorXd::Constant(K, 1.0 / K));
}

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("second moment of simple distributions") {
  LatentConfiguration one{Eigen::MatrixXd::Constant(1, 1, 1.0) * std::sqrt(0.5), {1, 0}};
  auto d1 = make_distribution(one, Eigen::VectorXd::Ones(1));
  CHECK(second_moment(d1)(0, 0) == doctest::Approx(0.5));

  // Orthogonal support points need inner products inside (0, 1), so the
  // check goes through the raw formula on a shifted pair instead.
  Eigen::MatrixXd X(2, 2);
  X << 0.9, 0.1, 0.1, 0.9;
  auto d2 = make_distribution({X, {2, 0}}, Eigen::Vector2d(0.5, 0.5));
  Eigen::MatrixXd expected = 0.5 * (X.row(0).transpose() * X.row(0) + X.row(1).transpose() * X.row(1));
  CHECK(max_abs(second_moment(d2) - expected) < 1e-15);
}

TEST_CASE("homogeneous second moment satisfies X Delta^-1 X^T = K I") {
  for (int K : {2, 3, 5, 10}) {
    auto dist = homogeneous_dist(K, 0.8, 0.2);
    Eigen::MatrixXd D = second_moment(dist);
    Eigen::MatrixXd M = dist.points * D.inverse() * dist.points.transpose();
    CHECK(max_abs(M - K * Eigen::MatrixXd::Identity(K, K)) < 1e-10);
  }
}

TEST_CASE("one-block ASE covariance is 1 - p") {
  for (double p : {0.2, 0.5, 0.9}) {
    LatentConfiguration c{Eigen::MatrixXd::Constant(1, 1, std::sqrt(p)), {1, 0}};
    auto dist = make_distribution(c, Eigen::VectorXd::Ones(1));
    auto s = ase_covariance(dist, dist.points.row(0).transpose());
    CHECK(s.covariance(0, 0) == doctest::Approx(1.0 - p).epsilon(1e-12));
    CHECK(lse_latent_positions(dist)(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("ASE covariance matches the homogeneous decomposition") {
  const double a = 0.8, b = 0.2;
  auto dist = homogeneous_dist(2, a, b);
  Eigen::VectorXd n1 = dist.points.row(0).transpose();
  Eigen::VectorXd n2 = dist.points.row(1).transpose();
  Eigen::MatrixXd D = second_moment(dist);
  const double c0 = (a * (1 - a) - b * (1 - b)) / 2.0;
  Eigen::MatrixXd inner = b * (1 - b) * D + c0 * (n1 * n1.transpose());
  Eigen::MatrixXd expected = D.inverse() * inner * D.inverse();
  auto s = ase_covariance(dist, n1);
  CHECK(max_abs(s.covariance - expected) < 1e-12);
  CHECK(max_abs(s.mean - n1) < 1e-15);
  (void)n2;
}

TEST_CASE("inner product outside (0,1) is rejected") {
  auto dist = homogeneous_dist(2, 0.8, 0.2);
  Eigen::VectorXd x = dist.points.row(0).transpose() * 1.5;  // <x, nu_1> = 1.2
  CHECK_THROWS_AS(ase_covariance(dist, x), Error);
  try {
    ase_covariance(dist, x);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InnerProductOutOfRange);
  }
}

TEST_CASE("LSE latent positions in the homogeneous model") {
  for (int K : {2, 3, 6}) {
    const double a = 0.7, b = 0.15;
    auto dist = homogeneous_dist(K, a, b);
    Eigen::MatrixXd tilde = lse_latent_positions(dist);
    const double scale = std::sqrt(K / (a + (K - 1) * b));
    CHECK(max_abs(tilde - scale * dist.points) < 1e-12);
  }
}

TEST_CASE("homogeneous constants and moment identities") {
  for (int K : {2, 3, 4, 8}) {
    const double a = 0.8, b = 0.2;
    auto dist = homogeneous_dist(K, a, b);
    auto hc = homogeneous_constants(a, b, K);
    Eigen::VectorXd mu = latent_mean(dist);
    Eigen::MatrixXd D = second_moment(dist);
    Eigen::VectorXd x = dist.points.row(0).transpose();

    CHECK(x.dot(mu) == doctest::Approx(hc.c1).epsilon(1e-12));
    CHECK(hc.c1 == doctest::Approx((a + (K - 1) * b) / K).epsilon(1e-14));

    double eg = 0.0;
    Eigen::VectorXd egx = Eigen::VectorXd::Zero(K);
    Eigen::MatrixXd dtilde = Eigen::MatrixXd::Zero(K, K);
    for (int k = 0; k < K; ++k) {
      Eigen::VectorXd v = dist.points.row(k).transpose();
      const double ip = x.dot(v);
      eg += ip * (1 - ip) / K;
      egx += ip * (1 - ip) * v / K;
      dtilde += v * v.transpose() / (K * mu.dot(v));
    }
    CHECK(std::abs(eg - hc.c2) < 1e-12);
    CHECK(max_abs(egx - (hc.c3 * x + b * (1 - b) * mu)) < 1e-12);
    CHECK(max_abs(dtilde - D / hc.c1) < 1e-12);
    CHECK(std::abs((D * x).dot(x) - (a * a + (K - 1) * b * b) / K) < 1e-12);
    CHECK(max_abs(D * x - ((a - b) / K * x + b * mu)) < 1e-12);
  }
}

TEST_CASE("LSE covariance main and outer forms agree") {
  Eigen::MatrixXd B(3, 3);
  B << 0.6, 0.2, 0.3, 0.2, 0.5, 0.1, 0.3, 0.1, 0.7;
  for (auto model : {validate_model(B, Eigen::Vector3d(0.2, 0.3, 0.5)), two_block_model(0.2, 0.8, 0.3, 0.4),
                     rank_one_model(0.6, 0.3, 0.25)}) {
    auto dist = latent_distribution(model);
    for (Eigen::Index k = 0; k < dist.size(); ++k) {
      Eigen::VectorXd x = dist.points.row(k).transpose();
      auto main = lse_covariance(dist, x);
      auto outer = lse_covariance_outer_form(dist, x);
      CHECK(max_abs(main.covariance - outer.covariance) < 1e-10 * std::max(1.0, max_abs(main.covariance)));
      CHECK(max_abs(main.mean - outer.mean) < 1e-12);
      CHECK(max_abs(main.mean - lse_latent_positions(dist).row(k).transpose()) < 1e-12);
    }
  }
}

TEST_CASE("covariances are symmetric positive semidefinite") {
  auto dist = latent_distribution(core_periphery_model(0.7, 0.2, 0.3));
  for (Eigen::Index k = 0; k < dist.size(); ++k) {
    Eigen::VectorXd x = dist.points.row(k).transpose();
    for (const auto& s : {ase_covariance(dist, x), lse_covariance(dist, x)}) {
      CHECK(max_abs(s.covariance - s.covariance.transpose()) < 1e-14);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s.covariance);
      CHECK(es.eigenvalues().minCoeff() > -1e-12);
      CHECK(s.condition >= 1.0);
    }
  }
}
