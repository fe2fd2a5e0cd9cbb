#include "rhostar/chernoff.hpp"
#include "rhostar/closed_forms.hpp"
#include "rhostar/error.hpp"
#include "rhostar/model.hpp"
#include "rhostar/optimize.hpp"

#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

using namespace rhostar;

namespace {

// Direct evaluation of the Gaussian Chernoff objective for 1-D laws.
double chernoff_objective_1d(double t, double m1, double s1, double m2, double s2) {
  const double st = t * s1 + (1 - t) * s2;
  const double d = m2 - m1;
  return t * (1 - t) / 2 * d * d / st + 0.5 * std::log(st / (std::pow(s1, t) * std::pow(s2, 1 - t)));
}

}  // namespace

TEST_CASE("brent finds the maximum of smooth functions") {
  auto r = maximize_bounded([](double t) { return -(t - 0.3) * (t - 0.3); });
  CHECK(r.argmax == doctest::Approx(0.3).epsilon(1e-9));
  auto s = brent_maximize([](double t) { return std::sin(t); }, 0.0, 3.0, 1e-12, 200);
  CHECK(s.argmax == doctest::Approx(M_PI / 2).epsilon(1e-8));
  CHECK(s.value == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("maximize_bounded flags two separated maxima") {
  auto r = maximize_bounded([](double t) { return std::cos(6 * M_PI * t) + 0.01 * t; });
  CHECK(r.multimodal);
}

TEST_CASE("identical Gaussians have zero Chernoff information") {
  Eigen::VectorXd m = Eigen::Vector2d(0.3, -0.1);
  Eigen::MatrixXd S(2, 2);
  S << 2.0, 0.3, 0.3, 1.0;
  auto r = gaussian_chernoff(m, S, m, S);
  CHECK(std::abs(r.value) < 1e-14);
}

TEST_CASE("equal covariances give an eighth of the Mahalanobis distance") {
  Eigen::VectorXd m1 = Eigen::Vector2d(0.0, 0.0), m2 = Eigen::Vector2d(1.0, 2.0);
  Eigen::MatrixXd S(2, 2);
  S << 2.0, 0.3, 0.3, 1.0;
  Eigen::VectorXd d = m2 - m1;
  auto r = gaussian_chernoff(m1, S, m2, S);
  CHECK(r.value == doctest::Approx(d.dot(S.ldlt().solve(d)) / 8).epsilon(1e-12));
  CHECK(r.t_star == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("Gaussian Chernoff matches a fine grid search") {
  double best = -1.0;
  for (int i = 1; i < 1000000; ++i) best = std::max(best, chernoff_objective_1d(i * 1e-6, 0.0, 1.0, 1.0, 4.0));
  auto r = gaussian_chernoff(Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Constant(1, 1, 1.0),
                             Eigen::VectorXd::Ones(1), Eigen::MatrixXd::Constant(1, 1, 4.0));
  CHECK(std::abs(r.value - best) < 1e-8);
  CHECK(r.value >= best - 1e-15);
}

TEST_CASE("rho_star_numeric on homogeneous two-block points") {
  CHECK(rho_star_numeric(homogeneous_model(2, 0.8, 0.2)).rho_star == doctest::Approx(1.09).epsilon(1e-8));
  auto low = rho_star_numeric(homogeneous_model(2, 0.3, 0.1));
  CHECK(std::abs(low.rho_star - 0.8625) < 1e-8);
  CHECK(low.verdict == Verdict::LsePreferred);
  auto eq = rho_star_numeric(two_block_model(0.3, 0.7, 0.3, 0.5));
  CHECK(std::abs(eq.rho_star - rho_star_restricted_b_equals_1_minus_a(0.3)) < 1e-8);
}

TEST_CASE("report invariants") {
  for (auto m : {homogeneous_model(3, 0.6, 0.2), core_periphery_model(0.7, 0.2, 0.25), rank_one_model(0.6, 0.3, 0.4),
                 two_block_model(0.2, 0.8, 0.3, 0.6)}) {
    auto r = rho_star_numeric(m);
    CHECK(std::abs(r.rho_star - r.rho_ase_star / r.rho_lse_star) < 1e-12);
    CHECK(r.verdict == verdict_for(r.rho_star));
    const int K = static_cast<int>(m.blocks());
    CHECK(r.pairs.size() == static_cast<std::size_t>(K * (K - 1) / 2));
  }
  CHECK(verdict_for(1.0 + 1e-10) == Verdict::Equal);
  CHECK(verdict_for(1.0 + 1e-8) == Verdict::AsePreferred);
  CHECK(verdict_for(1.0 - 1e-8) == Verdict::LsePreferred);
  CHECK(verdict_name(Verdict::AsePreferred) == "ASE_PREFERRED");
}

TEST_CASE("finite-n exponents") {
  auto m = homogeneous_model(2, 0.8, 0.2);
  CHECK_THROWS_AS(rho_finite_n(m, 0), Error);
  try {
    rho_finite_n(m, 0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidSampleSize);
  }
  CHECK(std::abs(rho_finite_n(m, 1000000).ratio() - 1.09) < 1e-4);

  for (auto model : {homogeneous_model(2, 0.3, 0.1), core_periphery_model(0.6, 0.25, 0.3)}) {
    const double target = rho_star_numeric(model).rho_star;
    double prev = std::abs(rho_finite_n(model, 100).ratio() - target);
    for (std::int64_t n : {1000, 10000, 100000}) {
      const double gap = std::abs(rho_finite_n(model, n).ratio() - target);
      CHECK(gap <= prev + 1e-12);
      prev = gap;
    }
    CHECK(prev < 1e-3);
  }
}

TEST_CASE("pair objective interpolation") {
  auto lim = block_limits(two_block_model(0.6, 0.2, 0.4, 0.5));
  PairObjective obj(lim.ase[0], lim.ase[1]);
  CHECK(obj(0.5) > 0.0);
  // finite_n / n approaches half the limiting objective.
  CHECK(obj.finite_n(0.4, 1e9) / 1e9 == doctest::Approx(obj(0.4) / 2).epsilon(1e-6));
}
