#include "rhostar/chernoff.hpp"
#include "rhostar/closed_forms.hpp"
#include "rhostar/error.hpp"
#include "rhostar/model.hpp"

#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

using namespace rhostar;

TEST_CASE("homogeneous two-block closed form") {
  auto r = rho_star_homogeneous2(0.8, 0.2);
  CHECK(r.psi == doctest::Approx(0.32).epsilon(1e-12));
  CHECK(std::abs(r.rho_star - 1.09) < 1e-12);
  CHECK(r.verdict == Verdict::AsePreferred);

  auto s = rho_star_homogeneous2(0.3, 0.1);
  CHECK(s.psi == doctest::Approx(-0.66).epsilon(1e-12));
  CHECK(std::abs(s.rho_star - 0.8625) < 1e-12);
  CHECK(s.verdict == Verdict::LsePreferred);

  CHECK(rho_star_homogeneous2(0.9, 0.3).verdict == Verdict::AsePreferred);
  CHECK(rho_star_homogeneous2(0.1, 0.4).c > 0.0);
  CHECK_THROWS_AS(rho_star_homogeneous2(0.4, 0.4), Error);
}

TEST_CASE("sign of rho* - 1 follows the discriminant") {
  for (int i = 1; i < 100; ++i) {
    for (int j = 1; j < 100; ++j) {
      if (i == j) continue;
      auto r = rho_star_homogeneous2(i / 100.0, j / 100.0);
      CHECK(r.c > 0.0);
      if (std::abs(r.psi) > 1e-12) CHECK((r.rho_star > 1.0) == (r.psi > 0.0));
    }
  }
}

TEST_CASE("b = 1 - a slice") {
  CHECK(rho_star_restricted_b_equals_1_minus_a(0.9) == doctest::Approx(1.16).epsilon(1e-12));
  CHECK(rho_star_restricted_b_equals_1_minus_a(0.1) == doctest::Approx(1.16).epsilon(1e-12));
  CHECK(rho_star_restricted_b_equals_1_minus_a(0.5 + 1e-6) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK_THROWS_AS(rho_star_restricted_b_equals_1_minus_a(0.5), Error);
}

TEST_CASE("rank-one closed form") {
  auto numeric = rho_star_numeric(rank_one_model(0.6, 0.3, 0.5)).rho_star;
  CHECK(std::abs(rho_star_rank1(0.6, 0.3, 0.5) - numeric) < 1e-8);
  for (double p : {0.1, 0.35, 0.7, 0.95})
    for (double q : {0.2, 0.5, 0.8})
      if (p != q) CHECK(std::abs(rho_star_rank1(p, q, 0.5) - rho_star_rank1(q, p, 0.5)) < 1e-12);
  CHECK_THROWS_AS(rho_star_rank1(0.4, 0.4, 0.3), Error);
}

TEST_CASE("rank-one closed form agrees with the numeric route across weights") {
  for (double pi1 : {0.1, 0.25, 0.75})
    for (auto [p, q] : {std::pair{0.7, 0.2}, std::pair{0.25, 0.9}})
      CHECK(std::abs(rho_star_rank1(p, q, pi1) - rho_star_numeric(rank_one_model(p, q, pi1)).rho_star) < 1e-8);
}

TEST_CASE("polynomial rank-one model near the large-gamma approximation at p = 0.5") {
  const double p = 0.5;
  const double approx = poly_p_approximation(p);
  CHECK(approx == doctest::Approx(std::pow(1 + std::sqrt(1 - p * p), 2) / (4 * (1 - p * p))).epsilon(1e-14));
  for (double pi1 : {0.25, 0.5, 0.75}) {
    const double v = rho_star_rank1(p, std::pow(p, 7), pi1);
    CAPTURE(pi1);
    CAPTURE(v);
    CHECK(v > 1.0);
    CHECK(std::abs(v - approx) < 0.05);
  }
}

TEST_CASE("homogeneous K-block closed form") {
  auto r3 = rho_star_homogeneousK(0.8, 0.2, 3);
  CHECK(r3.psi == doctest::Approx(0.48).epsilon(1e-12));
  CHECK(r3.c == doctest::Approx(0.1953125).epsilon(1e-12));
  CHECK(std::abs(r3.rho_star - 1.09375) < 1e-12);

  for (int i = 1; i < 20; ++i)
    for (int j = 1; j < i; ++j) {
      const double a = 0.05 * i, b = 0.05 * j;
      CHECK(rho_star_homogeneousK(a, b, 2).rho_star == rho_star_homogeneous2(a, b).rho_star);
    }

  double lo = 1e300, hi = 0.0;
  for (int K = 2; K <= 100; ++K) {
    const double scaled = K * (rho_star_homogeneousK(0.8, 0.2, K).rho_star - 1.0);
    lo = std::min(lo, scaled);
    hi = std::max(hi, scaled);
  }
  CHECK(lo > 0.1);
  CHECK(hi < 2.0);
  CHECK_THROWS_AS(rho_star_homogeneousK(0.2, 0.8, 3), Error);
}

TEST_CASE("K-block per-pair suprema") {
  CHECK(kblock_ase_supremum(0.8, 0.2, 2) == doctest::Approx(0.5625).epsilon(1e-12));
  CHECK(kblock_ase_supremum(0.8, 0.2, 4) == doctest::Approx(0.28125).epsilon(1e-12));
  CHECK(kblock_lse_supremum(0.8, 0.2, 2) == doctest::Approx(0.51605504587155963).epsilon(1e-10));
  CHECK(std::abs(kblock_ase_supremum(0.8, 0.2, 3) / kblock_lse_supremum(0.8, 0.2, 3) - 1.09375) < 1e-10);

  auto lim = block_limits(homogeneous_model(3, 0.8, 0.2));
  auto rep = rho_star_numeric(lim);
  CHECK(rep.t_star_ase == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(rep.t_star_lse == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(std::abs(rep.rho_ase_star - kblock_ase_supremum(0.8, 0.2, 3)) < 1e-8);
  CHECK(std::abs(rep.rho_lse_star - kblock_lse_supremum(0.8, 0.2, 3)) < 1e-8);
}

TEST_CASE("convex-combination form of the zero level set") {
  // (0.2/0.2)/2 + (0.8/0.8)/2 and (0.7/0.1)/2 + (0.9/0.3)/2.
  CHECK(convex_combination_lhs(0.8, 0.2, 2) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rho_star_homogeneousK(0.8, 0.2, 2).psi > 0.0);
  CHECK(convex_combination_lhs(0.3, 0.1, 2) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(rho_star_homogeneousK(0.3, 0.1, 2).psi < 0.0);

  // Points with psi = 0: solve for a by bisection at fixed b and K.
  for (int K : {2, 3, 7}) {
    for (double b : {0.05, 0.1, 0.2}) {
      double lo = b + 1e-9, hi = 0.999;
      auto psi = [&](double a) { return rho_star_homogeneousK(a, b, K).psi; };
      if (psi(lo) * psi(hi) > 0) continue;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (psi(mid) * psi(lo) <= 0 ? hi : lo) = mid;
      }
      CHECK(std::abs(convex_combination_lhs(0.5 * (lo + hi), b, K) - kConvexCombinationThreshold) < 1e-9);
    }
  }
}

TEST_CASE("uniform-in-K ASE condition") {
  CHECK(uniform_ase_condition(0.8, 0.6));
  for (int K = 2; K <= 100; ++K) CHECK(rho_star_homogeneousK(0.8, 0.6, K).psi > 0.0);
  CHECK_FALSE(uniform_ase_condition(0.8, 0.1));
}

TEST_CASE("signal-to-noise factorization") {
  auto s = snr(0.8, 0.2, 2);
  CHECK(s.snr == doctest::Approx(0.18).epsilon(1e-12));
  CHECK(s.snr == doctest::Approx(0.6 * 0.6 / (2 * 1.0)).epsilon(1e-12));
  CHECK(s.c_tilde > 0.0);
  CHECK(s.c == doctest::Approx(rho_star_homogeneousK(0.8, 0.2, 2).c).epsilon(1e-12));
  CHECK(s.c == doctest::Approx(s.snr * s.c_tilde).epsilon(1e-12));
}

TEST_CASE("2x2 convex inverse identity") {
  const Eigen::Matrix2d I = Eigen::Matrix2d::Identity();
  for (double t : {0.0, 0.3, 1.0}) CHECK((inverse_convex_2x2(I, I, t) - I).norm() < 1e-14);
  CHECK((inverse_convex_2x2(I, 2 * I, 0.5) - (2.0 / 3.0) * I).norm() < 1e-14);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0), ut(0.0, 1.0);
  int tested = 0;
  while (tested < 1000) {
    Eigen::Matrix2d M0, M1;
    M0 << u(rng), u(rng), u(rng), u(rng);
    M1 << u(rng), u(rng), u(rng), u(rng);
    const double t = ut(rng);
    Eigen::Matrix2d Mt = (1 - t) * M0 + t * M1;
    if (std::abs(M0.determinant()) < 1e-2 || std::abs(M1.determinant()) < 1e-2 || std::abs(Mt.determinant()) < 1e-2)
      continue;
    Eigen::Matrix2d direct = Mt.inverse();
    CHECK((inverse_convex_2x2(M0, M1, t) - direct).cwiseAbs().maxCoeff() < 1e-10 * std::max(1.0, direct.norm()));
    ++tested;
  }
}

TEST_CASE("midpoint inverse when det(M1 M0^-1) = 1") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.2, 2.0);
  for (int i = 0; i < 200; ++i) {
    Eigen::Matrix2d M0;
    M0 << u(rng) + 1.0, 0.3, 0.1, u(rng) + 1.0;
    Eigen::Matrix2d R;
    R << u(rng), u(rng), u(rng), u(rng);
    R /= std::sqrt(std::abs(R.determinant()));
    if (R.determinant() < 0) R.col(0) *= -1.0;
    Eigen::Matrix2d M1 = R * M0;
    Eigen::Matrix2d mid = 0.5 * (M0 + M1);
    if (std::abs(mid.determinant()) < 1e-3) continue;
    CHECK((inverse_midpoint_2x2(M0, M1) - mid.inverse()).cwiseAbs().maxCoeff() < 1e-10 * std::max(1.0, mid.inverse().norm()));
  }
}
