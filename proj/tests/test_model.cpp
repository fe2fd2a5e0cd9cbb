#include "rhostar/error.hpp"
#include "rhostar/model.hpp"

#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

using namespace rhostar;

namespace {

Eigen::MatrixXd mat2(double a, double b, double c) {
  Eigen::MatrixXd B(2, 2);
  B << a, b, b, c;
  return B;
}

Eigen::VectorXd pi2(double p1, double p2) { return Eigen::Vector2d(p1, p2); }

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidArgument;
}

double reconstruction_error(const LatentConfiguration& c, const Eigen::MatrixXd& B) {
  return (c.gram() - B).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("validate_model accepts a simple assortative model") {
  auto m = validate_model(mat2(0.8, 0.2, 0.8), pi2(0.5, 0.5));
  CHECK(m.blocks() == 2);
  CHECK(m.B()(0, 1) == doctest::Approx(0.2));
}

TEST_CASE("validate_model rejects bad input") {
  CHECK(code_of([] { validate_model(mat2(0.5, 0.5, 0.5), pi2(0.5, 0.5)); }) == ErrorCode::DuplicateRows);
  CHECK(code_of([] { validate_model(mat2(0.8, 0.2, 0.8), pi2(0.7, 0.4)); }) == ErrorCode::InvalidSimplex);
  CHECK(code_of([] { validate_model(mat2(0.8, 0.2, 0.8), pi2(1.0, 0.0)); }) == ErrorCode::InvalidSimplex);
  CHECK(code_of([] { validate_model(mat2(1.0, 0.2, 0.8), pi2(0.5, 0.5)); }) == ErrorCode::EntryOutOfRange);
  CHECK(code_of([] { validate_model(mat2(0.0, 0.2, 0.8), pi2(0.5, 0.5)); }) == ErrorCode::EntryOutOfRange);
  Eigen::MatrixXd asym = mat2(0.8, 0.2, 0.8);
  asym(0, 1) = 0.3;
  CHECK(code_of([&] { validate_model(asym, pi2(0.5, 0.5)); }) == ErrorCode::NotSymmetric);
  CHECK(code_of([] { validate_model(mat2(0.8, 0.2, 0.8), Eigen::Vector3d(0.2, 0.3, 0.5)); }) ==
        ErrorCode::DimensionMismatch);
}

TEST_CASE("geometry classes") {
  CHECK(classify_geometry(validate_model(mat2(0.04, 0.06, 0.09), pi2(0.5, 0.5))) == GeometryClass::RankOne);
  CHECK(classify_geometry(validate_model(mat2(0.8, 0.2, 0.8), pi2(0.5, 0.5))) == GeometryClass::PositiveDefinite);
  CHECK(classify_geometry(validate_model(mat2(0.2, 0.8, 0.2), pi2(0.5, 0.5))) == GeometryClass::Indefinite);
  CHECK(classify_matrix(mat2(0.5, 0.5, 0.5)) == GeometryClass::ErdosRenyiDegenerate);
  CHECK(geometry_name(GeometryClass::Indefinite) != geometry_name(GeometryClass::RankOne));
}

TEST_CASE("spectral factorization reconstructs B") {
  struct Case {
    Eigen::MatrixXd B;
    Signature sig;
  };
  const Case cases[] = {
      {mat2(0.8, 0.2, 0.8), {2, 0}},
      {mat2(0.2, 0.8, 0.2), {1, 1}},
      {mat2(0.04, 0.06, 0.09), {1, 0}},
  };
  for (const auto& c : cases) {
    auto m = validate_model(c.B, pi2(0.5, 0.5));
    auto cfg = factorize_spectral(m);
    CHECK(cfg.signature == c.sig);
    CHECK(cfg.X.cols() == c.sig.dim());
    CHECK(reconstruction_error(cfg, c.B) < 1e-10);
  }
}

TEST_CASE("spectral factorization orders positive directions first") {
  Eigen::MatrixXd B(3, 3);
  B << 0.1, 0.7, 0.3, 0.7, 0.2, 0.4, 0.3, 0.4, 0.5;
  auto m = validate_model(B, Eigen::Vector3d(0.2, 0.3, 0.5));
  auto cfg = factorize_spectral(m);
  CHECK(cfg.signature.d_plus >= 1);
  CHECK(cfg.signature.d_minus >= 1);
  CHECK(reconstruction_error(cfg, B) < 1e-10);
  Eigen::VectorXd metric = cfg.signature.metric();
  for (int j = 0; j < cfg.signature.d_plus; ++j) CHECK(metric(j) == 1.0);
  for (int j = cfg.signature.d_plus; j < cfg.signature.dim(); ++j) CHECK(metric(j) == -1.0);
}

TEST_CASE("canonical two-block factorization, positive definite") {
  auto cfg = factorize_canonical_2block(validate_model(mat2(0.8, 0.2, 0.8), pi2(0.5, 0.5)));
  CHECK(cfg.signature == Signature{2, 0});
  CHECK(cfg.X(0, 0) == doctest::Approx(0.894427).epsilon(1e-6));
  CHECK(cfg.X(0, 1) == 0.0);
  CHECK(cfg.X(1, 0) == doctest::Approx(0.223607).epsilon(1e-6));
  CHECK(cfg.X(1, 1) == doctest::Approx(0.866025).epsilon(1e-6));
}

TEST_CASE("canonical two-block factorization, indefinite") {
  const Eigen::MatrixXd B = mat2(0.2, 0.8, 0.2);
  auto cfg = factorize_canonical_2block(validate_model(B, pi2(0.5, 0.5)));
  CHECK(cfg.signature == Signature{1, 1});
  CHECK(cfg.X(0, 0) == doctest::Approx(0.447214).epsilon(1e-6));
  CHECK(cfg.X(0, 1) == 0.0);
  CHECK(cfg.X(1, 0) == doctest::Approx(1.788854).epsilon(1e-6));
  // sqrt(b^2 - ac) / sqrt(a); this is the only value that reproduces B.
  CHECK(cfg.X(1, 1) == doctest::Approx(std::sqrt(0.64 - 0.04) / std::sqrt(0.2)).epsilon(1e-12));
  CHECK(cfg.X(1, 1) == doctest::Approx(1.732051).epsilon(1e-6));
  CHECK(reconstruction_error(cfg, B) < 1e-12);
}

TEST_CASE("canonical two-block factorization rejects rank one and K != 2") {
  // B with det 0 and distinct rows.
  CHECK(code_of([] { factorize_canonical_2block(validate_model(mat2(0.04, 0.06, 0.09), pi2(0.5, 0.5))); }) ==
        ErrorCode::RankOneInput);
  CHECK(code_of([] { factorize_canonical_2block(homogeneous_model(3, 0.8, 0.2)); }) == ErrorCode::NotTwoBlock);
}

TEST_CASE("canonical and spectral Gram matrices agree") {
  for (double a : {0.3, 0.6, 0.9}) {
    for (double b : {0.1, 0.25}) {
      for (double c : {0.4, 0.7}) {
        auto m = validate_model(mat2(a, b, c), pi2(0.4, 0.6));
        if (classify_geometry(m) != GeometryClass::PositiveDefinite) continue;
        auto g1 = factorize_canonical_2block(m).gram();
        auto g2 = factorize_spectral(m).gram();
        CHECK((g1 - g2).cwiseAbs().maxCoeff() < 1e-10);
      }
    }
  }
}

TEST_CASE("cholesky_homogeneous small cases") {
  auto x2 = cholesky_homogeneous(2, 0.8, 0.2);
  CHECK(x2.X(0, 0) == doctest::Approx(0.894427).epsilon(1e-6));
  CHECK(x2.X(1, 0) == doctest::Approx(0.223607).epsilon(1e-6));
  CHECK(x2.X(1, 1) == doctest::Approx(0.866025).epsilon(1e-6));

  auto x3 = cholesky_homogeneous(3, 0.8, 0.2);
  CHECK(x3.X(2, 0) == doctest::Approx(0.223607).epsilon(1e-6));
  CHECK(x3.X(2, 1) == doctest::Approx(0.173205).epsilon(1e-6));
  CHECK(x3.X(2, 2) == doctest::Approx(0.848528).epsilon(1e-6));
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) CHECK(x3.X(i, j) == 0.0);
}

TEST_CASE("cholesky_homogeneous norms and inner products up to K = 50") {
  for (int K : {2, 3, 7, 20, 50}) {
    for (auto [a, b] : {std::pair{0.8, 0.2}, std::pair{0.5, 0.45}, std::pair{0.3, 0.01}}) {
      auto cfg = cholesky_homogeneous(K, a, b);
      Eigen::MatrixXd G = cfg.X * cfg.X.transpose();
      double worst = 0.0;
      for (int i = 0; i < K; ++i)
        for (int j = 0; j < K; ++j) worst = std::max(worst, std::abs(G(i, j) - (i == j ? a : b)));
      CHECK(worst < 1e-12);
    }
  }
}

TEST_CASE("cholesky_homogeneous parameter order") {
  CHECK(code_of([] { cholesky_homogeneous(3, 0.5, 0.5); }) == ErrorCode::ParameterOrder);
  CHECK(code_of([] { cholesky_homogeneous(2, 0.2, 0.8); }) == ErrorCode::ParameterOrder);
}

TEST_CASE("sub-model constructors validate") {
  CHECK(core_periphery_model(0.6, 0.3, 0.25).B()(1, 1) == doctest::Approx(0.3));
  CHECK(rank_one_model(0.6, 0.3, 0.5).B()(0, 1) == doctest::Approx(0.18));
  CHECK(two_block_model(0.6, 0.3, 0.2, 0.5).Pi()(1) == doctest::Approx(0.5));
  CHECK(code_of([] { homogeneous_model(2, 0.4, 0.4); }) == ErrorCode::DuplicateRows);
}

TEST_CASE("error code names are stable") {
  CHECK(error_code_name(ErrorCode::DuplicateRows) == "DUPLICATE_ROWS");
  CHECK(error_code_name(ErrorCode::DegenerateEqualRows) == "DEGENERATE_EQUAL_ROWS");
  CHECK(error_code_name(ErrorCode::EmDegenerate) == "EM_DEGENERATE");
}
