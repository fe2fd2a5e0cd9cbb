#include "rhostar/spectral.hpp"

#include "rhostar/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

namespace rhostar {

namespace {

std::vector<Eigen::Index> magnitude_order(const Eigen::VectorXd& w) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(w.size()));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index l, Eigen::Index r) { return std::abs(w(l)) > std::abs(w(r)); });
  return idx;
}

void orient(Eigen::MatrixXd& vectors) {
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    Eigen::Index imax = 0;
    vectors.col(c).cwiseAbs().maxCoeff(&imax);
    if (vectors(imax, c) < 0) vectors.col(c) *= -1.0;
  }
}

Eigenpairs select(const Eigen::VectorXd& w, const Eigen::MatrixXd& v, int d) {
  const auto order = magnitude_order(w);
  Eigenpairs out;
  out.values.resize(d);
  out.vectors.resize(v.rows(), d);
  for (int c = 0; c < d; ++c) {
    out.values(c) = w(order[c]);
    out.vectors.col(c) = v.col(order[c]);
  }
  orient(out.vectors);
  return out;
}

Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& m) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  return qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), m.cols());
}

}  // namespace

Eigenpairs top_eigenpairs(const BlockOperator& op, Eigen::Index n, int d, const EigenOptions& options) {
  if (d < 1 || d > n) throw Error(ErrorCode::InvalidArgument, "embedding dimension must satisfy 1 <= d <= n");

  if (n <= options.dense_cutoff) {
    Eigen::MatrixXd M = op(Eigen::MatrixXd::Identity(n, n));
    M = 0.5 * (M + M.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
    if (es.info() != Eigen::Success) throw Error(ErrorCode::EigensolverFailure, "dense eigensolver failed");
    return select(es.eigenvalues(), es.eigenvectors(), d);
  }

  const Eigen::Index m = std::min<Eigen::Index>(n, d + options.oversample);
  // Fixed start so results depend only on the operator.
  std::mt19937_64 rng(0x5eed5eedULL);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd start(n, m);
  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index i = 0; i < n; ++i) start(i, j) = gauss(rng);
  Eigen::MatrixXd V = orthonormalize(start);

  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    const Eigen::MatrixXd W = op(V);
    Eigen::MatrixXd H = V.transpose() * W;
    H = 0.5 * (H + H.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    if (es.info() != Eigen::Success) throw Error(ErrorCode::EigensolverFailure, "Rayleigh-Ritz step failed");
    const auto order = magnitude_order(es.eigenvalues());
    Eigen::MatrixXd S(m, m);
    Eigen::VectorXd theta(m);
    for (Eigen::Index c = 0; c < m; ++c) {
      S.col(c) = es.eigenvectors().col(order[c]);
      theta(c) = es.eigenvalues()(order[c]);
    }
    const Eigen::MatrixXd ritz = V * S;
    const Eigen::MatrixXd image = W * S;
    const double scale = std::max(std::abs(theta(0)), 1e-300);
    double worst = 0.0;
    for (int c = 0; c < d; ++c) {
      worst = std::max(worst, (image.col(c) - theta(c) * ritz.col(c)).norm() / scale);
    }
    if (worst <= options.tolerance) {
      Eigenpairs out;
      out.values = theta.head(d);
      out.vectors = ritz.leftCols(d);
      orient(out.vectors);
      out.iterations = iter;
      return out;
    }
    V = orthonormalize(image);
  }
  throw Error(ErrorCode::EigensolverFailure, "subspace iteration did not converge");
}

Eigenpairs top_eigenpairs(const Eigen::MatrixXd& M, int d, const EigenOptions& options) {
  if (M.rows() != M.cols()) throw Error(ErrorCode::DimensionMismatch, "matrix must be square");
  return top_eigenpairs([&](const Eigen::MatrixXd& V) -> Eigen::MatrixXd { return M * V; }, M.rows(), d, options);
}

}  // namespace rhostar
