#include "rhostar/cluster.hpp"

#include "rhostar/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <random>

namespace rhostar {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Eigen::MatrixXd kmeanspp(const Eigen::MatrixXd& X, int K, std::mt19937_64& rng) {
  const Eigen::Index n = X.rows();
  Eigen::MatrixXd centers(K, X.cols());
  centers.row(0) = X.row(static_cast<Eigen::Index>(unit_uniform(rng) * static_cast<double>(n)));
  Eigen::VectorXd d2 = (X.rowwise() - centers.row(0)).rowwise().squaredNorm();
  for (int k = 1; k < K; ++k) {
    const double total = d2.sum();
    Eigen::Index pick = n - 1;
    if (total > 0.0) {
      const double u = unit_uniform(rng) * total;
      double acc = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        acc += d2(i);
        if (u < acc) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Eigen::Index>(unit_uniform(rng) * static_cast<double>(n));
    }
    centers.row(k) = X.row(pick);
    d2 = d2.cwiseMin((X.rowwise() - centers.row(k)).rowwise().squaredNorm());
  }
  return centers;
}

// Log densities, n x K.
std::optional<Eigen::MatrixXd> log_densities(const Eigen::MatrixXd& X, const GmmFit& m, double collapse) {
  const Eigen::Index n = X.rows();
  const Eigen::Index d = X.cols();
  const int K = static_cast<int>(m.means.rows());
  Eigen::MatrixXd out(n, K);
  for (int k = 0; k < K; ++k) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.covariances[k]);
    if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() < collapse || !(m.weights(k) > 0.0))
      return std::nullopt;
    const Eigen::MatrixXd W = es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal();
    const double logdet = es.eigenvalues().array().log().sum();
    const Eigen::MatrixXd Z = (X.rowwise() - m.means.row(k)) * W;
    out.col(k) = (-0.5 * (static_cast<double>(d) * kLog2Pi + logdet) + std::log(m.weights(k))) -
                 0.5 * Z.rowwise().squaredNorm().array();
  }
  return out;
}

// Responsibilities in place of log densities; returns total log-likelihood.
double normalize(Eigen::MatrixXd& L) {
  double ll = 0.0;
  for (Eigen::Index i = 0; i < L.rows(); ++i) {
    const double mx = L.row(i).maxCoeff();
    const double lse = mx + std::log((L.row(i).array() - mx).exp().sum());
    L.row(i) = (L.row(i).array() - lse).exp();
    ll += lse;
  }
  return ll;
}

bool m_step(const Eigen::MatrixXd& X, const Eigen::MatrixXd& R, GmmFit& m) {
  const int K = static_cast<int>(R.cols());
  const Eigen::Index d = X.cols();
  const double n = static_cast<double>(X.rows());
  m.weights.resize(K);
  m.means.resize(K, d);
  m.covariances.assign(K, Eigen::MatrixXd::Zero(d, d));
  for (int k = 0; k < K; ++k) {
    const double nk = R.col(k).sum();
    if (!(nk > 1e-12 * n)) return false;
    m.weights(k) = nk / n;
    m.means.row(k) = (R.col(k).transpose() * X) / nk;
    const Eigen::MatrixXd C = X.rowwise() - m.means.row(k);
    m.covariances[k] = (C.transpose() * R.col(k).asDiagonal() * C) / nk;
    m.covariances[k] = 0.5 * (m.covariances[k] + m.covariances[k].transpose());
  }
  return true;
}

std::optional<GmmFit> run_em(const Eigen::MatrixXd& X, int K, std::mt19937_64& rng, const GmmOptions& opt) {
  const Eigen::Index n = X.rows();
  const Eigen::MatrixXd centers = kmeanspp(X, K, rng);
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(n, K);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index best = 0;
    (centers.rowwise() - X.row(i)).rowwise().squaredNorm().minCoeff(&best);
    R(i, best) = 1.0;
  }
  GmmFit m;
  if (!m_step(X, R, m)) return std::nullopt;
  double prev = -std::numeric_limits<double>::infinity();
  for (int it = 1; it <= opt.max_iterations; ++it) {
    auto L = log_densities(X, m, opt.collapse_eigenvalue);
    if (!L) return std::nullopt;
    const double ll = normalize(*L);
    m.log_likelihood = ll;
    m.iterations = it;
    if (std::abs(ll - prev) <= opt.tolerance * std::max(1.0, std::abs(ll))) break;
    prev = ll;
    if (!m_step(X, *L, m)) return std::nullopt;
  }
  auto L = log_densities(X, m, opt.collapse_eigenvalue);
  if (!L) return std::nullopt;
  m.log_likelihood = normalize(*L);
  m.assignment.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index k = 0;
    L->row(i).maxCoeff(&k);
    m.assignment[static_cast<std::size_t>(i)] = static_cast<int>(k);
  }
  return m;
}

}  // namespace

GmmFit fit_gmm(const Eigen::MatrixXd& points, int K, std::uint64_t seed, const GmmOptions& options) {
  if (K < 2) throw Error(ErrorCode::InvalidArgument, "K must be at least 2");
  if (points.rows() < K) throw Error(ErrorCode::InvalidArgument, "fewer points than components");
  // Full-covariance EM is affine equivariant, so a global rescale only makes
  // the collapse threshold scale free.
  const Eigen::RowVectorXd center = points.colwise().mean();
  const double spread = std::sqrt((points.rowwise() - center).rowwise().squaredNorm().mean());
  const double scale = spread > 0.0 ? spread : 1.0;
  const Eigen::MatrixXd X = (points.rowwise() - center) / scale;

  std::mt19937_64 rng(seed);
  std::optional<GmmFit> best;
  for (int r = 0; r < options.restarts; ++r) {
    auto fit = run_em(X, K, rng, options);
    if (fit && (!best || fit->log_likelihood > best->log_likelihood)) best = std::move(fit);
  }
  if (!best) throw Error(ErrorCode::EmDegenerate, "every EM restart collapsed a component");
  best->means = (best->means * scale).rowwise() + center;
  for (auto& c : best->covariances) c *= scale * scale;
  best->log_likelihood -= static_cast<double>(points.rows()) * static_cast<double>(points.cols()) * std::log(scale);
  return *best;
}

std::vector<int> hungarian_max(const Eigen::MatrixXd& score) {
  const int n = static_cast<int>(score.rows());
  if (score.cols() != n) throw Error(ErrorCode::DimensionMismatch, "score matrix must be square");
  const double big = score.maxCoeff();
  // Minimize cost = big - score with the classic potentials algorithm (1-based).
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, std::numeric_limits<double>::infinity());
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = std::numeric_limits<double>::infinity();
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = (big - score(i0 - 1, j - 1)) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> perm(n, 0);
  for (int j = 1; j <= n; ++j) perm[p[j] - 1] = j - 1;
  return perm;
}

double permutation_error(const std::vector<int>& truth, const std::vector<int>& predicted, int K) {
  if (truth.size() != predicted.size()) throw Error(ErrorCode::DimensionMismatch, "label vectors differ in length");
  if (truth.empty()) return 0.0;
  Eigen::MatrixXd confusion = Eigen::MatrixXd::Zero(K, K);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0 || truth[i] >= K || predicted[i] < 0 || predicted[i] >= K)
      throw Error(ErrorCode::InvalidArgument, "label outside [0, K)");
    confusion(truth[i], predicted[i]) += 1.0;
  }
  double agree = 0.0;
  if (K <= 6) {
    std::vector<int> perm(K);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      double s = 0.0;
      for (int k = 0; k < K; ++k) s += confusion(k, perm[k]);
      agree = std::max(agree, s);
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else {
    const auto perm = hungarian_max(confusion);
    for (int k = 0; k < K; ++k) agree += confusion(k, perm[k]);
  }
  return 1.0 - agree / static_cast<double>(truth.size());
}

double clustering_error(const Eigen::MatrixXd& points, const std::vector<int>& labels, int K, std::uint64_t seed,
                        const GmmOptions& options) {
  if (static_cast<std::size_t>(points.rows()) != labels.size())
    throw Error(ErrorCode::DimensionMismatch, "one label per embedded row required");
  const GmmFit fit = fit_gmm(points, K, seed, options);
  return permutation_error(labels, fit.assignment, K);
}

double clustering_error(const Embedding& embedding, const std::vector<int>& labels, int K, std::uint64_t seed,
                        const GmmOptions& options) {
  return clustering_error(embedding.points, labels, K, seed, options);
}

}  // namespace rhostar
