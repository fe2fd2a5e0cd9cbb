#include "rhostar/montecarlo.hpp"

#include "rhostar/cluster.hpp"
#include "rhostar/error.hpp"
#include "rhostar/limits.hpp"
#include "rhostar/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace rhostar {

namespace {

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void check_size(Eigen::Index n) {
  if (n > kMaxGraphSize)
    throw Error(ErrorCode::GraphTooLarge, "n = " + std::to_string(n) + " exceeds " + std::to_string(kMaxGraphSize));
}

// Neighbour lists of a 0/1 adjacency; products with them are exact in double.
struct NeighbourLists {
  std::vector<std::int64_t> offsets;
  std::vector<std::int32_t> columns;

  explicit NeighbourLists(const AdjacencyMatrix& A) {
    const Eigen::Index n = A.rows();
    offsets.reserve(static_cast<std::size_t>(n) + 1);
    offsets.push_back(0);
    // A is symmetric, so column j lists the neighbours of vertex j.
    for (Eigen::Index j = 0; j < n; ++j) {
      const float* col = A.data() + j * n;
      for (Eigen::Index i = 0; i < n; ++i)
        if (col[i] != 0.0f) columns.push_back(static_cast<std::int32_t>(i));
      offsets.push_back(static_cast<std::int64_t>(columns.size()));
    }
  }

  Eigen::Index size() const { return static_cast<Eigen::Index>(offsets.size()) - 1; }

  Eigen::VectorXd degrees() const {
    Eigen::VectorXd d(size());
    for (Eigen::Index i = 0; i < size(); ++i) d(i) = static_cast<double>(offsets[i + 1] - offsets[i]);
    return d;
  }

  Eigen::MatrixXd apply(const Eigen::MatrixXd& V) const {
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const RowMajor in = V;
    RowMajor out = RowMajor::Zero(V.rows(), V.cols());
    const Eigen::Index m = V.cols();
    const double* src = in.data();
    for (Eigen::Index i = 0; i < size(); ++i) {
      double* dst = out.data() + i * m;
      for (std::int64_t k = offsets[i]; k < offsets[i + 1]; ++k) {
        const double* r = src + static_cast<Eigen::Index>(columns[static_cast<std::size_t>(k)]) * m;
        for (Eigen::Index c = 0; c < m; ++c) dst[c] += r[c];
      }
    }
    return out;
  }
};

Embedding finish(const Eigenpairs& ep, EmbeddingKind kind) {
  Embedding e;
  e.kind = kind;
  e.eigenvalues = ep.values;
  e.points = ep.vectors * ep.values.cwiseAbs().cwiseSqrt().asDiagonal();
  return e;
}

Eigen::VectorXd inverse_sqrt_degrees(const Eigen::VectorXd& deg) {
  Eigen::VectorXd out(deg.size());
  for (Eigen::Index i = 0; i < deg.size(); ++i) {
    if (!(deg(i) > 0.0)) throw Error(ErrorCode::IsolatedVertex, "vertex " + std::to_string(i) + " has degree zero");
    out(i) = 1.0 / std::sqrt(deg(i));
  }
  return out;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double standard_error(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

}  // namespace

std::uint64_t child_seed(std::uint64_t master, std::uint64_t rep) {
  return splitmix64(splitmix64(master) ^ (rep * 0xd1342543de82ef95ULL + 1));
}

SampledGraph sample_sbm(const BlockModel& model, Eigen::Index n, std::uint64_t seed, const SampleOptions& options) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be at least 1");
  check_size(n);
  std::mt19937_64 rng(seed);
  const Eigen::VectorXd& pi = model.Pi();
  const Eigen::MatrixXd& B = model.B();
  const int K = model.blocks();

  SampledGraph g;
  g.seed = seed;
  g.labels.resize(static_cast<std::size_t>(n));
  for (auto& label : g.labels) {
    const double u = unit_uniform(rng);
    double acc = 0.0;
    int k = 0;
    for (; k < K - 1; ++k) {
      acc += pi(k);
      if (u < acc) break;
    }
    label = k;
  }

  g.adjacency.setZero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const int lj = g.labels[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 0; i <= j; ++i) {
      const double p = B(g.labels[static_cast<std::size_t>(i)], lj);
      if (unit_uniform(rng) < p) {
        g.adjacency(i, j) = 1.0f;
        g.adjacency(j, i) = 1.0f;
      }
    }
  }
  if (options.zero_diagonal) g.adjacency.diagonal().setZero();
  return g;
}

Embedding ase_embed(const SampledGraph& graph, int d) {
  const Eigen::Index n = graph.size();
  check_size(n);
  const NeighbourLists adj(graph.adjacency);
  const auto ep = top_eigenpairs([&](const Eigen::MatrixXd& V) -> Eigen::MatrixXd { return adj.apply(V); }, n, d);
  return finish(ep, EmbeddingKind::Ase);
}

Embedding lse_embed(const SampledGraph& graph, int d) {
  const Eigen::Index n = graph.size();
  check_size(n);
  const NeighbourLists adj(graph.adjacency);
  const Eigen::VectorXd s = inverse_sqrt_degrees(adj.degrees());
  const auto ep = top_eigenpairs(
      [&](const Eigen::MatrixXd& V) -> Eigen::MatrixXd {
        return s.asDiagonal() * adj.apply(s.asDiagonal() * V);
      },
      n, d);
  return finish(ep, EmbeddingKind::Lse);
}

Embedding ase_embed(const Eigen::MatrixXd& matrix, int d) {
  check_size(matrix.rows());
  return finish(top_eigenpairs(matrix, d), EmbeddingKind::Ase);
}

Embedding lse_embed(const Eigen::MatrixXd& matrix, int d) {
  check_size(matrix.rows());
  if (matrix.rows() != matrix.cols()) throw Error(ErrorCode::DimensionMismatch, "matrix must be square");
  const Eigen::VectorXd s = inverse_sqrt_degrees(matrix.rowwise().sum());
  const Eigen::MatrixXd L = s.asDiagonal() * matrix * s.asDiagonal();
  return finish(top_eigenpairs(L, d), EmbeddingKind::Lse);
}

Eigen::MatrixXd expected_adjacency(const BlockModel& model, const std::vector<int>& labels) {
  const auto n = static_cast<Eigen::Index>(labels.size());
  Eigen::MatrixXd P(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) P(i, j) = model.B()(labels[i], labels[j]);
  return P;
}

Eigen::MatrixXd procrustes_rotation(const Eigen::MatrixXd& centroids, const Eigen::MatrixXd& targets,
                                    const Eigen::VectorXd& weights) {
  if (centroids.rows() != targets.rows() || centroids.cols() != targets.cols() || weights.size() != centroids.rows())
    throw Error(ErrorCode::DimensionMismatch, "centroids, targets and weights disagree in shape");
  const Eigen::MatrixXd M = targets.transpose() * weights.asDiagonal() * centroids;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  if (sv.size() == 0 || !(sv(0) > 0.0) || sv(sv.size() - 1) / sv(0) < 1e-6)
    throw Error(ErrorCode::AlignmentIllConditioned, "block centroids are nearly collinear");
  return svd.matrixU() * svd.matrixV().transpose();
}

CltReport empirical_clt_check(const BlockModel& model, Eigen::Index n, int reps, std::uint64_t seed,
                              const CltOptions& options) {
  if (classify_geometry(model) != GeometryClass::PositiveDefinite)
    throw Error(ErrorCode::InvalidArgument, "CLT alignment requires a positive definite model");
  if (n < 1 || reps < 1) throw Error(ErrorCode::InvalidArgument, "n and reps must be positive");

  const BlockLimits lim = block_limits(model);
  const Eigen::MatrixXd& nu = lim.dist.points;
  const int K = model.blocks();
  const Eigen::Index d = nu.cols();
  const double sn = std::sqrt(static_cast<double>(n));
  const double nn = static_cast<double>(n);

  std::vector<Eigen::MatrixXd> ase_ss(K, Eigen::MatrixXd::Zero(d, d));
  std::vector<Eigen::MatrixXd> lse_ss(K, Eigen::MatrixXd::Zero(d, d));
  std::vector<double> count(K, 0.0);
  std::vector<double> mean_err(K, 0.0);

  CltReport report;
  report.n = n;
  report.reps = reps;
  report.seed = seed;
  report.low_replication = reps < kMinCltReplications;

  for (int r = 0; r < reps; ++r) {
    const std::uint64_t s = child_seed(seed, static_cast<std::uint64_t>(r));
    report.rep_seeds.push_back(s);
    const SampledGraph g = sample_sbm(model, n, s, options.sample);
    const Embedding ase = ase_embed(g, static_cast<int>(d));
    const Embedding lse = lse_embed(g, static_cast<int>(d));

    Eigen::MatrixXd ca = Eigen::MatrixXd::Zero(K, d);
    Eigen::MatrixXd cl = Eigen::MatrixXd::Zero(K, d);
    Eigen::VectorXd w = Eigen::VectorXd::Zero(K);
    Eigen::VectorXd deg_sum = Eigen::VectorXd::Zero(K);
    for (Eigen::Index i = 0; i < n; ++i) {
      const int k = g.labels[i];
      ca.row(k) += ase.points.row(i);
      cl.row(k) += lse.points.row(i);
      w(k) += 1.0;
    }
    for (int k = 0; k < K; ++k) {
      if (w(k) == 0.0) throw Error(ErrorCode::AlignmentIllConditioned, "a block received no vertices");
      ca.row(k) /= w(k);
      cl.row(k) /= w(k);
      for (int l = 0; l < K; ++l) deg_sum(k) += w(l) * model.B()(k, l);
    }
    Eigen::MatrixXd lse_target(K, d);
    for (int k = 0; k < K; ++k) lse_target.row(k) = nu.row(k) / std::sqrt(deg_sum(k));

    const Eigen::MatrixXd Qa = procrustes_rotation(ca, nu, w);
    const Eigen::MatrixXd Ql = procrustes_rotation(cl, lse_target, w);

    for (int k = 0; k < K; ++k) mean_err[k] += (Qa * ca.row(k).transpose() - nu.row(k).transpose()).norm();

    for (Eigen::Index i = 0; i < n; ++i) {
      const int k = g.labels[i];
      const Eigen::VectorXd da = sn * (Qa * ase.points.row(i).transpose() - nu.row(k).transpose());
      const Eigen::VectorXd dl = nn * (Ql * lse.points.row(i).transpose() - lse_target.row(k).transpose());
      ase_ss[k].noalias() += da * da.transpose();
      lse_ss[k].noalias() += dl * dl.transpose();
      count[k] += 1.0;
    }
  }

  for (int k = 0; k < K; ++k) {
    BlockCltResult b;
    b.block = k;
    b.ase_empirical = ase_ss[k] / count[k];
    b.lse_empirical = lse_ss[k] / count[k];
    b.ase_theoretical = lim.ase[k].covariance;
    b.lse_theoretical = lim.lse[k].covariance;
    b.ase_relative_frobenius = (b.ase_empirical - b.ase_theoretical).norm() / b.ase_theoretical.norm();
    b.lse_relative_frobenius = (b.lse_empirical - b.lse_theoretical).norm() / b.lse_theoretical.norm();
    b.ase_mean_error = mean_err[k] / reps;
    report.blocks.push_back(std::move(b));
  }
  return report;
}

PreferenceReport preference_experiment(const BlockModel& model, Eigen::Index n, int reps, std::uint64_t seed,
                                       const PreferenceOptions& options) {
  if (n < 1 || reps < 1) throw Error(ErrorCode::InvalidArgument, "n and reps must be positive");
  const int K = model.blocks();
  const int d = spectral_signature(model.B()).dim();

  PreferenceReport report;
  report.n = n;
  report.reps = reps;
  report.seed = seed;
  report.rho_star = rho_star_numeric(model).rho_star;
  report.low_replication = reps < kMinPreferenceReplications;

  for (int r = 0; r < reps; ++r) {
    const std::uint64_t s = child_seed(seed, static_cast<std::uint64_t>(r));
    report.rep_seeds.push_back(s);
    const SampledGraph g = sample_sbm(model, n, s, options.sample);
    const Embedding ase = ase_embed(g, d);
    const Embedding lse = lse_embed(g, d);
    const std::uint64_t cs = child_seed(s, 0xC1u);
    report.ase_errors.push_back(clustering_error(ase, g.labels, K, cs));
    report.lse_errors.push_back(clustering_error(lse, g.labels, K, cs));
  }
  report.ase_mean = mean(report.ase_errors);
  report.lse_mean = mean(report.lse_errors);
  report.ase_stderr = standard_error(report.ase_errors);
  report.lse_stderr = standard_error(report.lse_errors);
  switch (verdict_for(report.rho_star)) {
    case Verdict::AsePreferred: report.agreement = report.ase_mean <= report.lse_mean; break;
    case Verdict::LsePreferred: report.agreement = report.lse_mean <= report.ase_mean; break;
    case Verdict::Equal: report.agreement = true; break;
  }
  return report;
}

}  // namespace rhostar
