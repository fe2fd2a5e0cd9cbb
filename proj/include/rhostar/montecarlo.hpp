#ifndef RHOSTAR_MONTECARLO_HPP
#define RHOSTAR_MONTECARLO_HPP

#include "rhostar/chernoff.hpp"
#include "rhostar/model.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace rhostar {

/// Largest graph the dense embedding path accepts.
inline constexpr Eigen::Index kMaxGraphSize = 20000;

/// Dense 0/1 adjacency in single precision (exact for 0/1 entries).
using AdjacencyMatrix = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic>;

struct SampledGraph {
  AdjacencyMatrix adjacency;
  std::vector<int> labels;  // 0-based block of each vertex
  std::uint64_t seed = 0;

  Eigen::Index size() const noexcept { return adjacency.rows(); }
};

struct SampleOptions {
  /// Zero the diagonal after sampling; by default self-loops are Bernoulli(B_kk).
  bool zero_diagonal = false;
};

/// Labels i.i.d. from Pi, then independent Bernoulli(B_{tau_i tau_j}) on the
/// upper triangle including the diagonal, mirrored below.
SampledGraph sample_sbm(const BlockModel& model, Eigen::Index n, std::uint64_t seed, const SampleOptions& options = {});

/// Deterministic per-replication seed derived from (master, rep).
std::uint64_t child_seed(std::uint64_t master, std::uint64_t rep);

enum class EmbeddingKind { Ase, Lse };

struct Embedding {
  Eigen::MatrixXd points;       // n x d
  Eigen::VectorXd eigenvalues;  // decreasing |lambda|
  EmbeddingKind kind = EmbeddingKind::Ase;
  int dimension() const noexcept { return static_cast<int>(points.cols()); }
};

Embedding ase_embed(const SampledGraph& graph, int d);
/// Throws IsolatedVertex when a vertex has degree zero.
Embedding lse_embed(const SampledGraph& graph, int d);

/// Embeddings of an arbitrary symmetric matrix (e.g. the noiseless P).
Embedding ase_embed(const Eigen::MatrixXd& matrix, int d);
Embedding lse_embed(const Eigen::MatrixXd& matrix, int d);

/// n x n expectation matrix P with P_ij = B_{labels_i labels_j}.
Eigen::MatrixXd expected_adjacency(const BlockModel& model, const std::vector<int>& labels);

struct BlockCltResult {
  int block = 0;
  double ase_relative_frobenius = 0.0;
  double lse_relative_frobenius = 0.0;
  /// Mean over replications of ||mean_k(Q Xhat_i) - nu_k||.
  double ase_mean_error = 0.0;
  Eigen::MatrixXd ase_empirical;
  Eigen::MatrixXd ase_theoretical;
  Eigen::MatrixXd lse_empirical;
  Eigen::MatrixXd lse_theoretical;
};

struct CltReport {
  Eigen::Index n = 0;
  int reps = 0;
  std::uint64_t seed = 0;
  bool low_replication = false;
  std::vector<BlockCltResult> blocks;
  std::vector<std::uint64_t> rep_seeds;
};

inline constexpr int kMinCltReplications = 20;

struct CltOptions {
  SampleOptions sample;
};

/// Compares Procrustes-aligned empirical block covariances with the limiting
/// covariances. Restricted to positive definite models.
CltReport empirical_clt_check(const BlockModel& model, Eigen::Index n, int reps, std::uint64_t seed,
                              const CltOptions& options = {});

/// Orthogonal Q minimizing sum_k w_k ||Q c_k - t_k||^2 (rows of centroids/targets).
/// Throws AlignmentIllConditioned for nearly collinear centroid geometry.
Eigen::MatrixXd procrustes_rotation(const Eigen::MatrixXd& centroids, const Eigen::MatrixXd& targets,
                                    const Eigen::VectorXd& weights);

struct PreferenceReport {
  Eigen::Index n = 0;
  int reps = 0;
  std::uint64_t seed = 0;
  double rho_star = 0.0;
  std::vector<double> ase_errors;
  std::vector<double> lse_errors;
  std::vector<std::uint64_t> rep_seeds;
  double ase_mean = 0.0;
  double lse_mean = 0.0;
  double ase_stderr = 0.0;
  double lse_stderr = 0.0;
  /// Mean errors ordered as sign(rho* - 1) predicts (ties count as agreement).
  bool agreement = false;
  bool low_replication = false;
};

inline constexpr int kMinPreferenceReplications = 50;

struct PreferenceOptions {
  SampleOptions sample;
};

PreferenceReport preference_experiment(const BlockModel& model, Eigen::Index n, int reps, std::uint64_t seed,
                                       const PreferenceOptions& options = {});

}  // namespace rhostar

#endif
