#ifndef RHOSTAR_MODEL_HPP
#define RHOSTAR_MODEL_HPP

#include <Eigen/Dense>

#include <string_view>

namespace rhostar {

/// Stochastic block model parameters (B, Pi) that passed validation.
///
/// B is a K x K symmetric matrix of block edge probabilities with every entry
/// strictly inside (0, 1) and pairwise distinct rows; Pi lies in the interior
/// of the probability simplex. Instances are immutable.
class BlockModel {
 public:
  static constexpr double kSymmetryTolerance = 1e-12;
  static constexpr double kDuplicateRowTolerance = 1e-12;
  static constexpr double kSimplexTolerance = 1e-12;

  const Eigen::MatrixXd& B() const noexcept { return b_; }
  const Eigen::VectorXd& Pi() const noexcept { return pi_; }
  Eigen::Index blocks() const noexcept { return b_.rows(); }

 private:
  friend BlockModel validate_model(const Eigen::MatrixXd& B, const Eigen::VectorXd& Pi);
  BlockModel(Eigen::MatrixXd b, Eigen::VectorXd pi) : b_(std::move(b)), pi_(std::move(pi)) {}

  Eigen::MatrixXd b_;
  Eigen::VectorXd pi_;
};

/// Throws Error with NotSymmetric, EntryOutOfRange, DuplicateRows,
/// InvalidSimplex or DimensionMismatch.
BlockModel validate_model(const Eigen::MatrixXd& B, const Eigen::VectorXd& Pi);

/// Counts of positive and negative directions in the metric I^{d+}_{d-}.
struct Signature {
  int d_plus = 0;
  int d_minus = 0;

  int dim() const noexcept { return d_plus + d_minus; }
  /// Diagonal of the metric: d_plus ones followed by d_minus minus-ones.
  Eigen::VectorXd metric() const;

  friend bool operator==(const Signature&, const Signature&) = default;
};

/// Rows of X are latent positions; B = X I^{d+}_{d-} X^T.
struct LatentConfiguration {
  Eigen::MatrixXd X;
  Signature signature;

  /// X I^{d+}_{d-} X^T.
  Eigen::MatrixXd gram() const;
};

enum class GeometryClass { RankOne, PositiveDefinite, Indefinite, ErdosRenyiDegenerate };

std::string_view geometry_name(GeometryClass g);

/// Relative cutoff on eigenvalue magnitude used for numerical rank.
inline constexpr double kRankTolerance = 1e-9;

/// Classifies a raw symmetric matrix, including the all-equal
/// Erdos-Renyi case that validate_model rejects.
GeometryClass classify_matrix(const Eigen::MatrixXd& B);
GeometryClass classify_geometry(const BlockModel& model);

/// Numerical (d+, d-) of B using kRankTolerance.
Signature spectral_signature(const Eigen::MatrixXd& B);

/// X = U_B |Lambda|^{1/2} restricted to eigenpairs above the rank cutoff.
/// Positive-eigenvalue columns come first; within each sign group columns are
/// sorted by decreasing |lambda|. Each eigenvector is oriented so that its
/// largest-magnitude entry is positive.
LatentConfiguration factorize_spectral(const BlockModel& model);

/// Lower-triangular two-block factorization with positive diagonal, using the
/// Euclidean Cholesky factor for PD B and its I^1_1 analogue otherwise.
LatentConfiguration factorize_canonical_2block(const BlockModel& model);

/// Lower-triangular K x K latent positions of the homogeneous affinity model
/// (a on the diagonal, b elsewhere). Row i is built from row i-1 by the
/// inductive rule; rows have squared norm a and pairwise inner product b.
LatentConfiguration cholesky_homogeneous(int K, double a, double b);

// Sub-model constructors used throughout; each one validates.
BlockModel homogeneous_model(int K, double a, double b);
BlockModel two_block_model(double a, double b, double c, double pi1);
BlockModel core_periphery_model(double a, double b, double pi1);
BlockModel rank_one_model(double p, double q, double pi1);

}  // namespace rhostar

#endif
