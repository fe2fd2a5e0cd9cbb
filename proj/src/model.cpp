#include "rhostar/model.hpp"

#include "rhostar/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

namespace rhostar {

namespace {

struct SpectralParts {
  Eigen::VectorXd values;   // kept eigenvalues, positive group first
  Eigen::MatrixXd vectors;  // matching unit eigenvectors
  Signature signature;
  bool ambiguous = false;
};

SpectralParts spectral_parts(const Eigen::MatrixXd& B) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::InvalidArgument, "eigendecomposition of B failed");
  }
  const Eigen::VectorXd& w = es.eigenvalues();
  const double scale = w.cwiseAbs().maxCoeff();
  const double cutoff = kRankTolerance * scale;

  SpectralParts out;
  std::vector<Eigen::Index> pos, neg;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    const double m = std::abs(w(i));
    if (m > 0.5 * cutoff && m < 2.0 * cutoff) out.ambiguous = true;
    if (m <= cutoff) continue;
    (w(i) > 0 ? pos : neg).push_back(i);
  }
  auto by_magnitude = [&](Eigen::Index l, Eigen::Index r) { return std::abs(w(l)) > std::abs(w(r)); };
  std::stable_sort(pos.begin(), pos.end(), by_magnitude);
  std::stable_sort(neg.begin(), neg.end(), by_magnitude);

  std::vector<Eigen::Index> order(pos);
  order.insert(order.end(), neg.begin(), neg.end());
  out.values.resize(static_cast<Eigen::Index>(order.size()));
  out.vectors.resize(B.rows(), static_cast<Eigen::Index>(order.size()));
  for (std::size_t c = 0; c < order.size(); ++c) {
    const auto col = static_cast<Eigen::Index>(c);
    Eigen::VectorXd u = es.eigenvectors().col(order[c]);
    Eigen::Index imax = 0;
    u.cwiseAbs().maxCoeff(&imax);
    if (u(imax) < 0) u = -u;
    out.values(col) = w(order[c]);
    out.vectors.col(col) = u;
  }
  out.signature = {static_cast<int>(pos.size()), static_cast<int>(neg.size())};
  return out;
}

void require_probability(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) {
    std::ostringstream os;
    os << name << " = " << v << " must lie in (0,1)";
    throw Error(ErrorCode::EntryOutOfRange, os.str());
  }
}

}  // namespace

BlockModel validate_model(const Eigen::MatrixXd& B, const Eigen::VectorXd& Pi) {
  if (B.rows() == 0 || B.rows() != B.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "B must be a non-empty square matrix");
  }
  if (Pi.size() != B.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "Pi length must equal the number of blocks");
  }
  const Eigen::Index K = B.rows();
  for (Eigen::Index i = 0; i < K; ++i) {
    for (Eigen::Index j = 0; j < K; ++j) {
      if (!std::isfinite(B(i, j)) || std::abs(B(i, j) - B(j, i)) > BlockModel::kSymmetryTolerance) {
        std::ostringstream os;
        os << "B(" << i << "," << j << ") != B(" << j << "," << i << ")";
        throw Error(ErrorCode::NotSymmetric, os.str());
      }
    }
  }
  for (Eigen::Index i = 0; i < K; ++i) {
    for (Eigen::Index j = 0; j < K; ++j) {
      if (!(B(i, j) > 0.0 && B(i, j) < 1.0)) {
        std::ostringstream os;
        os << "B(" << i << "," << j << ") = " << B(i, j) << " is outside (0,1)";
        throw Error(ErrorCode::EntryOutOfRange, os.str());
      }
    }
  }
  for (Eigen::Index i = 0; i < K; ++i) {
    for (Eigen::Index j = i + 1; j < K; ++j) {
      if ((B.row(i) - B.row(j)).cwiseAbs().maxCoeff() < BlockModel::kDuplicateRowTolerance) {
        std::ostringstream os;
        os << "rows " << i << " and " << j << " of B coincide; merge the blocks";
        throw Error(ErrorCode::DuplicateRows, os.str());
      }
    }
  }
  for (Eigen::Index k = 0; k < K; ++k) {
    if (!(Pi(k) > 0.0)) throw Error(ErrorCode::InvalidSimplex, "Pi entries must be positive");
  }
  if (std::abs(Pi.sum() - 1.0) > BlockModel::kSimplexTolerance) {
    std::ostringstream os;
    os << "Pi sums to " << Pi.sum();
    throw Error(ErrorCode::InvalidSimplex, os.str());
  }
  // Symmetrize exactly so downstream eigen-solvers see a symmetric input.
  Eigen::MatrixXd sym = 0.5 * (B + B.transpose());
  return BlockModel(std::move(sym), Pi);
}

Eigen::VectorXd Signature::metric() const {
  Eigen::VectorXd m(dim());
  m.head(d_plus).setOnes();
  m.tail(d_minus).setConstant(-1.0);
  return m;
}

Eigen::MatrixXd LatentConfiguration::gram() const {
  return X * signature.metric().asDiagonal() * X.transpose();
}

std::string_view geometry_name(GeometryClass g) {
  switch (g) {
    case GeometryClass::RankOne: return "RANK_ONE";
    case GeometryClass::PositiveDefinite: return "POSITIVE_DEFINITE";
    case GeometryClass::Indefinite: return "INDEFINITE";
    case GeometryClass::ErdosRenyiDegenerate: return "ERDOS_RENYI_DEGENERATE";
  }
  return "UNKNOWN";
}

Signature spectral_signature(const Eigen::MatrixXd& B) { return spectral_parts(B).signature; }

GeometryClass classify_matrix(const Eigen::MatrixXd& B) {
  if ((B.array() - B(0, 0)).abs().maxCoeff() < BlockModel::kDuplicateRowTolerance) {
    return GeometryClass::ErdosRenyiDegenerate;
  }
  const Signature s = spectral_signature(B);
  if (s.dim() == 1) return GeometryClass::RankOne;
  // Rank-deficient PSD matrices (K >= 3) still have Euclidean latent geometry.
  if (s.d_minus == 0) return GeometryClass::PositiveDefinite;
  return GeometryClass::Indefinite;
}

GeometryClass classify_geometry(const BlockModel& model) { return classify_matrix(model.B()); }

LatentConfiguration factorize_spectral(const BlockModel& model) {
  SpectralParts parts = spectral_parts(model.B());
  if (parts.ambiguous) {
    throw Error(ErrorCode::RankDeficiencyAmbiguous,
                "an eigenvalue of B lies within a factor of two of the rank cutoff");
  }
  LatentConfiguration out;
  out.X = parts.vectors * parts.values.cwiseAbs().cwiseSqrt().asDiagonal();
  out.signature = parts.signature;
  return out;
}

LatentConfiguration factorize_canonical_2block(const BlockModel& model) {
  if (model.blocks() != 2) throw Error(ErrorCode::NotTwoBlock, "canonical factorization needs K = 2");
  const double a = model.B()(0, 0);
  const double b = model.B()(0, 1);
  const double c = model.B()(1, 1);
  const double det = a * c - b * b;
  const double scale = std::max({a * c, b * b});
  if (std::abs(det) <= kRankTolerance * scale) {
    throw Error(ErrorCode::RankOneInput, "det(B) = 0; use the scalar rank-one positions");
  }
  LatentConfiguration out;
  out.X = Eigen::MatrixXd::Zero(2, 2);
  out.X(0, 0) = std::sqrt(a);
  out.X(1, 0) = b / std::sqrt(a);
  out.X(1, 1) = std::sqrt(std::abs(det)) / std::sqrt(a);
  out.signature = det > 0 ? Signature{2, 0} : Signature{1, 1};
  return out;
}

LatentConfiguration cholesky_homogeneous(int K, double a, double b) {
  if (K < 2) throw Error(ErrorCode::InvalidArgument, "K must be at least 2");
  require_probability(a, "a");
  require_probability(b, "b");
  if (!(b < a)) throw Error(ErrorCode::ParameterOrder, "homogeneous factorization requires b < a");

  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(K, K);
  X(0, 0) = std::sqrt(a);
  for (int i = 1; i < K; ++i) {
    // Row i (0-based) copies row i-1 except the last two slots.
    X.row(i).head(i - 1) = X.row(i - 1).head(i - 1);
    const double prev = a + (i - 1) * b;
    X(i, i - 1) = X(i - 1, i - 1) * b / prev;
    X(i, i) = std::sqrt((a - b) * (a + i * b) / prev);
  }
  return {std::move(X), Signature{K, 0}};
}

BlockModel homogeneous_model(int K, double a, double b) {
  if (K < 1) throw Error(ErrorCode::InvalidArgument, "K must be positive");
  Eigen::MatrixXd B = Eigen::MatrixXd::Constant(K, K, b);
  B.diagonal().setConstant(a);
  return validate_model(B, Eigen::VectorXd::Constant(K, 1.0 / K));
}

BlockModel two_block_model(double a, double b, double c, double pi1) {
  Eigen::MatrixXd B(2, 2);
  B << a, b, b, c;
  Eigen::VectorXd Pi(2);
  Pi << pi1, 1.0 - pi1;
  return validate_model(B, Pi);
}

BlockModel core_periphery_model(double a, double b, double pi1) { return two_block_model(a, b, b, pi1); }

BlockModel rank_one_model(double p, double q, double pi1) { return two_block_model(p * p, p * q, q * q, pi1); }

}  // namespace rhostar
