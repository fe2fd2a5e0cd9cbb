#include "rhostar/closed_forms.hpp"

#include "rhostar/error.hpp"

#include <cmath>
#include <sstream>

namespace rhostar {

namespace {

void require_open_unit(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) {
    std::ostringstream os;
    os << name << " = " << v << " must lie in (0,1)";
    throw Error(ErrorCode::InvalidArgument, os.str());
  }
}

void require_ordered(double a, double b, int K) {
  require_open_unit(a, "a");
  require_open_unit(b, "b");
  if (!(b < a)) throw Error(ErrorCode::ParameterOrder, "requires 0 < b < a < 1");
  if (K < 2) throw Error(ErrorCode::InvalidArgument, "K must be at least 2");
}

// Relative size below which a 2x2 determinant counts as zero.
constexpr double kSingularRelative = 1e-14;

bool singular(const Eigen::Matrix2d& m) {
  const double scale = m.cwiseAbs().maxCoeff();
  return scale == 0.0 || std::abs(m.determinant()) <= kSingularRelative * scale * scale;
}

}  // namespace

ShiftedRatio rho_star_homogeneous2(double a, double b) {
  require_open_unit(a, "a");
  require_open_unit(b, "b");
  if (a == b) throw Error(ErrorCode::DegenerateEqualRows, "a == b is the Erdos-Renyi singularity");
  const double psi = 3.0 * a * (a - 1.0) + 3.0 * b * (b - 1.0) + 8.0 * a * b;
  const double c = (a - b) * (a - b) / (4.0 * (a + b) * (a + b) * (a * (1.0 - a) + b * (1.0 - b)));
  const double rho = 1.0 + c * psi;
  return {rho, psi, c, verdict_for(rho)};
}

double rho_star_restricted_b_equals_1_minus_a(double a) {
  require_open_unit(a, "a");
  if (a == 0.5) throw Error(ErrorCode::DegenerateEqualRows, "a = 1/2 makes b = a");
  return 1.0 + 0.25 * (2.0 * a - 1.0) * (2.0 * a - 1.0);
}

double rho_star_rank1(double p, double q, double pi1) {
  require_open_unit(p, "p");
  require_open_unit(q, "q");
  require_open_unit(pi1, "pi1");
  if (p == q) throw Error(ErrorCode::DegenerateEqualRows, "p == q is the Erdos-Renyi singularity");
  const double pi2 = 1.0 - pi1;
  const double s = std::sqrt(p) + std::sqrt(q);
  const double m2 = pi1 * p * p + pi2 * q * q;
  const double m1 = pi1 * p + pi2 * q;
  const double ase = std::sqrt(pi1 * p * (1.0 - p * p) + pi2 * q * (1.0 - p * q)) +
                     std::sqrt(pi1 * p * (1.0 - p * q) + pi2 * q * (1.0 - q * q));
  const double lse = std::sqrt(pi1 * std::pow(p, 4) * (1.0 - p * p) + pi2 * p * std::pow(q, 3) * (1.0 - p * q)) +
                     std::sqrt(pi1 * std::pow(p, 3) * q * (1.0 - p * q) + pi2 * std::pow(q, 4) * (1.0 - q * q));
  return (s * s) * (m2 * m2) * (ase * ase) / (4.0 * (m1 * m1) * (lse * lse));
}

double poly_p_approximation(double p) {
  require_open_unit(p, "p");
  const double r = std::sqrt(1.0 - p * p);
  return (1.0 + r) * (1.0 + r) / (4.0 * (1.0 - p * p));
}

ShiftedRatio rho_star_homogeneousK(double a, double b, int K) {
  require_ordered(a, b, K);
  const double psi = 3.0 * a * (a - 1.0) + 3.0 * b * (b - 1.0) * (K - 1) + 4.0 * a * b * K;
  const double s = a + (K - 1) * b;
  const double c = (a - b) * (a - b) / (4.0 * s * s * (a * (1.0 - a) + b * (1.0 - b)));
  const double rho = 1.0 + c * psi;
  return {rho, psi, c, verdict_for(rho)};
}

double kblock_ase_supremum(double a, double b, int K) {
  require_ordered(a, b, K);
  return (a - b) * (a - b) / (K * (a * (1.0 - a) + b * (1.0 - b)));
}

double kblock_lse_supremum(double a, double b, int K) {
  require_ordered(a, b, K);
  const double s = a + (K - 1) * b;
  const double psi = 3.0 * a * (a - 1.0) + 3.0 * b * (b - 1.0) * (K - 1) + 4.0 * a * b * K;
  const double denom = 4.0 * (a * (1.0 - a) + b * (1.0 - b)) * s * s * K + (a - b) * (a - b) * K * psi;
  if (!(denom > 0.0)) throw Error(ErrorCode::NonpositiveDenominator, "LSE supremum denominator is not positive");
  return 4.0 * (a - b) * (a - b) * s * s / denom;
}

double convex_combination_lhs(double a, double b, int K) {
  require_ordered(a, b, K);
  return ((1.0 - a) / b) / K + ((1.0 - b) / a) * (K - 1) / K;
}

bool uniform_ase_condition(double a, double b) {
  require_ordered(a, b, 2);
  return (a - b * b) / (a * b) < kConvexCombinationThreshold;
}

SnrDecomposition snr(double a, double b, int K) {
  require_ordered(a, b, K);
  const double s = a + (K - 1) * b;
  const double value = (a - b) * (a - b) / (K * s);
  const double c = rho_star_homogeneousK(a, b, K).c;
  return {value, c, c / value};
}

HomogeneousConstants homogeneous_constants(double a, double b, int K) {
  require_ordered(a, b, K);
  HomogeneousConstants h;
  h.c0 = (a * (1.0 - a) - b * (1.0 - b)) / K;
  h.c1 = (a + (K - 1) * b) / K;
  h.c2 = (a * (1.0 - a) + (K - 1) * b * (1.0 - b)) / K;
  h.c3 = h.c0;
  return h;
}

Eigen::Matrix2d inverse_convex_2x2(const Eigen::Matrix2d& M0, const Eigen::Matrix2d& M1, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorCode::InvalidArgument, "t must lie in [0,1]");
  if (singular(M0) || singular(M1)) throw Error(ErrorCode::SingularInput, "M0 and M1 must be invertible");
  if (singular((1.0 - t) * M0 + t * M1)) throw Error(ErrorCode::SingularInterpolant, "M_t is singular");
  const Eigen::Matrix2d inv0 = M0.inverse();
  const Eigen::Matrix2d inv1 = M1.inverse();
  const Eigen::Matrix2d ratio = M1 * inv0;
  const double det = ratio.determinant();
  const double tr = ratio.trace();
  const double denom = det * t * t + tr * t * (1.0 - t) + (1.0 - t) * (1.0 - t);
  return ((1.0 - t) * inv0 + det * t * inv1) / denom;
}

Eigen::Matrix2d inverse_midpoint_2x2(const Eigen::Matrix2d& M0, const Eigen::Matrix2d& M1) {
  if (singular(M0) || singular(M1)) throw Error(ErrorCode::SingularInput, "M0 and M1 must be invertible");
  const Eigen::Matrix2d inv0 = M0.inverse();
  const Eigen::Matrix2d ratio = M1 * inv0;
  if (std::abs(ratio.determinant() - 1.0) > 1e-10) {
    throw Error(ErrorCode::InvalidArgument, "midpoint reduction needs det(M1 M0^-1) = 1");
  }
  const double tr = ratio.trace();
  if (std::abs(tr + 2.0) < 1e-12) throw Error(ErrorCode::SingularInterpolant, "tr(M1 M0^-1) = -2");
  return (2.0 / (2.0 + tr)) * (inv0 + M1.inverse());
}

}  // namespace rhostar
