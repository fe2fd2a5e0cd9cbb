#ifndef RHOSTAR_CLOSED_FORMS_HPP
#define RHOSTAR_CLOSED_FORMS_HPP

#include "rhostar/chernoff.hpp"

#include <Eigen/Dense>

namespace rhostar {

/// rho* = 1 + c * psi, with c > 0 and psi the sign-determining discriminant.
struct ShiftedRatio {
  double rho_star = 1.0;
  double psi = 0.0;
  double c = 0.0;
  Verdict verdict = Verdict::Equal;
};

/// Homogeneous balanced two-block model B = [[a,b],[b,a]], Pi = (1/2,1/2).
/// Valid for both a > b and a < b. Throws DegenerateEqualRows when a == b.
ShiftedRatio rho_star_homogeneous2(double a, double b);

/// The b = 1 - a slice of the two-block model: 1 + (2a - 1)^2 / 4.
double rho_star_restricted_b_equals_1_minus_a(double a);

/// Rank-one two-block model B = [[p^2, pq],[pq, q^2]], Pi = (pi1, 1 - pi1).
double rho_star_rank1(double p, double q, double pi1);

/// Large-gamma approximation of the rank-one model with q = p^gamma.
double poly_p_approximation(double p);

/// Homogeneous balanced K-block affinity model with 0 < b < a < 1.
ShiftedRatio rho_star_homogeneousK(double a, double b, int K);

/// Per-pair ASE supremum of the homogeneous K-block model (attained at t = 1/2).
double kblock_ase_supremum(double a, double b, int K);
/// Per-pair LSE supremum of the homogeneous K-block model (attained at t = 1/2).
double kblock_lse_supremum(double a, double b, int K);

/// ((1-a)/b)(1/K) + ((1-b)/a)((K-1)/K); ASE is preferred when this is below 4/3.
double convex_combination_lhs(double a, double b, int K);
inline constexpr double kConvexCombinationThreshold = 4.0 / 3.0;

/// (a - b^2)/(ab) < 4/3, which forces psi_{a,b,K} > 0 for every K.
bool uniform_ase_condition(double a, double b);

struct SnrDecomposition {
  double snr = 0.0;
  double c = 0.0;        // c_{a,b,K} of the K-block closed form
  double c_tilde = 0.0;  // c / snr, always positive
};

/// SNR = (a-b)^2 / (K (a + (K-1) b)) and the factorization c = SNR * c~.
SnrDecomposition snr(double a, double b, int K);

/// Scalar constants of the homogeneous K-block covariance algebra.
struct HomogeneousConstants {
  double c0 = 0.0;  // (a(1-a) - b(1-b)) / K
  double c1 = 0.0;  // <x, mu> = (a + (K-1) b) / K
  double c2 = 0.0;  // E g(x, X) = (a(1-a) + (K-1) b(1-b)) / K
  double c3 = 0.0;  // coefficient of x in E[g(x,X) X] = c3 x + b(1-b) mu
};

HomogeneousConstants homogeneous_constants(double a, double b, int K);

/// Inverse of M_t = (1-t) M0 + t M1 through the 2x2 interpolation identity.
Eigen::Matrix2d inverse_convex_2x2(const Eigen::Matrix2d& M0, const Eigen::Matrix2d& M1, double t);

/// t = 1/2 reduction (2 / (2 + tr(M1 M0^{-1}))) (M0^{-1} + M1^{-1}); requires
/// det(M1 M0^{-1}) = 1 and tr(M1 M0^{-1}) != -2.
Eigen::Matrix2d inverse_midpoint_2x2(const Eigen::Matrix2d& M0, const Eigen::Matrix2d& M1);

}  // namespace rhostar

#endif
