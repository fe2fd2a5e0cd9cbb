#ifndef RHOSTAR_CHERNOFF_HPP
#define RHOSTAR_CHERNOFF_HPP

#include "rhostar/limits.hpp"
#include "rhostar/model.hpp"
#include "rhostar/optimize.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rhostar {

enum class Verdict { AsePreferred, LsePreferred, Equal };

/// |rho - 1| below this reports Equal.
inline constexpr double kEqualityBand = 1e-9;
/// Latent positions closer than this trigger a conditioning warning.
inline constexpr double kNearDegenerateDistance = 1e-6;

Verdict verdict_for(double rho_star);
std::string_view verdict_name(Verdict v);  // ASE_PREFERRED, LSE_PREFERRED, EQUAL

struct ChernoffResult {
  double value = 0.0;
  double t_star = 0.5;
};

/// Chernoff information between N(mu1, Sigma1) and N(mu2, Sigma2), maximized
/// over t in (0,1) with Sigma_t = t Sigma1 + (1 - t) Sigma2.
ChernoffResult gaussian_chernoff(const Eigen::VectorXd& mu1, const Eigen::MatrixXd& sigma1,
                                 const Eigen::VectorXd& mu2, const Eigen::MatrixXd& sigma2);

/// t -> t(1-t) ||m_k - m_l||^2 under Sigma_kl(t)^{-1}, Sigma_kl(t) = t S_k + (1-t) S_l.
class PairObjective {
 public:
  PairObjective(const GaussianSummary& k, const GaussianSummary& l);

  double operator()(double t) const;
  /// n t(1-t)/2 ||.||^2 + 1/2 log(det Sigma_kl(t) / (det S_k^t det S_l^{1-t})).
  double finite_n(double t, double n) const;

  const Eigen::VectorXd& mean_difference() const noexcept { return diff_; }
  const Eigen::MatrixXd& sigma_k() const noexcept { return sk_; }
  const Eigen::MatrixXd& sigma_l() const noexcept { return sl_; }

 private:
  Eigen::LLT<Eigen::MatrixXd> interpolate(double t) const;

  Eigen::VectorXd diff_;
  Eigen::MatrixXd sk_;
  Eigen::MatrixXd sl_;
  double logdet_k_;
  double logdet_l_;
};

/// Optimizer settings shared by every supremum over t.
MaximizeOptions chernoff_optimizer_options();

/// Per-pair record inside a report; block indices are 0-based.
struct PairSuprema {
  int k = 0;
  int l = 0;
  double ase = 0.0;
  double t_ase = 0.5;
  double lse = 0.0;
  double t_lse = 0.5;
  bool multimodal = false;
};

struct ChernoffReport {
  double rho_star = 0.0;
  double rho_ase_star = 0.0;
  double rho_lse_star = 0.0;
  std::pair<int, int> minimizing_pair{0, 1};      // numerator minimizer
  std::pair<int, int> minimizing_pair_lse{0, 1};  // denominator minimizer
  double t_star_ase = 0.5;
  double t_star_lse = 0.5;
  Verdict verdict = Verdict::Equal;
  std::vector<PairSuprema> pairs;
  std::vector<std::string> warnings;
};

/// Limiting ASE and LSE Gaussian laws, one per block.
struct BlockLimits {
  DiscreteLatentDistribution dist;
  std::vector<GaussianSummary> ase;
  std::vector<GaussianSummary> lse;
};

BlockLimits block_limits(const BlockModel& model);

/// Large-sample ratio rho* from the numeric optimizer; numerator and
/// denominator minimized over pairs independently.
ChernoffReport rho_star_numeric(const BlockModel& model);
ChernoffReport rho_star_numeric(const BlockLimits& limits);

struct FiniteNRho {
  double rho_ase = 0.0;
  double rho_lse = 0.0;
  double ratio() const { return rho_ase / rho_lse; }
};

/// Finite-n Chernoff exponents including the log-determinant terms.
FiniteNRho rho_finite_n(const BlockModel& model, std::int64_t n);

}  // namespace rhostar

#endif
