#include "rhostar/chernoff.hpp"

#include "rhostar/error.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace rhostar {

namespace {

double log_det_spd(const Eigen::MatrixXd& m, const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::SingularInterpolate, std::string(what) + " is not SPD");
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

}  // namespace

Verdict verdict_for(double rho_star) {
  if (std::abs(rho_star - 1.0) < kEqualityBand) return Verdict::Equal;
  return rho_star > 1.0 ? Verdict::AsePreferred : Verdict::LsePreferred;
}

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::AsePreferred: return "ASE_PREFERRED";
    case Verdict::LsePreferred: return "LSE_PREFERRED";
    case Verdict::Equal: return "EQUAL";
  }
  return "UNKNOWN";
}

MaximizeOptions chernoff_optimizer_options() {
  MaximizeOptions o;
  o.lower = 1e-9;
  o.upper = 1.0 - 1e-9;
  o.tolerance = 1e-10;
  o.coarse_points = 101;
  return o;
}

PairObjective::PairObjective(const GaussianSummary& k, const GaussianSummary& l)
    : diff_(k.mean - l.mean),
      sk_(k.covariance),
      sl_(l.covariance),
      logdet_k_(log_det_spd(k.covariance, "Sigma_k")),
      logdet_l_(log_det_spd(l.covariance, "Sigma_l")) {
  if (k.mean.size() != l.mean.size() || sk_.rows() != sl_.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "pair objective needs matching dimensions");
  }
}

Eigen::LLT<Eigen::MatrixXd> PairObjective::interpolate(double t) const {
  Eigen::LLT<Eigen::MatrixXd> llt(t * sk_ + (1.0 - t) * sl_);
  if (llt.info() != Eigen::Success) {
    std::ostringstream os;
    os << "Sigma_kl(" << t << ") is numerically singular";
    throw Error(ErrorCode::SingularInterpolate, os.str());
  }
  return llt;
}

double PairObjective::operator()(double t) const {
  const auto llt = interpolate(t);
  return t * (1.0 - t) * diff_.dot(llt.solve(diff_));
}

double PairObjective::finite_n(double t, double n) const {
  const auto llt = interpolate(t);
  const double quad = diff_.dot(llt.solve(diff_));
  const double logdet_t = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  return 0.5 * n * t * (1.0 - t) * quad + 0.5 * (logdet_t - t * logdet_k_ - (1.0 - t) * logdet_l_);
}

ChernoffResult gaussian_chernoff(const Eigen::VectorXd& mu1, const Eigen::MatrixXd& sigma1,
                                 const Eigen::VectorXd& mu2, const Eigen::MatrixXd& sigma2) {
  if (mu1.size() != mu2.size() || sigma1.rows() != mu1.size() || sigma2.rows() != mu2.size() ||
      sigma1.cols() != sigma1.rows() || sigma2.cols() != sigma2.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "Gaussian parameters have inconsistent dimensions");
  }
  const PairObjective obj({mu1, sigma1, 1.0}, {mu2, sigma2, 1.0});
  const ScalarMaximum best =
      maximize_bounded([&](double t) { return obj.finite_n(t, 1.0); }, chernoff_optimizer_options());
  return {best.value, best.argmax};
}

BlockLimits block_limits(const BlockModel& model) {
  BlockLimits out{latent_distribution(model), {}, {}};
  const Eigen::Index K = out.dist.size();
  out.ase.reserve(K);
  out.lse.reserve(K);
  for (Eigen::Index k = 0; k < K; ++k) {
    const Eigen::VectorXd x = out.dist.points.row(k).transpose();
    out.ase.push_back(ase_covariance(out.dist, x));
    out.lse.push_back(lse_covariance(out.dist, x));
  }
  return out;
}

ChernoffReport rho_star_numeric(const BlockLimits& limits) {
  const int K = static_cast<int>(limits.ase.size());
  if (K < 2) throw Error(ErrorCode::InvalidArgument, "rho* needs at least two blocks");
  const MaximizeOptions opts = chernoff_optimizer_options();

  ChernoffReport report;
  report.rho_ase_star = std::numeric_limits<double>::infinity();
  report.rho_lse_star = std::numeric_limits<double>::infinity();
  double worst_condition = 1.0;
  for (int k = 0; k < K; ++k) {
    worst_condition = std::max({worst_condition, limits.ase[k].condition, limits.lse[k].condition});
  }
  if (worst_condition > kConditionWarn) {
    std::ostringstream os;
    os << "ill-conditioned moment matrix (condition " << worst_condition << ")";
    report.warnings.push_back(os.str());
  }

  for (int k = 0; k < K; ++k) {
    for (int l = k + 1; l < K; ++l) {
      const double gap = (limits.ase[k].mean - limits.ase[l].mean).norm();
      if (gap < kNearDegenerateDistance) {
        std::ostringstream os;
        os << "latent positions " << k << " and " << l << " are " << gap << " apart";
        report.warnings.push_back(os.str());
      }
      const PairObjective ase_obj(limits.ase[k], limits.ase[l]);
      const PairObjective lse_obj(limits.lse[k], limits.lse[l]);
      const ScalarMaximum a = maximize_bounded(std::cref(ase_obj), opts);
      const ScalarMaximum b = maximize_bounded(std::cref(lse_obj), opts);
      report.pairs.push_back({k, l, a.value, a.argmax, b.value, b.argmax, a.multimodal || b.multimodal});
      if (a.multimodal || b.multimodal) {
        std::ostringstream os;
        os << "pair (" << k << "," << l << ") objective is multimodal in t";
        report.warnings.push_back(os.str());
      }
      if (a.value < report.rho_ase_star) {
        report.rho_ase_star = a.value;
        report.minimizing_pair = {k, l};
        report.t_star_ase = a.argmax;
      }
      if (b.value < report.rho_lse_star) {
        report.rho_lse_star = b.value;
        report.minimizing_pair_lse = {k, l};
        report.t_star_lse = b.argmax;
      }
    }
  }
  report.rho_star = report.rho_ase_star / report.rho_lse_star;
  report.verdict = verdict_for(report.rho_star);
  return report;
}

ChernoffReport rho_star_numeric(const BlockModel& model) { return rho_star_numeric(block_limits(model)); }

FiniteNRho rho_finite_n(const BlockModel& model, std::int64_t n) {
  if (n < 1) throw Error(ErrorCode::InvalidSampleSize, "n must be a positive integer");
  const BlockLimits limits = block_limits(model);
  const int K = static_cast<int>(limits.ase.size());
  const double nn = static_cast<double>(n);
  const MaximizeOptions opts = chernoff_optimizer_options();
  FiniteNRho out{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  for (int k = 0; k < K; ++k) {
    for (int l = k + 1; l < K; ++l) {
      const PairObjective a(limits.ase[k], limits.ase[l]);
      const PairObjective b(limits.lse[k], limits.lse[l]);
      out.rho_ase = std::min(out.rho_ase, maximize_bounded([&](double t) { return a.finite_n(t, nn); }, opts).value);
      out.rho_lse = std::min(out.rho_lse, maximize_bounded([&](double t) { return b.finite_n(t, nn); }, opts).value);
    }
  }
  return out;
}

}  // namespace rhostar
