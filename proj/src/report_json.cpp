#include "rhostar/report_json.hpp"

#include "rhostar/error.hpp"

#include <cmath>
#include <fstream>

namespace rhostar {

namespace {

nlohmann::json matrix(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json r = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    rows.push_back(r);
  }
  return rows;
}

nlohmann::json vector(const Eigen::VectorXd& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

}  // namespace

BlockModel model_from_json(const nlohmann::json& j) {
  try {
    const auto& jb = j.at("B");
    const auto& jp = j.at("Pi");
    const auto K = static_cast<Eigen::Index>(jb.size());
    Eigen::MatrixXd B(K, K);
    for (Eigen::Index i = 0; i < K; ++i) {
      const auto& row = jb.at(static_cast<std::size_t>(i));
      if (static_cast<Eigen::Index>(row.size()) != K)
        throw Error(ErrorCode::DimensionMismatch, "B must be square");
      for (Eigen::Index c = 0; c < K; ++c) B(i, c) = row.at(static_cast<std::size_t>(c)).get<double>();
    }
    Eigen::VectorXd Pi(static_cast<Eigen::Index>(jp.size()));
    for (Eigen::Index i = 0; i < Pi.size(); ++i) Pi(i) = jp.at(static_cast<std::size_t>(i)).get<double>();
    return validate_model(B, Pi);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::IoFailure, std::string("malformed model JSON: ") + e.what());
  }
}

BlockModel read_model_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::IoFailure, "cannot open '" + path + "'");
  try {
    return model_from_json(nlohmann::json::parse(f));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::IoFailure, std::string("cannot parse '") + path + "': " + e.what());
  }
}

nlohmann::json to_json(const BlockModel& model) { return {{"B", matrix(model.B())}, {"Pi", vector(model.Pi())}}; }

nlohmann::json to_json(const ChernoffReport& r) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& p : r.pairs)
    pairs.push_back({{"k", p.k},
                     {"l", p.l},
                     {"ase_supremum", p.ase},
                     {"t_ase", p.t_ase},
                     {"lse_supremum", p.lse},
                     {"t_lse", p.t_lse},
                     {"multimodal", p.multimodal}});
  return {{"rho_star", r.rho_star},
          {"rho_ase_star", r.rho_ase_star},
          {"rho_lse_star", r.rho_lse_star},
          {"minimizing_pair", {r.minimizing_pair.first, r.minimizing_pair.second}},
          {"minimizing_pair_lse", {r.minimizing_pair_lse.first, r.minimizing_pair_lse.second}},
          {"t_star_ase", r.t_star_ase},
          {"t_star_lse", r.t_star_lse},
          {"verdict", std::string(verdict_name(r.verdict))},
          {"pairs", pairs},
          {"warnings", r.warnings}};
}

nlohmann::json to_json(const PreferenceReport& r) {
  return {{"n", r.n},
          {"reps", r.reps},
          {"seed", r.seed},
          {"rho_star", r.rho_star},
          {"ase_errors", r.ase_errors},
          {"lse_errors", r.lse_errors},
          {"rep_seeds", r.rep_seeds},
          {"ase_mean", r.ase_mean},
          {"lse_mean", r.lse_mean},
          {"ase_stderr", r.ase_stderr},
          {"lse_stderr", r.lse_stderr},
          {"agreement", r.agreement},
          {"low_replication", r.low_replication}};
}

nlohmann::json to_json(const CltReport& r) {
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& b : r.blocks)
    blocks.push_back({{"block", b.block},
                      {"ase_relative_frobenius", b.ase_relative_frobenius},
                      {"lse_relative_frobenius", b.lse_relative_frobenius},
                      {"ase_mean_error", b.ase_mean_error},
                      {"ase_empirical", matrix(b.ase_empirical)},
                      {"ase_theoretical", matrix(b.ase_theoretical)},
                      {"lse_empirical", matrix(b.lse_empirical)},
                      {"lse_theoretical", matrix(b.lse_theoretical)}});
  return {{"n", r.n},   {"reps", r.reps},           {"seed", r.seed}, {"low_replication", r.low_replication},
          {"blocks", blocks}, {"rep_seeds", r.rep_seeds}};
}

nlohmann::json to_json(const RegionSummary& s) {
  nlohmann::json out = {{"evaluated", s.evaluated}, {"excluded", s.excluded}};
  for (Verdict v : {Verdict::AsePreferred, Verdict::LsePreferred, Verdict::Equal}) {
    const auto i = static_cast<std::size_t>(v);
    out[std::string(verdict_name(v))] = {
        {"count", s.counts[i]}, {"fraction", s.fractions[i]}, {"components", s.components[i]}};
  }
  return out;
}

}  // namespace rhostar
