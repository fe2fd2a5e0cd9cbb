#include "acceptance.hpp"
#include "json_config.hpp"

#include "rhostar/chernoff.hpp"
#include "rhostar/closed_forms.hpp"
#include "rhostar/error.hpp"
#include "rhostar/model.hpp"
#include "rhostar/montecarlo.hpp"
#include "rhostar/report_json.hpp"
#include "rhostar/sweep.hpp"
#include "rhostar/sweep_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace rhostar;
using nlohmann::json;

namespace {

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (end == item.c_str()) throw Error(ErrorCode::InvalidArgument, "bad number '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::pair<std::string, double> parse_binding(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw Error(ErrorCode::InvalidArgument, "expected name=value, got '" + text + "'");
  char* end = nullptr;
  const std::string v = text.substr(eq + 1);
  const double value = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0') throw Error(ErrorCode::InvalidArgument, "bad value in '" + text + "'");
  return {text.substr(0, eq), value};
}

std::map<std::string, double> parse_bindings(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const auto& s : items) out.insert_or_assign(parse_binding(s).first, parse_binding(s).second);
  return out;
}

// name:lo:hi:step
AxisSpec parse_axis(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 4) throw Error(ErrorCode::InvalidArgument, "axis must be name:lo:hi:step, got '" + text + "'");
  AxisSpec a;
  a.name = parts[0];
  a.lo = std::stod(parts[1]);
  a.hi = std::stod(parts[2]);
  a.step = std::stod(parts[3]);
  a.count();
  return a;
}

std::vector<AxisSpec> default_axes(const std::string& family, double step) {
  const double lo = 0.01, hi = 0.99;
  if (family == "rank1") return {{"p", lo, hi, step}, {"q", lo, hi, step}};
  if (family == "poly_p") return {{"p", lo, hi, step}};
  if (family == "full_rank3") return {{"a", lo, hi, step}, {"b", lo, hi, step}, {"c", lo, hi, step}};
  family_info(family);
  return {{"a", lo, hi, step}, {"b", lo, hi, step}};
}

Verdict parse_verdict(const std::string& s) {
  for (Verdict v : {Verdict::AsePreferred, Verdict::LsePreferred, Verdict::Equal})
    if (verdict_name(v) == s) return v;
  throw Error(ErrorCode::InvalidArgument, "verdict must be ASE_PREFERRED, LSE_PREFERRED or EQUAL");
}

void emit(const json& j, const std::string& path) {
  if (path.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::IoFailure, "cannot open '" + path + "' for writing");
  f << j.dump(2) << '\n';
  if (!f) throw Error(ErrorCode::IoFailure, "write to '" + path + "' failed");
}

struct GridArgs {
  std::string family;
  std::vector<std::string> axes;
  std::vector<std::string> fixed;
  double step = 0.01;
  bool cross_check = false;

  void attach(CLI::App* app) {
    app->add_option("--family", family, "homogeneous2, core_periphery, rank1, poly_p, full_rank3, homogeneousK");
    app->add_option("--axis", axes, "Axis name:lo:hi:step (repeatable); defaults to the family's unit grid");
    app->add_option("--fixed", fixed, "Fixed parameter binding name=value (repeatable)");
    app->add_option("--step", step, "Step of the default axes")->capture_default_str();
  }

  SweepGrid run() const {
    if (family.empty()) throw Error(ErrorCode::InvalidArgument, "--family is required");
    std::vector<AxisSpec> specs;
    for (const auto& a : axes) specs.push_back(parse_axis(a));
    if (specs.empty()) specs = default_axes(family, step);
    SweepOptions o;
    o.cross_check = cross_check;
    return sweep(family, parse_bindings(fixed), specs, o);
  }
};

struct ModelArgs {
  std::string model_file;
  std::string b_text;
  std::string pi_text;
  std::string family;
  std::vector<std::string> params;

  void attach(CLI::App* app) {
    app->add_option("--model", model_file, "Model JSON file {\"B\": [[...]], \"Pi\": [...]}");
    app->add_option("--B", b_text, "Inline B, rows separated by ';' and entries by ','");
    app->add_option("--pi", pi_text, "Inline block probabilities, comma separated");
    app->add_option("--family", family, "Build the model from a sweep family");
    app->add_option("--param", params, "Family parameter name=value (repeatable)");
  }

  BlockModel build() const {
    if (!model_file.empty()) return read_model_file(model_file);
    if (!b_text.empty()) {
      std::vector<std::vector<double>> rows;
      std::stringstream ss(b_text);
      std::string row;
      while (std::getline(ss, row, ';')) rows.push_back(parse_list(row));
      const auto K = static_cast<Eigen::Index>(rows.size());
      Eigen::MatrixXd B(K, K);
      for (Eigen::Index i = 0; i < K; ++i) {
        if (static_cast<Eigen::Index>(rows[i].size()) != K) throw Error(ErrorCode::DimensionMismatch, "B must be square");
        for (Eigen::Index j = 0; j < K; ++j) B(i, j) = rows[i][j];
      }
      Eigen::VectorXd Pi;
      if (pi_text.empty()) {
        Pi = Eigen::VectorXd::Constant(K, 1.0 / static_cast<double>(K));
      } else {
        const auto p = parse_list(pi_text);
        Pi = Eigen::Map<const Eigen::VectorXd>(p.data(), static_cast<Eigen::Index>(p.size()));
      }
      return validate_model(B, Pi);
    }
    if (!family.empty()) {
      std::map<std::string, double> p = family_info(family).defaults;
      for (const auto& [k, v] : parse_bindings(params)) p[k] = v;
      return family_model(family, p);
    }
    throw Error(ErrorCode::InvalidArgument, "give --model, --B or --family");
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compare adjacency and Laplacian spectral embeddings for stochastic block models via rho*"};
  app.config_formatter(std::make_shared<cli::JsonConfig>());
  app.set_config("--config", "", "Optional JSON config mirroring the flags; command-line flags win");
  app.require_subcommand(1);

  // rho-star
  auto* rho = app.add_subcommand("rho-star", "Evaluate rho* for one model and print the report as JSON");
  ModelArgs rho_model;
  rho_model.attach(rho);
  std::int64_t rho_finite = 0;
  std::string rho_out;
  rho->add_option("--finite-n", rho_finite, "Also report finite-n Chernoff exponents at this n");
  rho->add_option("--out", rho_out, "Write JSON here instead of stdout");

  // sweep
  auto* sw = app.add_subcommand("sweep", "Evaluate rho* over a parameter grid");
  GridArgs sw_grid;
  sw_grid.attach(sw);
  std::string sw_csv, sw_heatmap, sw_slice, sw_projection, sw_projection_csv, sw_out;
  sw->add_flag("--cross-check", sw_grid.cross_check, "Evaluate closed form and optimizer and record the discrepancy");
  sw->add_option("--csv", sw_csv, "Write the grid as CSV");
  sw->add_option("--heatmap", sw_heatmap, "Write an SVG heatmap (2-D grids, or a --slice of a 3-D grid)");
  sw->add_option("--slice", sw_slice, "Pin one axis, name=value, before drawing the heatmap");
  sw->add_option("--projection", sw_projection, "For 3-D grids: axis whose LSE_PREFERRED range is projected out");
  sw->add_option("--projection-csv", sw_projection_csv, "Where to write the projection (default stdout)");
  sw->add_option("--out", sw_out, "Write the JSON summary here instead of stdout");

  // level-set
  auto* ls = app.add_subcommand("level-set", "Contour rho* = level on a 2-D grid");
  GridArgs ls_grid;
  ls_grid.attach(ls);
  double ls_level = 1.0;
  std::string ls_out;
  ls->add_option("--level", ls_level, "Contour level")->capture_default_str();
  ls->add_option("--out", ls_out, "Write JSON polylines here instead of stdout");

  // measure
  auto* ms = app.add_subcommand("measure", "Fraction of grid cells carrying a verdict");
  GridArgs ms_grid;
  ms_grid.attach(ms);
  std::string ms_verdict = "LSE_PREFERRED", ms_where;
  ms->add_option("--verdict", ms_verdict, "ASE_PREFERRED, LSE_PREFERRED or EQUAL")->capture_default_str();
  ms->add_option("--where", ms_where, "Extra cell condition such as 'a<b'");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Monte Carlo experiments on sampled graphs");
  ModelArgs sim_model;
  sim_model.attach(sim);
  std::string sim_experiment = "preference", sim_out;
  std::int64_t sim_n = 2000;
  int sim_reps = 50;
  std::uint64_t sim_seed = 1;
  bool sim_zero_diag = false;
  sim->add_option("--experiment", sim_experiment, "preference or clt")->capture_default_str();
  sim->add_option("--n", sim_n, "Vertices per graph")->capture_default_str();
  sim->add_option("--reps", sim_reps, "Replications")->capture_default_str();
  sim->add_option("--seed", sim_seed, "Master seed")->capture_default_str();
  sim->add_flag("--zero-diagonal", sim_zero_diag, "Sample without self-loops");
  sim->add_option("--out", sim_out, "Write JSON here instead of stdout");

  // verify
  auto* ver = app.add_subcommand("verify", "Run the acceptance battery; exit status 0 only if every check passes");
  std::vector<int> ver_only;
  bool ver_quiet = false;
  ver->add_option("--only", ver_only, "Run only these criterion numbers");
  ver->add_flag("--quiet", ver_quiet, "Suppress INFO lines");

  CLI11_PARSE(app, argc, argv);

  try {
    if (rho->parsed()) {
      const BlockModel model = rho_model.build();
      const ChernoffReport r = rho_star_numeric(model);
      json j = to_json(r);
      j["model"] = to_json(model);
      j["geometry"] = std::string(geometry_name(classify_geometry(model)));
      if (!rho_model.family.empty() && family_info(rho_model.family).closed_form) {
        std::map<std::string, double> p = family_info(rho_model.family).defaults;
        for (const auto& [k, v] : parse_bindings(rho_model.params)) p[k] = v;
        const SweepCell c = evaluate_cell(rho_model.family, p);
        if (c.status == CellStatus::Ok) j["closed_form"] = c.rho_star;
      }
      if (rho_finite > 0) {
        const FiniteNRho f = rho_finite_n(model, rho_finite);
        j["finite_n"] = {{"n", rho_finite}, {"rho_ase", f.rho_ase}, {"rho_lse", f.rho_lse}, {"ratio", f.ratio()}};
      }
      emit(j, rho_out);
    } else if (sw->parsed()) {
      SweepGrid grid = sw_grid.run();
      if (!sw_csv.empty()) emit_csv(grid, sw_csv);
      if (!sw_heatmap.empty()) {
        if (!sw_slice.empty()) {
          const auto [name, value] = parse_binding(sw_slice);
          emit_heatmap(slice(grid, name, value), sw_heatmap);
        } else {
          emit_heatmap(grid, sw_heatmap);
        }
      }
      if (!sw_projection.empty()) {
        std::ostringstream os;
        const auto proj = project_range(grid, sw_projection, Verdict::LsePreferred);
        std::vector<std::string> other;
        for (const auto& a : grid.axes)
          if (a.name != sw_projection) other.push_back(a.name);
        os << other[0] << ',' << other[1] << ',' << sw_projection << "_lo," << sw_projection << "_hi,count\n";
        char buf[128];
        for (const auto& r : proj) {
          if (r.empty) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,,,0\n", r.x, r.y);
          } else {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%zu\n", r.x, r.y, r.lo, r.hi, r.count);
          }
          os << buf;
        }
        if (sw_projection_csv.empty()) {
          std::cout << os.str();
        } else {
          std::ofstream f(sw_projection_csv);
          if (!(f << os.str())) throw Error(ErrorCode::IoFailure, "cannot write '" + sw_projection_csv + "'");
        }
      }
      json j = {{"family", grid.family}, {"cells", grid.cells.size()}, {"regions", to_json(classify_regions(grid))}};
      if (grid.cross_checked) j["max_discrepancy"] = grid.max_discrepancy;
      if (sw_projection.empty() || !sw_projection_csv.empty()) emit(j, sw_out);
    } else if (ls->parsed()) {
      const SweepGrid grid = ls_grid.run();
      try {
        json lines = json::array();
        for (const auto& line : level_set(grid, ls_level)) {
          json pts = json::array();
          for (const auto& p : line) pts.push_back({p.x, p.y});
          lines.push_back(pts);
        }
        emit({{"level", ls_level}, {"axes", {grid.axes[0].name, grid.axes[1].name}}, {"polylines", lines}}, ls_out);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::EmptyLevelSet) throw;
        std::cerr << e.what() << '\n';
        emit({{"level", ls_level}, {"polylines", json::array()}}, ls_out);
      }
    } else if (ms->parsed()) {
      const SweepGrid grid = ms_grid.run();
      const Verdict v = parse_verdict(ms_verdict);
      const CellPredicate pred = ms_where.empty() ? CellPredicate{} : parse_cell_predicate(grid, ms_where);
      const RegionSummary s = classify_regions(grid);
      emit({{"verdict", ms_verdict},
            {"where", ms_where},
            {"fraction", region_measure(grid, v, pred)},
            {"evaluated", s.evaluated},
            {"excluded", s.excluded}},
           "");
    } else if (sim->parsed()) {
      const BlockModel model = sim_model.build();
      json j;
      if (sim_experiment == "preference") {
        PreferenceOptions o;
        o.sample.zero_diagonal = sim_zero_diag;
        j = to_json(preference_experiment(model, sim_n, sim_reps, sim_seed, o));
      } else if (sim_experiment == "clt") {
        CltOptions o;
        o.sample.zero_diagonal = sim_zero_diag;
        j = to_json(empirical_clt_check(model, sim_n, sim_reps, sim_seed, o));
      } else {
        throw Error(ErrorCode::InvalidArgument, "--experiment must be preference or clt");
      }
      j["model"] = to_json(model);
      j["zero_diagonal"] = sim_zero_diag;
      emit(j, sim_out);
    } else if (ver->parsed()) {
      acceptance::Options o;
      o.only.insert(ver_only.begin(), ver_only.end());
      o.info = !ver_quiet;
      const auto results = acceptance::run(std::cout, o);
      std::size_t passed = 0;
      for (const auto& r : results) passed += r.pass ? 1 : 0;
      std::cout << passed << '/' << results.size() << " criteria passed\n";
      return passed == results.size() ? 0 : 1;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
