#include "rhostar/chernoff.hpp"
#include "rhostar/closed_forms.hpp"
#include "rhostar/error.hpp"
#include "rhostar/report_json.hpp"
#include "rhostar/sweep.hpp"
#include "rhostar/sweep_io.hpp"

#include "json_config.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace rhostar;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidArgument;
}

std::vector<AxisSpec> ab_axes(double lo, double hi, double step) {
  return {AxisSpec{"a", lo, hi, step}, AxisSpec{"b", lo, hi, step}};
}

std::string csv_text(const SweepGrid& g) {
  std::ostringstream os;
  write_csv(g, os);
  return os.str();
}

}  // namespace

TEST_CASE("axis ranges are inclusive") {
  AxisSpec ax{"a", 0.01, 0.99, 0.01};
  CHECK(ax.count() == 99);
  CHECK(ax.value(0) == 0.01);
  CHECK(ax.value(98) == 0.99);
  CHECK(ax.value(49) == 0.5);
}

TEST_CASE("full homogeneous grid counts and exclusions") {
  auto g = sweep("homogeneous2", {}, ab_axes(0.01, 0.99, 0.01));
  REQUIRE(g.cells.size() == 9801);
  auto summary = classify_regions(g);
  CHECK(summary.excluded == 99);
  CHECK(summary.evaluated == 9801 - 99);
  for (const auto& c : g.cells) {
    if (c.params[0] == c.params[1]) {
      CHECK(c.status == CellStatus::Excluded);
      CHECK(c.reason == "DEGENERATE_EQUAL_ROWS");
    } else {
      CHECK(c.status == CellStatus::Ok);
    }
  }
}

TEST_CASE("grid geometry: row-major and index round trip") {
  auto g = sweep("homogeneous2", {}, {AxisSpec{"a", 0.1, 0.3, 0.1}, AxisSpec{"b", 0.5, 0.9, 0.2}});
  CHECK(g.shape() == std::vector<std::size_t>{3, 3});
  for (std::size_t i = 0; i < g.cells.size(); ++i) CHECK(g.index(g.coords(i)) == i);
  CHECK(g.cells[1].params[0] == g.cells[0].params[0]);
  CHECK(g.axis("b") == 1);
  CHECK(g.axis("zzz") == -1);
}

TEST_CASE("cross-check of closed and numeric routes") {
  SweepOptions opt;
  opt.cross_check = true;
  auto g = sweep("homogeneous2", {}, ab_axes(0.05, 0.95, 0.05), opt);
  CHECK(g.cross_checked);
  CHECK(g.max_discrepancy < 1e-8);
  auto r = sweep("rank1", {{"pi1", 0.3}}, {AxisSpec{"p", 0.1, 0.9, 0.1}, AxisSpec{"q", 0.1, 0.9, 0.1}}, opt);
  CHECK(r.max_discrepancy < 1e-8);
}

TEST_CASE("verdict regions on the homogeneous grid") {
  auto g = sweep("homogeneous2", {}, ab_axes(0.01, 0.99, 0.01));
  for (const auto& c : g.cells) {
    if (c.status != CellStatus::Ok) continue;
    const double a = c.params[0], b = c.params[1];
    if (a + b > 1.0 + 1e-12) CHECK(c.verdict == Verdict::AsePreferred);
    if (b < a && a <= 3.0 / 7.0) CHECK(c.verdict == Verdict::LsePreferred);
  }
  auto s = classify_regions(g);
  CHECK(s.components[static_cast<int>(Verdict::AsePreferred)] >= 1);
  CHECK(s.fractions[0] + s.fractions[1] + s.fractions[2] == doctest::Approx(1.0));
}

TEST_CASE("core-periphery with unequal weights favours LSE near the origin") {
  auto g = sweep("core_periphery", {{"pi1", 0.25}}, ab_axes(0.02, 0.98, 0.04));
  std::size_t low = 0, low_lse = 0, high = 0, high_lse = 0;
  for (const auto& c : g.cells) {
    if (c.status != CellStatus::Ok) continue;
    const bool lse = c.verdict == Verdict::LsePreferred;
    if (c.params[0] + c.params[1] < 0.5) {
      ++low;
      low_lse += lse;
    } else if (c.params[0] + c.params[1] > 1.5) {
      ++high;
      high_lse += lse;
    }
  }
  CHECK(static_cast<double>(low_lse) / low > 0.5);
  CHECK(static_cast<double>(high_lse) / high < 0.1);
}

TEST_CASE("single-cell grid is one region") {
  auto g = sweep("homogeneous2", {}, {AxisSpec{"a", 0.8, 0.8, 0.1}, AxisSpec{"b", 0.2, 0.2, 0.1}});
  REQUIRE(g.cells.size() == 1);
  auto s = classify_regions(g);
  CHECK(s.components[static_cast<int>(Verdict::AsePreferred)] == 1);
  CHECK(s.components[static_cast<int>(Verdict::LsePreferred)] == 0);
}

TEST_CASE("sweep output does not depend on thread count") {
  auto axes = ab_axes(0.05, 0.95, 0.05);
  SweepOptions one, many;
  one.threads = 1;
  many.threads = 7;
  auto g1 = sweep("core_periphery", {}, axes, one);
  auto g7 = sweep("core_periphery", {}, axes, many);
  CHECK(csv_text(g1) == csv_text(g7));
}

TEST_CASE("unknown family and unbound parameters") {
  CHECK(code_of([] { sweep("nope", {}, ab_axes(0.1, 0.2, 0.1)); }) == ErrorCode::UnknownFamily);
  CHECK(code_of([] { family_info("nope"); }) == ErrorCode::UnknownFamily);
  CHECK(families().size() == 6);
}

TEST_CASE("level sets") {
  auto g = sweep("homogeneous2", {}, ab_axes(0.01, 0.99, 0.02));
  CHECK(code_of([&] { level_set(g, 10.0); }) == ErrorCode::EmptyLevelSet);
  auto lines = level_set(g, 1.0);
  CHECK_FALSE(lines.empty());
  for (const auto& line : lines)
    for (const auto& p : line)
      if (std::abs(p.x - p.y) > 1e-6) CHECK(std::abs(rho_star_homogeneous2(p.x, p.y).psi) < 1e-6);

  auto k3 = sweep("homogeneousK", {{"K", 3}}, ab_axes(0.01, 0.99, 0.02));
  std::size_t points = 0;
  for (const auto& line : level_set(k3, 1.0))
    for (const auto& p : line) {
      if (!(p.y < p.x)) continue;
      ++points;
      CHECK(std::abs(convex_combination_lhs(p.x, p.y, 3) - 4.0 / 3.0) < 1e-3);
    }
  CHECK(points > 10);

  auto three = sweep("full_rank3", {{"pi1", 0.5}},
                     {AxisSpec{"a", 0.2, 0.4, 0.1}, AxisSpec{"b", 0.2, 0.4, 0.1}, AxisSpec{"c", 0.2, 0.4, 0.1}});
  CHECK(code_of([&] { level_set(three, 1.0); }) == ErrorCode::NotTwoDimensional);
}

TEST_CASE("region measure with predicates") {
  auto g = sweep("core_periphery", {}, ab_axes(0.02, 0.98, 0.04));
  const double all = region_measure(g, Verdict::LsePreferred);
  const double below = region_measure(g, Verdict::LsePreferred, parse_cell_predicate(g, "a<b"));
  const double above = region_measure(g, Verdict::LsePreferred, parse_cell_predicate(g, "a>b"));
  CHECK(below + above <= all + 1e-12);
  CHECK(below > 0.0);
  CHECK(region_measure(g, Verdict::LsePreferred, parse_cell_predicate(g, "a<0.5")) <= all);
  CHECK_THROWS_AS(parse_cell_predicate(g, "a=b"), Error);
}

TEST_CASE("slices and range projections of a 3-D grid") {
  auto g = sweep("full_rank3", {{"pi1", 0.5}},
                 {AxisSpec{"a", 0.1, 0.9, 0.2}, AxisSpec{"b", 0.1, 0.9, 0.2}, AxisSpec{"c", 0.1, 0.9, 0.2}});
  auto s = slice(g, "c", 0.52);
  REQUIRE(s.axes.size() == 2);
  CHECK(s.fixed.at("c") == doctest::Approx(0.5));
  CHECK(s.cells.size() == 25);
  auto proj = project_range(g, "b", Verdict::LsePreferred);
  CHECK(proj.size() == 25);
  for (const auto& r : proj)
    if (!r.empty) CHECK(r.lo <= r.hi);

  // Symmetry a <-> c at equal weights.
  for (const auto& c : g.cells) {
    if (c.status != CellStatus::Ok) continue;
    auto coords = g.coords(&c - g.cells.data());
    std::swap(coords[0], coords[2]);
    const auto& m = g.cells[g.index(coords)];
    if (m.status == CellStatus::Ok) CHECK(std::abs(c.rho_star - m.rho_star) < 1e-10);
  }
}

TEST_CASE("homogeneousK sweep over K") {
  double lo = 1e300, hi = 0.0;
  auto g = sweep("homogeneousK", {{"a", 0.8}, {"b", 0.2}}, {AxisSpec{"K", 2, 100, 1}});
  REQUIRE(g.cells.size() == 99);
  for (const auto& c : g.cells) {
    REQUIRE(c.status == CellStatus::Ok);
    const double scaled = c.params[0] * (c.rho_star - 1.0);
    lo = std::min(lo, scaled);
    hi = std::max(hi, scaled);
  }
  CHECK(lo > 0.1);
  CHECK(hi < 2.0);
  CHECK(g.cells.back().rho_star < g.cells.front().rho_star);
}

TEST_CASE("CSV layout and round trip") {
  auto g = sweep("homogeneous2", {}, {AxisSpec{"a", 0.2, 0.3, 0.1}, AxisSpec{"b", 0.2, 0.3, 0.1}});
  std::string text = csv_text(g);
  std::istringstream lines(text);
  std::vector<std::string> rows;
  for (std::string line; std::getline(lines, line);) rows.push_back(line);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == "a,b,rho_star,verdict,t_star_ase,t_star_lse,status,reason");
  CHECK(rows[1].find("EXCLUDED,DEGENERATE_EQUAL_ROWS") != std::string::npos);

  auto big = sweep("core_periphery", {}, ab_axes(0.05, 0.95, 0.1));
  std::string once = csv_text(big);
  std::istringstream in(once);
  auto back = read_csv(in);
  CHECK(back.cells.size() == big.cells.size());
  CHECK(csv_text(back) == once);
  for (std::size_t i = 0; i < big.cells.size(); ++i) {
    if (big.cells[i].status != CellStatus::Ok) continue;
    CHECK(back.cells[i].rho_star == big.cells[i].rho_star);
  }
}

TEST_CASE("file output errors") {
  auto g = sweep("homogeneous2", {}, ab_axes(0.2, 0.3, 0.1));
  CHECK(code_of([&] { emit_csv(g, "/nonexistent-dir/x.csv"); }) == ErrorCode::IoFailure);
  CHECK(code_of([&] { emit_heatmap(g, "/nonexistent-dir/x.svg"); }) == ErrorCode::IoFailure);
  CHECK(code_of([] { read_csv(std::string("/nonexistent-dir/x.csv")); }) == ErrorCode::IoFailure);
  auto line = sweep("homogeneousK", {{"a", 0.8}, {"b", 0.2}}, {AxisSpec{"K", 2, 5, 1}});
  CHECK(code_of([&] { emit_heatmap(line, "x.svg"); }) == ErrorCode::NotTwoDimensional);
}

TEST_CASE("heatmap rendering") {
  auto g = sweep("homogeneous2", {}, ab_axes(0.1, 0.9, 0.1));
  std::ostringstream a, b;
  write_heatmap(g, a);
  write_heatmap(g, b);
  CHECK(a.str() == b.str());
  const std::string svg = a.str();
  CHECK(svg.find("<svg") != std::string::npos);
  // One filled rectangle per evaluated cell plus the frame; the diagonal stays blank.
  std::size_t rects = 0;
  for (std::size_t at = 0; (at = svg.find("<rect", at)) != std::string::npos; ++at) ++rects;
  CHECK(rects == classify_regions(g).evaluated + 1);

  CHECK(heatmap_color(1.0, 0.5) == "#ffffff");
  CHECK(heatmap_color(std::exp(0.5), 0.5) == "#b2182b");
  CHECK(heatmap_color(std::exp(-0.5), 0.5) == "#2166ac");

  // An all-ASE grid: every filled cell is on the warm side (red >= blue).
  auto warm = sweep("homogeneous2", {}, {AxisSpec{"a", 0.6, 0.9, 0.1}, AxisSpec{"b", 0.5, 0.55, 0.05}});
  for (const auto& c : warm.cells) REQUIRE(c.verdict == Verdict::AsePreferred);
  std::ostringstream w;
  write_heatmap(warm, w);
  const std::string ws = w.str();
  std::size_t pos = 0, fills = 0;
  while ((pos = ws.find("fill=\"#", pos)) != std::string::npos) {
    const std::string hex = ws.substr(pos + 7, 6);
    pos += 7;
    if (hex == "ffffff") continue;
    const int r = std::stoi(hex.substr(0, 2), nullptr, 16);
    const int bl = std::stoi(hex.substr(4, 2), nullptr, 16);
    CHECK(r > bl);
    ++fills;
  }
  CHECK(fills == warm.cells.size());
}

TEST_CASE("model JSON round trip") {
  auto m = core_periphery_model(0.7, 0.2, 0.25);
  auto j = to_json(m);
  auto back = model_from_json(j);
  CHECK(back.B() == m.B());
  CHECK(back.Pi() == m.Pi());
  CHECK(code_of([] { model_from_json(nlohmann::json::parse(R"({"B": 3})")); }) == ErrorCode::IoFailure);
  auto rep = to_json(rho_star_numeric(m));
  CHECK(rep.contains("rho_star"));
  CHECK(rep["verdict"].is_string());
}

TEST_CASE("JSON config: command-line values win") {
  const auto path = std::filesystem::temp_directory_path() / "rhostar_config_test.json";
  {
    std::ofstream f(path);
    f << R"({"sweep": {"family": "core_periphery", "step": 0.05, "axis": ["a:0.1:0.5:0.1", "b:0.1:0.5:0.1"]}})";
  }
  CLI::App app;
  app.config_formatter(std::make_shared<rhostar::cli::JsonConfig>());
  app.set_config("--config");
  auto* sub = app.add_subcommand("sweep");
  std::string family = "homogeneous2";
  double step = 0.01;
  std::vector<std::string> axes;
  sub->add_option("--family", family);
  sub->add_option("--step", step);
  sub->add_option("--axis", axes);
  const std::string cfg = path.string();
  std::vector<std::string> args{"prog", "--config", cfg, "sweep", "--step", "0.02"};
  std::vector<const char*> argv;
  for (const auto& s : args) argv.push_back(s.c_str());
  app.parse(static_cast<int>(argv.size()), argv.data());
  CHECK(family == "core_periphery");
  CHECK(step == 0.02);
  CHECK(axes.size() == 2);
  std::filesystem::remove(path);
}
