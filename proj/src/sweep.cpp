#include "rhostar/sweep.hpp"

#include "rhostar/closed_forms.hpp"
#include "rhostar/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <limits>
#include <thread>
#include <unordered_map>

namespace rhostar {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double snap(double v) { return std::round(v * 1e12) / 1e12; }

double get(const std::map<std::string, double>& p, const std::string& key) {
  const auto it = p.find(key);
  if (it == p.end()) throw Error(ErrorCode::InvalidArgument, "missing parameter '" + key + "'");
  return it->second;
}

int get_int(const std::map<std::string, double>& p, const std::string& key) {
  const double v = get(p, key);
  if (v != std::floor(v) || v < 1 || v > 1e6) throw Error(ErrorCode::InvalidArgument, key + " must be a positive integer");
  return static_cast<int>(v);
}

struct ClosedValue {
  double rho;
  double t_ase;
  double t_lse;
};

bool degenerate(const std::string& f, const std::map<std::string, double>& p) {
  if (f == "homogeneous2" || f == "core_periphery" || f == "homogeneousK") return get(p, "a") == get(p, "b");
  if (f == "rank1") return get(p, "p") == get(p, "q");
  if (f == "poly_p") return get(p, "p") == std::pow(get(p, "p"), get(p, "gamma"));
  if (f == "full_rank3") return get(p, "a") == get(p, "b") && get(p, "b") == get(p, "c");
  return false;
}

ClosedValue closed_form(const std::string& f, const std::map<std::string, double>& p) {
  if (f == "homogeneous2") return {rho_star_homogeneous2(get(p, "a"), get(p, "b")).rho_star, 0.5, 0.5};
  if (f == "homogeneousK") return {rho_star_homogeneousK(get(p, "a"), get(p, "b"), get_int(p, "K")).rho_star, 0.5, 0.5};
  if (f == "rank1") return {rho_star_rank1(get(p, "p"), get(p, "q"), get(p, "pi1")), kNaN, kNaN};
  if (f == "poly_p") {
    const double pp = get(p, "p");
    return {rho_star_rank1(pp, std::pow(pp, get(p, "gamma")), get(p, "pi1")), kNaN, kNaN};
  }
  throw Error(ErrorCode::InvalidArgument, "family '" + f + "' has no closed form");
}

std::vector<std::size_t> strides(const std::vector<std::size_t>& shape) {
  std::vector<std::size_t> s(shape.size(), 1);
  for (std::size_t i = shape.size(); i-- > 1;) s[i - 1] = s[i] * shape[i];
  return s;
}

std::map<std::string, double> point_params(const SweepGrid& grid, const std::vector<double>& values) {
  std::map<std::string, double> p = grid.fixed;
  for (std::size_t a = 0; a < grid.axes.size(); ++a) p[grid.axes[a].name] = values[a];
  return p;
}

}  // namespace

std::size_t AxisSpec::count() const {
  if (!(step > 0.0) || !(hi >= lo) || !std::isfinite(lo) || !std::isfinite(hi))
    throw Error(ErrorCode::InvalidArgument, "axis '" + name + "' needs lo <= hi and step > 0");
  return static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
}

double AxisSpec::value(std::size_t i) const { return snap(lo + static_cast<double>(i) * step); }

std::vector<std::size_t> SweepGrid::shape() const {
  std::vector<std::size_t> s;
  for (const auto& a : axes) s.push_back(a.count());
  return s;
}

std::size_t SweepGrid::index(const std::vector<std::size_t>& c) const {
  const auto st = strides(shape());
  std::size_t idx = 0;
  for (std::size_t i = 0; i < c.size(); ++i) idx += c[i] * st[i];
  return idx;
}

std::vector<std::size_t> SweepGrid::coords(std::size_t idx) const {
  const auto sh = shape();
  std::vector<std::size_t> c(sh.size());
  for (std::size_t i = sh.size(); i-- > 0;) {
    c[i] = idx % sh[i];
    idx /= sh[i];
  }
  return c;
}

int SweepGrid::axis(const std::string& name) const {
  for (std::size_t i = 0; i < axes.size(); ++i)
    if (axes[i].name == name) return static_cast<int>(i);
  return -1;
}

const std::vector<FamilyInfo>& families() {
  static const std::vector<FamilyInfo> list = {
      {"homogeneous2", {"a", "b"}, {}, true},
      {"core_periphery", {"a", "b", "pi1"}, {{"pi1", 0.5}}, false},
      {"rank1", {"p", "q", "pi1"}, {{"pi1", 0.5}}, true},
      {"poly_p", {"p", "gamma", "pi1"}, {{"gamma", 7.0}, {"pi1", 0.5}}, true},
      {"full_rank3", {"a", "b", "c", "pi1"}, {{"pi1", 0.5}}, false},
      {"homogeneousK", {"a", "b", "K"}, {{"K", 3.0}}, true},
  };
  return list;
}

const FamilyInfo& family_info(const std::string& family) {
  for (const auto& f : families())
    if (f.name == family) return f;
  throw Error(ErrorCode::UnknownFamily, "unknown family '" + family + "'");
}

BlockModel family_model(const std::string& f, const std::map<std::string, double>& p) {
  family_info(f);
  if (f == "homogeneous2") return homogeneous_model(2, get(p, "a"), get(p, "b"));
  if (f == "homogeneousK") return homogeneous_model(get_int(p, "K"), get(p, "a"), get(p, "b"));
  if (f == "core_periphery") return core_periphery_model(get(p, "a"), get(p, "b"), get(p, "pi1"));
  if (f == "rank1") return rank_one_model(get(p, "p"), get(p, "q"), get(p, "pi1"));
  if (f == "poly_p") {
    const double pp = get(p, "p");
    return rank_one_model(pp, std::pow(pp, get(p, "gamma")), get(p, "pi1"));
  }
  return two_block_model(get(p, "a"), get(p, "b"), get(p, "c"), get(p, "pi1"));
}

SweepCell evaluate_cell(const std::string& family, const std::map<std::string, double>& params, EvalMode mode) {
  const FamilyInfo& info = family_info(family);
  std::map<std::string, double> p = info.defaults;
  for (const auto& [k, v] : params) p[k] = v;

  SweepCell cell;
  cell.discrepancy = kNaN;
  try {
    if (degenerate(family, p)) throw Error(ErrorCode::DegenerateEqualRows, "cell lies on the equal-rows locus");
    if (family == "homogeneousK" && get(p, "b") > get(p, "a"))
      throw Error(ErrorCode::ParameterOrder, "homogeneousK requires b < a");
    const bool use_closed = info.closed_form && mode != EvalMode::Numeric;
    const bool use_numeric = !info.closed_form || mode != EvalMode::Default;
    double numeric = kNaN;
    if (use_numeric) {
      const ChernoffReport r = rho_star_numeric(family_model(family, p));
      numeric = r.rho_star;
      cell.rho_star = r.rho_star;
      cell.t_star_ase = r.t_star_ase;
      cell.t_star_lse = r.t_star_lse;
      for (const auto& pr : r.pairs) cell.multimodal = cell.multimodal || pr.multimodal;
    }
    if (use_closed) {
      const ClosedValue cf = closed_form(family, p);
      cell.rho_star = cf.rho;
      cell.t_star_ase = cf.t_ase;
      cell.t_star_lse = cf.t_lse;
      if (use_numeric) cell.discrepancy = std::abs(cf.rho - numeric);
    }
    cell.verdict = verdict_for(cell.rho_star);
  } catch (const Error& e) {
    cell.status = CellStatus::Excluded;
    cell.reason = std::string(error_code_name(e.code()));
    cell.rho_star = kNaN;
    cell.t_star_ase = kNaN;
    cell.t_star_lse = kNaN;
    cell.verdict = Verdict::Equal;
  }
  return cell;
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("RHOSTAR_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

SweepGrid sweep(const std::string& family, const std::map<std::string, double>& fixed, const std::vector<AxisSpec>& axes,
                const SweepOptions& options) {
  const FamilyInfo& info = family_info(family);
  if (axes.empty()) throw Error(ErrorCode::InvalidArgument, "at least one axis is required");
  SweepGrid grid;
  grid.family = family;
  grid.axes = axes;
  grid.fixed = info.defaults;
  for (const auto& [k, v] : fixed) grid.fixed[k] = v;
  for (const auto& a : axes) {
    if (std::find(info.parameters.begin(), info.parameters.end(), a.name) == info.parameters.end())
      throw Error(ErrorCode::InvalidArgument, "family '" + family + "' has no parameter '" + a.name + "'");
    if (std::count_if(axes.begin(), axes.end(), [&](const AxisSpec& o) { return o.name == a.name; }) > 1)
      throw Error(ErrorCode::InvalidArgument, "axis '" + a.name + "' given twice");
    grid.fixed.erase(a.name);
  }
  for (const auto& name : info.parameters)
    if (grid.axis(name) < 0 && !grid.fixed.count(name))
      throw Error(ErrorCode::InvalidArgument, "parameter '" + name + "' is neither an axis nor fixed");
  for (auto it = grid.fixed.begin(); it != grid.fixed.end();) {
    if (std::find(info.parameters.begin(), info.parameters.end(), it->first) == info.parameters.end())
      throw Error(ErrorCode::InvalidArgument, "family '" + family + "' has no parameter '" + it->first + "'");
    ++it;
  }

  std::size_t total = 1;
  for (const auto& a : axes) total *= a.count();
  grid.cells.resize(total);
  const EvalMode mode = options.cross_check ? EvalMode::CrossCheck : options.mode;
  grid.cross_checked = mode == EvalMode::CrossCheck;

  auto work = [&](std::size_t idx) {
    const auto c = grid.coords(idx);
    std::vector<double> values(axes.size());
    for (std::size_t a = 0; a < axes.size(); ++a) values[a] = axes[a].value(c[a]);
    SweepCell cell = evaluate_cell(family, point_params(grid, values), mode);
    cell.params = std::move(values);
    grid.cells[idx] = std::move(cell);
  };

  const unsigned threads =
      static_cast<unsigned>(std::min<std::size_t>(options.threads ? options.threads : default_thread_count(), total));
  if (threads <= 1) {
    for (std::size_t i = 0; i < total; ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t i = next++; i < total; i = next++) work(i);
        } catch (...) {
          errors[t] = std::current_exception();
          next = total;
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  for (const auto& cell : grid.cells)
    if (cell.status == CellStatus::Ok && !std::isnan(cell.discrepancy))
      grid.max_discrepancy = std::max(grid.max_discrepancy, cell.discrepancy);
  return grid;
}

RegionSummary classify_regions(const SweepGrid& grid) {
  RegionSummary s;
  const auto shape = grid.shape();
  const auto st = strides(shape);
  const std::size_t total = grid.cells.size();
  std::vector<char> seen(total, 0);
  for (std::size_t i = 0; i < total; ++i) {
    const SweepCell& cell = grid.cells[i];
    if (cell.status == CellStatus::Excluded) {
      ++s.excluded;
      continue;
    }
    ++s.evaluated;
    const auto v = static_cast<std::size_t>(cell.verdict);
    ++s.counts[v];
    if (seen[i]) continue;
    ++s.components[v];
    std::deque<std::size_t> queue{i};
    seen[i] = 1;
    while (!queue.empty()) {
      const std::size_t cur = queue.front();
      queue.pop_front();
      const auto c = grid.coords(cur);
      for (std::size_t a = 0; a < shape.size(); ++a) {
        for (int dir : {-1, 1}) {
          if ((dir < 0 && c[a] == 0) || (dir > 0 && c[a] + 1 >= shape[a])) continue;
          const std::size_t nb = dir < 0 ? cur - st[a] : cur + st[a];
          const SweepCell& other = grid.cells[nb];
          if (seen[nb] || other.status == CellStatus::Excluded || other.verdict != cell.verdict) continue;
          seen[nb] = 1;
          queue.push_back(nb);
        }
      }
    }
  }
  for (std::size_t v = 0; v < 3; ++v)
    s.fractions[v] = s.evaluated ? static_cast<double>(s.counts[v]) / static_cast<double>(s.evaluated) : 0.0;
  return s;
}

double region_measure(const SweepGrid& grid, Verdict verdict, const CellPredicate& predicate) {
  std::size_t evaluated = 0;
  std::size_t hit = 0;
  for (const auto& cell : grid.cells) {
    if (cell.status == CellStatus::Excluded) continue;
    ++evaluated;
    if (cell.verdict == verdict && (!predicate || predicate(cell))) ++hit;
  }
  return evaluated ? static_cast<double>(hit) / static_cast<double>(evaluated) : 0.0;
}

CellPredicate parse_cell_predicate(const SweepGrid& grid, const std::string& text) {
  std::string t;
  for (char ch : text)
    if (ch != ' ') t += ch;
  const auto pos = t.find_first_of("<>");
  if (pos == std::string::npos || pos == 0 || pos + 1 >= t.size())
    throw Error(ErrorCode::InvalidArgument, "predicate must look like 'a<b'");
  const bool less = t[pos] == '<';
  auto operand = [&](const std::string& s) -> std::function<double(const SweepCell&)> {
    const int ax = grid.axis(s);
    if (ax >= 0) return [ax](const SweepCell& c) { return c.params[static_cast<std::size_t>(ax)]; };
    const auto it = grid.fixed.find(s);
    if (it != grid.fixed.end()) {
      const double v = it->second;
      return [v](const SweepCell&) { return v; };
    }
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') throw Error(ErrorCode::InvalidArgument, "unknown predicate operand '" + s + "'");
    return [v](const SweepCell&) { return v; };
  };
  auto lhs = operand(t.substr(0, pos));
  auto rhs = operand(t.substr(pos + 1));
  return [lhs, rhs, less](const SweepCell& c) { return less ? lhs(c) < rhs(c) : lhs(c) > rhs(c); };
}

std::vector<Polyline> level_set(const SweepGrid& grid, double level, const LevelSetOptions& options) {
  if (grid.axes.size() != 2) throw Error(ErrorCode::NotTwoDimensional, "level sets need a 2-D grid");
  const auto shape = grid.shape();
  const std::size_t nx = shape[0];
  const std::size_t ny = shape[1];
  auto at = [&](std::size_t i, std::size_t j) -> const SweepCell& { return grid.cells[i * ny + j]; };
  auto value = [&](const SweepCell& c) { return c.rho_star - level; };

  std::unordered_map<std::size_t, Point2> edge_points;
  // Edge ids: 2*(i*ny+j) runs along x from (i,j); 2*(i*ny+j)+1 runs along y.
  auto edge_point = [&](std::size_t id) -> Point2 {
    if (auto it = edge_points.find(id); it != edge_points.end()) return it->second;
    const std::size_t base = id / 2;
    const std::size_t i = base / ny;
    const std::size_t j = base % ny;
    const bool along_x = id % 2 == 0;
    const SweepCell& c0 = at(i, j);
    const SweepCell& c1 = along_x ? at(i + 1, j) : at(i, j + 1);
    double f0 = value(c0);
    double f1 = value(c1);
    Point2 p0{c0.params[0], c0.params[1]};
    Point2 p1{c1.params[0], c1.params[1]};
    auto lerp = [](const Point2& a, const Point2& b, double s) { return Point2{a.x + s * (b.x - a.x), a.y + s * (b.y - a.y)}; };
    Point2 out = lerp(p0, p1, f0 / (f0 - f1));
    if (options.refine) {
      auto eval = [&](const Point2& q) -> std::optional<double> {
        std::map<std::string, double> params = grid.fixed;
        params[grid.axes[0].name] = q.x;
        params[grid.axes[1].name] = q.y;
        const SweepCell c = evaluate_cell(grid.family, params);
        if (c.status == CellStatus::Excluded) return std::nullopt;
        return c.rho_star - level;
      };
      Point2 lo = p0;
      Point2 hi = p1;
      bool ok = true;
      for (int it = 0; it < 200; ++it) {
        const Point2 mid = lerp(lo, hi, 0.5);
        const auto fm = eval(mid);
        if (!fm) {
          ok = false;
          break;
        }
        if (*fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((*fm >= 0.0) == (f0 >= 0.0)) {
          lo = mid;
          f0 = *fm;
        } else {
          hi = mid;
          f1 = *fm;
        }
        if (std::hypot(hi.x - lo.x, hi.y - lo.y) <= options.refine_tolerance) break;
      }
      if (ok) out = lerp(lo, hi, 0.5);
    }
    edge_points.emplace(id, out);
    return out;
  };

  std::vector<std::pair<std::size_t, std::size_t>> segments;
  for (std::size_t i = 0; i + 1 < nx; ++i) {
    for (std::size_t j = 0; j + 1 < ny; ++j) {
      const SweepCell* corner[4] = {&at(i, j), &at(i + 1, j), &at(i + 1, j + 1), &at(i, j + 1)};
      bool skip = false;
      for (auto* c : corner) skip = skip || c->status == CellStatus::Excluded;
      if (skip) continue;
      bool above[4];
      int mask = 0;
      for (int k = 0; k < 4; ++k) {
        above[k] = value(*corner[k]) >= 0.0;
        if (above[k]) mask |= 1 << k;
      }
      if (mask == 0 || mask == 15) continue;
      const std::size_t e[4] = {2 * (i * ny + j), 2 * ((i + 1) * ny + j) + 1, 2 * (i * ny + j + 1), 2 * (i * ny + j) + 1};
      std::vector<int> crossed;
      for (int k = 0; k < 4; ++k)
        if (above[k] != above[(k + 1) % 4]) crossed.push_back(k);
      if (crossed.size() == 2) {
        segments.emplace_back(e[crossed[0]], e[crossed[1]]);
        continue;
      }
      // Saddle: isolate the two corners whose side differs from the centre.
      double centre = 0.0;
      for (auto* c : corner) centre += value(*c);
      const bool centre_above = centre / 4.0 >= 0.0;
      for (int k = 0; k < 4; ++k) {
        if (above[k] == centre_above) continue;
        // Corner k touches edges k-1 and k.
        segments.emplace_back(e[(k + 3) % 4], e[k]);
      }
    }
  }
  if (segments.empty()) throw Error(ErrorCode::EmptyLevelSet, "no cell of the grid crosses the requested level");

  std::unordered_map<std::size_t, std::vector<std::size_t>> incident;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    incident[segments[s].first].push_back(s);
    incident[segments[s].second].push_back(s);
  }
  std::vector<char> used(segments.size(), 0);
  std::vector<Polyline> lines;
  auto walk = [&](std::size_t start_seg, std::size_t start_edge) {
    Polyline line{edge_point(start_edge)};
    std::size_t seg = start_seg;
    std::size_t edge = start_edge;
    while (true) {
      used[seg] = 1;
      edge = segments[seg].first == edge ? segments[seg].second : segments[seg].first;
      line.push_back(edge_point(edge));
      std::size_t next = segments.size();
      for (std::size_t cand : incident[edge])
        if (!used[cand]) {
          next = cand;
          break;
        }
      if (next == segments.size()) break;
      seg = next;
    }
    lines.push_back(std::move(line));
  };
  // Open chains first, starting at edges touched by only one segment.
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (used[s]) continue;
    for (std::size_t edge : {segments[s].first, segments[s].second}) {
      if (!used[s] && incident[edge].size() == 1) walk(s, edge);
    }
  }
  for (std::size_t s = 0; s < segments.size(); ++s)
    if (!used[s]) walk(s, segments[s].first);
  return lines;
}

SweepGrid slice(const SweepGrid& grid, const std::string& axis_name, double value) {
  const int ax = grid.axis(axis_name);
  if (ax < 0) throw Error(ErrorCode::InvalidArgument, "grid has no axis '" + axis_name + "'");
  const AxisSpec& spec = grid.axes[static_cast<std::size_t>(ax)];
  std::size_t best = 0;
  for (std::size_t i = 1; i < spec.count(); ++i)
    if (std::abs(spec.value(i) - value) < std::abs(spec.value(best) - value)) best = i;

  SweepGrid out;
  out.family = grid.family;
  out.fixed = grid.fixed;
  out.fixed[axis_name] = spec.value(best);
  out.cross_checked = grid.cross_checked;
  for (std::size_t a = 0; a < grid.axes.size(); ++a)
    if (static_cast<int>(a) != ax) out.axes.push_back(grid.axes[a]);
  for (std::size_t i = 0; i < grid.cells.size(); ++i) {
    if (grid.coords(i)[static_cast<std::size_t>(ax)] != best) continue;
    SweepCell c = grid.cells[i];
    c.params.erase(c.params.begin() + ax);
    if (!std::isnan(c.discrepancy)) out.max_discrepancy = std::max(out.max_discrepancy, c.discrepancy);
    out.cells.push_back(std::move(c));
  }
  return out;
}

std::vector<RangeProjection> project_range(const SweepGrid& grid, const std::string& axis_name, Verdict verdict) {
  if (grid.axes.size() != 3) throw Error(ErrorCode::InvalidArgument, "range projection needs a 3-D grid");
  const int ax = grid.axis(axis_name);
  if (ax < 0) throw Error(ErrorCode::InvalidArgument, "grid has no axis '" + axis_name + "'");
  std::vector<std::size_t> others;
  for (std::size_t a = 0; a < 3; ++a)
    if (static_cast<int>(a) != ax) others.push_back(a);
  const auto shape = grid.shape();
  std::vector<RangeProjection> out;
  for (std::size_t i = 0; i < shape[others[0]]; ++i) {
    for (std::size_t j = 0; j < shape[others[1]]; ++j) {
      RangeProjection r;
      r.x = grid.axes[others[0]].value(i);
      r.y = grid.axes[others[1]].value(j);
      for (std::size_t k = 0; k < shape[static_cast<std::size_t>(ax)]; ++k) {
        std::vector<std::size_t> c(3);
        c[others[0]] = i;
        c[others[1]] = j;
        c[static_cast<std::size_t>(ax)] = k;
        const SweepCell& cell = grid.cells[grid.index(c)];
        if (cell.status == CellStatus::Excluded || cell.verdict != verdict) continue;
        const double v = cell.params[static_cast<std::size_t>(ax)];
        if (r.empty) {
          r.lo = r.hi = v;
          r.empty = false;
        }
        r.lo = std::min(r.lo, v);
        r.hi = std::max(r.hi, v);
        ++r.count;
      }
      out.push_back(r);
    }
  }
  return out;
}

std::string_view cell_status_name(CellStatus s) { return s == CellStatus::Ok ? "OK" : "EXCLUDED"; }

}  // namespace rhostar
