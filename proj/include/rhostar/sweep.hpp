#ifndef RHOSTAR_SWEEP_HPP
#define RHOSTAR_SWEEP_HPP

#include "rhostar/chernoff.hpp"

#include <array>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rhostar {

/// Inclusive arithmetic range lo, lo + step, ..., <= hi.
struct AxisSpec {
  std::string name;
  double lo = 0.01;
  double hi = 0.99;
  double step = 0.01;

  std::size_t count() const;
  double value(std::size_t i) const;
};

enum class CellStatus { Ok, Excluded };

struct SweepCell {
  std::vector<double> params;  // one entry per axis
  CellStatus status = CellStatus::Ok;
  double rho_star = 0.0;
  Verdict verdict = Verdict::Equal;
  /// NaN when the evaluation path does not produce an optimizer location.
  double t_star_ase = 0.0;
  double t_star_lse = 0.0;
  std::string reason;  // error code name for excluded cells
  bool multimodal = false;
  /// |closed form - numeric| when cross-checked, else NaN.
  double discrepancy = 0.0;
};

struct SweepGrid {
  std::string family;
  std::vector<AxisSpec> axes;
  std::map<std::string, double> fixed;
  std::vector<SweepCell> cells;  // row-major: last axis varies fastest
  bool cross_checked = false;
  double max_discrepancy = 0.0;

  std::vector<std::size_t> shape() const;
  std::size_t index(const std::vector<std::size_t>& coords) const;
  std::vector<std::size_t> coords(std::size_t index) const;
  /// Axis position by name, or -1.
  int axis(const std::string& name) const;
};

struct FamilyInfo {
  std::string name;
  std::vector<std::string> parameters;
  std::map<std::string, double> defaults;
  bool closed_form = false;
};

/// homogeneous2, core_periphery, rank1, poly_p, full_rank3, homogeneousK.
const std::vector<FamilyInfo>& families();
/// Throws UnknownFamily.
const FamilyInfo& family_info(const std::string& family);

enum class EvalMode { Default, Numeric, CrossCheck };

/// Evaluates one parameter point. Model errors become an excluded cell.
SweepCell evaluate_cell(const std::string& family, const std::map<std::string, double>& params,
                        EvalMode mode = EvalMode::Default);

/// Builds the two-or-more-block model for a family point (numeric route).
BlockModel family_model(const std::string& family, const std::map<std::string, double>& params);

struct SweepOptions {
  bool cross_check = false;
  /// 0 picks RHOSTAR_THREADS or the hardware concurrency.
  unsigned threads = 0;
  EvalMode mode = EvalMode::Default;
};

/// Every parameter of the family must be bound either by an axis or in
/// `fixed` (family defaults fill the rest).
SweepGrid sweep(const std::string& family, const std::map<std::string, double>& fixed, const std::vector<AxisSpec>& axes,
                const SweepOptions& options = {});

/// Worker count from RHOSTAR_THREADS, falling back to hardware concurrency.
unsigned default_thread_count();

struct RegionSummary {
  std::array<std::size_t, 3> counts{};  // indexed by Verdict
  std::array<double, 3> fractions{};
  std::array<std::size_t, 3> components{};
  std::size_t excluded = 0;
  std::size_t evaluated = 0;
};

/// Components use face adjacency (4-neighbour in 2-D).
RegionSummary classify_regions(const SweepGrid& grid);

using CellPredicate = std::function<bool(const SweepCell&)>;

/// Fraction of non-excluded cells with `verdict` (and `predicate`, when given).
double region_measure(const SweepGrid& grid, Verdict verdict, const CellPredicate& predicate = {});

/// Parses "x<y" or "x>y" between axis names or numeric literals.
CellPredicate parse_cell_predicate(const SweepGrid& grid, const std::string& text);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};
using Polyline = std::vector<Point2>;

struct LevelSetOptions {
  /// Re-evaluates the family along each crossed edge and bisects.
  bool refine = true;
  double refine_tolerance = 1e-13;
};

/// Marching-squares contour rho_star = level on a 2-D grid; coordinates
/// are (first axis, second axis). Throws EmptyLevelSet or NotTwoDimensional.
std::vector<Polyline> level_set(const SweepGrid& grid, double level, const LevelSetOptions& options = {});

/// 2-D sub-grid with `axis` pinned to the grid value nearest `value`.
SweepGrid slice(const SweepGrid& grid, const std::string& axis, double value);

struct RangeProjection {
  double x = 0.0;
  double y = 0.0;
  bool empty = true;
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
};

/// For a 3-D grid: per (x, y) over the other two axes, the span of `axis`
/// values whose cells carry `verdict`.
std::vector<RangeProjection> project_range(const SweepGrid& grid, const std::string& axis, Verdict verdict);

std::string_view cell_status_name(CellStatus s);

}  // namespace rhostar

#endif
