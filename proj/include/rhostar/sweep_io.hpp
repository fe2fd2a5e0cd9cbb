#ifndef RHOSTAR_SWEEP_IO_HPP
#define RHOSTAR_SWEEP_IO_HPP

#include "rhostar/sweep.hpp"

#include <array>
#include <iosfwd>
#include <string>

namespace rhostar {

/// Header: axis names, rho_star, verdict, t_star_ase, t_star_lse, status, reason.
/// Reals use 17 significant digits; missing values are empty fields.
void write_csv(const SweepGrid& grid, std::ostream& out);
/// Throws IoFailure.
void emit_csv(const SweepGrid& grid, const std::string& path);

/// Inverse of write_csv. Family and fixed bindings are not stored in the file,
/// so they come back empty; axes are rebuilt from the distinct values seen.
SweepGrid read_csv(std::istream& in);
SweepGrid read_csv(const std::string& path);

/// Heatmap layout and colours. Cells with rho* = 1 are white; rho* > 1 moves
/// toward kWarm and rho* < 1 toward kCool, linearly in |log rho*| scaled by the
/// largest |log rho*| on the grid.
namespace heatmap {
inline constexpr int kMargin = 60;
inline constexpr int kPlotSize = 600;
inline constexpr std::array<int, 3> kWarm{178, 24, 43};
inline constexpr std::array<int, 3> kCool{33, 102, 172};
}  // namespace heatmap

/// Colour of a cell as "#rrggbb" for a given grid-wide scale max|log rho*|.
std::string heatmap_color(double rho_star, double log_scale);

/// Writes an SVG heatmap of a 2-D grid; excluded cells are left unfilled.
void write_heatmap(const SweepGrid& grid, std::ostream& out);
/// Throws NotTwoDimensional or IoFailure.
void emit_heatmap(const SweepGrid& grid, const std::string& path);

}  // namespace rhostar

#endif
