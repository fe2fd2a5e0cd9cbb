#include "rhostar/sweep_io.hpp"

#include "rhostar/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <vector>

namespace rhostar {

namespace {

constexpr const char* kTrailing[] = {"rho_star", "verdict", "t_star_ase", "t_star_lse", "status", "reason"};

std::string real(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_real(const std::string& s) {
  if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw Error(ErrorCode::IoFailure, "bad numeric field '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

Verdict parse_verdict(const std::string& s) {
  for (Verdict v : {Verdict::AsePreferred, Verdict::LsePreferred, Verdict::Equal})
    if (verdict_name(v) == s) return v;
  throw Error(ErrorCode::IoFailure, "unknown verdict '" + s + "'");
}

std::string hex(const std::array<int, 3>& c) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c[0], c[1], c[2]);
  return buf;
}

}  // namespace

void write_csv(const SweepGrid& grid, std::ostream& out) {
  for (const auto& a : grid.axes) out << a.name << ',';
  for (std::size_t i = 0; i < 6; ++i) out << kTrailing[i] << (i + 1 < 6 ? ',' : '\n');
  for (const auto& c : grid.cells) {
    for (double p : c.params) out << real(p) << ',';
    const bool ok = c.status == CellStatus::Ok;
    out << (ok ? real(c.rho_star) : "") << ',' << (ok ? verdict_name(c.verdict) : "") << ','
        << (ok ? real(c.t_star_ase) : "") << ',' << (ok ? real(c.t_star_lse) : "") << ',' << cell_status_name(c.status)
        << ',' << c.reason << '\n';
  }
}

void emit_csv(const SweepGrid& grid, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoFailure, "cannot open '" + path + "' for writing");
  write_csv(grid, f);
  f.flush();
  if (!f) throw Error(ErrorCode::IoFailure, "write to '" + path + "' failed");
}

SweepGrid read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::IoFailure, "empty CSV");
  const auto header = split(line);
  if (header.size() < 7) throw Error(ErrorCode::IoFailure, "CSV header too short");
  const std::size_t naxes = header.size() - 6;
  for (std::size_t i = 0; i < 6; ++i)
    if (header[naxes + i] != kTrailing[i]) throw Error(ErrorCode::IoFailure, "unexpected CSV header");

  SweepGrid grid;
  std::vector<std::set<double>> seen(naxes);
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto f = split(line);
    if (f.size() != header.size()) throw Error(ErrorCode::IoFailure, "CSV row has the wrong number of fields");
    SweepCell c;
    for (std::size_t a = 0; a < naxes; ++a) {
      c.params.push_back(parse_real(f[a]));
      seen[a].insert(c.params.back());
    }
    c.status = f[naxes + 4] == "OK" ? CellStatus::Ok : CellStatus::Excluded;
    if (c.status == CellStatus::Excluded && f[naxes + 4] != "EXCLUDED")
      throw Error(ErrorCode::IoFailure, "unknown status '" + f[naxes + 4] + "'");
    c.rho_star = parse_real(f[naxes]);
    c.verdict = c.status == CellStatus::Ok ? parse_verdict(f[naxes + 1]) : Verdict::Equal;
    c.t_star_ase = parse_real(f[naxes + 2]);
    c.t_star_lse = parse_real(f[naxes + 3]);
    c.reason = f[naxes + 5];
    c.discrepancy = std::numeric_limits<double>::quiet_NaN();
    grid.cells.push_back(std::move(c));
  }
  for (std::size_t a = 0; a < naxes; ++a) {
    AxisSpec s;
    s.name = header[a];
    if (seen[a].empty()) throw Error(ErrorCode::IoFailure, "CSV has no rows");
    s.lo = *seen[a].begin();
    s.hi = *seen[a].rbegin();
    s.step = seen[a].size() > 1 ? (s.hi - s.lo) / static_cast<double>(seen[a].size() - 1) : 1.0;
    grid.axes.push_back(s);
  }
  return grid;
}

SweepGrid read_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoFailure, "cannot open '" + path + "'");
  return read_csv(f);
}

std::string heatmap_color(double rho_star, double log_scale) {
  const double l = std::log(rho_star);
  const double s = log_scale > 0.0 ? std::min(1.0, std::abs(l) / log_scale) : 0.0;
  const auto& target = l >= 0.0 ? heatmap::kWarm : heatmap::kCool;
  std::array<int, 3> c{};
  for (int k = 0; k < 3; ++k) c[k] = static_cast<int>(std::lround(255.0 + s * (target[k] - 255.0)));
  return hex(c);
}

void write_heatmap(const SweepGrid& grid, std::ostream& out) {
  if (grid.axes.size() != 2) throw Error(ErrorCode::NotTwoDimensional, "heatmaps need a 2-D grid");
  const auto shape = grid.shape();
  const std::size_t nx = shape[0];
  const std::size_t ny = shape[1];
  const double cw = static_cast<double>(heatmap::kPlotSize) / static_cast<double>(nx);
  const double ch = static_cast<double>(heatmap::kPlotSize) / static_cast<double>(ny);
  double scale = 0.0;
  for (const auto& c : grid.cells)
    if (c.status == CellStatus::Ok) scale = std::max(scale, std::abs(std::log(c.rho_star)));

  const int size = heatmap::kPlotSize + 2 * heatmap::kMargin;
  char buf[256];
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\" viewBox=\"0 0 "
      << size << ' ' << size << "\">\n";
  out << "<title>rho* " << grid.family << "</title>\n";
  out << "<g shape-rendering=\"crispEdges\">\n";
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      const SweepCell& c = grid.cells[i * ny + j];
      if (c.status == CellStatus::Excluded) continue;
      const double x = heatmap::kMargin + static_cast<double>(i) * cw;
      const double y = heatmap::kMargin + static_cast<double>(ny - 1 - j) * ch;
      std::snprintf(buf, sizeof buf, "<rect x=\"%.3f\" y=\"%.3f\" width=\"%.3f\" height=\"%.3f\" fill=\"%s\"/>\n", x, y,
                    cw, ch, heatmap_color(c.rho_star, scale).c_str());
      out << buf;
    }
  }
  out << "</g>\n";
  std::snprintf(buf, sizeof buf, "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" fill=\"none\" stroke=\"#000000\"/>\n",
                heatmap::kMargin, heatmap::kMargin, heatmap::kPlotSize, heatmap::kPlotSize);
  out << buf;
  const auto& ax = grid.axes;
  const int bottom = heatmap::kMargin + heatmap::kPlotSize;
  std::snprintf(buf, sizeof buf, "<text x=\"%d\" y=\"%d\" font-size=\"16\" text-anchor=\"middle\">%s</text>\n",
                heatmap::kMargin + heatmap::kPlotSize / 2, bottom + 40, ax[0].name.c_str());
  out << buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"%d\" y=\"%d\" font-size=\"16\" text-anchor=\"middle\" transform=\"rotate(-90 %d %d)\">%s</text>\n",
                heatmap::kMargin - 35, heatmap::kMargin + heatmap::kPlotSize / 2, heatmap::kMargin - 35,
                heatmap::kMargin + heatmap::kPlotSize / 2, ax[1].name.c_str());
  out << buf;
  const std::string lo0 = real(ax[0].value(0)), hi0 = real(ax[0].value(nx - 1));
  const std::string lo1 = real(ax[1].value(0)), hi1 = real(ax[1].value(ny - 1));
  std::snprintf(buf, sizeof buf, "<text x=\"%d\" y=\"%d\" font-size=\"12\">%s</text>\n", heatmap::kMargin, bottom + 16,
                lo0.c_str());
  out << buf;
  std::snprintf(buf, sizeof buf, "<text x=\"%d\" y=\"%d\" font-size=\"12\" text-anchor=\"end\">%s</text>\n",
                bottom, bottom + 16, hi0.c_str());
  out << buf;
  std::snprintf(buf, sizeof buf, "<text x=\"%d\" y=\"%d\" font-size=\"12\" text-anchor=\"end\">%s</text>\n",
                heatmap::kMargin - 4, bottom, lo1.c_str());
  out << buf;
  std::snprintf(buf, sizeof buf, "<text x=\"%d\" y=\"%d\" font-size=\"12\" text-anchor=\"end\">%s</text>\n",
                heatmap::kMargin - 4, heatmap::kMargin + 12, hi1.c_str());
  out << buf;
  std::snprintf(buf, sizeof buf, "<text x=\"%d\" y=\"%d\" font-size=\"12\">max |log rho*| = %.6g</text>\n",
                heatmap::kMargin, heatmap::kMargin - 12, scale);
  out << buf;
  out << "</svg>\n";
}

void emit_heatmap(const SweepGrid& grid, const std::string& path) {
  if (grid.axes.size() != 2) throw Error(ErrorCode::NotTwoDimensional, "heatmaps need a 2-D grid");
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoFailure, "cannot open '" + path + "' for writing");
  write_heatmap(grid, f);
  f.flush();
  if (!f) throw Error(ErrorCode::IoFailure, "write to '" + path + "' failed");
}

}  // namespace rhostar
