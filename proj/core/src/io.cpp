#include "psurf/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "psurf/tps.hpp"
#include "psurf/version.hpp"

namespace psurf {

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

namespace {

std::string fmt(double v) { return format_double(v); }

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view cell, double& out) {
  cell = trim(cell);
  if (cell.empty()) return false;
  const auto* begin = cell.data();
  const auto* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(line.substr(start));
      break;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return cells;
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream f(p, std::ios::binary);
  if (!f) fail(errc::io, "cannot open " + p.string() + " for writing");
  return f;
}

void finish(std::ofstream& f, const std::filesystem::path& p) {
  f.flush();
  if (!f) fail(errc::io, "write failed for " + p.string());
}

}  // namespace

PointCloud3 read_cloud_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(errc::io, "cannot open " + path);
  std::vector<std::array<double, 4>> rows;
  int ncol = 0;
  std::string line;
  int lineno = 0;
  bool first = true;
  while (std::getline(f, line)) {
    ++lineno;
    const auto cells = split_csv(line);
    if (first) {
      first = false;
      bool all_numeric = !cells.empty();
      double tmp;
      for (const auto& c : cells)
        if (!parse_double(c, tmp)) {
          all_numeric = false;
          break;
        }
      if (!all_numeric) continue;  // header row
    }
    if (cells.size() != 3 && cells.size() != 4)
      fail(errc::parse, path + ":" + std::to_string(lineno) +
                            ": expected 3 or 4 columns, got " +
                            std::to_string(cells.size()));
    if (ncol == 0) ncol = static_cast<int>(cells.size());
    if (static_cast<int>(cells.size()) != ncol)
      fail(errc::parse, path + ":" + std::to_string(lineno) +
                            ": mixed 3- and 4-column rows");
    std::array<double, 4> row{0, 0, 0, 0};
    for (std::size_t c = 0; c < cells.size(); ++c)
      if (!parse_double(cells[c], row[c]))
        fail(errc::parse, path + ":" + std::to_string(lineno) +
                              ": cannot parse cell " + std::to_string(c + 1));
    rows.push_back(row);
  }
  PointCloud3 cloud;
  cloud.points.resize(static_cast<Eigen::Index>(rows.size()), 3);
  if (ncol == 4) cloud.scalars.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    cloud.points.row(static_cast<Eigen::Index>(i)) << rows[i][0], rows[i][1],
        rows[i][2];
    if (ncol == 4) cloud.scalars(static_cast<Eigen::Index>(i)) = rows[i][3];
  }
  validate_cloud(cloud);
  return cloud;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string fnv1a64_hex(std::string_view bytes) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

std::string fnv1a64_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(errc::io, "cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return fnv1a64_hex(ss.str());
}

namespace {

void write_params_csv(const std::filesystem::path& p, const FitResult& r) {
  auto f = open_out(p);
  f << "index,t1,t2,proj_distance\n";
  for (Eigen::Index i = 0; i < r.params.rows(); ++i)
    f << i << ',' << fmt(r.params(i, 0)) << ',' << fmt(r.params(i, 1)) << ','
      << fmt(r.distances(i)) << '\n';
  finish(f, p);
}

void write_surface_csv(const std::filesystem::path& p, const FitResult& r,
                       int n_grid) {
  const SurfaceModel world = r.model.translated(r.centroid);
  auto f = open_out(p);
  f << "t1,t2,x,y,z\n";
  for (int a = 0; a < n_grid; ++a) {
    const double t1 = static_cast<double>(a) / (n_grid - 1);
    for (int b = 0; b < n_grid; ++b) {
      const double t2 = static_cast<double>(b) / (n_grid - 1);
      const Eigen::Vector3d x = eval_surface(world, {t1, t2});
      f << fmt(t1) << ',' << fmt(t2) << ',' << fmt(x(0)) << ',' << fmt(x(1))
        << ',' << fmt(x(2)) << '\n';
    }
  }
  finish(f, p);
}

void write_report(const std::filesystem::path& p, const FitResult& r,
                  const RunManifest& m) {
  auto f = open_out(p);
  f << "tool_version: " << m.tool_version << '\n';
  std::time_t now = std::time(nullptr);
  char ts[32];
  std::strftime(ts, sizeof(ts), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  f << "timestamp: " << ts << '\n';
  f << "input_digest: " << (m.input_digest.empty() ? "-" : m.input_digest)
    << '\n';
  f << "points: " << r.params.rows() << '\n';
  f << "seed: " << m.fit.seed << '\n';
  f << "r: " << fmt(m.fit.r) << '\n';
  f << "h: " << fmt(m.fit.h) << '\n';
  f << "n_grid: " << m.fit.n_grid << '\n';
  f << "n_knots: " << m.fit.n_knots << '\n';
  f << "lambda_policy: "
    << (m.fit.lambda ? "fixed " + fmt(*m.fit.lambda) : std::string("gcv"))
    << '\n';
  f << "max_iter: " << m.fit.max_iter << '\n';
  f << "thres: " << fmt(m.fit.thres) << '\n';
  f << "k_fallback: " << m.fit.k_fallback << '\n';
  f << "subsample: "
    << (m.fit.subsample ? std::to_string(*m.fit.subsample) : std::string("-"))
    << '\n';
  if (m.flatten) {
    f << "flatten_g: " << m.flatten->g << '\n';
    f << "flatten_smooth_r: " << fmt(m.flatten->smooth_r) << '\n';
    f << "flatten_smooth_h: " << fmt(m.flatten->smooth_h) << '\n';
    f << "flatten_min_support: " << m.flatten->min_support << '\n';
  }
  f << "iterations_used: " << r.report.iterations_used << '\n';
  f << "converged: " << (r.report.converged ? "true" : "false") << '\n';
  f << "final_err: " << fmt(r.report.final_err) << '\n';
  f << "err_trace:";
  for (double e : r.report.err_trace) f << ' ' << fmt(e);
  f << '\n';
  f << "lambda: " << fmt(r.model.lambda) << '\n';
  f << "boundary_fraction: " << fmt(r.boundary_fraction) << '\n';
  f << "final_surface_update: " << fmt(r.final_surface_update) << '\n';
  f << "centroid: " << fmt(r.centroid(0)) << ' ' << fmt(r.centroid(1)) << ' '
    << fmt(r.centroid(2)) << '\n';
  finish(f, p);
}

void write_map_csv(const std::filesystem::path& p, const ScalarMap2D& map) {
  const std::vector<double> raster = map_to_image(map);
  auto f = open_out(p);
  for (int row = 0; row < map.g; ++row) {
    for (int col = 0; col < map.g; ++col) {
      if (col) f << ',';
      const double v = raster[static_cast<std::size_t>(row) * map.g + col];
      if (std::isnan(v))
        f << "NA";
      else
        f << fmt(v);
    }
    f << '\n';
  }
  finish(f, p);
}

void write_map_pgm(const std::filesystem::path& p, const ScalarMap2D& map) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (int iy = 0; iy < map.g; ++iy)
    for (int ix = 0; ix < map.g; ++ix)
      if (!map.mask(iy, ix)) {
        lo = std::min(lo, map.values(iy, ix));
        hi = std::max(hi, map.values(iy, ix));
      }
  const double range = hi - lo;
  const std::vector<double> raster = map_to_image(map);
  auto f = open_out(p);
  f << "P2\n" << map.g << ' ' << map.g << "\n255\n";
  for (int row = 0; row < map.g; ++row) {
    for (int col = 0; col < map.g; ++col) {
      if (col) f << ' ';
      const double v = raster[static_cast<std::size_t>(row) * map.g + col];
      if (std::isnan(v)) {
        f << 0;
      } else if (range > 0.0) {
        f << std::llround(255.0 * (v - lo) / range);
      } else {
        f << 255;  // constant unmasked map: full intensity, 0 stays = masked
      }
    }
    f << '\n';
  }
  finish(f, p);
}

}  // namespace

void write_outputs(const FitResult& result, const ScalarMap2D* map,
                   const std::string& out_dir, const RunManifest& manifest) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) fail(errc::io, "cannot create directory " + out_dir);
  const std::filesystem::path dir(out_dir);
  write_params_csv(dir / "params.csv", result);
  write_surface_csv(dir / "surface.csv", result, manifest.fit.n_grid);
  write_report(dir / "report.txt", result, manifest);
  if (map) {
    write_map_csv(dir / "map.csv", *map);
    write_map_pgm(dir / "map.pgm", *map);
  }
}

ScalarMap2D read_map_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(errc::io, "cannot open " + path);
  std::vector<double> raster;
  std::string line;
  int lineno = 0;
  int width = 0;
  while (std::getline(f, line)) {
    ++lineno;
    const auto cells = split_csv(line);
    if (width == 0) width = static_cast<int>(cells.size());
    if (static_cast<int>(cells.size()) != width)
      fail(errc::parse,
           path + ":" + std::to_string(lineno) + ": ragged map row");
    for (const auto& c : cells) {
      const auto t = trim(c);
      if (t == "NA") {
        raster.push_back(std::numeric_limits<double>::quiet_NaN());
        continue;
      }
      double v;
      if (!parse_double(t, v))
        fail(errc::parse,
             path + ":" + std::to_string(lineno) + ": bad map cell");
      raster.push_back(v);
    }
  }
  if (width == 0 || lineno != width)
    fail(errc::parse, path + ": map must be square, got " +
                          std::to_string(lineno) + "x" + std::to_string(width));
  return image_to_map(raster, width);
}

}  // namespace psurf
