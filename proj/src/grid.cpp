#include "nopt/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace nopt {

double DensityGrid::cell_volume() const {
  const QuadraticField& k = QuadraticField::get(d);
  return k.is_imaginary() ? 2 * h * h : h * h;
}

DensityGrid make_grid(const QuadraticField& k, double x0, double y0, double h, long nx,
                      long ny) {
  if (k.is_rational()) throw ParseError("density grids require a quadratic field");
  if (h <= 0 || nx < 1 || ny < 1) throw ParseError("bad grid geometry");
  DensityGrid g;
  g.d = k.d();
  g.x0 = x0;
  g.y0 = y0;
  g.h = h;
  g.nx = nx;
  g.ny = ny;
  g.cells = Eigen::ArrayXXd::Zero(nx, ny);
  return g;
}

DensityGrid make_grid_box(const QuadraticField& k, double L, long res) {
  return make_grid(k, -L, -L, 2 * L / res, res, res);
}

namespace {

// overlap of [a, b] with [lo, hi], written so per-fiber sums telescope exactly
double clamp_to(double t, double lo, double hi) { return std::min(std::max(t, lo), hi); }

}  // namespace

double disk_rect_area(double cx, double cy, double r, double ax, double bx, double ay,
                      double by) {
  // shift so the disk sits at the origin
  ax -= cx;
  bx -= cx;
  ay -= cy;
  by -= cy;
  if (r <= 0) return 0;
  ax = clamp_to(ax, -r, r);
  bx = clamp_to(bx, -r, r);
  if (bx <= ax) return 0;
  // integral over [ax, bx] of len([ay,by] cap [-g(u), g(u)]), g = sqrt(r^2-u^2)
  auto segment = [&](double u) { return std::sqrt(std::max(0.0, r * r - u * u)); };
  // antiderivative of g
  auto G = [&](double u) {
    u = clamp_to(u, -r, r);
    return 0.5 * (u * segment(u) + r * r * std::asin(u / r));
  };
  // breakpoints where ay or by crosses +-g(u)
  std::vector<double> bps = {ax, bx};
  for (double y : {ay, by}) {
    if (std::fabs(y) < r) {
      double u = std::sqrt(r * r - y * y);
      for (double s : {-u, u})
        if (s > ax && s < bx) bps.push_back(s);
    }
  }
  std::sort(bps.begin(), bps.end());
  double area = 0;
  for (size_t i = 0; i + 1 < bps.size(); ++i) {
    double lo = bps[i], hi = bps[i + 1];
    if (hi - lo < 1e-300) continue;
    double mid = 0.5 * (lo + hi);
    double g = segment(mid);
    double top = std::min(by, g), bot = std::max(ay, -g);
    if (top <= bot) continue;
    // on this piece the active bounds are constant in kind
    bool top_is_g = (g < by);
    bool bot_is_g = (-g > ay);
    double piece = 0;
    if (top_is_g)
      piece += G(hi) - G(lo);
    else
      piece += by * (hi - lo);
    if (bot_is_g)
      piece += G(hi) - G(lo);
    else
      piece -= ay * (hi - lo);
    area += piece;
  }
  return area;
}

void fill_disk(DensityGrid& g, double cx, double cy, double r, double density) {
  double h = g.h;
  long ilo = std::max(0L, (long)std::floor((cx - r - g.x0) / h) - 1);
  long ihi = std::min(g.nx - 1, (long)std::ceil((cx + r - g.x0) / h) + 1);
  long jlo = std::max(0L, (long)std::floor((cy - r - g.y0) / h) - 1);
  long jhi = std::min(g.ny - 1, (long)std::ceil((cy + r - g.y0) / h) + 1);
  for (long i = ilo; i <= ihi; ++i)
    for (long j = jlo; j <= jhi; ++j) {
      double a = disk_rect_area(cx, cy, r, g.x0 + i * h, g.x0 + (i + 1) * h, g.y0 + j * h,
                                g.y0 + (j + 1) * h);
      if (a > 0) g.cells(i, j) = std::min(1.0, g.cells(i, j) + density * a / (h * h));
    }
}

void fill_rect(DensityGrid& g, double ax, double ay, double bx, double by, double density) {
  double h = g.h;
  long ilo = std::max(0L, (long)std::floor((ax - g.x0) / h) - 1);
  long ihi = std::min(g.nx - 1, (long)std::ceil((bx - g.x0) / h) + 1);
  long jlo = std::max(0L, (long)std::floor((ay - g.y0) / h) - 1);
  long jhi = std::min(g.ny - 1, (long)std::ceil((by - g.y0) / h) + 1);
  for (long i = ilo; i <= ihi; ++i) {
    double ox = clamp_to(bx, g.x0 + i * h, g.x0 + (i + 1) * h) -
                clamp_to(ax, g.x0 + i * h, g.x0 + (i + 1) * h);
    if (ox <= 0) continue;
    for (long j = jlo; j <= jhi; ++j) {
      double oy = clamp_to(by, g.y0 + j * h, g.y0 + (j + 1) * h) -
                  clamp_to(ay, g.y0 + j * h, g.y0 + (j + 1) * h);
      if (oy <= 0) continue;
      g.cells(i, j) = std::min(1.0, g.cells(i, j) + density * ox * oy / (h * h));
    }
  }
}

void scale_to_mass(DensityGrid& g, double target_mass) {
  double m = g.mass();
  if (m <= 0) throw ParseError("scale_to_mass on an empty grid");
  double cap_mass = (g.cells > 0).cast<double>().sum() * g.cell_volume();
  if (target_mass > cap_mass)
    throw CapError("target mass exceeds the density-1 capacity of the support");
  auto mass_at = [&](double c) { return (g.cells * c).min(1.0).sum() * g.cell_volume(); };
  double lo = target_mass / m, hi = lo;
  while (mass_at(hi) < target_mass) {
    hi *= 2;
    if (hi > 1e12) throw CapError("scale_to_mass failed to bracket");
  }
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mass_at(mid) < target_mass)
      lo = mid;
    else
      hi = mid;
  }
  g.cells = (g.cells * hi).min(1.0);
}

void save_grid(const DensityGrid& g, const std::string& path) {
  nlohmann::json hdr;
  hdr["format"] = "nopt-grid-v1";
  hdr["field"] = QuadraticField::get(g.d).spec_string();
  hdr["measure_convention"] = kMeasureConvention;
  hdr["x0"] = g.x0;
  hdr["y0"] = g.y0;
  hdr["h"] = g.h;
  hdr["nx"] = g.nx;
  hdr["ny"] = g.ny;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open " + path);
  out << hdr.dump() << "\n";
  out.write(reinterpret_cast<const char*>(g.cells.data()),
            (std::streamsize)(sizeof(double) * g.nx * g.ny));
}

DensityGrid load_grid(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::string line;
  std::getline(in, line);
  nlohmann::json hdr = nlohmann::json::parse(line);
  if (hdr.value("format", "") != "nopt-grid-v1") throw ParseError("bad grid file header");
  const QuadraticField& k = QuadraticField::parse(hdr["field"].get<std::string>());
  DensityGrid g = make_grid(k, hdr["x0"], hdr["y0"], hdr["h"], hdr["nx"], hdr["ny"]);
  in.read(reinterpret_cast<char*>(g.cells.data()),
          (std::streamsize)(sizeof(double) * g.nx * g.ny));
  if (!in) throw ParseError("truncated grid file");
  return g;
}

}  // namespace nopt
