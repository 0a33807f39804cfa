#pragma once

#include <Eigen/Dense>
#include <string>

#include "nopt/field.hpp"

namespace nopt {

// Discretized measure on V with cell densities in [0,1] relative to the
// paper measure (complex coordinate carries twice the planar measure, so a
// density-1 region has covolume-compatible mass). Cells are squares of side
// h; cells(i, j) covers [x0 + i h, x0 + (i+1) h) x [y0 + j h, y0 + (j+1) h).
struct DensityGrid {
  long d = -1;  // field tag
  double x0 = 0, y0 = 0, h = 0;
  long nx = 0, ny = 0;
  Eigen::ArrayXXd cells;

  double cell_volume() const;  // paper measure of one cell
  double mass() const { return cells.sum() * cell_volume(); }
  double cx(long i) const { return x0 + (i + 0.5) * h; }
  double cy(long j) const { return y0 + (j + 0.5) * h; }
  double x1() const { return x0 + nx * h; }
  double y1() const { return y0 + ny * h; }
};

DensityGrid make_grid(const QuadraticField& k, double x0, double y0, double h, long nx,
                      long ny);
// square grid over [-L, L]^2 with the given resolution
DensityGrid make_grid_box(const QuadraticField& k, double L, long res);

// exact-overlap indicator fills (boundary cells fractional)
void fill_disk(DensityGrid& g, double cx, double cy, double r, double density = 1.0);
void fill_rect(DensityGrid& g, double ax, double ay, double bx, double by,
               double density = 1.0);

// largest c such that min(1, c*f) has the requested mass; rescales in place
void scale_to_mass(DensityGrid& g, double target_mass);

// exact area of the intersection of the disk |p - (cx,cy)| <= r with the
// rectangle [ax,bx] x [ay,by]
double disk_rect_area(double cx, double cy, double r, double ax, double bx, double ay,
                      double by);

// grid snapshot serialization: JSON header line + raw little-endian doubles
void save_grid(const DensityGrid& g, const std::string& path);
DensityGrid load_grid(const std::string& path);

}  // namespace nopt
