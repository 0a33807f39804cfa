#pragma once

#include <string>
#include <vector>

#include "nopt/grid.hpp"

namespace nopt {

enum class RegionKind { disk, box, polygon, level_set };

// Bounded region of V with an exact membership test (cell resolution for
// level sets) and a boundary of measure zero. Paper measure is cached.
class Region {
 public:
  static Region make_disk(const QuadraticField& k, double cx, double cy, double r);
  static Region make_box(const QuadraticField& k, double ax, double bx, double ay, double by);
  static Region make_polygon(const QuadraticField& k, std::vector<std::pair<double, double>> pts);
  static Region make_level_set(const DensityGrid& indicator);

  static Region from_json(const QuadraticField& k, const std::string& json_text);
  std::string to_json() const;

  RegionKind kind() const { return kind_; }
  long field_d() const { return d_; }
  double paper_measure() const { return measure_; }
  bool contains(double x, double y) const;
  // axis-aligned bounding box
  void bbox(double& ax, double& bx, double& ay, double& by) const;
  // points on the boundary, arc-length uniform on analytic kinds, cell-edge
  // midpoints on level sets
  std::vector<std::pair<double, double>> boundary_points(long m) const;

 private:
  RegionKind kind_ = RegionKind::disk;
  long d_ = -1;
  double measure_ = 0;
  // disk
  double cx_ = 0, cy_ = 0, r_ = 0;
  // box
  double ax_ = 0, bx_ = 0, ay_ = 0, by_ = 0;
  // polygon
  std::vector<std::pair<double, double>> pts_;
  // level set
  DensityGrid grid_;
};

}  // namespace nopt
