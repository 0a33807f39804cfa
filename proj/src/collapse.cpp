#include "nopt/collapse.hpp"

#include <cmath>

namespace nopt {

namespace {

// overlap of [A, B] with the grid cells along one axis, written as clamped
// telescoping differences so the fiber mass is conserved bit-exactly
void rasterize_interval(double A, double B, double t0, double h, long n,
                        const std::function<void(long, double)>& put) {
  auto clamp = [&](double t) { return std::min(std::max(t, A), B); };
  for (long i = 0; i < n; ++i) {
    double lo = clamp(t0 + i * h), hi = clamp(t0 + (i + 1) * h);
    if (hi > lo) put(i, (hi - lo) / h);
  }
}

// Masses are quantized to 45 mantissa bits before they parameterize the
// rasterization. Re-measuring a rasterized fiber reproduces the quantized
// value bit-exactly, which makes collapsing idempotent, while the mass
// perturbation stays below 2^-45 relative, far inside the 1e-12 budget.
double snap_mass(double m) {
  if (m == 0) return 0;
  int e;
  std::frexp(m, &e);
  return std::ldexp(std::round(std::ldexp(m, 45 - e)), e - 45);
}

}  // namespace

double mass_median(const DensityGrid& g, int axis) {
  Eigen::ArrayXd marg =
      axis == 0 ? Eigen::ArrayXd(g.cells.rowwise().sum()) : Eigen::ArrayXd(g.cells.colwise().sum().transpose());
  double total = marg.sum();
  if (total <= 0) throw ParseError("mass_median of an empty grid");
  double acc = 0, half = total / 2;
  for (long i = 0; i < marg.size(); ++i) {
    if (acc + marg[i] >= half) {
      double frac = (half - acc) / marg[i];
      double t0 = axis == 0 ? g.x0 : g.y0;
      return t0 + (i + frac) * g.h;
    }
    acc += marg[i];
  }
  return axis == 0 ? g.x1() : g.y1();
}

std::pair<double, double> mass_centroid(const DensityGrid& g) {
  double total = 0, sx = 0, sy = 0;
  for (long i = 0; i < g.nx; ++i)
    for (long j = 0; j < g.ny; ++j) {
      double w = g.cells(i, j);
      if (w == 0) continue;
      total += w;
      sx += w * g.cx(i);
      sy += w * g.cy(j);
    }
  if (total <= 0) throw ParseError("mass_centroid of an empty grid");
  return {sx / total, sy / total};
}

DensityGrid collapse(const DensityGrid& g, int axis, double c0, double c1) {
  const QuadraticField& k = QuadraticField::get(g.d);
  DensityGrid out = g;
  out.cells.setZero();

  if (k.is_imaginary()) {
    if (axis != 0) throw ParseError("collapse: imaginary quadratic has one coordinate");
    double planar_mass = snap_mass(g.mass() / 2);  // paper measure is twice planar
    if (planar_mass <= 0) return out;
    double r = std::sqrt(planar_mass / M_PI);
    if (c0 - r < g.x0 || c0 + r > g.x1() || c1 - r < g.y0 || c1 + r > g.y1())
      throw CapError("collapse: disk does not fit inside the grid box");
    double h = g.h;
    long ilo = std::max(0L, (long)std::floor((c0 - r - g.x0) / h) - 1);
    long ihi = std::min(g.nx - 1, (long)std::ceil((c0 + r - g.x0) / h) + 1);
    long jlo = std::max(0L, (long)std::floor((c1 - r - g.y0) / h) - 1);
    long jhi = std::min(g.ny - 1, (long)std::ceil((c1 + r - g.y0) / h) + 1);
    double boundary_sum = 0, interior = 0;
    for (long i = ilo; i <= ihi; ++i)
      for (long j = jlo; j <= jhi; ++j) {
        double a = disk_rect_area(c0, c1, r, g.x0 + i * h, g.x0 + (i + 1) * h,
                                  g.y0 + j * h, g.y0 + (j + 1) * h) /
                   (h * h);
        if (a <= 0) continue;
        if (a >= 1) {
          out.cells(i, j) = 1;
          interior += h * h;
        } else {
          out.cells(i, j) = a;
          boundary_sum += a * h * h;
        }
      }
    // pin the planar mass exactly by rescaling the fractional boundary cells
    double want = planar_mass - interior;
    if (boundary_sum > 0 && want >= 0) {
      double scale = want / boundary_sum;
      for (long i = ilo; i <= ihi; ++i)
        for (long j = jlo; j <= jhi; ++j)
          if (out.cells(i, j) > 0 && out.cells(i, j) < 1)
            out.cells(i, j) = std::min(1.0 + 1e-13, out.cells(i, j) * scale);
    }
    return out;
  }

  if (axis != 0 && axis != 1) throw ParseError("collapse: axis must be 0 or 1");
  double h = g.h;
  if (axis == 0) {
    for (long j = 0; j < g.ny; ++j) {
      double fiber = snap_mass(g.cells.col(j).sum() * h);  // 1D mass of the column
      if (fiber <= 0) continue;
      double A = c0 - fiber / 2, B = c0 + fiber / 2;
      if (A < g.x0 || B > g.x1())
        throw CapError("collapse: interval leaves the grid box");
      rasterize_interval(A, B, g.x0, h, g.nx,
                         [&](long i, double frac) { out.cells(i, j) = frac; });
    }
  } else {
    for (long i = 0; i < g.nx; ++i) {
      double fiber = snap_mass(g.cells.row(i).sum() * h);
      if (fiber <= 0) continue;
      double A = c0 - fiber / 2, B = c0 + fiber / 2;
      if (A < g.y0 || B > g.y1())
        throw CapError("collapse: interval leaves the grid box");
      rasterize_interval(A, B, g.y0, h, g.ny,
                         [&](long j, double frac) { out.cells(i, j) = frac; });
    }
  }
  return out;
}

}  // namespace nopt
