#include "nopt/potential.hpp"

#include <cmath>

#include "nopt/collapse.hpp"
#include "nopt/energy.hpp"

namespace nopt {

double disk_log_potential_sq(double T, double s) {
  if (T <= 0) return 0;
  if (s <= T) return 2 * M_PI * T * T * std::log(T) - M_PI * T * T + M_PI * s * s;
  return 2 * M_PI * T * T * std::log(s);
}

double disk_log_potential_sq_deriv(double T, double s) {
  if (T <= 0) return 0;
  if (s <= T) return 2 * M_PI * s;
  return 2 * M_PI * T * T / s;
}

namespace {

// int over [a,b] of log|x - u| du and d/dx of it, for the 1D marginal route
double seg_log_integral(double x, double a, double b) {
  auto P1 = [&](double u) { return u == 0 ? 0.0 : u * std::log(std::fabs(u)) - u; };
  return P1(x - a) - P1(x - b);
}

double seg_log_integral_deriv(double x, double a, double b) {
  return std::log(std::fabs(x - a)) - std::log(std::fabs(x - b));
}

// double antiderivative of log(x^2 + y^2): d^2 F2 / dx dy = log(x^2 + y^2)
double F2(double x, double y) {
  double q = x * x + y * y;
  if (q == 0) return 0;
  double lg = std::log(q);
  double t1 = (x == 0 || y == 0) ? 0.0 : x * y * lg - 3 * x * y;
  double t2 = (x == 0) ? 0.0 : x * x * std::atan(y / x);
  double t3 = (y == 0) ? 0.0 : y * y * std::atan(x / y);
  return t1 + t2 + t3;
}

// dF2/dx
double F2x(double x, double y) {
  double q = x * x + y * y;
  if (q == 0) return 0;
  double t1 = (y == 0) ? 0.0 : y * std::log(q) - 2 * y;
  double t2 = (x == 0) ? 0.0 : 2 * x * std::atan(y / x);
  return t1 + t2;
}

}  // namespace

double cell_log_planar_integral(double zx, double zy, double ax, double bx, double ay,
                                double by) {
  double u1 = zx - bx, u2 = zx - ax, v1 = zy - by, v2 = zy - ay;
  return 0.5 * (F2(u2, v2) - F2(u1, v2) - F2(u2, v1) + F2(u1, v1));
}

double cell_log_planar_integral_dx(double zx, double zy, double ax, double bx, double ay,
                                   double by) {
  double u1 = zx - bx, u2 = zx - ax, v1 = zy - by, v2 = zy - ay;
  return 0.5 * (F2x(u2, v2) - F2x(u1, v2) - F2x(u2, v1) + F2x(u1, v1));
}

PotentialValue potential(const DensityGrid& g, int axis, double x) {
  const QuadraticField& k = QuadraticField::get(g.d);
  PotentialValue out;
  if (k.is_real_quadratic()) {
    if (axis != 0 && axis != 1) throw ParseError("potential: axis must be 0 or 1");
    Eigen::ArrayXd marg = axis == 0 ? Eigen::ArrayXd(g.cells.rowwise().sum() * g.h)
                                    : Eigen::ArrayXd(g.cells.colwise().sum().transpose() * g.h);
    double t0 = axis == 0 ? g.x0 : g.y0;
    for (long i = 0; i < marg.size(); ++i) {
      if (marg[i] == 0) continue;
      double a = t0 + i * g.h, b = a + g.h;
      double dens = marg[i] / g.h;  // 1D density on the cell
      out.P += dens * seg_log_integral(x, a, b);
      if (std::fabs(x - a) < 1e-13 || std::fabs(x - b) < 1e-13)
        out.singular = true;
      else
        out.dP += dens * seg_log_integral_deriv(x, a, b);
    }
    return out;
  }
  // complex coordinate: evaluate radially about the mass centroid with exact
  // per-cell planar integrals; P_V(z) = 4 sum f_c int_cell log|z - t| dA
  if (axis != 0) throw ParseError("potential: the complex place is coordinate 0");
  auto [ccx, ccy] = mass_centroid(g);
  double zx = ccx + x, zy = ccy;
  for (long i = 0; i < g.nx; ++i)
    for (long j = 0; j < g.ny; ++j) {
      double f = g.cells(i, j);
      if (f == 0) continue;
      double ax = g.x0 + i * g.h, ay = g.y0 + j * g.h;
      out.P += 4 * f * cell_log_planar_integral(zx, zy, ax, ax + g.h, ay, ay + g.h);
      out.dP += 4 * f * cell_log_planar_integral_dx(zx, zy, ax, ax + g.h, ay, ay + g.h);
    }
  return out;
}

double potential_V(const DensityGrid& g, double x, double y) {
  const QuadraticField& k = QuadraticField::get(g.d);
  if (k.is_real_quadratic()) return potential(g, 0, x).P + potential(g, 1, y).P;
  double P = 0;
  for (long i = 0; i < g.nx; ++i)
    for (long j = 0; j < g.ny; ++j) {
      double f = g.cells(i, j);
      if (f == 0) continue;
      double ax = g.x0 + i * g.h, ay = g.y0 + j * g.h;
      P += 4 * f * cell_log_planar_integral(x, y, ax, ax + g.h, ay, ay + g.h);
    }
  return P;
}

Eigen::ArrayXXd potential_field(const DensityGrid& g) {
  const QuadraticField& k = QuadraticField::get(g.d);
  Eigen::ArrayXXd P(g.nx, g.ny);
  if (k.is_real_quadratic()) {
    std::vector<double> px(g.nx), py(g.ny);
    for (long i = 0; i < g.nx; ++i) px[i] = potential(g, 0, g.cx(i)).P;
    for (long j = 0; j < g.ny; ++j) py[j] = potential(g, 1, g.cy(j)).P;
    for (long i = 0; i < g.nx; ++i)
      for (long j = 0; j < g.ny; ++j) P(i, j) = px[i] + py[j];
    return P;
  }
  double h = g.h;
  auto kernel = [&](long di, long dj) {
    return 4 * cell_log_planar_integral(0, 0, di * h - h / 2, di * h + h / 2,
                                        dj * h - h / 2, dj * h + h / 2);
  };
  return grid_correlate(g.cells, kernel);
}

}  // namespace nopt
