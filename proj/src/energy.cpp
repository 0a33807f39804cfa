#include "nopt/energy.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <mutex>

namespace nopt {

double log_antideriv2(double u) {
  // G with G'' = log|u|; G(u) = u^2 (2 log|u| - 3) / 4, G(0) = 0
  if (u == 0) return 0;
  return u * u * (2 * std::log(std::fabs(u)) - 3) / 4;
}

namespace {

// exact integral of log|x - y| over [a,b] x [c,d]
double log_box_integral(double a, double b, double c, double d) {
  auto G = [](double u) { return log_antideriv2(u); };
  return G(b - c) - G(a - c) - G(b - d) + G(a - d);
}

// 1D cell-pair kernel: cells of width h at integer offset m
double cell_pair_1d(double h, long m) {
  return log_box_integral(0, h, m * h, m * h + h);
}

// one-time validation of the separable antiderivative against adaptive
// Simpson quadrature to 1e-8 before the exact route is trusted
struct RealKernelCheck {
  RealKernelCheck() {
    auto simpson = [](auto&& fn, double a, double b) {
      const long n = 4096;
      double hstep = (b - a) / n, s = fn(a) + fn(b);
      for (long i = 1; i < n; ++i) s += fn(a + i * hstep) * (i % 2 ? 4 : 2);
      return s * hstep / 3;
    };
    for (auto [c, d] : {std::pair<double, double>{1.25, 2.5}, {3.0, 4.5}}) {
      auto inner = [&](double x) {
        auto f = [&](double y) { return std::log(std::fabs(x - y)); };
        return simpson(f, c, d);
      };
      double want = simpson(inner, 0.0, 1.0);
      if (std::fabs(log_box_integral(0, 1, c, d) - want) > 1e-8)
        throw InvariantError("separable energy antiderivative validation failed");
    }
  }
};

const RealKernelCheck& real_kernel_check() {
  static RealKernelCheck inst;
  return inst;
}

// ---- complex-case kernels -----------------------------------------------------
// W1(off) = iint over unit cells at integer offset of log|x-y| dA dA, reduced
// to a 1D adaptive integral of a closed-form inner integral (tent-weighted).

double inner_tent_log(double di, double v) {
  // integral over u in [di-1, di+1] of (1 - |u - di|) * 0.5 log(u^2 + v^2) du
  auto L0 = [&](double u) {  // antiderivative of log(u^2+v^2)
    if (u == 0) return 0.0;
    double at = (v == 0) ? 0.0 : v * std::atan(u / v);
    double lg = (u * u + v * v == 0) ? 0.0 : u * std::log(u * u + v * v);
    return lg - 2 * u + 2 * at;
  };
  auto L1 = [&](double u) {  // antiderivative of u log(u^2+v^2)
    double q = u * u + v * v;
    if (q == 0) return 0.0;
    return 0.5 * (q * std::log(q) - u * u);
  };
  // on [di-1, di]: weight = 1 - (di - u) = u - (di - 1)
  // on [di, di+1]: weight = 1 - (u - di) = (di + 1) - u
  double lo = di - 1, hi = di + 1;
  double left = (L1(di) - L1(lo)) - (di - 1) * (L0(di) - L0(lo));
  double right = (di + 1) * (L0(hi) - L0(di)) - (L1(hi) - L1(di));
  return 0.5 * (left + right);
}

double simpson_tent(double di, double dj, double lo, double hi, int depth, double fa,
                    double fm, double fb) {
  auto f = [&](double v) {
    double w = 1 - std::fabs(v - dj);
    return w <= 0 ? 0.0 : w * inner_tent_log(di, v);
  };
  double m = 0.5 * (lo + hi);
  double lm = 0.5 * (lo + m), rm = 0.5 * (m + hi);
  double flm = f(lm), frm = f(rm);
  double whole = (hi - lo) / 6 * (fa + 4 * fm + fb);
  double two = (m - lo) / 6 * (fa + 4 * flm + fm) + (hi - m) / 6 * (fm + 4 * frm + fb);
  if (depth <= 0 || std::fabs(two - whole) < 1e-11)
    return two + (two - whole) / 15;
  return simpson_tent(di, dj, lo, m, depth - 1, fa, flm, f(m)) +
         simpson_tent(di, dj, m, hi, depth - 1, f(m), frm, fb);
}

double tent_pair_integral(long di, long dj) {
  // iint T(u - di) T(v - dj) 0.5 log(u^2+v^2) du dv; split the outer axis at
  // v = 0 where the inner integral has a mild kink
  auto f = [&](double v) {
    double w = 1 - std::fabs(v - dj);
    return w <= 0 ? 0.0 : w * inner_tent_log((double)di, v);
  };
  double lo = dj - 1.0, hi = dj + 1.0;
  std::vector<double> cuts = {lo, hi};
  if (lo < 0 && hi > 0) cuts = {lo, 0.0, hi};
  double total = 0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    double a = cuts[i], b = cuts[i + 1];
    double m = 0.5 * (a + b);
    total += simpson_tent(di, dj, a, b, 30, f(a), f(m), f(b));
  }
  return total;
}

// near-field table of W1 for |di|, |dj| <= 3, validated once at startup
class ComplexKernel {
 public:
  static const ComplexKernel& get() {
    static ComplexKernel inst;
    return inst;
  }
  double w1(long di, long dj) const {
    long a = std::labs(di), b = std::labs(dj);
    if (a < 4 && b < 4) return near_[a][b];
    return 0.5 * std::log(double(di * di + dj * dj));
  }

 private:
  ComplexKernel() {
    for (long a = 0; a < 4; ++a)
      for (long b = 0; b < 4; ++b) near_[a][b] = tent_pair_integral(a, b);
    // validation: far entries must closely match the midpoint values
    double ref = tent_pair_integral(4, 2);
    double mid = 0.5 * std::log(20.0);
    if (std::fabs(ref - mid) > 5e-5)
      throw InvariantError("complex energy kernel validation failed");
  }
  double near_[4][4];
};

}  // namespace

// ---- FFT correlation -----------------------------------------------------------

Eigen::ArrayXXd grid_correlate(const Eigen::ArrayXXd& f,
                               const std::function<double(long, long)>& kernel) {
  long nx = f.rows(), ny = f.cols();
  long P = 1, Q = 1;
  while (P < 2 * nx) P *= 2;
  while (Q < 2 * ny) Q *= 2;
  Eigen::MatrixXcd F = Eigen::MatrixXcd::Zero(P, Q), Kw = Eigen::MatrixXcd::Zero(P, Q);
  for (long i = 0; i < nx; ++i)
    for (long j = 0; j < ny; ++j) F(i, j) = f(i, j);
  for (long di = -(nx - 1); di <= nx - 1; ++di)
    for (long dj = -(ny - 1); dj <= ny - 1; ++dj)
      Kw((di + P) % P, (dj + Q) % Q) = kernel(di, dj);
  Eigen::FFT<double> fft;
  auto fwd2 = [&](Eigen::MatrixXcd& M) {
    Eigen::VectorXcd tmp(M.rows()), out(M.rows());
    for (long j = 0; j < M.cols(); ++j) {
      tmp = M.col(j);
      fft.fwd(out, tmp);
      M.col(j) = out;
    }
    Eigen::VectorXcd rtmp(M.cols()), rout(M.cols());
    for (long i = 0; i < M.rows(); ++i) {
      rtmp = M.row(i).transpose();
      fft.fwd(rout, rtmp);
      M.row(i) = rout.transpose();
    }
  };
  auto inv2 = [&](Eigen::MatrixXcd& M) {
    Eigen::VectorXcd tmp(M.rows()), out(M.rows());
    for (long j = 0; j < M.cols(); ++j) {
      tmp = M.col(j);
      fft.inv(out, tmp);
      M.col(j) = out;
    }
    Eigen::VectorXcd rtmp(M.cols()), rout(M.cols());
    for (long i = 0; i < M.rows(); ++i) {
      rtmp = M.row(i).transpose();
      fft.inv(rout, rtmp);
      M.row(i) = rout.transpose();
    }
  };
  fwd2(F);
  fwd2(Kw);
  F = F.cwiseProduct(Kw);
  inv2(F);
  Eigen::ArrayXXd out(nx, ny);
  for (long i = 0; i < nx; ++i)
    for (long j = 0; j < ny; ++j) out(i, j) = F(i, j).real();
  return out;
}

namespace {

double quadratic_form(const Eigen::ArrayXXd& f,
                      const std::function<double(long, long)>& kernel) {
  return (f * grid_correlate(f, kernel)).sum();
}

}  // namespace

EnergyReport energy(const DensityGrid& g, const EnergyOptions& opt) {
  const QuadraticField& k = QuadraticField::get(g.d);
  EnergyReport rep;
  rep.mass = g.mass();
  if (rep.mass <= 0) return rep;  // zero measure: I = 0 by convention
  Eigen::ArrayXXd f = g.cells;
  if (opt.rescale_to_probability) f /= rep.mass;
  double h = g.h;

  if (k.is_real_quadratic()) {
    // exact separable route through the coordinate marginals
    real_kernel_check();
    Eigen::ArrayXd mx = f.rowwise().sum() * h, my = f.colwise().sum().transpose() * h;
    std::vector<double> C(std::max(g.nx, g.ny) + 1);
    for (long m = 0; m < (long)C.size(); ++m) C[m] = cell_pair_1d(h, m);
    auto e1d = [&](const Eigen::ArrayXd& marg) {
      double s = 0;
      for (long i = 0; i < marg.size(); ++i) {
        if (marg[i] == 0) continue;
        for (long j = 0; j < marg.size(); ++j)
          s += marg[i] * marg[j] * C[std::labs(i - j)];
      }
      return s;
    };
    rep.I = e1d(mx) + e1d(my);
    rep.quadrature_error = 1e-12 * (std::fabs(rep.I) + 1);
    double h4 = h * h * h * h;
    for (double T : opt.T_values) {
      auto kT = [&](long di, long dj) {
        double v = h * h * (C[std::labs(di)] + C[std::labs(dj)]);
        return std::max(v, -T * h4);
      };
      rep.I_T.push_back({T, quadratic_form(f, kT)});
    }
    return rep;
  }

  // imaginary quadratic: offset kernel, paper-measure factors folded in
  const ComplexKernel& CK = ComplexKernel::get();
  double h4 = h * h * h * h;
  double logh = std::log(h);
  auto kI = [&](long di, long dj) { return 8 * h4 * (logh + CK.w1(di, dj)); };
  rep.I = quadratic_form(f, kI);
  rep.quadrature_error = 0.01 * h * h * rep.mass * rep.mass + 1e-12;
  for (double T : opt.T_values) {
    auto kT = [&](long di, long dj) { return std::max(kI(di, dj), -T * 4 * h4); };
    rep.I_T.push_back({T, quadratic_form(f, kT)});
  }
  return rep;
}

double energy_discrete(const QuadraticField& k, const std::vector<Elem>& S, const VPoint& s) {
  if (S.size() < 2) throw ParseError("energy_discrete: |S| < 2");
  if (pnorm(k, s) == 0) throw ParseError("energy_discrete: ||s|| = 0");
  for (size_t i = 0; i < S.size(); ++i)
    for (size_t j = i + 1; j < S.size(); ++j)
      if (S[i] == S[j]) throw ParseError("energy_discrete: repeated points");
  double n = (double)S.size() - 1;
  double lognorm_s = std::log(pnorm(k, s));
  double sum = 0;
  for (size_t i = 0; i < S.size(); ++i)
    for (size_t j = 0; j < S.size(); ++j) {
      if (i == j) continue;
      sum += log_abs(norm(k, S[i] - S[j])) - lognorm_s;
    }
  return sum / (n * n);
}

double log_sq_box_integral(double a1, double b1, double a2, double b2, double delta) {
  auto L2 = [&](double t) {
    double q = t * t + delta * delta;
    if (q == 0) return 0.0;
    double at = (delta == 0) ? 0.0 : 2 * delta * t * std::atan(t / delta);
    return 0.5 * (t * t - delta * delta) * std::log(q) - 1.5 * t * t + at;
  };
  return L2(b2 - a1) - L2(b2 - b1) - L2(a2 - a1) + L2(a2 - b1);
}

PairDeltaResult energy_pair_delta(double a1, double b1, double a2, double b2, double kappa,
                                  double delta) {
  if (!(a1 < b1 && a2 < b2)) throw ParseError("energy_pair_delta: bad intervals");
  double c1 = 0.5 * (a1 + b1), c2 = 0.5 * (a2 + b2);
  if (!(c2 > c1)) throw ParseError("energy_pair_delta: requires c2 > c1");
  if (!(kappa > 0 && kappa <= c2 - c1))
    throw ParseError("energy_pair_delta: need 0 < kappa <= c2 - c1");
  PairDeltaResult out;
  out.delta = log_sq_box_integral(a1, b1, a2, b2, delta) -
              log_sq_box_integral(a1, b1, a2 - kappa, b2 - kappa, delta);
  out.positive = out.delta > 0;
  return out;
}

}  // namespace nopt
