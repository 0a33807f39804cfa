#include "nopt/region.hpp"

#include <cmath>

#include <json.hpp>

namespace nopt {

namespace {
double measure_factor(const QuadraticField& k) { return k.is_imaginary() ? 2.0 : 1.0; }
}  // namespace

Region Region::make_disk(const QuadraticField& k, double cx, double cy, double r) {
  if (k.is_rational()) {
    // interval [cx - r, cx + r]
    Region g;
    g.kind_ = RegionKind::disk;
    g.d_ = 1;
    g.cx_ = cx;
    g.cy_ = 0;
    g.r_ = r;
    g.measure_ = 2 * r;
    return g;
  }
  Region g;
  g.kind_ = RegionKind::disk;
  g.d_ = k.d();
  g.cx_ = cx;
  g.cy_ = cy;
  g.r_ = r;
  g.measure_ = measure_factor(k) * M_PI * r * r;
  return g;
}

Region Region::make_box(const QuadraticField& k, double ax, double bx, double ay, double by) {
  if (!(ax < bx)) throw ParseError("region box: ax < bx required");
  Region g;
  g.kind_ = RegionKind::box;
  g.d_ = k.d();
  g.ax_ = ax;
  g.bx_ = bx;
  g.ay_ = ay;
  g.by_ = by;
  if (k.is_rational()) {
    g.measure_ = bx - ax;
  } else {
    if (!(ay < by)) throw ParseError("region box: ay < by required");
    g.measure_ = measure_factor(k) * (bx - ax) * (by - ay);
  }
  return g;
}

Region Region::make_polygon(const QuadraticField& k,
                            std::vector<std::pair<double, double>> pts) {
  if (k.is_rational()) throw ParseError("polygon regions need dim V = 2");
  if (pts.size() < 3) throw ParseError("polygon needs >= 3 vertices");
  Region g;
  g.kind_ = RegionKind::polygon;
  g.d_ = k.d();
  g.pts_ = std::move(pts);
  double area2 = 0;
  for (size_t i = 0; i < g.pts_.size(); ++i) {
    auto [x1, y1] = g.pts_[i];
    auto [x2, y2] = g.pts_[(i + 1) % g.pts_.size()];
    area2 += x1 * y2 - x2 * y1;
  }
  g.measure_ = measure_factor(k) * std::fabs(area2) / 2;
  return g;
}

Region Region::make_level_set(const DensityGrid& indicator) {
  Region g;
  g.kind_ = RegionKind::level_set;
  g.d_ = indicator.d;
  g.grid_ = indicator;
  double cells_on = (indicator.cells >= 0.5).cast<double>().sum();
  g.measure_ = cells_on * indicator.cell_volume();
  return g;
}

bool Region::contains(double x, double y) const {
  switch (kind_) {
    case RegionKind::disk: {
      if (d_ == 1) return std::fabs(x - cx_) <= r_;
      double dx = x - cx_, dy = y - cy_;
      return dx * dx + dy * dy <= r_ * r_;
    }
    case RegionKind::box:
      if (d_ == 1) return x >= ax_ && x <= bx_;
      return x >= ax_ && x <= bx_ && y >= ay_ && y <= by_;
    case RegionKind::polygon: {
      bool in = false;
      for (size_t i = 0, j = pts_.size() - 1; i < pts_.size(); j = i++) {
        auto [xi, yi] = pts_[i];
        auto [xj, yj] = pts_[j];
        if ((yi > y) != (yj > y) && x < (xj - xi) * (y - yi) / (yj - yi) + xi) in = !in;
      }
      return in;
    }
    case RegionKind::level_set: {
      long i = (long)std::floor((x - grid_.x0) / grid_.h);
      long j = (long)std::floor((y - grid_.y0) / grid_.h);
      if (i < 0 || i >= grid_.nx || j < 0 || j >= grid_.ny) return false;
      return grid_.cells(i, j) >= 0.5;
    }
  }
  return false;
}

void Region::bbox(double& ax, double& bx, double& ay, double& by) const {
  switch (kind_) {
    case RegionKind::disk:
      ax = cx_ - r_;
      bx = cx_ + r_;
      ay = cy_ - r_;
      by = cy_ + r_;
      return;
    case RegionKind::box:
      ax = ax_;
      bx = bx_;
      ay = ay_;
      by = by_;
      return;
    case RegionKind::polygon: {
      ax = ay = 1e300;
      bx = by = -1e300;
      for (auto& [x, y] : pts_) {
        ax = std::min(ax, x);
        bx = std::max(bx, x);
        ay = std::min(ay, y);
        by = std::max(by, y);
      }
      return;
    }
    case RegionKind::level_set: {
      ax = ay = 1e300;
      bx = by = -1e300;
      for (long i = 0; i < grid_.nx; ++i)
        for (long j = 0; j < grid_.ny; ++j)
          if (grid_.cells(i, j) >= 0.5) {
            ax = std::min(ax, grid_.x0 + i * grid_.h);
            bx = std::max(bx, grid_.x0 + (i + 1) * grid_.h);
            ay = std::min(ay, grid_.y0 + j * grid_.h);
            by = std::max(by, grid_.y0 + (j + 1) * grid_.h);
          }
      if (ax > bx) ax = bx = ay = by = 0;
      return;
    }
  }
}

std::vector<std::pair<double, double>> Region::boundary_points(long m) const {
  std::vector<std::pair<double, double>> out;
  switch (kind_) {
    case RegionKind::disk: {
      for (long i = 0; i < m; ++i) {
        double t = 2 * M_PI * i / m;
        out.push_back({cx_ + r_ * std::cos(t), cy_ + r_ * std::sin(t)});
      }
      return out;
    }
    case RegionKind::box: {
      double per = 2 * ((bx_ - ax_) + (by_ - ay_));
      for (long i = 0; i < m; ++i) {
        double s = per * i / m;
        double w = bx_ - ax_, h = by_ - ay_;
        if (s < w)
          out.push_back({ax_ + s, ay_});
        else if (s < w + h)
          out.push_back({bx_, ay_ + (s - w)});
        else if (s < 2 * w + h)
          out.push_back({bx_ - (s - w - h), by_});
        else
          out.push_back({ax_, by_ - (s - 2 * w - h)});
      }
      return out;
    }
    case RegionKind::polygon: {
      double per = 0;
      std::vector<double> lens;
      for (size_t i = 0; i < pts_.size(); ++i) {
        auto [x1, y1] = pts_[i];
        auto [x2, y2] = pts_[(i + 1) % pts_.size()];
        lens.push_back(std::hypot(x2 - x1, y2 - y1));
        per += lens.back();
      }
      for (long i = 0; i < m; ++i) {
        double s = per * i / m;
        size_t e = 0;
        while (e < lens.size() && s > lens[e]) s -= lens[e++];
        if (e == lens.size()) e = lens.size() - 1;
        auto [x1, y1] = pts_[e];
        auto [x2, y2] = pts_[(e + 1) % pts_.size()];
        double t = lens[e] > 0 ? s / lens[e] : 0;
        out.push_back({x1 + t * (x2 - x1), y1 + t * (y2 - y1)});
      }
      return out;
    }
    case RegionKind::level_set: {
      auto on = [&](long i, long j) {
        if (i < 0 || i >= grid_.nx || j < 0 || j >= grid_.ny) return false;
        return grid_.cells(i, j) >= 0.5;
      };
      for (long i = 0; i < grid_.nx; ++i)
        for (long j = 0; j < grid_.ny; ++j) {
          if (!on(i, j)) continue;
          double x0 = grid_.x0 + i * grid_.h, y0 = grid_.y0 + j * grid_.h;
          if (!on(i - 1, j)) out.push_back({x0, y0 + grid_.h / 2});
          if (!on(i + 1, j)) out.push_back({x0 + grid_.h, y0 + grid_.h / 2});
          if (!on(i, j - 1)) out.push_back({x0 + grid_.h / 2, y0});
          if (!on(i, j + 1)) out.push_back({x0 + grid_.h / 2, y0 + grid_.h});
        }
      if ((long)out.size() > m && m > 0) {
        std::vector<std::pair<double, double>> thin;
        double stride = (double)out.size() / m;
        for (long i = 0; i < m; ++i) thin.push_back(out[(size_t)(i * stride)]);
        return thin;
      }
      return out;
    }
  }
  return out;
}

Region Region::from_json(const QuadraticField& k, const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  std::string kind = j.value("kind", "");
  if (kind == "disk")
    return make_disk(k, j.value("cx", 0.0), j.value("cy", 0.0), j["r"].get<double>());
  if (kind == "box")
    return make_box(k, j["ax"].get<double>(), j["bx"].get<double>(), j.value("ay", 0.0),
                    j.value("by", 0.0));
  if (kind == "polygon") {
    std::vector<std::pair<double, double>> pts;
    for (auto& p : j["points"]) pts.push_back({p[0].get<double>(), p[1].get<double>()});
    return make_polygon(k, pts);
  }
  if (kind == "level-set") {
    DensityGrid g = load_grid(j["grid"].get<std::string>());
    return make_level_set(g);
  }
  throw ParseError("region kind must be disk | box | polygon | level-set");
}

std::string Region::to_json() const {
  nlohmann::json j;
  switch (kind_) {
    case RegionKind::disk:
      j["kind"] = "disk";
      j["cx"] = cx_;
      j["cy"] = cy_;
      j["r"] = r_;
      break;
    case RegionKind::box:
      j["kind"] = "box";
      j["ax"] = ax_;
      j["bx"] = bx_;
      j["ay"] = ay_;
      j["by"] = by_;
      break;
    case RegionKind::polygon: {
      j["kind"] = "polygon";
      for (auto& [x, y] : pts_) j["points"].push_back({x, y});
      break;
    }
    case RegionKind::level_set:
      j["kind"] = "level-set";
      break;
  }
  j["paper_measure"] = measure_;
  return j.dump();
}

}  // namespace nopt
