#include "eit/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "eit/errors.hpp"

namespace eit {

namespace {

struct Box {
  double x0, x1, y0, y1;
};

Box bounding_box(const Shape& shape) {
  return std::visit(
      [](const auto& s) -> Box {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Disk>) {
          return {s.center.x() - s.radius, s.center.x() + s.radius, s.center.y() - s.radius,
                  s.center.y() + s.radius};
        } else if constexpr (std::is_same_v<T, Rectangle>) {
          return {s.lower_left.x(), s.upper_right.x(), s.lower_left.y(), s.upper_right.y()};
        } else {
          return {s.center.x() - s.semi_x, s.center.x() + s.semi_x, s.center.y() - s.semi_y,
                  s.center.y() + s.semi_y};
        }
      },
      shape);
}

// Largest |p| over the closed shape.
double max_radius(const Shape& shape) {
  return std::visit(
      [](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Disk>) {
          return s.center.norm() + s.radius;
        } else if constexpr (std::is_same_v<T, Rectangle>) {
          const double x = std::max(std::abs(s.lower_left.x()), std::abs(s.upper_right.x()));
          const double y = std::max(std::abs(s.lower_left.y()), std::abs(s.upper_right.y()));
          return std::hypot(x, y);
        } else {
          // dense boundary sampling; the maximum of a smooth function on the
          // ellipse is resolved far below any margin we care about
          double r = 0.0;
          constexpr int n = 4096;
          for (int i = 0; i < n; ++i) {
            const double t = 2.0 * std::numbers::pi * i / n;
            r = std::max(r, std::hypot(s.center.x() + s.semi_x * std::cos(t),
                                       s.center.y() + s.semi_y * std::sin(t)));
          }
          return r;
        }
      },
      shape);
}

void validate_shape(const Shape& shape, std::size_t index) {
  const auto fail = [index](const std::string& what) {
    std::ostringstream os;
    os << "inclusion " << index << ": " << what;
    throw DomainError(os.str());
  };
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Disk>) {
          if (!(s.radius > 0.0)) fail("disk radius must be positive");
        } else if constexpr (std::is_same_v<T, Rectangle>) {
          if (!(s.upper_right.x() > s.lower_left.x() && s.upper_right.y() > s.lower_left.y()))
            fail("rectangle corners must satisfy lower_left < upper_right");
        } else {
          if (!(s.semi_x > 0.0 && s.semi_y > 0.0)) fail("ellipse semi-axes must be positive");
        }
      },
      shape);
  if (!(max_radius(shape) < 1.0)) fail("shape must lie strictly inside the unit disk");
}

// Primitive of sqrt(1 - x^2).
double half_circle_primitive(double x) {
  x = std::clamp(x, -1.0, 1.0);
  return 0.5 * (x * std::sqrt(1.0 - x * x) + std::asin(x));
}

}  // namespace

bool contains(const Shape& shape, const Point& p) {
  return std::visit(
      [&p](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Disk>) {
          return (p - s.center).squaredNorm() <= s.radius * s.radius;
        } else if constexpr (std::is_same_v<T, Rectangle>) {
          return p.x() >= s.lower_left.x() && p.x() <= s.upper_right.x() &&
                 p.y() >= s.lower_left.y() && p.y() <= s.upper_right.y();
        } else {
          const double u = (p.x() - s.center.x()) / s.semi_x;
          const double v = (p.y() - s.center.y()) / s.semi_y;
          return u * u + v * v <= 1.0;
        }
      },
      shape);
}

void Phantom::validate() const {
  for (std::size_t i = 0; i < inclusions.size(); ++i) {
    if (!(inclusions[i].contrast > 0.0)) {
      std::ostringstream os;
      os << "inclusion " << i << ": contrast must be positive";
      throw DomainError(os.str());
    }
    validate_shape(inclusions[i].shape, i);
  }
  constexpr int grid = 256;
  for (std::size_t i = 0; i < inclusions.size(); ++i) {
    for (std::size_t j = i + 1; j < inclusions.size(); ++j) {
      const Box a = bounding_box(inclusions[i].shape);
      const Box b = bounding_box(inclusions[j].shape);
      const Box o{std::max(a.x0, b.x0), std::min(a.x1, b.x1), std::max(a.y0, b.y0),
                  std::min(a.y1, b.y1)};
      if (o.x0 > o.x1 || o.y0 > o.y1) continue;
      for (int ix = 0; ix <= grid; ++ix) {
        for (int iy = 0; iy <= grid; ++iy) {
          const Point p{o.x0 + (o.x1 - o.x0) * ix / grid, o.y0 + (o.y1 - o.y0) * iy / grid};
          if (contains(inclusions[i].shape, p) && contains(inclusions[j].shape, p)) {
            std::ostringstream os;
            os << "inclusions " << i << " and " << j << " overlap";
            throw DomainError(os.str());
          }
        }
      }
    }
  }
}

std::optional<double> Phantom::min_contrast() const {
  if (inclusions.empty()) return std::nullopt;
  double m = inclusions.front().contrast;
  for (const auto& inc : inclusions) m = std::min(m, inc.contrast);
  return m;
}

double sigma_at(const Phantom& phantom, const Point& p) {
  if (!(p.squaredNorm() <= 1.0 + 1e-14)) {
    std::ostringstream os;
    os << "sigma_at: point (" << p.x() << ", " << p.y() << ") outside the unit disk";
    throw DomainError(os.str());
  }
  for (const auto& inc : phantom.inclusions) {
    if (contains(inc.shape, p)) return 1.0 + inc.contrast;
  }
  return 1.0;
}

double clipped_area(double x0, double x1, double y0, double y1) {
  x0 = std::max(x0, -1.0);
  x1 = std::min(x1, 1.0);
  y0 = std::max(y0, -1.0);
  y1 = std::min(y1, 1.0);
  if (x0 >= x1 || y0 >= y1) return 0.0;

  // The chord endpoints where the circle crosses y = y0 or y = y1 split
  // [x0, x1] into pieces on which both integration limits follow one branch.
  std::vector<double> breaks{x0, x1};
  for (double y : {y0, y1}) {
    const double c = std::sqrt(std::max(0.0, 1.0 - y * y));
    for (double b : {-c, c}) {
      if (b > x0 && b < x1) breaks.push_back(b);
    }
  }
  std::sort(breaks.begin(), breaks.end());

  double area = 0.0;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double a = breaks[k];
    const double b = breaks[k + 1];
    if (b <= a) continue;
    const double m = 0.5 * (a + b);
    const double s = std::sqrt(std::max(0.0, 1.0 - m * m));
    const bool upper_is_circle = s < y1;
    const bool lower_is_circle = -s > y0;
    const double upper = upper_is_circle ? s : y1;
    const double lower = lower_is_circle ? -s : y0;
    if (upper <= lower) continue;
    const double arc = half_circle_primitive(b) - half_circle_primitive(a);
    const double upper_int = upper_is_circle ? arc : y1 * (b - a);
    const double lower_int = lower_is_circle ? -arc : y0 * (b - a);
    area += upper_int - lower_int;
  }
  return area;
}

std::vector<QuadraturePoint> clipped_cell_quadrature(double x0, double x1, double y0,
                                                     double y1, int subdivisions) {
  const double area = clipped_area(x0, x1, y0, y1);
  std::vector<QuadraturePoint> points;
  if (area <= 0.0) return points;
  for (int q = std::max(subdivisions, 1); q <= (1 << 12); q *= 2) {
    points.clear();
    const double hx = (x1 - x0) / q;
    const double hy = (y1 - y0) / q;
    for (int j = 0; j < q; ++j) {
      for (int i = 0; i < q; ++i) {
        const Point p{x0 + (i + 0.5) * hx, y0 + (j + 0.5) * hy};
        if (p.squaredNorm() < 1.0) points.push_back({p, 0.0});
      }
    }
    if (!points.empty()) break;
  }
  const double w = area / static_cast<double>(points.size());
  for (auto& qp : points) qp.weight = w;
  return points;
}

int PixelPartition::locate(const Point& p) const {
  if (resolution <= 0 || !(p.squaredNorm() < 1.0)) return -1;
  const double h = 2.0 / resolution;
  const int ix = std::clamp(static_cast<int>(std::floor((p.x() + 1.0) / h)), 0, resolution - 1);
  const int iy = std::clamp(static_cast<int>(std::floor((p.y() + 1.0) / h)), 0, resolution - 1);
  return cell_to_pixel[static_cast<std::size_t>(iy) * resolution + ix];
}

PixelPartition build_partition(int resolution, const PartitionOptions& options) {
  if (resolution < 2) throw ConfigError("partition resolution must be at least 2");
  if (options.quadrature_subdivisions < 1)
    throw ConfigError("quadrature_subdivisions must be positive");
  if (!(options.area_floor >= 0.0 && options.area_floor < 1.0))
    throw ConfigError("area_floor must lie in [0, 1)");

  PixelPartition partition;
  partition.resolution = resolution;
  partition.cell_to_pixel.assign(static_cast<std::size_t>(resolution) * resolution, -1);
  const double h = 2.0 / resolution;
  for (int iy = 0; iy < resolution; ++iy) {
    for (int ix = 0; ix < resolution; ++ix) {
      Pixel px;
      px.ix = ix;
      px.iy = iy;
      px.x0 = -1.0 + ix * h;
      px.x1 = -1.0 + (ix + 1) * h;
      px.y0 = -1.0 + iy * h;
      px.y1 = -1.0 + (iy + 1) * h;
      px.area = clipped_area(px.x0, px.x1, px.y0, px.y1);
      if (px.area <= 0.0 || px.area < options.area_floor * h * h) continue;
      px.quadrature =
          clipped_cell_quadrature(px.x0, px.x1, px.y0, px.y1, options.quadrature_subdivisions);
      px.id = static_cast<int>(partition.pixels.size());
      partition.cell_to_pixel[static_cast<std::size_t>(iy) * resolution + ix] = px.id;
      partition.pixels.push_back(std::move(px));
    }
  }
  return partition;
}

const char* to_string(PixelClass c) {
  switch (c) {
    case PixelClass::Inside: return "inside";
    case PixelClass::Outside: return "outside";
    case PixelClass::Boundary: return "boundary";
  }
  return "?";
}

PixelClass classify_pixel(const Pixel& pixel, const Phantom& phantom, int samples) {
  if (samples < 4) throw ConfigError("classify_pixel needs at least 4 samples per axis");
  int total = 0;
  int hits = 0;
  const double hx = (pixel.x1 - pixel.x0) / samples;
  const double hy = (pixel.y1 - pixel.y0) / samples;
  for (int j = 0; j < samples; ++j) {
    for (int i = 0; i < samples; ++i) {
      const Point p{pixel.x0 + (i + 0.5) * hx, pixel.y0 + (j + 0.5) * hy};
      if (!(p.squaredNorm() < 1.0)) continue;
      ++total;
      for (const auto& inc : phantom.inclusions) {
        if (contains(inc.shape, p)) {
          ++hits;
          break;
        }
      }
    }
  }
  if (hits == 0) return PixelClass::Outside;
  if (hits == total) return PixelClass::Inside;
  return PixelClass::Boundary;
}

}  // namespace eit
