#pragma once

#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace eit {

using Point = Eigen::Vector2d;

struct Disk {
  Point center;
  double radius;
};

struct Rectangle {
  Point lower_left;
  Point upper_right;
};

struct Ellipse {
  Point center;
  double semi_x;
  double semi_y;
};

using Shape = std::variant<Disk, Rectangle, Ellipse>;

/// Closed-set membership.
bool contains(const Shape& shape, const Point& p);

/// A shape carrying conductivity 1 + contrast.
struct Inclusion {
  Shape shape;
  double contrast;
};

struct Phantom {
  std::vector<Inclusion> inclusions;

  /// Throws DomainError unless every shape sits strictly inside the unit
  /// disk, shapes are pairwise disjoint and all contrasts are positive.
  /// Disjointness is checked on a sampled grid over bounding-box overlaps.
  void validate() const;

  /// Smallest contrast, or nullopt for the empty phantom.
  std::optional<double> min_contrast() const;
};

/// Conductivity 1 + gamma_i inside shape i, 1 elsewhere.
/// Throws DomainError for points outside the closed unit disk.
double sigma_at(const Phantom& phantom, const Point& p);

struct QuadraturePoint {
  Point p;
  double weight;
};

/// A grid cell clipped to the unit disk.
struct Pixel {
  int id = 0;
  int ix = 0;
  int iy = 0;
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // unclipped cell bounds
  double area = 0;                        // exact clipped area
  std::vector<QuadraturePoint> quadrature;

  Point center() const { return {0.5 * (x0 + x1), 0.5 * (y0 + y1)}; }
};

struct PartitionOptions {
  int quadrature_subdivisions = 16;
  double area_floor = 1e-3;  // relative to the unclipped cell area
};

struct PixelPartition {
  int resolution = 0;
  std::vector<Pixel> pixels;
  std::vector<int> cell_to_pixel;  // row-major (iy * M + ix), -1 if dropped

  std::size_t size() const { return pixels.size(); }

  /// Pixel containing p, or -1 when p is outside the disk or in a dropped cell.
  int locate(const Point& p) const;
};

/// Exact area of [x0,x1]x[y0,y1] intersected with the unit disk.
double clipped_area(double x0, double x1, double y0, double y1);

/// Cartesian M x M cells over [-1,1]^2 clipped to the unit disk. Cells whose
/// clipped area is below area_floor times the cell area are dropped. Pixel
/// ids run row-major from the bottom-left cell.
PixelPartition build_partition(int resolution, const PartitionOptions& options = {});

/// Quadrature for an arbitrary axis-aligned cell clipped to the disk: centres
/// of a q x q sub-grid that fall inside the disk, weights rescaled so they sum
/// to the exact clipped area. Refines q until at least one centre is inside.
std::vector<QuadraturePoint> clipped_cell_quadrature(double x0, double x1, double y0,
                                                     double y1, int subdivisions);

enum class PixelClass { Inside, Outside, Boundary };

const char* to_string(PixelClass c);

/// Classifies by testing a samples x samples grid of sub-cell centres that
/// lie inside the disk against every inclusion.
PixelClass classify_pixel(const Pixel& pixel, const Phantom& phantom, int samples = 8);

}  // namespace eit
