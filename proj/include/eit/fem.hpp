#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "eit/geometry.hpp"

namespace eit {

enum class CurrentKind { Sine, Cosine };

const char* to_string(CurrentKind kind);

/// Triangulated unit disk carrying a per-element conductivity.
struct Mesh {
  std::vector<Point> nodes;
  std::vector<std::array<int, 3>> triangles;       // counterclockwise
  std::vector<std::array<int, 2>> boundary_edges;  // counterclockwise loop
  std::vector<double> element_sigma;
  std::vector<double> ring_radii;

  double triangle_area(std::size_t t) const;
  Point centroid(std::size_t t) const;
  double boundary_length() const;

  /// Number of distinct undirected edges.
  std::size_t edge_count() const;

  /// Throws DomainError if a triangle is degenerate or clockwise, the
  /// boundary is not one closed loop, or a conductivity is below 1.
  void validate() const;
};

struct MeshOptions {
  /// Ring r carries ceil(6 r scale) nodes.
  double angular_scale = 1.0;
  /// Ring radii closest to these values are moved onto them so that circular
  /// interfaces centred at the origin are resolved exactly.
  std::vector<double> conform_radii;
};

/// Radii of disk inclusions centred at the origin, for MeshOptions::conform_radii.
std::vector<double> centered_disk_radii(const Phantom& phantom);

/// Structured polar mesh with `refinement` concentric rings; element
/// conductivity is sampled at triangle centroids.
Mesh generate_mesh(int refinement, const Phantom& phantom = {}, const MeshOptions& options = {});

/// Reassigns element_sigma from the phantom by centroid sampling.
void assign_conductivity(Mesh& mesh, const Phantom& phantom);

/// Plain-text listing: node records "index x y", then triangle records
/// "index a b c sigma". Debug output only.
void write_mesh(std::ostream& os, const Mesh& mesh);

struct PotentialValue {
  double value;
  Eigen::Vector2d gradient;
};

/// Harmonic extension into the unit disk of the current
/// (1/sqrt(pi)) sin(j phi) or cos(j phi), i.e. Im or Re of z^j / (j sqrt(pi)).
PotentialValue homogeneous_potential(int j, CurrentKind kind, const Point& p);

/// The boundary current (1/sqrt(pi)) sin(j phi) or cos(j phi) at the polar
/// angle of p. p need not lie exactly on the circle.
double boundary_current(int j, CurrentKind kind, const Point& p);

struct FemSolution {
  Eigen::VectorXd nodal_values;
  int current_index = 0;
  CurrentKind kind = CurrentKind::Cosine;
};

/// P1 solver for the difference potential d_j = u0_j - u_j:
///   div(sigma grad d) = div((sigma - 1) grad u0_j),  zero total flux,
///   boundary mean of d = 0 (Lagrange multiplier).
/// The bordered system is factored once at construction; solve() is const and
/// does not touch the factorization, so one instance may serve concurrent
/// callers.
class ForwardSolver {
public:
  explicit ForwardSolver(const Mesh& mesh);

  FemSolution solve(int j, CurrentKind kind) const;

  const Eigen::SparseMatrix<double>& stiffness() const { return stiffness_; }
  /// Entries are the integrals of each nodal basis function over the boundary.
  const Eigen::VectorXd& boundary_weights() const { return boundary_weights_; }

private:
  Mesh mesh_;
  Eigen::SparseMatrix<double> stiffness_;
  Eigen::VectorXd boundary_weights_;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
};

FemSolution solve_difference(const Mesh& mesh, int j, CurrentKind kind);

/// Integral over the boundary polygon of the nodal field, divided by the
/// polygon length.
double boundary_mean(const Mesh& mesh, const Eigen::VectorXd& nodal_values);

/// Integral of current(i, kind) times the trace of sol over the boundary
/// polygon, two-point Gauss rule per edge.
double boundary_inner_product(const Mesh& mesh, const FemSolution& sol, int i, CurrentKind kind);

/// Same rule for an arbitrary nodal field.
double boundary_inner_product(const Mesh& mesh, const Eigen::VectorXd& nodal_values, int i,
                              CurrentKind kind);

}  // namespace eit
