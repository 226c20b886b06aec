#include "eit/fem.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include "eit/errors.hpp"

namespace eit {

namespace {

const double kInvSqrtPi = 1.0 / std::sqrt(std::numbers::pi);

double signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

// Gradients of the three barycentric hat functions on a triangle.
std::array<Eigen::Vector2d, 3> hat_gradients(const Point& a, const Point& b, const Point& c,
                                             double area) {
  const double s = 1.0 / (2.0 * area);
  return {Eigen::Vector2d{(b.y() - c.y()) * s, (c.x() - b.x()) * s},
          Eigen::Vector2d{(c.y() - a.y()) * s, (a.x() - c.x()) * s},
          Eigen::Vector2d{(a.y() - b.y()) * s, (b.x() - a.x()) * s}};
}

}  // namespace

const char* to_string(CurrentKind kind) {
  return kind == CurrentKind::Sine ? "sin" : "cos";
}

double Mesh::triangle_area(std::size_t t) const {
  const auto& tri = triangles[t];
  return signed_area(nodes[tri[0]], nodes[tri[1]], nodes[tri[2]]);
}

Point Mesh::centroid(std::size_t t) const {
  const auto& tri = triangles[t];
  return (nodes[tri[0]] + nodes[tri[1]] + nodes[tri[2]]) / 3.0;
}

double Mesh::boundary_length() const {
  double len = 0.0;
  for (const auto& e : boundary_edges) len += (nodes[e[1]] - nodes[e[0]]).norm();
  return len;
}

std::size_t Mesh::edge_count() const {
  std::set<std::pair<int, int>> edges;
  for (const auto& t : triangles) {
    for (int k = 0; k < 3; ++k) {
      const int a = t[k];
      const int b = t[(k + 1) % 3];
      edges.emplace(std::min(a, b), std::max(a, b));
    }
  }
  return edges.size();
}

void Mesh::validate() const {
  if (element_sigma.size() != triangles.size())
    throw DomainError("mesh: element_sigma size does not match triangle count");
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    for (int v : triangles[t]) {
      if (v < 0 || static_cast<std::size_t>(v) >= nodes.size())
        throw DomainError("mesh: triangle references a missing node");
    }
    if (!(triangle_area(t) > 0.0)) {
      std::ostringstream os;
      os << "mesh: triangle " << t << " is degenerate or clockwise";
      throw DomainError(os.str());
    }
    if (!(element_sigma[t] >= 1.0)) {
      std::ostringstream os;
      os << "mesh: element " << t << " has conductivity below 1";
      throw DomainError(os.str());
    }
  }
  if (boundary_edges.size() < 3) throw DomainError("mesh: boundary loop too short");
  for (std::size_t k = 0; k < boundary_edges.size(); ++k) {
    const auto& next = boundary_edges[(k + 1) % boundary_edges.size()];
    if (boundary_edges[k][1] != next[0]) throw DomainError("mesh: boundary edges do not form a loop");
  }
}

std::vector<double> centered_disk_radii(const Phantom& phantom) {
  std::vector<double> radii;
  for (const auto& inc : phantom.inclusions) {
    if (const auto* d = std::get_if<Disk>(&inc.shape); d && d->center.norm() == 0.0)
      radii.push_back(d->radius);
  }
  return radii;
}

Mesh generate_mesh(int refinement, const Phantom& phantom, const MeshOptions& options) {
  if (refinement < 1) throw ConfigError("mesh refinement must be at least 1");
  if (!(options.angular_scale > 0.0)) throw ConfigError("mesh angular_scale must be positive");

  Mesh mesh;
  // Anchor rings: each conforming radius is pinned to its nearest ring and the
  // radii in between are interpolated linearly, so spacing stays graded.
  std::vector<std::pair<int, double>> anchors{{0, 0.0}, {refinement, 1.0}};
  for (double rho : options.conform_radii) {
    if (!(rho > 0.0 && rho < 1.0)) continue;
    const int r = static_cast<int>(std::lround(rho * refinement));
    if (r < 1 || r >= refinement) continue;
    if (std::any_of(anchors.begin(), anchors.end(), [r](const auto& a) { return a.first == r; }))
      continue;
    anchors.emplace_back(r, rho);
  }
  std::sort(anchors.begin(), anchors.end());
  mesh.ring_radii.resize(refinement + 1);
  for (std::size_t k = 0; k + 1 < anchors.size(); ++k) {
    const auto [r0, v0] = anchors[k];
    const auto [r1, v1] = anchors[k + 1];
    if (!(v1 > v0)) throw ConfigError("mesh: conforming radii are too close for this refinement");
    for (int r = r0; r <= r1; ++r)
      mesh.ring_radii[r] = v0 + (v1 - v0) * static_cast<double>(r - r0) / (r1 - r0);
  }

  // ring_start[r] is the index of the first node of ring r; ring 0 is the centre
  std::vector<int> ring_start(refinement + 1);
  std::vector<int> ring_count(refinement + 1);
  mesh.nodes.emplace_back(0.0, 0.0);
  ring_start[0] = 0;
  ring_count[0] = 1;
  for (int r = 1; r <= refinement; ++r) {
    const int n = std::max(3, static_cast<int>(std::ceil(6.0 * r * options.angular_scale - 1e-9)));
    ring_start[r] = static_cast<int>(mesh.nodes.size());
    ring_count[r] = n;
    const double radius = mesh.ring_radii[r];
    for (int k = 0; k < n; ++k) {
      const double t = 2.0 * std::numbers::pi * k / n;
      mesh.nodes.emplace_back(radius * std::cos(t), radius * std::sin(t));
    }
  }

  const auto add_triangle = [&mesh](int a, int b, int c) {
    if (signed_area(mesh.nodes[a], mesh.nodes[b], mesh.nodes[c]) < 0.0) std::swap(b, c);
    mesh.triangles.push_back({a, b, c});
  };

  for (int k = 0; k < ring_count[1]; ++k) {
    add_triangle(0, ring_start[1] + k, ring_start[1] + (k + 1) % ring_count[1]);
  }
  // Zip neighbouring rings together in order of increasing angle.
  for (int r = 2; r <= refinement; ++r) {
    const int na = ring_count[r - 1];
    const int nb = ring_count[r];
    const auto inner = [&](int i) { return ring_start[r - 1] + i % na; };
    const auto outer = [&](int k) { return ring_start[r] + k % nb; };
    int i = 0;
    int k = 0;
    while (i < na || k < nb) {
      const bool advance_outer =
          i == na || (k < nb && static_cast<long>(k + 1) * na <= static_cast<long>(i + 1) * nb);
      if (advance_outer) {
        add_triangle(inner(i), outer(k), outer(k + 1));
        ++k;
      } else {
        add_triangle(inner(i), outer(k), inner(i + 1));
        ++i;
      }
    }
  }

  const int nb = ring_count[refinement];
  for (int k = 0; k < nb; ++k) {
    mesh.boundary_edges.push_back({ring_start[refinement] + k, ring_start[refinement] + (k + 1) % nb});
  }

  assign_conductivity(mesh, phantom);
  return mesh;
}

void assign_conductivity(Mesh& mesh, const Phantom& phantom) {
  mesh.element_sigma.resize(mesh.triangles.size());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    mesh.element_sigma[t] = sigma_at(phantom, mesh.centroid(t));
  }
}

void write_mesh(std::ostream& os, const Mesh& mesh) {
  os.precision(17);
  os << "nodes " << mesh.nodes.size() << '\n';
  for (std::size_t i = 0; i < mesh.nodes.size(); ++i)
    os << i << ' ' << mesh.nodes[i].x() << ' ' << mesh.nodes[i].y() << '\n';
  os << "triangles " << mesh.triangles.size() << '\n';
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    os << t << ' ' << tri[0] << ' ' << tri[1] << ' ' << tri[2] << ' ' << mesh.element_sigma[t]
       << '\n';
  }
}

PotentialValue homogeneous_potential(int j, CurrentKind kind, const Point& p) {
  if (j <= 0) throw DomainError("homogeneous_potential: order j must be positive");
  if (!(p.squaredNorm() <= 1.0 + 1e-12))
    throw DomainError("homogeneous_potential: point outside the unit disk");
  // z^(j-1) by repeated multiplication keeps the origin exact.
  const std::complex<double> z{p.x(), p.y()};
  std::complex<double> zjm1{1.0, 0.0};
  for (int k = 1; k < j; ++k) zjm1 *= z;
  const std::complex<double> zj = zjm1 * z;
  const double scale = kInvSqrtPi / j;
  PotentialValue out;
  if (kind == CurrentKind::Cosine) {
    out.value = scale * zj.real();
    out.gradient = Eigen::Vector2d{zjm1.real(), -zjm1.imag()} * kInvSqrtPi;
  } else {
    out.value = scale * zj.imag();
    out.gradient = Eigen::Vector2d{zjm1.imag(), zjm1.real()} * kInvSqrtPi;
  }
  return out;
}

double boundary_current(int j, CurrentKind kind, const Point& p) {
  const double phi = std::atan2(p.y(), p.x());
  return kInvSqrtPi * (kind == CurrentKind::Sine ? std::sin(j * phi) : std::cos(j * phi));
}

ForwardSolver::ForwardSolver(const Mesh& mesh) : mesh_(mesh) {
  mesh_.validate();
  const int n = static_cast<int>(mesh_.nodes.size());

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(mesh_.triangles.size() * 9);
  for (std::size_t t = 0; t < mesh_.triangles.size(); ++t) {
    const auto& tri = mesh_.triangles[t];
    const double area = mesh_.triangle_area(t);
    const auto grads =
        hat_gradients(mesh_.nodes[tri[0]], mesh_.nodes[tri[1]], mesh_.nodes[tri[2]], area);
    const double s = mesh_.element_sigma[t] * area;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) triplets.emplace_back(tri[a], tri[b], s * grads[a].dot(grads[b]));
  }
  stiffness_.resize(n, n);
  stiffness_.setFromTriplets(triplets.begin(), triplets.end());

  boundary_weights_ = Eigen::VectorXd::Zero(n);
  for (const auto& e : mesh_.boundary_edges) {
    const double half = 0.5 * (mesh_.nodes[e[1]] - mesh_.nodes[e[0]]).norm();
    boundary_weights_[e[0]] += half;
    boundary_weights_[e[1]] += half;
  }

  // [K c; c^T 0]: the last row enforces a zero boundary mean.
  for (int i = 0; i < n; ++i) {
    if (boundary_weights_[i] != 0.0) {
      triplets.emplace_back(i, n, boundary_weights_[i]);
      triplets.emplace_back(n, i, boundary_weights_[i]);
    }
  }
  Eigen::SparseMatrix<double> bordered(n + 1, n + 1);
  bordered.setFromTriplets(triplets.begin(), triplets.end());
  bordered.makeCompressed();
  lu_.analyzePattern(bordered);
  lu_.factorize(bordered);
  if (lu_.info() != Eigen::Success) {
    std::ostringstream os;
    os << "forward solver: factorization of the bordered " << (n + 1) << "x" << (n + 1)
       << " system failed: " << lu_.lastErrorMessage();
    throw NumericalError(os.str());
  }
}

FemSolution ForwardSolver::solve(int j, CurrentKind kind) const {
  if (j <= 0) throw DomainError("solve_difference: order j must be positive");
  const int n = static_cast<int>(mesh_.nodes.size());
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
  for (std::size_t t = 0; t < mesh_.triangles.size(); ++t) {
    const double contrast = mesh_.element_sigma[t] - 1.0;
    if (contrast == 0.0) continue;
    const auto& tri = mesh_.triangles[t];
    const double area = mesh_.triangle_area(t);
    const auto grads =
        hat_gradients(mesh_.nodes[tri[0]], mesh_.nodes[tri[1]], mesh_.nodes[tri[2]], area);
    const Eigen::Vector2d g0 = homogeneous_potential(j, kind, mesh_.centroid(t)).gradient;
    for (int a = 0; a < 3; ++a) rhs[tri[a]] += contrast * area * g0.dot(grads[a]);
  }

  FemSolution sol;
  sol.current_index = j;
  sol.kind = kind;
  if (rhs.isZero(0.0)) {
    sol.nodal_values = Eigen::VectorXd::Zero(n);
    return sol;
  }
  const Eigen::VectorXd x = lu_.solve(rhs);
  if (!x.allFinite()) {
    std::ostringstream os;
    os << "forward solver: non-finite solution for current " << j << ' ' << to_string(kind);
    throw NumericalError(os.str());
  }
  sol.nodal_values = x.head(n);
  return sol;
}

FemSolution solve_difference(const Mesh& mesh, int j, CurrentKind kind) {
  return ForwardSolver(mesh).solve(j, kind);
}

double boundary_mean(const Mesh& mesh, const Eigen::VectorXd& nodal_values) {
  double integral = 0.0;
  for (const auto& e : mesh.boundary_edges) {
    const double len = (mesh.nodes[e[1]] - mesh.nodes[e[0]]).norm();
    integral += 0.5 * len * (nodal_values[e[0]] + nodal_values[e[1]]);
  }
  return integral / mesh.boundary_length();
}

double boundary_inner_product(const Mesh& mesh, const Eigen::VectorXd& nodal_values, int i,
                              CurrentKind kind) {
  static const double gauss = 0.5 / std::sqrt(3.0);
  double sum = 0.0;
  for (const auto& e : mesh.boundary_edges) {
    const Point& a = mesh.nodes[e[0]];
    const Point& b = mesh.nodes[e[1]];
    const double half_len = 0.5 * (b - a).norm();
    for (double t : {0.5 - gauss, 0.5 + gauss}) {
      const Point p = (1.0 - t) * a + t * b;
      const double d = (1.0 - t) * nodal_values[e[0]] + t * nodal_values[e[1]];
      sum += half_len * boundary_current(i, kind, p) * d;
    }
  }
  return sum;
}

double boundary_inner_product(const Mesh& mesh, const FemSolution& sol, int i, CurrentKind kind) {
  return boundary_inner_product(mesh, sol.nodal_values, i, kind);
}

}  // namespace eit
