#include "eit/ntd.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include <Eigen/SVD>

#include "eit/errors.hpp"

namespace eit {

CurrentBasis::CurrentBasis(int n1_) : n1(n1_) {
  if (n1 < 1) throw ConfigError("current basis needs N1 >= 1");
  ordering.reserve(2 * static_cast<std::size_t>(n1));
  for (int j = 1; j <= n1; ++j) {
    ordering.emplace_back(j, CurrentKind::Sine);
    ordering.emplace_back(j, CurrentKind::Cosine);
  }
}

MeasurementMatrix assemble_V(const ForwardSolver& solver, const Mesh& mesh,
                             const CurrentBasis& basis) {
  const int n = basis.size();
  Eigen::MatrixXd v(n, n);
  for (int col = 0; col < n; ++col) {
    const auto [j, kind] = basis.ordering[col];
    const FemSolution d = solver.solve(j, kind);
    for (int row = 0; row < n; ++row) {
      const auto [i, ikind] = basis.ordering[row];
      v(row, col) = boundary_inner_product(mesh, d, i, ikind);
    }
  }
  MeasurementMatrix out;
  out.asymmetry = (v - v.transpose()).norm();
  out.entries = 0.5 * (v + v.transpose());
  return out;
}

MeasurementMatrix assemble_V(const Mesh& mesh, const CurrentBasis& basis) {
  const ForwardSolver solver(mesh);
  return assemble_V(solver, mesh, basis);
}

double analytic_concentric(double rho, double sigma1, int j) {
  if (!(rho > 0.0 && rho < 1.0)) throw DomainError("analytic_concentric: rho must lie in (0, 1)");
  if (!(sigma1 > 0.0)) throw DomainError("analytic_concentric: sigma1 must be positive");
  if (j < 1) throw DomainError("analytic_concentric: j must be positive");
  const double mu = (1.0 - sigma1) / (1.0 + sigma1);
  const double t = mu * std::pow(rho, 2 * j);
  return (1.0 + t) / ((1.0 - t) * j);
}

Eigen::MatrixXd sensitivity_factor(const Pixel& pixel, const CurrentBasis& basis) {
  const int n = basis.size();
  const auto q = static_cast<Eigen::Index>(pixel.quadrature.size());
  Eigen::MatrixXd f(2 * q, n);
  for (Eigen::Index k = 0; k < q; ++k) {
    const auto& qp = pixel.quadrature[k];
    const double sw = std::sqrt(qp.weight);
    for (int col = 0; col < n; ++col) {
      const auto [j, kind] = basis.ordering[col];
      const Eigen::Vector2d g = homogeneous_potential(j, kind, qp.p).gradient;
      f(2 * k, col) = sw * g.x();
      f(2 * k + 1, col) = sw * g.y();
    }
  }
  return f;
}

SensitivityMatrix assemble_Sk(const Pixel& pixel, const CurrentBasis& basis) {
  if (!(pixel.area > 0.0) || pixel.quadrature.empty()) {
    std::ostringstream os;
    os << "assemble_Sk: pixel " << pixel.id << " has zero clipped area";
    throw DomainError(os.str());
  }
  const int n = basis.size();
  std::vector<Eigen::Vector2d> grads(n);
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
  // Fixed summation order: quadrature points in storage order, upper triangle
  // accumulated and mirrored so S is symmetric bit for bit.
  for (const auto& qp : pixel.quadrature) {
    for (int c = 0; c < n; ++c) {
      const auto [j, kind] = basis.ordering[c];
      grads[c] = homogeneous_potential(j, kind, qp.p).gradient;
    }
    for (int r = 0; r < n; ++r)
      for (int c = r; c < n; ++c) s(r, c) += qp.weight * grads[r].dot(grads[c]);
  }
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < r; ++c) s(r, c) = s(c, r);
  return {pixel.id, std::move(s)};
}

std::vector<SensitivityMatrix> assemble_all_Sk(const PixelPartition& partition,
                                               const CurrentBasis& basis) {
  std::vector<SensitivityMatrix> out;
  out.reserve(partition.size());
  for (const auto& px : partition.pixels) out.push_back(assemble_Sk(px, basis));
  return out;
}

double sensitivity_min_eigenvalue(const Pixel& pixel, const CurrentBasis& basis) {
  const Eigen::MatrixXd f = sensitivity_factor(pixel, basis);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(f);
  const double smin = svd.singularValues().minCoeff();
  return smin * smin;
}

Eigen::MatrixXd normalized_noise(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  Eigen::MatrixXd e(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
      e(i, j) = 2.0 * u - 1.0;
    }
  }
  return e / e.norm();
}

MeasurementMatrix add_noise(const MeasurementMatrix& v, double delta_rel, std::uint64_t seed) {
  if (!(delta_rel >= 0.0)) throw DomainError("add_noise: delta_rel must be nonnegative");
  MeasurementMatrix out = v;
  out.seed = seed;
  if (delta_rel == 0.0) {
    out.noise_level = 0.0;
    return out;
  }
  const double delta_abs = delta_rel * v.frobenius_norm();
  const Eigen::MatrixXd noisy = v.entries + normalized_noise(v.entries.rows(), seed) * delta_abs;
  out.asymmetry = (noisy - noisy.transpose()).norm();
  out.entries = 0.5 * (noisy + noisy.transpose());
  out.noise_level = delta_abs;
  return out;
}

void write_matrix(std::ostream& os, const Eigen::MatrixXd& m) {
  os << m.rows() << '\n';
  char buf[32];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      if (j) os << ' ';
      os << buf;
    }
    os << '\n';
  }
}

Eigen::MatrixXd read_matrix(std::istream& is) {
  Eigen::Index n = 0;
  if (!(is >> n) || n < 0) throw DomainError("read_matrix: missing or invalid dimension line");
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!(is >> m(i, j))) {
        std::ostringstream os;
        os << "read_matrix: truncated at entry (" << i << ", " << j << ")";
        throw DomainError(os.str());
      }
    }
  }
  return m;
}

}  // namespace eit
