#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "eit/fem.hpp"
#include "eit/geometry.hpp"

namespace eit {

/// The N = 2 N1 orthonormal boundary currents (1/sqrt(pi)) {sin, cos}(j phi),
/// j = 1..N1, ordered sin 1, cos 1, sin 2, cos 2, ...
struct CurrentBasis {
  int n1 = 0;
  std::vector<std::pair<int, CurrentKind>> ordering;

  explicit CurrentBasis(int n1);
  int size() const { return static_cast<int>(ordering.size()); }
};

/// Voltage-difference matrix V_ij = <g_i, (Lambda(1) - Lambda(sigma)) g_j>.
struct MeasurementMatrix {
  Eigen::MatrixXd entries;
  double noise_level = 0.0;  // absolute delta
  std::optional<std::uint64_t> seed;
  double asymmetry = 0.0;    // ||V - V^T||_F before symmetrisation

  double frobenius_norm() const { return entries.norm(); }
};

struct SensitivityMatrix {
  int pixel_id = 0;
  Eigen::MatrixXd entries;
};

/// One forward solve per current on the phantom's mesh, then boundary
/// integrals against every current. The result is symmetrised.
MeasurementMatrix assemble_V(const Mesh& mesh, const CurrentBasis& basis);

/// Same, reusing an already factored solver.
MeasurementMatrix assemble_V(const ForwardSolver& solver, const Mesh& mesh,
                             const CurrentBasis& basis);

/// Neumann-to-Dirichlet eigenvalue of order j for the unit disk with a
/// concentric disk of radius rho and conductivity sigma1 in a unit background:
///   lambda_j = (1/j) (1 + mu rho^2j) / (1 - mu rho^2j),  mu = (1 - sigma1)/(1 + sigma1).
/// V then has the diagonal 1/j - lambda_j for both the sine and cosine current.
double analytic_concentric(double rho, double sigma1, int j);

/// Energy integrals of the homogeneous potentials over the pixel:
///   S_ij = int_pixel grad u0_i . grad u0_j.
SensitivityMatrix assemble_Sk(const Pixel& pixel, const CurrentBasis& basis);

std::vector<SensitivityMatrix> assemble_all_Sk(const PixelPartition& partition,
                                               const CurrentBasis& basis);

/// Weighted gradient samples F (2Q x N) with assemble_Sk(...) = F^T F.
Eigen::MatrixXd sensitivity_factor(const Pixel& pixel, const CurrentBasis& basis);

/// Smallest eigenvalue of S_k computed as sigma_min(F)^2 from the Gram factor.
/// Stays nonnegative where an eigensolver on S_k itself would return roundoff
/// of either sign for the tiny high-order modes.
double sensitivity_min_eigenvalue(const Pixel& pixel, const CurrentBasis& basis);

/// Noise direction E / ||E||_F with E_ij uniform on [-1, 1), filled row-major
/// from mt19937_64(seed); each draw x maps to 2 (x >> 11) 2^-53 - 1.
Eigen::MatrixXd normalized_noise(Eigen::Index n, std::uint64_t seed);

/// V^delta = sym(V + E/||E||_F delta_abs) with delta_abs = delta_rel ||V||_F.
MeasurementMatrix add_noise(const MeasurementMatrix& v, double delta_rel, std::uint64_t seed);

/// Plain text: a line with N, then N rows of N values at 17 significant digits.
void write_matrix(std::ostream& os, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix(std::istream& is);

}  // namespace eit
