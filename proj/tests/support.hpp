#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

namespace eit::testing {

inline Eigen::MatrixXd random_matrix(std::mt19937_64& gen, int rows, int cols) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = u(gen);
  return m;
}

inline Eigen::MatrixXd random_symmetric(std::mt19937_64& gen, int n) {
  const Eigen::MatrixXd a = random_matrix(gen, n, n);
  return 0.5 * (a + a.transpose());
}

// B B^T + shift I, positive definite for shift > 0.
inline Eigen::MatrixXd random_spd(std::mt19937_64& gen, int n, double shift = 0.1) {
  const Eigen::MatrixXd b = random_matrix(gen, n, n);
  return b * b.transpose() + shift * Eigen::MatrixXd::Identity(n, n);
}

inline double min_eig(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

inline double max_abs_eig(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

// |M| from an independent route: sqrt of M^2 via eigen-decomposition of M^2.
inline Eigen::MatrixXd abs_via_square(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m * m);
  Eigen::VectorXd d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

// Largest alpha with lambda_min(shifted - alpha S) >= 0, by bisection.
inline double bisect_beta(const Eigen::MatrixXd& s, const Eigen::MatrixXd& shifted,
                          double rel_tol = 1e-10) {
  double lo = 0.0, hi = 1.0;
  while (min_eig(shifted - hi * s) >= 0.0) hi *= 2.0;
  while (hi - lo > rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (min_eig(shifted - mid * s) >= 0.0) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Box grid search for min 1/2 a^T H a - c^T a on [0, u1] x [0, u2] x [0, u3]
// with step h. The first two coordinates are enumerated; the third is
// minimized exactly over its grid (the 1-D restriction is a convex parabola,
// so the best grid value is one of the two neighbours of its minimizer).
inline Eigen::Vector3d grid_search3(const Eigen::Matrix3d& h, const Eigen::Vector3d& c,
                                    const Eigen::Vector3d& upper, double step) {
  auto count = [&](double u) { return static_cast<int>(std::floor(u / step + 1e-9)); };
  const int n0 = count(upper[0]), n1 = count(upper[1]), n2 = count(upper[2]);
  double best = std::numeric_limits<double>::infinity();
  Eigen::Vector3d arg = Eigen::Vector3d::Zero();
  for (int i = 0; i <= n0; ++i) {
    const double x = i * step;
    for (int j = 0; j <= n1; ++j) {
      const double y = j * step;
      const double base = 0.5 * (h(0, 0) * x * x + 2 * h(0, 1) * x * y + h(1, 1) * y * y) -
                          c[0] * x - c[1] * y;
      const double lin = h(0, 2) * x + h(1, 2) * y - c[2];
      const double zstar = -lin / h(2, 2);
      const int k0 = std::clamp(static_cast<int>(std::floor(zstar / step)), 0, n2);
      for (int k : {k0, std::min(k0 + 1, n2)}) {
        const double z = k * step;
        const double f = base + lin * z + 0.5 * h(2, 2) * z * z;
        if (f < best) {
          best = f;
          arg = {x, y, z};
        }
      }
    }
  }
  return arg;
}

inline double jaccard(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> x = a, y = b, inter, uni;
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(inter));
  std::set_union(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(uni));
  return uni.empty() ? 1.0 : static_cast<double>(inter.size()) / static_cast<double>(uni.size());
}

}  // namespace eit::testing
