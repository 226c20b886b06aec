#include "eit/matfun.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "eit/errors.hpp"

namespace eit {

SymmetricMatrix::SymmetricMatrix(Eigen::MatrixXd entries, double tol) {
  if (entries.rows() != entries.cols()) throw DomainError("SymmetricMatrix: matrix is not square");
  const double asym = (entries - entries.transpose()).norm();
  if (asym > tol * entries.norm()) {
    std::ostringstream os;
    os << "SymmetricMatrix: ||M - M^T||_F = " << asym << " exceeds " << tol << " * ||M||_F";
    throw DomainError(os.str());
  }
  m_ = 0.5 * (entries + entries.transpose());
}

SymmetricMatrix SymmetricMatrix::symmetrize(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw DomainError("symmetrize: matrix is not square");
  SymmetricMatrix s;
  s.m_ = 0.5 * (a + a.transpose());
  return s;
}

SymmetricEigen sym_eig(const SymmetricMatrix& m) {
  SymmetricEigen out;
  if (m.size() == 0) return out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.matrix());
  if (solver.info() != Eigen::Success) {
    std::ostringstream os;
    os << "sym_eig: eigensolver did not converge for " << m.size() << "x" << m.size()
       << " matrix with ||M||_F = " << m.matrix().norm();
    throw NumericalError(os.str());
  }
  // Eigen returns ascending order
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

SymmetricMatrix matrix_abs(const SymmetricMatrix& m) {
  return SymmetricMatrix::symmetrize(apply_spectral(sym_eig(m), [](double x) { return std::abs(x); }));
}

std::pair<SymmetricMatrix, SymmetricMatrix> positive_decomposition(const SymmetricMatrix& m) {
  const auto e = sym_eig(m);
  return {SymmetricMatrix::symmetrize(apply_spectral(e, [](double x) { return std::max(x, 0.0); })),
          SymmetricMatrix::symmetrize(apply_spectral(e, [](double x) { return std::max(-x, 0.0); }))};
}

SymmetricMatrix matrix_sqrt(const SymmetricMatrix& m) {
  const auto e = sym_eig(m);
  if (e.values.size() == 0) return m;
  const double scale = e.values.cwiseAbs().maxCoeff();
  const double lmin = e.values.minCoeff();
  if (lmin < -1e-12 * scale) {
    std::ostringstream os;
    os << "matrix_sqrt: matrix is not positive semidefinite (lambda_min = " << lmin << ")";
    throw DomainError(os.str());
  }
  return SymmetricMatrix::symmetrize(
      apply_spectral(e, [](double x) { return std::sqrt(std::max(x, 0.0)); }));
}

Eigen::MatrixXd cholesky(const SymmetricMatrix& m) {
  const Eigen::Index n = m.size();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double d = m(j, j) - l.row(j).head(j).squaredNorm();
    if (!(d > 0.0)) {
      std::ostringstream os;
      os << "cholesky: non-positive pivot " << d << " at index " << j;
      throw NumericalError(os.str());
    }
    l(j, j) = std::sqrt(d);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      l(i, j) = (m(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / l(j, j);
    }
  }
  return l;
}

double spectral_norm(const SymmetricMatrix& m) {
  if (m.size() == 0) return 0.0;
  return sym_eig(m).values.cwiseAbs().maxCoeff();
}

double lambda_min(const SymmetricMatrix& m) {
  return sym_eig(m).values.minCoeff();
}

double lambda_max(const SymmetricMatrix& m) {
  return sym_eig(m).values.maxCoeff();
}

}  // namespace eit
