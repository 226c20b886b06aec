#pragma once

#include <utility>

#include <Eigen/Core>

namespace eit {

/// Dense real symmetric matrix. Construction checks
/// ||M - M^T||_F <= tol * ||M||_F and stores the exact symmetric part.
class SymmetricMatrix {
public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(Eigen::MatrixXd entries, double tol = 1e-12);

  /// (A + A^T) / 2 without any tolerance check.
  static SymmetricMatrix symmetrize(const Eigen::MatrixXd& a);

  const Eigen::MatrixXd& matrix() const { return m_; }
  Eigen::Index size() const { return m_.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

private:
  Eigen::MatrixXd m_;
};

struct SymmetricEigen {
  Eigen::VectorXd values;   // descending
  Eigen::MatrixXd vectors;  // columns match values
};

SymmetricEigen sym_eig(const SymmetricMatrix& m);

/// Q f(Lambda) Q^T for a scalar function f.
template <class F>
Eigen::MatrixXd apply_spectral(const SymmetricEigen& e, F&& f) {
  Eigen::VectorXd fv(e.values.size());
  for (Eigen::Index i = 0; i < fv.size(); ++i) fv[i] = f(e.values[i]);
  return e.vectors * fv.asDiagonal() * e.vectors.transpose();
}

SymmetricMatrix matrix_abs(const SymmetricMatrix& m);

/// (M_plus, M_minus) with M = M_plus - M_minus, both PSD, M_plus M_minus = 0.
std::pair<SymmetricMatrix, SymmetricMatrix> positive_decomposition(const SymmetricMatrix& m);

/// Principal square root. Eigenvalues down to -1e-12 ||M||_2 are clamped to
/// zero; anything more negative is a DomainError.
SymmetricMatrix matrix_sqrt(const SymmetricMatrix& m);

/// Lower-triangular L with positive diagonal and M = L L^T. A non-positive
/// pivot raises NumericalError naming its index.
Eigen::MatrixXd cholesky(const SymmetricMatrix& m);

double spectral_norm(const SymmetricMatrix& m);
double lambda_min(const SymmetricMatrix& m);
double lambda_max(const SymmetricMatrix& m);

}  // namespace eit
