#include "eit/monotonicity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "eit/errors.hpp"

namespace eit {

double contrast_bound(double gamma_min) {
  if (!(gamma_min > 0.0)) throw DomainError("contrast_bound: gamma_min must be positive");
  return 1.0 - 1.0 / (1.0 + gamma_min);
}

double delta_floor(const MeasurementMatrix& v_delta) {
  const double norm = v_delta.frobenius_norm();
  return norm > 0.0 ? 1e-12 * norm : 1e-12;
}

ShiftedDataFactor::ShiftedDataFactor(const MeasurementMatrix& v_delta, double delta_abs) {
  if (!(delta_abs >= 0.0)) throw DomainError("monotonicity test: delta must be nonnegative");
  delta_ = delta_abs > 0.0 ? delta_abs : delta_floor(v_delta);
  const SymmetricMatrix v = SymmetricMatrix::symmetrize(v_delta.entries);
  const Eigen::Index n = v.size();
  shifted_ = SymmetricMatrix::symmetrize(matrix_abs(v).matrix() +
                                         delta_ * Eigen::MatrixXd::Identity(n, n));
  try {
    l_ = cholesky(shifted_);
  } catch (const NumericalError& e) {
    std::ostringstream os;
    os << "monotonicity test: delta I + |V^delta| is not positive definite with delta = "
       << delta_ << " (" << e.what() << ")";
    throw NumericalError(os.str());
  }
}

double ShiftedDataFactor::beta(const Eigen::MatrixXd& s) const {
  if (s.rows() != l_.rows() || s.cols() != l_.cols())
    throw DomainError("monotonicity test: sensitivity matrix size does not match the data");
  const auto lower = l_.triangularView<Eigen::Lower>();
  // W = L^-1 S L^-T via two triangular solves
  const Eigen::MatrixXd x = lower.solve(s);
  const Eigen::MatrixXd w = lower.solve(x.transpose());
  const double top = lambda_max(SymmetricMatrix::symmetrize(w));
  if (!(top > 0.0) || !std::isfinite(top)) {
    std::ostringstream os;
    os << "monotonicity test: lambda_max(L^-1 S L^-T) = " << top << " is not positive";
    throw NumericalError(os.str());
  }
  return 1.0 / top;
}

double compute_beta(const SensitivityMatrix& s_k, const MeasurementMatrix& v_delta,
                    double delta_abs) {
  return ShiftedDataFactor(v_delta, delta_abs).beta(s_k.entries);
}

BoundsVector compute_bounds(const std::vector<SensitivityMatrix>& s,
                            const MeasurementMatrix& v_delta, double delta_abs, double a) {
  if (!(a > 0.0)) throw DomainError("compute_bounds: contrast bound must be positive");
  const ShiftedDataFactor factor(v_delta, delta_abs);
  BoundsVector out;
  out.contrast_bound = a;
  out.delta_abs = factor.delta();
  out.beta.reserve(s.size());
  out.effective_upper.reserve(s.size());
  for (const auto& sk : s) {
    const double b = factor.beta(sk.entries);
    out.beta.push_back(b);
    out.effective_upper.push_back(std::min(a, b));
  }
  return out;
}

}  // namespace eit
