#pragma once

#include <vector>

#include <Eigen/Core>

#include "eit/matfun.hpp"
#include "eit/ntd.hpp"

namespace eit {

/// a = 1 - 1/(1 + gamma_min), the largest coefficient the monotonicity test
/// certifies inside an inclusion of contrast at least gamma_min.
double contrast_bound(double gamma_min);

/// Spectral floor used when no noise level is given, so the shifted data
/// matrix stays positive definite: 1e-12 ||V||_F, or 1e-12 when V = 0.
double delta_floor(const MeasurementMatrix& v_delta);

/// Cholesky factor L of delta I + |V^delta|, computed once per data set and
/// shared read-only by all pixels.
class ShiftedDataFactor {
public:
  ShiftedDataFactor(const MeasurementMatrix& v_delta, double delta_abs);

  /// Largest alpha with -alpha S + delta I + |V^delta| >= 0, i.e.
  /// 1 / lambda_max(L^-1 S L^-T).
  double beta(const Eigen::MatrixXd& s) const;

  const Eigen::MatrixXd& factor() const { return l_; }
  /// The shift actually used (delta_abs or the floor).
  double delta() const { return delta_; }
  const SymmetricMatrix& shifted() const { return shifted_; }

private:
  double delta_;
  SymmetricMatrix shifted_;
  Eigen::MatrixXd l_;
};

double compute_beta(const SensitivityMatrix& s_k, const MeasurementMatrix& v_delta,
                    double delta_abs);

struct BoundsVector {
  std::vector<double> beta;
  std::vector<double> effective_upper;  // min(a, beta_k)
  double contrast_bound = 0.0;
  double delta_abs = 0.0;               // shift used in the test
};

BoundsVector compute_bounds(const std::vector<SensitivityMatrix>& s,
                            const MeasurementMatrix& v_delta, double delta_abs, double a);

}  // namespace eit
