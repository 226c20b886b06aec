#pragma once

#include <vector>

#include <Eigen/Core>

namespace eit {

/// min || sum_k a_k S_k - V ||  subject to  0 <= a_k <= upper_k.
struct ReconstructionProblem {
  std::vector<Eigen::MatrixXd> sensitivities;
  Eigen::MatrixXd target;
  Eigen::VectorXd upper;

  Eigen::Index pixel_count() const { return static_cast<Eigen::Index>(sensitivities.size()); }
  /// Throws DomainError on inconsistent sizes or a negative/NaN bound.
  void validate() const;
};

struct ReconstructionResult {
  Eigen::VectorXd coefficients;
  double objective = 0.0;  // Frobenius (or spectral) residual norm
  int iterations = 0;
  bool converged = false;
  double kkt_residual = 0.0;
  std::vector<double> trace;  // objective per accepted iterate, if requested
};

struct SolveOptions {
  double tol = 1e-8;
  int max_iter = 50000;
  bool record_trace = false;
};

/// Column k is S_k flattened row-major; target is V flattened row-major.
struct VectorizedProblem {
  Eigen::MatrixXd design;
  Eigen::VectorXd target;
};

VectorizedProblem vectorize(const ReconstructionProblem& problem);

/// Inverse of the column layout used by vectorize().
Eigen::MatrixXd unflatten(const Eigen::Ref<const Eigen::VectorXd>& column, Eigen::Index n);

/// || sum_k a_k S_k - V ||_F, no feasibility requirement on a.
double objective(const ReconstructionProblem& problem, const Eigen::VectorXd& a);

/// || sum_k a_k S_k - V ||_2 (largest eigenvalue magnitude).
double spectral_objective(const ReconstructionProblem& problem, const Eigen::VectorXd& a);

/// Accelerated projected gradient on 1/2 ||S a - vec||^2 from a = 0 with step
/// 1/lambda_max(S^T S). Momentum restarts whenever the objective would rise,
/// so accepted iterates never increase it. Stops once
/// ||a - clip(a - grad)||_2 <= tol (1 + ||vec||_2).
ReconstructionResult solve_box_ls(const ReconstructionProblem& problem,
                                  const SolveOptions& options = {});

/// Projected subgradient on the spectral norm with step c / sqrt(t); returns
/// the best iterate seen. Reported kkt_residual uses the subgradient at it.
ReconstructionResult solve_spectral(const ReconstructionProblem& problem,
                                    const SolveOptions& options = {});

/// Unconstrained min ||S a - vec||^2 + lambda ||a||^2; upper bounds ignored.
ReconstructionResult solve_tikhonov(const ReconstructionProblem& problem, double lambda);

}  // namespace eit
