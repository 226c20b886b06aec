#include "eit/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "eit/errors.hpp"

namespace eit {

namespace {

Eigen::VectorXd clip(const Eigen::VectorXd& x, const Eigen::VectorXd& upper) {
  return x.cwiseMax(0.0).cwiseMin(upper);
}

Eigen::MatrixXd residual_matrix(const ReconstructionProblem& problem, const Eigen::VectorXd& a) {
  Eigen::MatrixXd r = -problem.target;
  for (Eigen::Index k = 0; k < problem.pixel_count(); ++k) r += a[k] * problem.sensitivities[k];
  return r;
}

}  // namespace

void ReconstructionProblem::validate() const {
  const Eigen::Index n = target.rows();
  if (target.cols() != n) throw DomainError("reconstruction: target matrix is not square");
  if (upper.size() != pixel_count())
    throw DomainError("reconstruction: bound vector length differs from pixel count");
  for (Eigen::Index k = 0; k < pixel_count(); ++k) {
    if (sensitivities[k].rows() != n || sensitivities[k].cols() != n) {
      std::ostringstream os;
      os << "reconstruction: sensitivity matrix " << k << " has the wrong size";
      throw DomainError(os.str());
    }
    if (!(upper[k] >= 0.0)) {
      std::ostringstream os;
      os << "reconstruction: upper bound " << k << " is negative or NaN";
      throw DomainError(os.str());
    }
  }
}

VectorizedProblem vectorize(const ReconstructionProblem& problem) {
  problem.validate();
  const Eigen::Index n = problem.target.rows();
  VectorizedProblem out;
  out.design.resize(n * n, problem.pixel_count());
  out.target.resize(n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      out.target[i * n + j] = problem.target(i, j);
      for (Eigen::Index k = 0; k < problem.pixel_count(); ++k)
        out.design(i * n + j, k) = problem.sensitivities[k](i, j);
    }
  }
  return out;
}

Eigen::MatrixXd unflatten(const Eigen::Ref<const Eigen::VectorXd>& column, Eigen::Index n) {
  if (column.size() != n * n) throw DomainError("unflatten: length is not n^2");
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = column[i * n + j];
  return m;
}

double objective(const ReconstructionProblem& problem, const Eigen::VectorXd& a) {
  return residual_matrix(problem, a).norm();
}

double spectral_objective(const ReconstructionProblem& problem, const Eigen::VectorXd& a) {
  const Eigen::MatrixXd r = residual_matrix(problem, a);
  if (r.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

ReconstructionResult solve_box_ls(const ReconstructionProblem& problem,
                                  const SolveOptions& options) {
  const VectorizedProblem vp = vectorize(problem);
  const Eigen::Index p = problem.pixel_count();
  const Eigen::MatrixXd h = vp.design.transpose() * vp.design;
  const Eigen::VectorXd c = vp.design.transpose() * vp.target;
  const double threshold = options.tol * (1.0 + vp.target.norm());

  double lipschitz = 0.0;
  if (p > 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("solve_box_ls: eigensolver failed on S^T S");
    lipschitz = es.eigenvalues().maxCoeff();
  }
  const double step = lipschitz > 0.0 ? 1.0 / lipschitz : 1.0;

  // f(x) = 1/2 x^T H x - c^T x differs from 1/2 ||S x - vec||^2 by a constant
  const auto quad = [&c](const Eigen::VectorXd& x, const Eigen::VectorXd& hx) {
    return 0.5 * x.dot(hx) - c.dot(x);
  };

  ReconstructionResult result;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd hx = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd y = x;
  Eigen::VectorXd hy = hx;
  double fx = 0.0;
  double t = 1.0;
  const double offset = 0.5 * vp.target.squaredNorm();
  if (options.record_trace) result.trace.push_back(std::sqrt(std::max(0.0, 2.0 * (fx + offset))));

  int iter = 0;
  for (; iter < options.max_iter; ++iter) {
    const Eigen::VectorXd grad_x = hx - c;
    if ((x - clip(x - grad_x, problem.upper)).norm() <= threshold) {
      result.converged = true;
      break;
    }
    Eigen::VectorXd x_new = clip(y - step * (hy - c), problem.upper);
    Eigen::VectorXd hx_new = h * x_new;
    double f_new = quad(x_new, hx_new);
    if (f_new > fx) {
      // restart from x with a plain projected gradient step
      t = 1.0;
      x_new = clip(x - step * grad_x, problem.upper);
      hx_new = h * x_new;
      f_new = quad(x_new, hx_new);
      y = x_new;
      hy = hx_new;
    } else {
      const double t_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      const double momentum = (t - 1.0) / t_new;
      y = x_new + momentum * (x_new - x);
      hy = hx_new + momentum * (hx_new - hx);
      t = t_new;
    }
    x = std::move(x_new);
    hx = std::move(hx_new);
    fx = f_new;
    if (options.record_trace)
      result.trace.push_back(std::sqrt(std::max(0.0, 2.0 * (fx + offset))));
  }

  result.coefficients = x;
  result.iterations = iter;
  result.kkt_residual = (x - clip(x - (hx - c), problem.upper)).norm();
  result.objective = (vp.design * x - vp.target).norm();
  return result;
}

ReconstructionResult solve_spectral(const ReconstructionProblem& problem,
                                    const SolveOptions& options) {
  problem.validate();
  const Eigen::Index p = problem.pixel_count();
  const double scale = p > 0 ? std::max(problem.upper.maxCoeff(), 1e-300) : 1.0;
  const double c0 = 0.5 * scale;
  const double threshold = options.tol * (1.0 + problem.target.norm());

  // value and a subgradient of ||R(a)||_2
  const auto evaluate = [&](const Eigen::VectorXd& a, Eigen::VectorXd& g) {
    const Eigen::MatrixXd r = residual_matrix(problem, a);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r);
    if (es.info() != Eigen::Success) throw NumericalError("solve_spectral: eigensolver failed");
    const Eigen::Index n = r.rows();
    const bool top = std::abs(es.eigenvalues()[n - 1]) >= std::abs(es.eigenvalues()[0]);
    const Eigen::Index idx = top ? n - 1 : 0;
    const double lam = es.eigenvalues()[idx];
    const Eigen::VectorXd v = es.eigenvectors().col(idx);
    const double sign = lam >= 0.0 ? 1.0 : -1.0;
    g.resize(p);
    for (Eigen::Index k = 0; k < p; ++k) g[k] = sign * v.dot(problem.sensitivities[k] * v);
    return std::abs(lam);
  };

  ReconstructionResult result;
  Eigen::VectorXd a = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd g;
  Eigen::VectorXd best = a;
  Eigen::VectorXd best_g;
  double best_value = evaluate(a, g);
  best_g = g;
  int last_improvement = 0;
  int iter = 0;
  if (options.record_trace) result.trace.push_back(best_value);
  for (; iter < options.max_iter; ++iter) {
    const double gnorm = g.norm();
    if (gnorm == 0.0) {
      result.converged = true;
      break;
    }
    const double stepsize = c0 / std::sqrt(static_cast<double>(iter + 1));
    a = clip(a - (stepsize / gnorm) * g, problem.upper);
    const double value = evaluate(a, g);
    if (value < best_value - threshold) last_improvement = iter;
    if (value < best_value) {
      best_value = value;
      best = a;
      best_g = g;
    }
    if (options.record_trace) result.trace.push_back(best_value);
    const int window = std::max(1000, iter / 2);
    if (iter - last_improvement > window) {
      result.converged = true;
      ++iter;
      break;
    }
  }
  result.coefficients = best;
  result.objective = best_value;
  result.iterations = iter;
  result.kkt_residual = (best - clip(best - best_g, problem.upper)).norm();
  return result;
}

ReconstructionResult solve_tikhonov(const ReconstructionProblem& problem, double lambda) {
  if (!(lambda > 0.0)) throw DomainError("solve_tikhonov: lambda must be positive");
  const VectorizedProblem vp = vectorize(problem);
  const Eigen::Index p = problem.pixel_count();
  Eigen::MatrixXd h = vp.design.transpose() * vp.design;
  h.diagonal().array() += lambda;
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
  if (ldlt.info() != Eigen::Success) throw NumericalError("solve_tikhonov: factorization failed");
  ReconstructionResult result;
  result.coefficients = ldlt.solve(vp.design.transpose() * vp.target);
  if (p > 0 && !result.coefficients.allFinite())
    throw NumericalError("solve_tikhonov: non-finite solution");
  result.objective = (vp.design * result.coefficients - vp.target).norm();
  result.iterations = 1;
  result.converged = true;
  const Eigen::VectorXd grad = h * result.coefficients - vp.design.transpose() * vp.target;
  result.kkt_residual = grad.norm();
  return result;
}

}  // namespace eit
