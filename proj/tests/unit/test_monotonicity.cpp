#include "doctest.h"

#include <random>

#include "eit/errors.hpp"
#include "eit/monotonicity.hpp"
#include "support.hpp"

using namespace eit;
using Eigen::MatrixXd;

namespace {

MeasurementMatrix measurement(const MatrixXd& m) {
  MeasurementMatrix v;
  v.entries = m;
  return v;
}

SensitivityMatrix sens(const MatrixXd& m) { return {0, m}; }

}  // namespace

TEST_CASE("contrast bound") {
  CHECK(contrast_bound(1.0) == doctest::Approx(0.5));
  CHECK(contrast_bound(3.0) == doctest::Approx(0.75));
  CHECK(contrast_bound(1e-9) > 0.0);
  CHECK_THROWS_AS(contrast_bound(0.0), DomainError);
  CHECK_THROWS_AS(contrast_bound(-1.0), DomainError);
}

TEST_CASE("beta examples") {
  const MatrixXd id = MatrixXd::Identity(4, 4);
  CHECK(compute_beta(sens(id), measurement(MatrixXd::Zero(4, 4)), 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(compute_beta(sens(2 * id), measurement(id), 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  // delta = 0 uses the floor: 1e-12 ||V||_F, or 1e-12 when V = 0
  CHECK(compute_beta(sens(id), measurement(MatrixXd::Zero(4, 4)), 0.0) == doctest::Approx(1e-12).epsilon(1e-12));
  CHECK(delta_floor(measurement(id)) == doctest::Approx(2e-12));
  CHECK_THROWS_AS(compute_beta(sens(id), measurement(id), -1.0), DomainError);
  CHECK_THROWS_AS(compute_beta(sens(MatrixXd::Identity(3, 3)), measurement(id), 1.0), DomainError);
}

TEST_CASE("beta against bisection") {
  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 9;
    const MatrixXd v = testing::random_symmetric(gen, n);
    const MatrixXd s = testing::random_spd(gen, n, 0.05);
    const double delta = 0.1 * (1 + trial % 3);
    const ShiftedDataFactor f(measurement(v), delta);
    const double beta = f.beta(s);
    CHECK(beta == doctest::Approx(testing::bisect_beta(s, f.shifted().matrix())).epsilon(1e-8));
    CHECK(beta > 0);
    const double scale = f.shifted().matrix().norm();
    const double lmin = testing::min_eig(f.shifted().matrix() - beta * s);
    CHECK(lmin >= -1e-10 * scale);
    CHECK(lmin <= 1e-6 * scale);
    // scaling S by c divides beta by c
    CHECK(f.beta(3.0 * s) == doctest::Approx(beta / 3.0).epsilon(1e-12));
    CHECK((f.factor() * f.factor().transpose() - f.shifted().matrix()).norm() <= 1e-12 * scale);
  }
}

TEST_CASE("beta is nondecreasing in delta") {
  std::mt19937_64 gen(9);
  for (int trial = 0; trial < 20; ++trial) {
    const MatrixXd v = testing::random_spd(gen, 6, 0.0);
    const MatrixXd s = testing::random_spd(gen, 6, 0.01);
    const double norm = v.norm();
    double prev = 0;
    for (double d : {0.0, 1e-4, 1e-3, 1e-2, 1e-1}) {
      const double beta = compute_beta(sens(s), measurement(v), d * norm);
      CHECK(beta >= prev * (1 - 1e-12));
      prev = beta;
    }
  }
}

TEST_CASE("bounds vector") {
  std::mt19937_64 gen(10);
  const MatrixXd v = testing::random_spd(gen, 5, 0.0);
  std::vector<SensitivityMatrix> s;
  for (int k = 0; k < 6; ++k) s.push_back({k, testing::random_spd(gen, 5, 0.01) * (k % 2 ? 1e-3 : 10.0)});
  const BoundsVector b = compute_bounds(s, measurement(v), 0.01, 0.5);
  REQUIRE(b.beta.size() == 6);
  CHECK(b.contrast_bound == 0.5);
  CHECK(b.delta_abs == 0.01);
  for (int k = 0; k < 6; ++k) {
    CHECK(b.beta[k] == compute_beta(s[k], measurement(v), 0.01));
    CHECK(b.effective_upper[k] == std::min(0.5, b.beta[k]));
  }
  CHECK_THROWS_AS(compute_bounds(s, measurement(v), 0.01, 0.0), DomainError);
}

TEST_CASE("whole-disk pixel on the homogeneous phantom") {
  Pixel px;
  px.x0 = px.y0 = -1;
  px.x1 = px.y1 = 1;
  px.area = clipped_area(-1, 1, -1, 1);
  px.quadrature = clipped_cell_quadrature(-1, 1, -1, 1, 256);
  const CurrentBasis basis(4);
  const std::vector<SensitivityMatrix> s{assemble_Sk(px, basis)};
  const MeasurementMatrix v = measurement(MatrixXd::Zero(8, 8));
  // |V| = 0 so beta = delta / lambda_max(S) and lambda_max(S) = 1 for j = 1
  const BoundsVector b = compute_bounds(s, v, 0.01, 0.5);
  CHECK(b.beta[0] == doctest::Approx(0.01).epsilon(2e-3));
  CHECK(b.effective_upper[0] == b.beta[0]);
  const BoundsVector big = compute_bounds(s, v, 2.0, 0.5);
  CHECK(big.effective_upper[0] == 0.5);
}
