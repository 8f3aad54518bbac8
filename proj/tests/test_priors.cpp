#include "bpinv/check/oracles.hpp"
#include "bpinv/error.hpp"
#include "bpinv/priors.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace bpinv;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

template <class F>
void expect_code(ErrorCode code, F&& f) {
  try {
    f();
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == code);
  }
}

}  // namespace

TEST_CASE("l1 ball projection examples") {
  CHECK(project_l1_ball(vec({1, -0.5}), 2.0) == vec({1, -0.5}));
  CHECK((project_l1_ball(vec({3, 1}), 2.0) - vec({2, 0})).norm() <= 1e-15);
  CHECK((project_l1_ball(vec({-3, -1}), 2.0) - vec({-2, 0})).norm() <= 1e-15);
  CHECK(oracle::l1_ball_threshold(vec({3, 1}), 2.0) == doctest::Approx(1.0));
  // Boundary: exactly feasible is a no-op.
  CHECK(project_l1_ball(vec({1.5, -0.5}), 2.0) == vec({1.5, -0.5}));
  expect_code(ErrorCode::NonpositiveRadius, [] { project_l1_ball(vec({1}), 0.0); });
}

TEST_CASE("l1 ball projection properties") {
  SeededRng rng(41);
  for (int i = 0; i < 200; ++i) {
    const Vector v = rng.normal_vector(15, 2.0);
    const double radius = 0.1 + 5.0 * rng.uniform();
    const Vector p = project_l1_ball(v, radius);
    CHECK(p.lpNorm<1>() <= radius * (1 + 1e-9));
    if (v.lpNorm<1>() > radius) CHECK(std::abs(p.lpNorm<1>() - radius) <= 1e-9 * radius);
    CHECK((project_l1_ball(p, radius) - p).norm() <= 1e-12 * std::max(1.0, p.norm()));
    CHECK((p - oracle::l1_ball_breakpoint(v, radius)).norm() <= 1e-9 * std::max(1.0, v.norm()));
    // Closer to v than random feasible points.
    const double dist = (p - v).norm();
    for (int j = 0; j < 100; ++j) {
      Vector q = rng.normal_vector(15);
      q *= radius * rng.uniform() / q.lpNorm<1>();
      CHECK(dist <= (q - v).norm() + 1e-12);
    }
  }
}

TEST_CASE("soft threshold") {
  CHECK(soft_threshold(vec({2, -1, 0.5}), 0.0) == vec({2, -1, 0.5}));
  CHECK((soft_threshold(vec({2, -1, 0.5}), 1.5) - vec({0.5, 0, 0})).norm() == 0.0);
  expect_code(ErrorCode::NegativeThreshold, [] { soft_threshold(vec({1}), -0.1); });

  SeededRng rng(42);
  for (int i = 0; i < 20; ++i) {
    const Vector z = rng.normal_vector(2, 2.0);
    const double theta = rng.uniform();
    const Vector x = soft_threshold(z, theta);
    const double val = 0.5 * (z - x).squaredNorm() + theta * x.lpNorm<1>();
    CHECK(val <= oracle::soft_threshold_grid_value(z, theta, 4.0, 801) + 1e-6);
  }
}

TEST_CASE("oracle projection") {
  const DenseOperator op = DenseOperator::build(testutil::gaussian(4, 9, 43));
  SeededRng rng(43);
  const Vector x_gt = rng.normal_vector(9);
  CHECK((oracle_project(x_gt, x_gt, op) - x_gt).norm() <= 1e-12);

  const Vector x = rng.normal_vector(9);
  const Vector p = oracle_project(x, x_gt, op);
  CHECK((op.forward(p) - op.forward(x)).norm() <= 1e-10 * op.forward(x).norm());
  CHECK((op.null_project(p) - op.null_project(x_gt)).norm() <= 1e-10 * x_gt.norm());
  // Already on the affine set.
  const Vector on_set = op.row_project(x) + op.null_project(x_gt);
  CHECK((oracle_project(on_set, x_gt, op) - on_set).norm() <= 1e-12 * on_set.norm());
  CHECK_THROWS_AS(oracle_project(Vector::Zero(8), x_gt, op), Error);
}

TEST_CASE("Tikhonov prox") {
  SeededRng rng(44);
  const Vector z = rng.normal_vector(6);
  CHECK((tikhonov_prox(z, 1.0, Matrix::Identity(6, 6)) - z / 2.0).norm() <= 1e-14);
  CHECK((tikhonov_prox(z, 1e-12, Matrix::Identity(6, 6)) - z).norm() <= 1e-9);
  const Matrix d = rng.normal_matrix(3, 3);
  const Vector z3 = rng.normal_vector(3);
  CHECK((tikhonov_prox(z3, 0.7, d) - oracle::tikhonov_lu(z3, 0.7, d)).norm() <= 1e-10 * z3.norm());
  expect_code(ErrorCode::SingularSystem, [] { TikhonovPrior(1.0, Matrix::Zero(2, 3)); });
  CHECK_THROWS_AS(TikhonovPrior(0.0, Matrix::Identity(2, 2)), Error);
  const TikhonovPrior p(2.0, Matrix::Identity(3, 3));
  CHECK(p.scaled(0.5).beta() == 1.0);
  CHECK((p.scaled(0.5).prox(z3) - z3 / 2.0).norm() <= 1e-14);
}

TEST_CASE("contraction delta") {
  const DenseOperator op = DenseOperator::build(testutil::gaussian(3, 6, 45));
  CHECK(contraction_delta(make_tikhonov(1.0, Matrix::Identity(6, 6)), op) == doctest::Approx(0.5));
  CHECK(contraction_delta(make_tikhonov(1e-12, Matrix::Identity(6, 6)), op) <= 1e-11);
  expect_code(ErrorCode::WrongVariant, [&] { contraction_delta(make_l1_ball(1.0), op); });
  expect_code(ErrorCode::WrongVariant, [&] { contraction_delta(make_soft_threshold(1.0), op); });

  // Sampled Lipschitz ratio stays below k.
  SeededRng rng(46);
  const Matrix d = rng.normal_matrix(8, 6);
  const Prior prior = make_tikhonov(0.9, d);
  const double k = 1.0 - contraction_delta(prior, op);
  for (int i = 0; i < 1000; ++i) {
    const Vector z1 = rng.normal_vector(6), z2 = rng.normal_vector(6);
    CHECK((apply_prior(prior, z1) - apply_prior(prior, z2)).norm() <= (k + 1e-10) * (z1 - z2).norm());
  }
}

TEST_CASE("Tikhonov satisfies the null-space contraction condition") {
  SeededRng rng(47);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const DenseOperator op = DenseOperator::build(testutil::gaussian(4, 8, 48 + seed));
    const Prior prior = make_tikhonov(0.5 + rng.uniform(), rng.normal_matrix(10, 8));
    const double delta = contraction_delta(prior, op);
    for (int i = 0; i < 1000; ++i) {
      const Vector z1 = rng.normal_vector(8), z2 = rng.normal_vector(8);
      const Vector diff = z1 - z2;
      const Vector shaped = op.row_project(diff) + (1.0 - delta) * op.null_project(diff);
      CHECK((apply_prior(prior, z1) - apply_prior(prior, z2)).norm() <= shaped.norm() + 1e-10);
    }
  }
}

TEST_CASE("every convex prior map is nonexpansive") {
  SeededRng rng(49);
  const DenseOperator op = DenseOperator::build(testutil::gaussian(5, 12, 49));
  const Prior priors[] = {make_l1_ball(2.0), make_soft_threshold(0.4), make_oracle(rng.normal_vector(12), op),
                          make_tikhonov(1.3, rng.normal_matrix(12, 12))};
  for (const Prior& prior : priors) {
    for (int i = 0; i < 1000; ++i) {
      const Vector z1 = rng.normal_vector(12, 3.0), z2 = rng.normal_vector(12, 3.0);
      CHECK((apply_prior(prior, z1) - apply_prior(prior, z2)).norm() <= (z1 - z2).norm() + 1e-12);
    }
  }
}

TEST_CASE("validating constructors") {
  expect_code(ErrorCode::NonpositiveRadius, [] { make_l1_ball(-1.0); });
  expect_code(ErrorCode::NegativeThreshold, [] { make_soft_threshold(-1.0); });
  CHECK(is_projection(make_l1_ball(1.0)));
  CHECK_FALSE(is_projection(make_soft_threshold(1.0)));
}
