#include "bpinv/check/oracles.hpp"
#include "bpinv/error.hpp"
#include "bpinv/linops.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace bpinv;
using testutil::gaussian;

TEST_CASE("orthonormal rows give unit singular values") {
  const DenseOperator op = DenseOperator::build(testutil::orthonormal_rows(3, 5));
  CHECK(op.rows() == 3);
  CHECK(op.cols() == 5);
  for (Index i = 0; i < 3; ++i) CHECK(op.singular_values()(i) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(op.spectral_summary().condition_ratio == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("duplicated row is rank deficient") {
  Matrix a(2, 4);
  a << 1, 2, 3, 4, 1, 2, 3, 4;
  try {
    DenseOperator::build(a);
    FAIL("expected RankDeficient");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RankDeficient);
  }
}

TEST_CASE("build rejects bad inputs") {
  Matrix tall = gaussian(5, 3, 1);
  CHECK_THROWS_AS(DenseOperator::build(tall), Error);
  Matrix nan = gaussian(2, 3, 2);
  nan(0, 1) = std::nan("");
  try {
    DenseOperator::build(nan);
    FAIL("expected NonFinite");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonFinite);
  }
}

TEST_CASE("pseudoinverse identities hold for a random operator") {
  const Matrix a = gaussian(5, 8, 3);
  const DenseOperator op = DenseOperator::build(a);
  // A A^+ A = A and A^+ A A^+ = A^+ through explicit products.
  const Matrix pinv = op.pinv_matrix();
  CHECK((a * pinv * a - a).norm() <= 1e-8 * a.norm());
  CHECK((pinv * a * pinv - pinv).norm() <= 1e-8 * pinv.norm());
  CHECK((pinv - oracle::pinv_normal_equations(a)).norm() <= 1e-10 * pinv.norm());
}

TEST_CASE("apply modes") {
  const Matrix a = gaussian(4, 7, 4);
  const DenseOperator op = DenseOperator::build(a);
  SeededRng rng(5);
  const Vector v = rng.normal_vector(7);
  const Vector r = rng.normal_vector(4);

  CHECK(testutil::rel_err(op.apply(ApplyMode::Forward, v), a * v) <= 1e-13);
  CHECK(testutil::rel_err(op.apply(ApplyMode::Adjoint, r), a.transpose() * r) <= 1e-13);
  CHECK(testutil::rel_err(op.apply(ApplyMode::Pinv, r), oracle::pinv_normal_equations(a) * r) <= 1e-10);
  CHECK(testutil::rel_err(op.apply(ApplyMode::NullProject, v), oracle::null_projector(a) * v) <= 1e-10);
  CHECK((a * op.null_project(v)).norm() <= 1e-10 * v.norm());
  CHECK((op.row_project(v) + op.null_project(v) - v).norm() <= 1e-12 * v.norm());

  CHECK_THROWS_AS(op.forward(r), Error);
  CHECK_THROWS_AS(op.adjoint(v), Error);
  CHECK_THROWS_AS(op.pinv(v), Error);
  CHECK_THROWS_AS(op.row_project(r), Error);
}

TEST_CASE("orthonormal rows: pinv equals adjoint") {
  const DenseOperator op = DenseOperator::build(testutil::random_orthonormal_rows(4, 9, 6));
  SeededRng rng(7);
  for (int i = 0; i < 5; ++i) {
    const Vector r = rng.normal_vector(4);
    CHECK(testutil::rel_err(op.pinv(r), op.adjoint(r)) <= 1e-12);
  }
}

TEST_CASE("explicit spectral extremes") {
  Matrix a = Matrix::Zero(2, 3);
  a(0, 0) = 2.0;
  a(1, 1) = 1.0;
  const SpectralSummary s = spectral_summary(DenseOperator::build(a));
  CHECK(s.sigma_max == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(s.sigma_min == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(s.condition_ratio == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("operator invariants over random instances") {
  SeededRng rng(8);
  for (std::uint64_t seed = 10; seed < 20; ++seed) {
    const Index m = 3 + static_cast<Index>(seed % 5);
    const Index n = m + 4;
    const DenseOperator op = DenseOperator::build(gaussian(m, n, seed));
    const Vector r = rng.normal_vector(m);
    const Vector u = rng.normal_vector(n);
    const Vector v = rng.normal_vector(n);

    CHECK((op.forward(op.pinv(r)) - r).norm() <= 1e-8 * r.norm());
    const Vector pu = op.row_project(u);
    CHECK((op.row_project(pu) - pu).norm() <= 1e-12 * pu.norm());
    const double lhs = pu.dot(v), rhs = u.dot(op.row_project(v));
    CHECK(std::abs(lhs - rhs) <= 1e-12 * u.norm() * v.norm());

    const SpectralSummary s = op.spectral_summary();
    const Vector& sv = op.singular_values();
    CHECK(s.sigma_max == sv(0) * sv(0));
    CHECK(s.sigma_min == sv(m - 1) * sv(m - 1));
    CHECK(s.sigma_max >= s.sigma_min);
    CHECK(s.sigma_min > 0.0);
  }
}

TEST_CASE("gram inverse matches an explicit solve") {
  const Matrix a = gaussian(6, 10, 9);
  const DenseOperator op = DenseOperator::build(a);
  const Vector r = SeededRng(9).normal_vector(6);
  const Vector expect = (a * a.transpose()).ldlt().solve(r);
  CHECK(testutil::rel_err(op.gram_inverse(r), expect) <= 1e-10);
}
