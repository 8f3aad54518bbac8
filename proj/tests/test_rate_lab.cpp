#include <cmath>
#include <limits>

#include "bpinv/error.hpp"
#include "bpinv/priors.hpp"
#include "bpinv/rate_lab.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace bpinv;

TEST_CASE("supports are k-subsets of [0, n)") {
  SeededRng rng(90);
  const auto supports = sample_supports(30, 7, 50, rng);
  REQUIRE(supports.size() == 50);
  for (const Support& s : supports) {
    REQUIRE(s.size() == 7);
    for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i - 1] < s[i]);
    CHECK(s.back() < 30);
  }
  SeededRng bad(90);
  CHECK_THROWS_AS(sample_supports(5, 6, 1, bad), Error);
}

TEST_CASE("orthonormal rows: both estimates agree") {
  const DenseOperator op = DenseOperator::build(testutil::random_orthonormal_rows(12, 30, 91));
  const RateEstimate r = estimate_restricted_rates(op, 4, 100, SeededRng(91));
  CHECK(r.p_ls_hat == doctest::Approx(r.p_bp_hat).epsilon(1e-10));
  for (std::size_t i = 0; i < r.ls_terms.size(); ++i)
    CHECK(r.ls_terms[i] == doctest::Approx(r.bp_terms[i]).epsilon(1e-10));
}

TEST_CASE("BP restricted terms dominate LS on every support") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const DenseOperator op = DenseOperator::build(testutil::gaussian(20, 60, 92 + seed));
    const RateEstimate r = estimate_restricted_rates(op, 6, 200, SeededRng(seed));
    CHECK(r.num_supports == 200);
    for (std::size_t i = 0; i < r.ls_terms.size(); ++i) CHECK(r.bp_terms[i] >= r.ls_terms[i] - 1e-12);
    CHECK(r.p_bp_hat <= r.p_ls_hat + 1e-12);
    CHECK(r.ratio == doctest::Approx(r.p_bp_hat / r.p_ls_hat));
  }
}

TEST_CASE("estimates grow with k on nested supports") {
  const DenseOperator op = DenseOperator::build(testutil::gaussian(20, 50, 97));
  SeededRng rng(97);
  const auto big = sample_supports(50, 10, 100, rng);
  std::vector<Support> small;
  for (const Support& s : big) small.emplace_back(s.begin(), s.begin() + 5);
  const RateEstimate a = estimate_restricted_rates(op, small);
  const RateEstimate b = estimate_restricted_rates(op, big);
  CHECK(a.p_ls_hat <= b.p_ls_hat + 1e-12);
  CHECK(a.p_bp_hat <= b.p_bp_hat + 1e-12);
}

TEST_CASE("sampled rho stays below the restricted estimate") {
  const DenseOperator op = DenseOperator::build(testutil::gaussian(20, 50, 98));
  SeededRng rng(98);
  const auto supports = sample_supports(50, 5, 50, rng);
  const RateEstimate est = estimate_restricted_rates(op, supports);
  const SampledSup ls = monte_carlo_rho(op, FidelityKind::LS, supports, 20, SeededRng(1));
  const SampledSup bp = monte_carlo_rho(op, FidelityKind::BP, supports, 20, SeededRng(1));
  CHECK(ls.value <= est.p_ls_hat + 1e-10);
  CHECK(bp.value <= est.p_bp_hat + 1e-10);
  CHECK(ls.per_support.size() == supports.size());
  const SampledSup xi = monte_carlo_xi(op, FidelityKind::BP, supports, 20, SeededRng(1));
  CHECK(xi.value <= est.p_bp_hat + 1e-10);
}

TEST_CASE("rho pair value for BP with u = v") {
  const DenseOperator op = DenseOperator::build(testutil::gaussian(10, 25, 99));
  const Support s{1, 4, 9};
  Vector full = Vector::Zero(25);
  full(1) = 0.6;
  full(4) = -0.8;
  const Vector u = (Vector(3) << 0.6, -0.8, 0.0).finished();
  const double expect = 1.0 - op.row_project(full).squaredNorm();
  CHECK(rho_pair_value(op, FidelityKind::BP, s, u, u) == doctest::Approx(expect).epsilon(1e-12));
  CHECK_THROWS_AS(rho_pair_value(op, FidelityKind::BP, s, full, u), Error);
}

TEST_CASE("warm-up rates") {
  const DenseOperator op = DenseOperator::build(testutil::random_orthonormal_rows(5, 9, 100));
  const auto [ls, bp] = warmup_rates(op);
  CHECK(std::abs(ls) <= 1e-12);
  CHECK(bp == 0.0);
  Matrix a = Matrix::Zero(2, 3);
  a(0, 0) = 2.0;
  a(1, 1) = 1.0;
  CHECK(warmup_rates(DenseOperator::build(a)).first == doctest::Approx(0.75));
}

TEST_CASE("rate bound examples") {
  Matrix a = Matrix::Zero(2, 3);
  a(0, 0) = 2.0;
  a(1, 1) = 1.0;
  const DenseOperator op = DenseOperator::build(a);
  const FidelityTerm ls(FidelityKind::LS, op, Vector::Ones(2));
  const FidelityTerm bp(FidelityKind::BP, op, Vector::Ones(2));
  CHECK(theorem2_bound(ls, 0.5) == doctest::Approx(0.75));
  CHECK(theorem2_bound(ls, 0.1) == doctest::Approx(0.9));
  CHECK(theorem2_bound(bp, 0.5) == doctest::Approx(0.5));
  CHECK(theorem2_bound(bp, 1.0) == 0.0);
  CHECK_THROWS_AS(theorem2_bound(bp, 0.0), Error);
  CHECK_THROWS_AS(theorem2_bound(bp, 1.5), Error);
  CHECK(kappa_s(true) == 1);
  CHECK(kappa_s(false) == 2);
}

TEST_CASE("empirical rate fits") {
  std::vector<int> it;
  std::vector<double> d;
  for (int t = 0; t <= 20; ++t) {
    it.push_back(t);
    d.push_back(3.0 * std::pow(0.8, t));
  }
  const EmpiricalRate r = empirical_rate(it, d, 2, 15);
  CHECK(r.outcome == RateOutcome::Fitted);
  CHECK(r.slope == doctest::Approx(std::log(0.8)).epsilon(1e-12));
  CHECK(r.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(r.r2 == doctest::Approx(1.0));
  CHECK(r.points == 14);

  std::vector<double> flat(21, 2.0);
  CHECK(empirical_rate(it, flat, 0, 20).slope == doctest::Approx(0.0));
  CHECK(empirical_rate(it, flat, 0, 20).r2 == 1.0);

  d[10] = 0.0;
  const EmpiricalRate z = empirical_rate(it, d, 0, 20);
  CHECK(z.outcome == RateOutcome::ZeroDistance);
  CHECK(z.slope == -std::numeric_limits<double>::infinity());

  try {
    empirical_rate(it, d, 0, 3);
    FAIL("expected InsufficientData");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InsufficientData);
  }
}

TEST_CASE("oracle-prior LS trace decays no slower than the warm-up rate") {
  const DenseOperator op = DenseOperator::build(testutil::gaussian(20, 40, 101));
  SeededRng rng(101);
  const Vector x_gt = rng.normal_vector(40);
  const FidelityTerm f(FidelityKind::LS, op, op.forward(x_gt));
  SolverConfig cfg;
  cfg.max_iters = 60;
  cfg.x_gt = x_gt;
  const SolveResult r = pgd(f, make_oracle(x_gt, op), cfg);
  const EmpiricalRate fit = empirical_rate(r.trace, RateReference::Gt, 5, 60);
  CHECK(std::exp(fit.slope) <= warmup_rates(op).first + 1e-6);
  CHECK_THROWS_AS(empirical_rate(r.trace, RateReference::Star, 5, 60), Error);
}
