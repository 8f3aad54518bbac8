#include "bpinv/check/oracles.hpp"
#include "bpinv/error.hpp"
#include "bpinv/solvers.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace bpinv;

namespace {

struct Setup {
  DenseOperator op;
  Vector x_gt;
  Vector y;
};

// Noiseless k-sparse problem.
Setup sparse_setup(Index m, Index n, Index k, std::uint64_t seed) {
  SeededRng rng(seed, 5);
  const DenseOperator op = DenseOperator::build(testutil::gaussian(m, n, seed));
  Vector x = Vector::Zero(n);
  for (Index i : rng.sample_without_replacement(n, k)) x(i) = rng.normal();
  return {op, x, op.forward(x)};
}

SolverConfig budget(int iters) {
  SolverConfig cfg;
  cfg.max_iters = iters;
  return cfg;
}

}  // namespace

TEST_CASE("BP PGD with the oracle prior lands on x_gt after one step") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Setup s = sparse_setup(20, 50, 5, 60 + seed);
    const FidelityTerm f(FidelityKind::BP, s.op, s.y);
    SolverConfig cfg = budget(3);
    cfg.x_gt = s.x_gt;
    const SolveResult r = pgd(f, make_oracle(s.x_gt, s.op), cfg);
    REQUIRE(r.trace.size() == 4);
    CHECK(r.trace.distance_gt[1] <= 1e-10 * s.x_gt.norm());
    CHECK(r.trace.distance_gt[3] <= 1e-10 * s.x_gt.norm());
  }
}

TEST_CASE("LS PGD with the oracle prior contracts at 1 - smin/smax per step") {
  const Setup s = sparse_setup(20, 50, 5, 65);
  const FidelityTerm f(FidelityKind::LS, s.op, s.y);
  const double rate = 1.0 - f.hessian_sigma_min() / f.hessian_sigma_max();
  SolverConfig cfg = budget(40);
  cfg.x_gt = s.x_gt;
  const SolveResult r = pgd(f, make_oracle(s.x_gt, s.op), cfg);
  for (std::size_t t = 1; t < r.trace.size(); ++t) {
    const double prev = r.trace.distance_gt[t - 1];
    if (prev < 1e-12) break;
    CHECK(r.trace.distance_gt[t] <= rate * prev * (1 + 1e-9) + 1e-14);
  }
}

TEST_CASE("BP proximal gradient from zero starts at A^+ y when beta is 0") {
  const Setup s = sparse_setup(8, 16, 3, 66);
  const FidelityTerm f(FidelityKind::BP, s.op, s.y);
  const Vector x1 = proximal_gradient_step(f, make_soft_threshold(1.0), 0.0, 1.0, Vector::Zero(16));
  CHECK(testutil::rel_err(x1, oracle::pinv_normal_equations(s.op.matrix()) * s.y) <= 1e-10);

  SolverConfig cfg = budget(1);
  const SolveResult r = proximal_gradient(f, make_soft_threshold(1.0), 0.0, cfg);
  CHECK(testutil::rel_err(r.x, x1) <= 1e-14);
}

TEST_CASE("l1-IDBP matches a hand-rolled loop") {
  const Setup s = sparse_setup(15, 40, 4, 67);
  const FidelityTerm f(FidelityKind::BP, s.op, s.y);
  const double theta = 0.05;
  SolverConfig cfg = budget(50);
  const SolveResult r = proximal_gradient(f, make_soft_threshold(theta), 1.0, cfg);

  const Matrix pinv = oracle::pinv_normal_equations(s.op.matrix());
  Vector x = Vector::Zero(40);
  for (int t = 0; t < 50; ++t) {
    const Vector z = x + pinv * (s.y - s.op.matrix() * x);
    x = z.unaryExpr([&](double v) { return std::copysign(std::max(std::abs(v) - theta, 0.0), v); });
  }
  CHECK(testutil::rel_err(r.x, x) <= 1e-10);
}

TEST_CASE("FISTA first step equals the proximal-gradient step") {
  const Setup s = sparse_setup(15, 40, 4, 68);
  for (FidelityKind kind : {FidelityKind::LS, FidelityKind::BP}) {
    const FidelityTerm f(kind, s.op, s.y);
    const Prior prior = make_soft_threshold(0.02);
    const SolveResult a = fista(f, prior, 1.0, budget(1));
    const SolveResult b = proximal_gradient(f, prior, 1.0, budget(1));
    CHECK(testutil::rel_err(a.x, b.x) <= 1e-14);
  }
}

TEST_CASE("FISTA reaches a lower objective than proximal gradient at equal budget") {
  int wins = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Setup s = sparse_setup(30, 80, 6, 70 + seed);
    const FidelityTerm f(FidelityKind::LS, s.op, s.y);
    const Prior prior = make_soft_threshold(0.01);
    const double fo = fista(f, prior, 1.0, budget(100)).trace.objective.back();
    const double po = proximal_gradient(f, prior, 1.0, budget(100)).trace.objective.back();
    if (fo <= po) ++wins;
  }
  CHECK(wins >= 4);
}

TEST_CASE("ALISTA weights") {
  const DenseOperator op = DenseOperator::build(testutil::gaussian(6, 12, 75));
  const AlistaWeights w = alista_weights(op);
  const Matrix wt = w.w_tilde();
  const Matrix& a = op.matrix();
  for (Index i = 0; i < 12; ++i) CHECK(wt.col(i).dot(a.col(i)) == doctest::Approx(1.0).epsilon(1e-10));
  const double closed = (wt.transpose() * a).squaredNorm();
  CHECK(closed <= oracle::alista_numeric_objective(a) * (1 + 1e-6));

  // Unit lambda gives l1-IDBP exactly.
  const Setup s = sparse_setup(6, 12, 2, 76);
  const FidelityTerm f(FidelityKind::BP, s.op, s.y);
  const AlistaWeights unit = alista_weights(s.op).with_lambda(Vector::Ones(12));
  const SolveResult ra = alista_run(unit, s.y, {0.03}, 1.0, budget(30));
  const SolveResult rp = proximal_gradient(f, make_soft_threshold(0.03), 1.0, budget(30));
  REQUIRE(ra.trace.size() == rp.trace.size());
  for (std::size_t t = 0; t < ra.trace.size(); ++t) CHECK(ra.trace.objective[t] == doctest::Approx(rp.trace.objective[t]).epsilon(1e-12));
  CHECK_THROWS_AS(alista_weights(s.op).with_lambda(Vector::Ones(5)), Error);
}

TEST_CASE("runs are deterministic and feasible") {
  const Setup s = sparse_setup(25, 60, 5, 77);
  for (FidelityKind kind : {FidelityKind::LS, FidelityKind::BP}) {
    const FidelityTerm f(kind, s.op, s.y);
    const double radius = 0.8 * s.x_gt.lpNorm<1>();
    const SolveResult a = pgd(f, make_l1_ball(radius), budget(60));
    const SolveResult b = pgd(f, make_l1_ball(radius), budget(60));
    CHECK(a.x == b.x);
    CHECK(a.trace.objective == b.trace.objective);
    for (double l1 : a.trace.l1_norm) CHECK(l1 <= radius * (1 + 1e-9));
  }
}

TEST_CASE("oracle-prior distance is monotone and the limit is a fixed point") {
  const Setup s = sparse_setup(25, 60, 5, 78);
  for (FidelityKind kind : {FidelityKind::LS, FidelityKind::BP}) {
    const FidelityTerm f(kind, s.op, s.y);
    const Prior prior = make_oracle(s.x_gt, s.op);
    SolverConfig cfg = budget(2000);
    cfg.x_gt = s.x_gt;
    const SolveResult r = pgd(f, prior, cfg);
    for (std::size_t t = 1; t < r.trace.size(); ++t)
      CHECK(r.trace.distance_gt[t] <= r.trace.distance_gt[t - 1] * (1 + 1e-12) + 1e-13);
    const Vector next = pgd_step(f, prior, f.default_step_size(), r.x);
    CHECK((next - r.x).norm() <= 1e-9 * std::max(1.0, r.x.norm()));
  }
}

TEST_CASE("Tikhonov proximal gradient converges to the stationary point") {
  const Setup s = sparse_setup(10, 20, 3, 79);
  SeededRng rng(79);
  const Matrix d = rng.normal_matrix(40, 20);
  for (FidelityKind kind : {FidelityKind::LS, FidelityKind::BP}) {
    const FidelityTerm f(kind, s.op, s.y);
    const Matrix w = kind == FidelityKind::LS ? Matrix(s.op.matrix().transpose()) : Matrix(s.op.pinv_matrix());
    const Vector x_star = oracle::tikhonov_stationary_point(w, s.op.matrix(), s.y, 0.3, d);
    SolverConfig cfg = budget(20000);
    cfg.stop_tol = 1e-14;
    const SolveResult r = proximal_gradient(f, make_tikhonov(1.0, d), 0.3, cfg);
    CHECK(testutil::rel_err(r.x, x_star) <= 1e-7);
  }
}

TEST_CASE("config and variant checks") {
  const Setup s = sparse_setup(5, 10, 2, 80);
  const FidelityTerm f(FidelityKind::LS, s.op, s.y);
  CHECK_THROWS_AS(pgd(f, make_soft_threshold(1.0), budget(5)), Error);
  CHECK_THROWS_AS(proximal_gradient(f, make_l1_ball(1.0), 1.0, budget(5)), Error);
  SolverConfig cfg = budget(5);
  cfg.init = InitPolicy::Explicit;
  cfg.x0 = Vector::Zero(9);
  CHECK_THROWS_AS(pgd(f, make_l1_ball(1.0), cfg), Error);

  SolverConfig big = budget(50);
  big.step_size = 100.0;
  big.init = InitPolicy::PinvOfY;
  try {
    proximal_gradient(f, make_soft_threshold(0.0), 1.0, big);
    FAIL("expected divergence");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonFiniteIterate);
  }
}

TEST_CASE("record_every thins the trace but keeps the endpoints") {
  const Setup s = sparse_setup(5, 10, 2, 81);
  const FidelityTerm f(FidelityKind::BP, s.op, s.y);
  SolverConfig cfg = budget(23);
  cfg.record_every = 5;
  const SolveResult r = proximal_gradient(f, make_soft_threshold(0.1), 1.0, cfg);
  CHECK(r.trace.iteration == std::vector<int>{0, 5, 10, 15, 20, 23});
  CHECK(r.trace.distance_gt.empty());
  CHECK(r.iterations == 23);
}
