#include "bpinv/solvers.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <string>

#include "bpinv/error.hpp"
#include "bpinv/metrics.hpp"

namespace bpinv {
namespace {

constexpr double kDivergenceNorm = 1e12;

void validate(const SolverConfig& cfg, Index n) {
  if (cfg.max_iters < 1) throw Error(ErrorCode::InvalidArgument, "max_iters must be >= 1");
  if (cfg.record_every < 1) throw Error(ErrorCode::InvalidArgument, "record_every must be >= 1");
  if (cfg.step_size && !(*cfg.step_size > 0.0)) throw Error(ErrorCode::InvalidArgument, "step size must be positive");
  if (!(cfg.stop_tol >= 0.0)) throw Error(ErrorCode::InvalidArgument, "stop_tol must be >= 0");
  if (cfg.x_gt && cfg.x_gt->size() != n) throw Error(ErrorCode::DimensionMismatch, "x_gt has the wrong length");
  if (cfg.x_star && cfg.x_star->size() != n) throw Error(ErrorCode::DimensionMismatch, "x_star has the wrong length");
}

Vector initial_point(const SolverConfig& cfg, const DenseOperator& op, const Vector& y) {
  switch (cfg.init) {
    case InitPolicy::Zeros: return Vector::Zero(op.cols());
    case InitPolicy::PinvOfY: return op.pinv(y);
    case InitPolicy::Explicit:
      if (cfg.x0.size() != op.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "x0 has length " + std::to_string(cfg.x0.size()) + ", expected " +
                                                      std::to_string(op.cols()));
      }
      return cfg.x0;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown init policy");
}

void guard(const Vector& x, int t) {
  if (!x.allFinite() || x.norm() > kDivergenceNorm) {
    throw Error(ErrorCode::NonFiniteIterate, "iterate diverged at iteration " + std::to_string(t));
  }
}

class Recorder {
 public:
  Recorder(const SolverConfig& cfg, std::function<double(int, const Vector&)> objective)
      : cfg_(cfg), objective_(std::move(objective)), start_(std::chrono::steady_clock::now()) {}

  void record(int t, const Vector& x) {
    trace_.iteration.push_back(t);
    trace_.objective.push_back(objective_(t, x));
    if (cfg_.x_gt) {
      trace_.distance_gt.push_back((x - *cfg_.x_gt).norm());
      trace_.psnr_gt.push_back(psnr(x, *cfg_.x_gt, cfg_.psnr_peak));
    }
    if (cfg_.x_star) {
      trace_.distance_star.push_back((x - *cfg_.x_star).norm());
      trace_.psnr_star.push_back(psnr(x, *cfg_.x_star, cfg_.psnr_peak));
    }
    trace_.l1_norm.push_back(x.lpNorm<1>());
    trace_.wall_seconds.push_back(
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count());
  }

  IterateTrace take() { return std::move(trace_); }

 private:
  const SolverConfig& cfg_;
  std::function<double(int, const Vector&)> objective_;
  std::chrono::steady_clock::time_point start_;
  IterateTrace trace_;
};

// Drives `step(t, x, next)` for t = 1..max_iters with recording, the
// divergence guard and the optional relative-change stop.
template <class Step>
SolveResult run_loop(const SolverConfig& cfg, Vector x, Step&& step,
                     std::function<double(int, const Vector&)> objective) {
  Recorder rec(cfg, std::move(objective));
  rec.record(0, x);
  SolveResult result;
  Vector next(x.size());
  int t = 1;
  for (; t <= cfg.max_iters; ++t) {
    step(t, x, next);
    guard(next, t);
    bool stop = false;
    if (cfg.stop_tol > 0.0) {
      const double change = (next - x).norm() / std::max(1.0, x.norm());
      stop = change < cfg.stop_tol;
    }
    x.swap(next);
    if (stop || t == cfg.max_iters || t % cfg.record_every == 0) rec.record(t, x);
    if (stop) {
      result.stopped_early = t < cfg.max_iters;
      break;
    }
  }
  result.iterations = std::min(t, cfg.max_iters);
  result.x = std::move(x);
  result.trace = rec.take();
  return result;
}

double step_size(const SolverConfig& cfg, const FidelityTerm& f) {
  return cfg.step_size ? *cfg.step_size : f.default_step_size();
}

void require_prox_variant(const Prior& prior) {
  if (!std::holds_alternative<SoftThresholdProx>(prior) && !std::holds_alternative<TikhonovPrior>(prior)) {
    throw Error(ErrorCode::WrongVariant, "proximal schemes need a SoftThresholdProx or Tikhonov prior");
  }
}

void require_projection_variant(const Prior& prior) {
  if (!is_projection(prior)) throw Error(ErrorCode::WrongVariant, "PGD needs an L1Ball or Oracle prior");
}

// prox_{weight * s}, with Tikhonov factorized once for the fixed weight.
std::function<Vector(const Vector&)> make_prox(const Prior& prior, double weight) {
  if (!(weight >= 0.0) || !std::isfinite(weight)) {
    throw Error(ErrorCode::InvalidArgument, "prox weight must be finite and >= 0");
  }
  if (const auto* tik = std::get_if<TikhonovPrior>(&prior)) {
    if (weight == 0.0) return [](const Vector& z) { return z; };
    TikhonovPrior scaled = tik->scaled(weight);
    return [scaled](const Vector& z) { return scaled.prox(z); };
  }
  const double theta = std::get<SoftThresholdProx>(prior).theta * weight;
  return [theta](const Vector& z) { return soft_threshold(z, theta); };
}

std::function<double(int, const Vector&)> penalized_objective(const FidelityTerm& f, const Prior& prior,
                                                              double beta) {
  return [&f, &prior, beta](int, const Vector& x) {
    return f.value(x) + (beta == 0.0 ? 0.0 : beta * prior_value(prior, x));
  };
}

}  // namespace

Vector pgd_step(const FidelityTerm& f, const Prior& projector, double mu, const Vector& x) {
  require_projection_variant(projector);
  return apply_prior(projector, x - mu * f.gradient(x));
}

Vector proximal_gradient_step(const FidelityTerm& f, const Prior& prior, double beta, double mu, const Vector& x) {
  require_prox_variant(prior);
  return make_prox(prior, mu * beta)(x - mu * f.gradient(x));
}

SolveResult pgd(const FidelityTerm& f, const Prior& projector, const SolverConfig& cfg) {
  require_projection_variant(projector);
  validate(cfg, f.op().cols());
  const double mu = step_size(cfg, f);
  Vector residual, grad;
  auto step = [&](int, const Vector& x, Vector& next) {
    f.gradient_into(x, residual, grad);
    next = apply_prior(projector, x - mu * grad);
  };
  return run_loop(cfg, initial_point(cfg, f.op(), f.y()), step,
                  [&f](int, const Vector& x) { return f.value(x); });
}

SolveResult proximal_gradient(const FidelityTerm& f, const Prior& prior, double beta, const SolverConfig& cfg) {
  require_prox_variant(prior);
  validate(cfg, f.op().cols());
  if (!(beta >= 0.0)) throw Error(ErrorCode::InvalidArgument, "beta must be >= 0");
  const double mu = step_size(cfg, f);
  const auto prox = make_prox(prior, mu * beta);
  Vector residual, grad;
  auto step = [&](int, const Vector& x, Vector& next) {
    f.gradient_into(x, residual, grad);
    next = prox(x - mu * grad);
  };
  return run_loop(cfg, initial_point(cfg, f.op(), f.y()), step, penalized_objective(f, prior, beta));
}

SolveResult fista(const FidelityTerm& f, const Prior& prior, double beta, const SolverConfig& cfg) {
  require_prox_variant(prior);
  validate(cfg, f.op().cols());
  if (!(beta >= 0.0)) throw Error(ErrorCode::InvalidArgument, "beta must be >= 0");
  const double mu = step_size(cfg, f);
  const auto prox = make_prox(prior, mu * beta);
  Vector x0 = initial_point(cfg, f.op(), f.y());
  Vector z = x0;
  double tk = 1.0;
  Vector residual, grad;
  auto step = [&](int, const Vector& x, Vector& next) {
    f.gradient_into(z, residual, grad);
    next = prox(z - mu * grad);
    const double tk1 = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
    z = next + ((tk - 1.0) / tk1) * (next - x);
    tk = tk1;
  };
  return run_loop(cfg, std::move(x0), step, penalized_objective(f, prior, beta));
}

AlistaWeights::AlistaWeights(DenseOperator op) : op_(std::move(op)) {
  const Matrix& a = op_.matrix();
  const Matrix& v = op_.right_vectors();
  lambda_.resize(op_.cols());
  for (Index i = 0; i < op_.cols(); ++i) {
    const double col = a.col(i).norm();
    const double diag = v.row(i).squaredNorm();  // [P_A]_ii = a_i^T (A A^T)^{-1} a_i
    if (!(col > 0.0) || !(diag > 0.0)) throw Error(ErrorCode::ZeroColumn, "column " + std::to_string(i) + " is zero");
    lambda_(i) = 1.0 / diag;
  }
}

Matrix AlistaWeights::w_tilde() const {
  return op_.pinv_matrix().transpose() * lambda_.asDiagonal();
}

void AlistaWeights::apply_into(const Vector& r, Vector& out) const {
  op_.pinv_into(r, out);
  out.array() *= lambda_.array();
}

AlistaWeights AlistaWeights::with_lambda(Vector lambda) const {
  if (lambda.size() != op_.cols()) throw Error(ErrorCode::DimensionMismatch, "lambda has the wrong length");
  return AlistaWeights(op_, std::move(lambda));
}

AlistaWeights alista_weights(const DenseOperator& op) { return AlistaWeights(op); }

SolveResult alista_run(const AlistaWeights& weights, const Vector& y, const std::vector<double>& theta, double mu,
                       const SolverConfig& cfg) {
  const DenseOperator& op = weights.op();
  validate(cfg, op.cols());
  if (y.size() != op.rows()) throw Error(ErrorCode::DimensionMismatch, "y does not match the operator");
  if (theta.empty()) throw Error(ErrorCode::InvalidArgument, "threshold schedule is empty");
  for (double th : theta) {
    if (!(th >= 0.0)) throw Error(ErrorCode::NegativeThreshold, "threshold must be >= 0");
  }
  if (!(mu > 0.0)) throw Error(ErrorCode::InvalidArgument, "step size must be positive");

  auto theta_at = [&theta](int t) {
    // Threshold used to produce iterate t (t >= 1); row 0 reports theta[0].
    const std::size_t i = static_cast<std::size_t>(std::max(t - 1, 0));
    return theta[std::min(i, theta.size() - 1)];
  };
  const FidelityTerm bp(FidelityKind::BP, op, y);
  Vector residual, grad;
  auto step = [&](int t, const Vector& x, Vector& next) {
    op.forward_into(x, residual);
    residual -= y;
    weights.apply_into(residual, grad);
    next = soft_threshold(x - mu * grad, theta_at(t));
  };
  return run_loop(cfg, initial_point(cfg, op, y), step,
                  [&](int t, const Vector& x) { return bp.value(x) + theta_at(t) * x.lpNorm<1>(); });
}

}  // namespace bpinv
