#pragma once

// PGD, proximal gradient (ISTA / l1-IDBP), FISTA and untrained ALISTA.
// Every run returns the final iterate and an IterateTrace.

#include <optional>
#include <vector>

#include "bpinv/fidelity.hpp"
#include "bpinv/priors.hpp"

namespace bpinv {

enum class InitPolicy { Zeros, PinvOfY, Explicit };

struct SolverConfig {
  int max_iters = 1000;
  std::optional<double> step_size;  // default: fidelity's 1/L
  // Stop when ||x_{t+1} - x_t|| / max(1, ||x_t||) < stop_tol. 0 runs the full budget.
  double stop_tol = 0.0;
  int record_every = 1;
  InitPolicy init = InitPolicy::Zeros;
  Vector x0;  // used with InitPolicy::Explicit
  // Optional references; the trace records distance and PSNR against each.
  std::optional<Vector> x_gt;
  std::optional<Vector> x_star;
  double psnr_peak = 255.0;
};

// Column layout; reference columns are empty when the reference is absent.
// Row 0 describes the initial point (iteration 0).
struct IterateTrace {
  std::vector<int> iteration;
  std::vector<double> objective;
  std::vector<double> distance_gt;
  std::vector<double> psnr_gt;
  std::vector<double> distance_star;
  std::vector<double> psnr_star;
  std::vector<double> l1_norm;
  std::vector<double> wall_seconds;  // since the start of the run; not deterministic

  std::size_t size() const { return iteration.size(); }
};

struct SolveResult {
  Vector x;
  IterateTrace trace;
  int iterations = 0;  // iterations actually performed
  bool stopped_early = false;
};

// One step of each scheme, exposed for oracles and fixed-point checks.
Vector pgd_step(const FidelityTerm& f, const Prior& projector, double mu, const Vector& x);
// prox_{mu beta s}(x - mu grad(x)).
Vector proximal_gradient_step(const FidelityTerm& f, const Prior& prior, double beta, double mu, const Vector& x);

// x_{t+1} = Proj(x_t + mu W (y - A x_t)). Projector must be L1Ball or Oracle.
SolveResult pgd(const FidelityTerm& f, const Prior& projector, const SolverConfig& cfg);

// x_{t+1} = prox_{mu beta s}(x_t - mu grad(x_t)). Prior must be
// SoftThresholdProx or Tikhonov. BP with mu = 1 is l1-IDBP, LS is ISTA.
SolveResult proximal_gradient(const FidelityTerm& f, const Prior& prior, double beta, const SolverConfig& cfg);

// Proximal gradient with t_1 = 1, t_{k+1} = (1 + sqrt(1 + 4 t_k^2)) / 2, no restarts.
SolveResult fista(const FidelityTerm& f, const Prior& prior, double beta, const SolverConfig& cfg);

// Closed-form ALISTA weights W~ = (A^+)^T Lambda with
// lambda_i = 1 / (a_i^T (A A^T)^{-1} a_i) = 1 / ||V^T e_i||^2.
class AlistaWeights {
 public:
  explicit AlistaWeights(DenseOperator op);

  const DenseOperator& op() const { return op_; }
  const Vector& lambda() const { return lambda_; }

  // Dense W~ (m x n).
  Matrix w_tilde() const;
  // Lambda A^+ r.
  void apply_into(const Vector& r, Vector& out) const;

  // Replaces Lambda (test hook; Lambda = 1 recovers l1-IDBP).
  AlistaWeights with_lambda(Vector lambda) const;

 private:
  AlistaWeights(DenseOperator op, Vector lambda) : op_(std::move(op)), lambda_(std::move(lambda)) {}
  DenseOperator op_;
  Vector lambda_;
};

AlistaWeights alista_weights(const DenseOperator& op);

// x_{t+1} = T_{theta_t}(x_t - mu Lambda A^+ (A x_t - y)). `theta` holds one
// value (constant) or a per-iteration schedule whose last entry repeats.
// The recorded objective is 1/2 ||A^+(y - A x)||^2 + theta_t ||x||_1.
SolveResult alista_run(const AlistaWeights& weights, const Vector& y, const std::vector<double>& theta, double mu,
                       const SolverConfig& cfg);

}  // namespace bpinv
