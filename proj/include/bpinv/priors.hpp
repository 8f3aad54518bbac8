#pragma once

#include <memory>
#include <variant>

#include "bpinv/linops.hpp"

namespace bpinv {

// K = {x : ||x||_1 <= radius}.
struct L1Ball {
  double radius;
};

// s(x) = theta ||x||_1.
struct SoftThresholdProx {
  double theta;
};

// K = {x : Q_A x = Q_A x_gt}.
struct OraclePrior {
  Vector x_gt;
  DenseOperator op;
};

// s(x) = beta/2 ||D x||^2 with D^T D positive definite. Holds a Cholesky
// factor of I + beta D^T D.
class TikhonovPrior {
 public:
  // Throws InvalidArgument for beta <= 0, SingularSystem if D^T D is not
  // positive definite.
  TikhonovPrior(double beta, Matrix d);

  double beta() const { return beta_; }
  const Matrix& d() const { return state_->d; }
  // Smallest eigenvalue of D^T D.
  double dtd_sigma_min() const { return state_->dtd_sigma_min; }

  // Solves (I + beta D^T D) x = z.
  Vector prox(const Vector& z) const;

  // Same D, weight beta * factor.
  TikhonovPrior scaled(double factor) const;

 private:
  struct State {
    Matrix d;
    Matrix dtd;
    double dtd_sigma_min = 0.0;
  };
  TikhonovPrior(double beta, std::shared_ptr<const State> state);

  double beta_;
  std::shared_ptr<const State> state_;
  std::shared_ptr<const Eigen::LLT<Matrix>> llt_;
};

using Prior = std::variant<L1Ball, SoftThresholdProx, OraclePrior, TikhonovPrior>;

// Validating constructors.
Prior make_l1_ball(double radius);
Prior make_soft_threshold(double theta);
Prior make_oracle(Vector x_gt, DenseOperator op);
Prior make_tikhonov(double beta, Matrix d);

bool is_projection(const Prior& prior) noexcept;

Vector project_l1_ball(const Vector& v, double radius);
Vector soft_threshold(const Vector& z, double theta);
// P_A x + Q_A x_gt
Vector oracle_project(const Vector& x, const Vector& x_gt, const DenseOperator& op);
Vector tikhonov_prox(const Vector& z, double beta, const Matrix& d);

// For Tikhonov: delta = 1 - k with k = 1 / (1 + beta sigma_min(D^T D)), the
// Lipschitz constant of its prox. Other variants throw WrongVariant.
double contraction_delta(const Prior& prior, const DenseOperator& op);

// Projection variants project onto K and ignore `weight`; prox variants
// apply prox_{weight * s}.
Vector apply_prior(const Prior& prior, const Vector& z, double weight = 1.0);

// Prior value s(x) (0 / infinity indicator for projection variants).
double prior_value(const Prior& prior, const Vector& x);

}  // namespace bpinv
