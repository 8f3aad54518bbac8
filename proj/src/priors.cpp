#include "bpinv/priors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "bpinv/error.hpp"
#include "bpinv/kernels.hpp"

namespace bpinv {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Eigen::LLT<Matrix> factor_shifted(const Matrix& dtd, double beta) {
  Matrix sys = beta * dtd;
  sys.diagonal().array() += 1.0;
  Eigen::LLT<Matrix> llt(sys);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::SingularSystem, "I + beta D^T D is not positive definite");
  return llt;
}

}  // namespace

TikhonovPrior::TikhonovPrior(double beta, Matrix d) : beta_(beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw Error(ErrorCode::InvalidArgument, "Tikhonov beta must be positive, got " + std::to_string(beta));
  }
  if (!d.allFinite()) throw Error(ErrorCode::NonFinite, "Tikhonov D has non-finite entries");
  auto state = std::make_shared<State>();
  state->dtd = d.transpose() * d;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(state->dtd, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues()(0);
  const double hi = eig.eigenvalues()(eig.eigenvalues().size() - 1);
  if (!(lo > 1e-12 * std::max(hi, 1.0))) {
    throw Error(ErrorCode::SingularSystem, "D^T D is not positive definite (smallest eigenvalue " +
                                               std::to_string(lo) + ")");
  }
  state->dtd_sigma_min = lo;
  state->d = std::move(d);
  state_ = std::move(state);
  llt_ = std::make_shared<const Eigen::LLT<Matrix>>(factor_shifted(state_->dtd, beta_));
}

TikhonovPrior::TikhonovPrior(double beta, std::shared_ptr<const State> state)
    : beta_(beta), state_(std::move(state)) {
  llt_ = std::make_shared<const Eigen::LLT<Matrix>>(factor_shifted(state_->dtd, beta_));
}

Vector TikhonovPrior::prox(const Vector& z) const {
  if (z.size() != state_->dtd.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "Tikhonov prox input has length " + std::to_string(z.size()));
  }
  return llt_->solve(z);
}

TikhonovPrior TikhonovPrior::scaled(double factor) const {
  if (!(factor > 0.0)) throw Error(ErrorCode::InvalidArgument, "Tikhonov scale must be positive");
  return TikhonovPrior(beta_ * factor, state_);
}

Prior make_l1_ball(double radius) {
  if (!(radius > 0.0)) throw Error(ErrorCode::NonpositiveRadius, "l1 radius must be positive, got " + std::to_string(radius));
  return L1Ball{radius};
}

Prior make_soft_threshold(double theta) {
  if (!(theta >= 0.0)) throw Error(ErrorCode::NegativeThreshold, "threshold must be >= 0, got " + std::to_string(theta));
  return SoftThresholdProx{theta};
}

Prior make_oracle(Vector x_gt, DenseOperator op) {
  if (x_gt.size() != op.cols()) throw Error(ErrorCode::DimensionMismatch, "oracle x_gt does not match operator");
  return OraclePrior{std::move(x_gt), std::move(op)};
}

Prior make_tikhonov(double beta, Matrix d) { return TikhonovPrior(beta, std::move(d)); }

bool is_projection(const Prior& prior) noexcept {
  return std::holds_alternative<L1Ball>(prior) || std::holds_alternative<OraclePrior>(prior);
}

Vector project_l1_ball(const Vector& v, double radius) {
  if (!(radius > 0.0)) throw Error(ErrorCode::NonpositiveRadius, "l1 radius must be positive, got " + std::to_string(radius));
  const double l1 = v.cwiseAbs().sum();
  if (l1 <= radius) return v;

  // Sort-and-threshold: largest rho with u_rho > (sum_{i<=rho} u_i - R) / rho.
  std::vector<double> u(v.size());
  for (Index i = 0; i < v.size(); ++i) u[static_cast<std::size_t>(i)] = std::abs(v(i));
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0, theta = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumsum += u[j];
    const double t = (cumsum - radius) / static_cast<double>(j + 1);
    if (u[j] > t) theta = t;
  }
  Vector out(v.size());
  kernels::active().soft_threshold(v.data(), theta, out.data(), static_cast<std::size_t>(v.size()));
  return out;
}

Vector soft_threshold(const Vector& z, double theta) {
  if (!(theta >= 0.0)) throw Error(ErrorCode::NegativeThreshold, "threshold must be >= 0, got " + std::to_string(theta));
  Vector out(z.size());
  kernels::active().soft_threshold(z.data(), theta, out.data(), static_cast<std::size_t>(z.size()));
  return out;
}

Vector oracle_project(const Vector& x, const Vector& x_gt, const DenseOperator& op) {
  if (x.size() != op.cols() || x_gt.size() != op.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "oracle_project dimensions do not match the operator");
  }
  // P_A x + Q_A x_gt = x_gt + P_A (x - x_gt)
  return x_gt + op.row_project(x - x_gt);
}

Vector tikhonov_prox(const Vector& z, double beta, const Matrix& d) { return TikhonovPrior(beta, d).prox(z); }

double contraction_delta(const Prior& prior, const DenseOperator& op) {
  const auto* tik = std::get_if<TikhonovPrior>(&prior);
  if (tik == nullptr) throw Error(ErrorCode::WrongVariant, "contraction_delta is defined for the Tikhonov prior only");
  if (tik->d().cols() != op.cols()) throw Error(ErrorCode::DimensionMismatch, "Tikhonov D does not match operator");
  const double k = 1.0 / (1.0 + tik->beta() * tik->dtd_sigma_min());
  return 1.0 - k;
}

Vector apply_prior(const Prior& prior, const Vector& z, double weight) {
  return std::visit(Overloaded{
                        [&](const L1Ball& p) { return project_l1_ball(z, p.radius); },
                        [&](const SoftThresholdProx& p) { return soft_threshold(z, weight * p.theta); },
                        [&](const OraclePrior& p) { return oracle_project(z, p.x_gt, p.op); },
                        [&](const TikhonovPrior& p) { return weight == 1.0 ? p.prox(z) : p.scaled(weight).prox(z); },
                    },
                    prior);
}

double prior_value(const Prior& prior, const Vector& x) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return std::visit(Overloaded{
                        [&](const L1Ball& p) { return x.lpNorm<1>() <= p.radius * (1.0 + 1e-9) ? 0.0 : inf; },
                        [&](const SoftThresholdProx& p) { return p.theta * x.lpNorm<1>(); },
                        [&](const OraclePrior& p) {
                          const double gap = p.op.null_project(x - p.x_gt).norm();
                          return gap <= 1e-9 * std::max(1.0, p.x_gt.norm()) ? 0.0 : inf;
                        },
                        [&](const TikhonovPrior& p) { return 0.5 * p.beta() * (p.d() * x).squaredNorm(); },
                    },
                    prior);
}

}  // namespace bpinv
