#include "bpinv/fidelity.hpp"

#include <string>

#include "bpinv/error.hpp"

namespace bpinv {

std::string_view to_string(FidelityKind kind) noexcept {
  return kind == FidelityKind::LS ? "LS" : "BP";
}

FidelityTerm::FidelityTerm(FidelityKind kind, DenseOperator op, Vector y)
    : kind_(kind), op_(std::move(op)), y_(std::move(y)) {
  if (y_.size() != op_.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "observation has length " + std::to_string(y_.size()) +
                                                  ", operator has " + std::to_string(op_.rows()) + " rows");
  }
  if (!y_.allFinite()) throw Error(ErrorCode::NonFinite, "observation has non-finite entries");
}

double FidelityTerm::value(const Vector& x) const {
  const Vector r = y_ - op_.forward(x);
  if (kind_ == FidelityKind::LS) return 0.5 * r.squaredNorm();
  return 0.5 * op_.pinv(r).squaredNorm();
}

void FidelityTerm::gradient_into(const Vector& x, Vector& residual, Vector& out) const {
  op_.forward_into(x, residual);
  residual -= y_;
  apply_w_into(residual, out);
}

Vector FidelityTerm::gradient(const Vector& x) const {
  Vector residual, out;
  gradient_into(x, residual, out);
  return out;
}

void FidelityTerm::apply_w_into(const Vector& r, Vector& out) const {
  if (kind_ == FidelityKind::LS) {
    op_.adjoint_into(r, out);
  } else {
    op_.pinv_into(r, out);
  }
}

Vector FidelityTerm::apply_w(const Vector& r) const {
  Vector out;
  apply_w_into(r, out);
  return out;
}

double FidelityTerm::hessian_sigma_max() const {
  return kind_ == FidelityKind::LS ? op_.spectral_summary().sigma_max : 1.0;
}

double FidelityTerm::hessian_sigma_min() const {
  return kind_ == FidelityKind::LS ? op_.spectral_summary().sigma_min : 1.0;
}

double FidelityTerm::default_step_size() const { return 1.0 / hessian_sigma_max(); }

}  // namespace bpinv
