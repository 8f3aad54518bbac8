#pragma once

#include <string_view>

#include "bpinv/linops.hpp"

namespace bpinv {

enum class FidelityKind { LS, BP };

std::string_view to_string(FidelityKind kind) noexcept;

// LS: 1/2 ||y - A x||^2              gradient A^T (A x - y)
// BP: 1/2 ||A^+ (y - A x)||^2        gradient A^+ (A x - y)
// Both gradients are W (A x - y) with W = A^T or A^+.
class FidelityTerm {
 public:
  FidelityTerm(FidelityKind kind, DenseOperator op, Vector y);

  FidelityKind kind() const { return kind_; }
  const DenseOperator& op() const { return op_; }
  const Vector& y() const { return y_; }

  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;
  // Allocation-free variant: `residual` (m) and `out` (n) are scratch/output.
  void gradient_into(const Vector& x, Vector& residual, Vector& out) const;

  // W r.
  Vector apply_w(const Vector& r) const;
  void apply_w_into(const Vector& r, Vector& out) const;

  // 1 / L with L the largest eigenvalue of W A: 1/sigma_max(A A^T) for LS,
  // exactly 1 for BP.
  double default_step_size() const;

  // Extreme nonzero eigenvalues of the Hessian W A.
  double hessian_sigma_max() const;
  double hessian_sigma_min() const;

 private:
  FidelityKind kind_;
  DenseOperator op_;
  Vector y_;
};

inline double fidelity_value(const FidelityTerm& f, const Vector& x) { return f.value(x); }
inline Vector fidelity_gradient(const FidelityTerm& f, const Vector& x) { return f.gradient(x); }
inline double default_step_size(const FidelityTerm& f) { return f.default_step_size(); }

}  // namespace bpinv
