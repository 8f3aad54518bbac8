#pragma once

// Dense full-row-rank measurement operators with a cached thin SVD.
//
// A = U diag(s) V^T with U (m x m) orthogonal, s descending and strictly
// positive, V (n x m) with orthonormal columns. From these factors:
//   A^+     = V diag(1/s) U^T          (right inverse, A A^+ = I_m)
//   P_A     = A^+ A = V V^T            (row-space projector)
//   Q_A     = I_n - P_A                (null-space projector)
// The projectors are never formed; they are applied as two thin products.

#include <memory>

#include "bpinv/types.hpp"

namespace bpinv {

enum class ApplyMode { Forward, Adjoint, Pinv, RowProject, NullProject };

struct SpectralSummary {
  double sigma_max = 0.0;  // largest eigenvalue of A A^T
  double sigma_min = 0.0;  // smallest eigenvalue of A A^T
  double condition_ratio = 0.0;  // sigma_min / sigma_max
};

class DenseOperator {
 public:
  static constexpr double kDefaultRankTol = 1e-10;

  // Factorizes `a` (m x n, m <= n). Throws RankDeficient when the smallest
  // singular value is <= rank_tol * largest, NonFinite on NaN/inf entries,
  // DimensionMismatch when m > n or the matrix is empty.
  static DenseOperator build(const Matrix& a, double rank_tol = kDefaultRankTol);

  // Builds A' = A R^T for an orthogonal R given the factors of A and
  // V' = R V, without refactorizing. `rotated` must equal A R^T.
  static DenseOperator with_rotated_columns(const DenseOperator& base, Matrix rotated, Matrix rotated_v);

  Index rows() const { return state_->a.rows(); }
  Index cols() const { return state_->a.cols(); }
  double rank_tol() const { return state_->rank_tol; }

  const Matrix& matrix() const { return state_->a; }
  const Vector& singular_values() const { return state_->s; }
  const Matrix& left_vectors() const { return state_->u; }
  const Matrix& right_vectors() const { return state_->v; }
  // Dense A^+ (n x m).
  const RowMatrix& pinv_matrix() const { return state_->pinv; }

  Vector apply(ApplyMode mode, const Vector& v) const;

  Vector forward(const Vector& x) const;       // A x
  Vector adjoint(const Vector& r) const;       // A^T r
  Vector pinv(const Vector& r) const;          // A^+ r
  Vector row_project(const Vector& x) const;   // P_A x
  Vector null_project(const Vector& x) const;  // Q_A x

  // In-place variants for solver hot loops; `out` is resized as needed.
  void forward_into(const Vector& x, Vector& out) const;
  void adjoint_into(const Vector& r, Vector& out) const;
  void pinv_into(const Vector& r, Vector& out) const;

  // (A A^T)^{-1} r via the cached factors.
  Vector gram_inverse(const Vector& r) const;

  SpectralSummary spectral_summary() const;

 private:
  struct State {
    Matrix a;
    RowMatrix a_rows;  // A, row-major
    RowMatrix pinv;    // A^+, row-major (n x m)
    RowMatrix vt;      // V^T, row-major (m x n)
    Matrix u;
    Vector s;
    Matrix v;
    double rank_tol = kDefaultRankTol;
  };

  explicit DenseOperator(std::shared_ptr<const State> state) : state_(std::move(state)) {}
  static std::shared_ptr<const State> finish(State state);

  std::shared_ptr<const State> state_;
};

inline SpectralSummary spectral_summary(const DenseOperator& op) { return op.spectral_summary(); }

}  // namespace bpinv
