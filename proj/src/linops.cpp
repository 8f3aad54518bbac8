#include "bpinv/linops.hpp"

#include <string>

#include "bpinv/error.hpp"
#include "bpinv/kernels.hpp"

namespace bpinv {
namespace {

void require_length(const Vector& v, Index expected, const char* what) {
  if (v.size() != expected) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": expected length " +
                                                  std::to_string(expected) + ", got " +
                                                  std::to_string(v.size()));
  }
}

void gemv(const RowMatrix& m, const Vector& x, Vector& y) {
  y.resize(m.rows());
  kernels::active().gemv(m.data(), static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()),
                         x.data(), y.data());
}

void gemv_t(const RowMatrix& m, const Vector& x, Vector& y) {
  y.resize(m.cols());
  kernels::active().gemv_t(m.data(), static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()),
                           x.data(), y.data());
}

}  // namespace

std::shared_ptr<const DenseOperator::State> DenseOperator::finish(State state) {
  state.a_rows = state.a;
  state.vt = state.v.transpose();
  state.pinv = state.v * state.s.cwiseInverse().asDiagonal() * state.u.transpose();
  return std::make_shared<const State>(std::move(state));
}

DenseOperator DenseOperator::build(const Matrix& a, double rank_tol) {
  if (a.rows() == 0 || a.cols() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "operator must be non-empty");
  }
  if (a.rows() > a.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "operator needs rows <= cols, got " + std::to_string(a.rows()) +
                                                  "x" + std::to_string(a.cols()));
  }
  if (!a.allFinite()) throw Error(ErrorCode::NonFinite, "operator has non-finite entries");
  if (!(rank_tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "rank_tol must be positive");

  // Thin SVD of the tall transpose: A^T = V S U^T.
  Eigen::BDCSVD<Matrix> svd(a.transpose(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  const Index m = a.rows();
  if (!(s(0) > 0.0) || s(m - 1) <= rank_tol * s(0)) {
    throw Error(ErrorCode::RankDeficient, "smallest singular value " + std::to_string(s(m - 1)) +
                                              " <= rank_tol * largest (" + std::to_string(rank_tol * s(0)) +
                                              ")");
  }

  State state;
  state.a = a;
  state.u = svd.matrixV();
  state.s = s;
  state.v = svd.matrixU();
  state.rank_tol = rank_tol;
  return DenseOperator(finish(std::move(state)));
}

DenseOperator DenseOperator::with_rotated_columns(const DenseOperator& base, Matrix rotated, Matrix rotated_v) {
  if (rotated.rows() != base.rows() || rotated.cols() != base.cols() || rotated_v.rows() != base.cols() ||
      rotated_v.cols() != base.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "rotated factors do not match the base operator");
  }
  State state;
  state.a = std::move(rotated);
  state.u = base.left_vectors();
  state.s = base.singular_values();
  state.v = std::move(rotated_v);
  state.rank_tol = base.rank_tol();
  return DenseOperator(finish(std::move(state)));
}

Vector DenseOperator::apply(ApplyMode mode, const Vector& v) const {
  switch (mode) {
    case ApplyMode::Forward: return forward(v);
    case ApplyMode::Adjoint: return adjoint(v);
    case ApplyMode::Pinv: return pinv(v);
    case ApplyMode::RowProject: return row_project(v);
    case ApplyMode::NullProject: return null_project(v);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown apply mode");
}

Vector DenseOperator::forward(const Vector& x) const {
  Vector out;
  forward_into(x, out);
  return out;
}

Vector DenseOperator::adjoint(const Vector& r) const {
  Vector out;
  adjoint_into(r, out);
  return out;
}

Vector DenseOperator::pinv(const Vector& r) const {
  Vector out;
  pinv_into(r, out);
  return out;
}

void DenseOperator::forward_into(const Vector& x, Vector& out) const {
  require_length(x, cols(), "forward");
  gemv(state_->a_rows, x, out);
}

void DenseOperator::adjoint_into(const Vector& r, Vector& out) const {
  require_length(r, rows(), "adjoint");
  gemv_t(state_->a_rows, r, out);
}

void DenseOperator::pinv_into(const Vector& r, Vector& out) const {
  require_length(r, rows(), "pinv");
  gemv(state_->pinv, r, out);
}

Vector DenseOperator::row_project(const Vector& x) const {
  require_length(x, cols(), "row_project");
  Vector coeffs;
  gemv(state_->vt, x, coeffs);
  Vector out;
  gemv_t(state_->vt, coeffs, out);
  return out;
}

Vector DenseOperator::null_project(const Vector& x) const { return x - row_project(x); }

Vector DenseOperator::gram_inverse(const Vector& r) const {
  require_length(r, rows(), "gram_inverse");
  const Vector inv_s2 = state_->s.array().square().inverse();
  return state_->u * (inv_s2.asDiagonal() * (state_->u.transpose() * r));
}

SpectralSummary DenseOperator::spectral_summary() const {
  const Vector& s = state_->s;
  SpectralSummary out;
  out.sigma_max = s(0) * s(0);
  out.sigma_min = s(s.size() - 1) * s(s.size() - 1);
  out.condition_ratio = out.sigma_min / out.sigma_max;
  return out;
}

}  // namespace bpinv
