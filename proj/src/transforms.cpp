#include "bpinv/transforms.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "bpinv/error.hpp"

namespace bpinv {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

bool is_power_of_two(Index v) { return v > 0 && (v & (v - 1)) == 0; }

int log2_exact(Index v) {
  int l = 0;
  while ((Index{1} << l) < v) ++l;
  return l;
}

void validate(const HaarBasis& basis) {
  if (!is_power_of_two(basis.side)) {
    throw Error(ErrorCode::BadGeometry, "Haar side must be a power of two, got " + std::to_string(basis.side));
  }
  if (basis.levels < 0 || basis.levels > log2_exact(basis.side)) {
    throw Error(ErrorCode::BadGeometry, "Haar levels out of range: " + std::to_string(basis.levels));
  }
}

// One analysis level on the leading `len` entries of a strided line.
void analyze_line(double* p, Index stride, Index len, std::vector<double>& tmp) {
  const Index half = len / 2;
  for (Index i = 0; i < half; ++i) {
    const double a = p[(2 * i) * stride];
    const double b = p[(2 * i + 1) * stride];
    tmp[static_cast<std::size_t>(i)] = (a + b) * kInvSqrt2;
    tmp[static_cast<std::size_t>(half + i)] = (a - b) * kInvSqrt2;
  }
  for (Index i = 0; i < len; ++i) p[i * stride] = tmp[static_cast<std::size_t>(i)];
}

void synthesize_line(double* p, Index stride, Index len, std::vector<double>& tmp) {
  const Index half = len / 2;
  for (Index i = 0; i < half; ++i) {
    const double a = p[i * stride];
    const double d = p[(half + i) * stride];
    tmp[static_cast<std::size_t>(2 * i)] = (a + d) * kInvSqrt2;
    tmp[static_cast<std::size_t>(2 * i + 1)] = (a - d) * kInvSqrt2;
  }
  for (Index i = 0; i < len; ++i) p[i * stride] = tmp[static_cast<std::size_t>(i)];
}

Index reflect(Index i, Index n) {
  // Half-sample symmetric: ... 1 0 | 0 1 ... n-1 | n-1 n-2 ...
  const Index period = 2 * n;
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - 1 - i;
}

}  // namespace

HaarBasis HaarBasis::full(Index side) {
  HaarBasis b{side, 0};
  if (!is_power_of_two(side)) {
    throw Error(ErrorCode::BadGeometry, "Haar side must be a power of two, got " + std::to_string(side));
  }
  b.levels = log2_exact(side);
  return b;
}

Vector haar_transform(const HaarBasis& basis, HaarDirection direction, const Vector& x) {
  validate(basis);
  const Index side = basis.side;
  if (x.size() != side * side) {
    throw Error(ErrorCode::BadLength, "Haar input has length " + std::to_string(x.size()) + ", expected " +
                                          std::to_string(side * side));
  }
  Vector out = x;
  double* img = out.data();
  std::vector<double> tmp(static_cast<std::size_t>(side));

  if (direction == HaarDirection::Forward) {
    Index len = side;
    for (int level = 0; level < basis.levels; ++level, len /= 2) {
      for (Index r = 0; r < len; ++r) analyze_line(img + r * side, 1, len, tmp);
      for (Index c = 0; c < len; ++c) analyze_line(img + c, side, len, tmp);
    }
  } else {
    if (basis.levels == 0) return out;
    Index len = side >> (basis.levels - 1);
    for (int level = 0; level < basis.levels; ++level, len *= 2) {
      for (Index c = 0; c < len; ++c) synthesize_line(img + c, side, len, tmp);
      for (Index r = 0; r < len; ++r) synthesize_line(img + r * side, 1, len, tmp);
    }
  }
  return out;
}

DenseOperator gaussian_sensing(Index m, Index n, const SeededRng& rng) {
  if (m <= 0 || n <= 0 || m > n) {
    throw Error(ErrorCode::DimensionMismatch,
                "gaussian_sensing needs 0 < m <= n, got " + std::to_string(m) + "x" + std::to_string(n));
  }
  const double stddev = 1.0 / std::sqrt(static_cast<double>(m));
  for (std::uint64_t attempt = 0;; ++attempt) {
    SeededRng draw(rng.seed(), rng.stream() + attempt);
    try {
      return DenseOperator::build(draw.normal_matrix(m, n, stddev));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::RankDeficient || attempt == 3) throw;
    }
  }
}

DenseOperator compose_with_basis(const DenseOperator& sensing, const HaarBasis& basis) {
  validate(basis);
  if (sensing.cols() != basis.side * basis.side) {
    throw Error(ErrorCode::DimensionMismatch, "sensing has " + std::to_string(sensing.cols()) +
                                                  " columns, basis needs " +
                                                  std::to_string(basis.side * basis.side));
  }
  // Row i of A H^T is (H a_i)^T; the right singular vectors rotate as H V.
  Matrix composed(sensing.rows(), sensing.cols());
  for (Index i = 0; i < sensing.rows(); ++i) {
    composed.row(i) = haar_transform(basis, HaarDirection::Forward, sensing.matrix().row(i).transpose());
  }
  const Matrix& v = sensing.right_vectors();
  Matrix rotated_v(v.rows(), v.cols());
  for (Index j = 0; j < v.cols(); ++j) {
    rotated_v.col(j) = haar_transform(basis, HaarDirection::Forward, v.col(j));
  }
  return DenseOperator::with_rotated_columns(sensing, std::move(composed), std::move(rotated_v));
}

DenseOperator sr_operator(Index side, Index scale, Index kernel_size, double kernel_sigma) {
  if (side <= 0 || scale <= 0 || side % scale != 0) {
    throw Error(ErrorCode::BadGeometry,
                "side " + std::to_string(side) + " is not divisible by scale " + std::to_string(scale));
  }
  if (kernel_size <= 0 || kernel_size % 2 == 0) {
    throw Error(ErrorCode::BadGeometry, "kernel size must be odd and positive, got " + std::to_string(kernel_size));
  }
  if (!std::isfinite(kernel_sigma)) throw Error(ErrorCode::NonFinite, "kernel sigma is not finite");

  const Index half = kernel_size / 2;
  Matrix kernel = Matrix::Zero(kernel_size, kernel_size);
  if (kernel_size == 1 || kernel_sigma <= 0.0) {
    kernel(half, half) = 1.0;
  } else {
    const double denom = 2.0 * kernel_sigma * kernel_sigma;
    for (Index a = 0; a < kernel_size; ++a)
      for (Index b = 0; b < kernel_size; ++b) {
        const double da = static_cast<double>(a - half), db = static_cast<double>(b - half);
        kernel(a, b) = std::exp(-(da * da + db * db) / denom);
      }
    kernel /= kernel.sum();
  }

  const Index low = side / scale;
  const Index offset = (scale - 1) / 2;
  Matrix a = Matrix::Zero(low * low, side * side);
  for (Index bi = 0; bi < low; ++bi)
    for (Index bj = 0; bj < low; ++bj) {
      const Index row = bi * low + bj;
      const Index ci = bi * scale + offset, cj = bj * scale + offset;
      for (Index a_ = -half; a_ <= half; ++a_)
        for (Index b_ = -half; b_ <= half; ++b_) {
          const Index pi = reflect(ci + a_, side), pj = reflect(cj + b_, side);
          a(row, pi * side + pj) += kernel(a_ + half, b_ + half);
        }
    }
  return DenseOperator::build(a);
}

DenseOperator column_normalize(const DenseOperator& op) {
  Matrix a = op.matrix();
  for (Index j = 0; j < a.cols(); ++j) {
    const double norm = a.col(j).norm();
    if (!(norm > 0.0)) throw Error(ErrorCode::ZeroColumn, "column " + std::to_string(j) + " is zero");
    a.col(j) /= norm;
  }
  return DenseOperator::build(a, op.rank_tol());
}

}  // namespace bpinv
