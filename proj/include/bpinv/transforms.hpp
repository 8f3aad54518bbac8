#pragma once

// Measurement operators: Gaussian sensing, orthonormal 2-D Haar analysis,
// blur + decimate super-resolution, and unit-column normalization.

#include "bpinv/linops.hpp"
#include "bpinv/rng.hpp"

namespace bpinv {

// m x n with i.i.d. N(0, 1/m) entries. A rank-deficient draw is retried on
// the next three streams before giving up with RankDeficient.
DenseOperator gaussian_sensing(Index m, Index n, const SeededRng& rng);

struct HaarBasis {
  Index side = 1;
  int levels = 0;

  // Full-depth decomposition, levels = log2(side).
  static HaarBasis full(Index side);
};

enum class HaarDirection { Forward, Inverse };

// Row-major image of side*side pixels. Forward is analysis, Inverse is
// synthesis; the approximation band sits in the top-left corner.
Vector haar_transform(const HaarBasis& basis, HaarDirection direction, const Vector& x);

// Operator taking Haar coefficients to measurements: A' = A H^T.
DenseOperator compose_with_basis(const DenseOperator& sensing, const HaarBasis& basis);

// Gaussian blur (kernel_size x kernel_size, truncated and renormalized to
// unit sum, half-sample symmetric boundary) followed by keeping every
// scale-th pixel starting at offset (scale - 1) / 2 in each dimension.
// kernel_sigma <= 0 or kernel_size == 1 gives a delta kernel.
DenseOperator sr_operator(Index side, Index scale, Index kernel_size, double kernel_sigma);

DenseOperator column_normalize(const DenseOperator& op);

}  // namespace bpinv
