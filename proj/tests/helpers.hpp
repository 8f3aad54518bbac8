#pragma once

#include <cmath>

#include "bpinv/linops.hpp"
#include "bpinv/rng.hpp"

namespace testutil {

inline double rel_err(const bpinv::Vector& a, const bpinv::Vector& b) {
  return (a - b).norm() / std::max(b.norm(), 1e-300);
}

inline bpinv::Matrix gaussian(bpinv::Index m, bpinv::Index n, std::uint64_t seed) {
  bpinv::SeededRng rng(seed, 77);
  return rng.normal_matrix(m, n, 1.0 / std::sqrt(static_cast<double>(m)));
}

// [I_m | 0]
inline bpinv::Matrix orthonormal_rows(bpinv::Index m, bpinv::Index n) {
  bpinv::Matrix a = bpinv::Matrix::Zero(m, n);
  a.leftCols(m).setIdentity();
  return a;
}

// Random m x n with orthonormal rows.
inline bpinv::Matrix random_orthonormal_rows(bpinv::Index m, bpinv::Index n, std::uint64_t seed) {
  bpinv::SeededRng rng(seed, 78);
  Eigen::HouseholderQR<bpinv::Matrix> qr(rng.normal_matrix(n, m));
  return bpinv::Matrix(qr.householderQ() * bpinv::Matrix::Identity(n, m)).transpose();
}

}  // namespace testutil
