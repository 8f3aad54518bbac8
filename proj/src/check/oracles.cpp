#include "bpinv/check/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace bpinv::oracle {

Matrix pinv_normal_equations(const Matrix& a) {
  const Matrix gram = a * a.transpose();
  return a.transpose() * gram.ldlt().solve(Matrix::Identity(a.rows(), a.rows()));
}

Matrix null_projector(const Matrix& a) {
  return Matrix::Identity(a.cols(), a.cols()) - pinv_normal_equations(a) * a;
}

double bp_value_sqrt_form(const Matrix& a, const Vector& y, const Vector& x) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(a * a.transpose());
  const Matrix inv_sqrt =
      eig.eigenvectors() * eig.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();
  return 0.5 * (inv_sqrt * (y - a * x)).squaredNorm();
}

Vector finite_difference_gradient(const std::function<double(const Vector&)>& f, const Vector& x, double rel_step) {
  const double h = rel_step * (1.0 + x.cwiseAbs().maxCoeff());
  Vector g(x.size());
  Vector probe = x;
  for (Index i = 0; i < x.size(); ++i) {
    probe(i) = x(i) + h;
    const double up = f(probe);
    probe(i) = x(i) - h;
    const double down = f(probe);
    probe(i) = x(i);
    g(i) = (up - down) / (2.0 * h);
  }
  return g;
}

double l1_ball_threshold(const Vector& v, double radius) {
  if (v.cwiseAbs().sum() <= radius) return 0.0;
  std::vector<double> bp{0.0};
  for (Index i = 0; i < v.size(); ++i) bp.push_back(std::abs(v(i)));
  std::sort(bp.begin(), bp.end());
  auto g = [&](double theta) {
    double s = 0.0;
    for (Index i = 0; i < v.size(); ++i) s += std::max(std::abs(v(i)) - theta, 0.0);
    return s;
  };
  // g is continuous, piecewise linear and non-increasing; find lo < hi
  // consecutive breakpoints with g(lo) >= R >= g(hi).
  for (std::size_t j = 0; j + 1 < bp.size(); ++j) {
    const double lo = bp[j], hi = bp[j + 1];
    const double glo = g(lo), ghi = g(hi);
    if (glo >= radius && ghi <= radius) {
      if (glo == ghi) return lo;
      return lo + (glo - radius) * (hi - lo) / (glo - ghi);
    }
  }
  return bp.back();
}

Vector l1_ball_breakpoint(const Vector& v, double radius) {
  const double theta = l1_ball_threshold(v, radius);
  Vector out(v.size());
  for (Index i = 0; i < v.size(); ++i) {
    const double mag = std::max(std::abs(v(i)) - theta, 0.0);
    out(i) = v(i) < 0 ? -mag : mag;
  }
  return out;
}

double soft_threshold_grid_value(const Vector& z, double theta, double half_width, int points_per_axis) {
  double best = std::numeric_limits<double>::infinity();
  const double step = 2.0 * half_width / (points_per_axis - 1);
  if (z.size() != 2) return best;
  for (int i = 0; i < points_per_axis; ++i)
    for (int j = 0; j < points_per_axis; ++j) {
      const double x0 = z(0) - half_width + i * step;
      const double x1 = z(1) - half_width + j * step;
      const double val = 0.5 * ((z(0) - x0) * (z(0) - x0) + (z(1) - x1) * (z(1) - x1)) +
                         theta * (std::abs(x0) + std::abs(x1));
      best = std::min(best, val);
    }
  return best;
}

double best_k_term_error(const Vector& x, Index k) {
  const Index n = x.size();
  double best = std::numeric_limits<double>::infinity();
  std::vector<bool> pick(static_cast<std::size_t>(n), false);
  std::fill(pick.begin(), pick.begin() + k, true);
  do {
    double err = 0.0;
    for (Index i = 0; i < n; ++i) {
      if (!pick[static_cast<std::size_t>(i)]) err += x(i) * x(i);
    }
    best = std::min(best, err);
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return std::sqrt(best);
}

double alista_numeric_objective(const Matrix& a, int iterations) {
  const Matrix gram = a * a.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
  const double step = 1.0 / eig.eigenvalues().maxCoeff();
  double total = 0.0;
  for (Index i = 0; i < a.cols(); ++i) {
    const Vector ai = a.col(i);
    const double ai2 = ai.squaredNorm();
    auto project = [&](Vector w) { return Vector(w - ai * ((ai.dot(w) - 1.0) / ai2)); };
    Vector w = ai / ai2;
    for (int t = 0; t < iterations; ++t) w = project(w - step * (gram * w));
    total += (a.transpose() * w).squaredNorm();
  }
  return total;
}

Vector jacobi_singular_values(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues();
}

Vector tikhonov_lu(const Vector& z, double beta, const Matrix& d) {
  const Matrix sys = Matrix::Identity(d.cols(), d.cols()) + beta * d.transpose() * d;
  return sys.fullPivLu().solve(z);
}

Vector tikhonov_stationary_point(const Matrix& w, const Matrix& a, const Vector& y, double beta, const Matrix& d) {
  const Matrix sys = w * a + beta * d.transpose() * d;
  return sys.fullPivLu().solve(w * y);
}

}  // namespace bpinv::oracle
