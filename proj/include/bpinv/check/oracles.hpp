#pragma once

// Reference computations used to validate the library. Each one takes a
// different numerical route from the production code (explicit inverses,
// eigendecompositions, exhaustive or grid search) and is only meant for
// small problems.

#include <functional>

#include "bpinv/types.hpp"

namespace bpinv::oracle {

// A^+ = A^T (A A^T)^{-1} via an LDLT solve.
Matrix pinv_normal_equations(const Matrix& a);

// I - A^+ A, materialized.
Matrix null_projector(const Matrix& a);

// 1/2 ||(A A^T)^{-1/2} (y - A x)||^2 with the square root taken through a
// symmetric eigendecomposition.
double bp_value_sqrt_form(const Matrix& a, const Vector& y, const Vector& x);

// Central differences with step h = rel_step * (1 + ||x||_inf).
Vector finite_difference_gradient(const std::function<double(const Vector&)>& f, const Vector& x,
                                  double rel_step = 1e-6);

// Projection onto the l1 ball by scanning the breakpoints {0, |v_i|} of
// g(theta) = sum_i max(|v_i| - theta, 0) and solving g(theta) = R on the
// bracketing segment.
Vector l1_ball_breakpoint(const Vector& v, double radius);
double l1_ball_threshold(const Vector& v, double radius);

// Minimizes 1/2 ||z - x||^2 + theta ||x||_1 over a square grid around z.
// Returns the best grid objective value.
double soft_threshold_grid_value(const Vector& z, double theta, double half_width, int points_per_axis);

// Best k-term approximation error by enumerating all k-subsets (n <= 16).
double best_k_term_error(const Vector& x, Index k);

// Numeric minimum of ||W^T A||_F^2 subject to W[:,i]^T A[:,i] = 1, by
// projected gradient on each column independently.
double alista_numeric_objective(const Matrix& a, int iterations = 20000);

// Singular values through a two-sided Jacobi SVD.
Vector jacobi_singular_values(const Matrix& a);

// (I + beta D^T D)^{-1} z through a full-pivot LU.
Vector tikhonov_lu(const Vector& z, double beta, const Matrix& d);

// Fixed point of x = prox_{mu beta s}(x - mu W (A x - y)) for
// s = 1/2 ||D x||^2: solves (W A + beta D^T D) x = W y.
Vector tikhonov_stationary_point(const Matrix& w, const Matrix& a, const Vector& y, double beta, const Matrix& d);

}  // namespace bpinv::oracle
