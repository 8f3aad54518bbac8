#include "bpinv/rate_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bpinv/error.hpp"

namespace bpinv {
namespace {

void check_support_size(const DenseOperator& op, Index k) {
  if (k < 1 || k > op.rows()) {
    throw Error(ErrorCode::BadSupportSize,
                "support size must be in [1, " + std::to_string(op.rows()) + "], got " + std::to_string(k));
  }
}

void check_support(const DenseOperator& op, const Support& s) {
  check_support_size(op, static_cast<Index>(s.size()));
  for (Index j : s) {
    if (j < 0 || j >= op.cols()) throw Error(ErrorCode::BadSupportSize, "support index out of range");
  }
}

Matrix columns(const Matrix& a, const Support& s) {
  Matrix out(a.rows(), static_cast<Index>(s.size()));
  for (std::size_t j = 0; j < s.size(); ++j) out.col(static_cast<Index>(j)) = a.col(s[j]);
  return out;
}

double min_singular_value(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

// I - mu W A restricted to the support, as a k x k matrix. For LS this is
// I - A_S^T A_S / sigma_max; for BP it is I - (V^T_S)^T V^T_S.
Matrix restricted_iteration_matrix(const DenseOperator& op, FidelityKind kind, const Support& s) {
  const Index k = static_cast<Index>(s.size());
  Matrix g;
  if (kind == FidelityKind::LS) {
    const Matrix as = columns(op.matrix(), s);
    g = as.transpose() * as / op.spectral_summary().sigma_max;
  } else {
    const Matrix vs = columns(op.right_vectors().transpose(), s);
    g = vs.transpose() * vs;
  }
  return Matrix::Identity(k, k) - g;
}

Vector unit_on(Index k, SeededRng& rng) {
  Vector u = rng.normal_vector(k);
  const double norm = u.norm();
  return norm > 0.0 ? Vector(u / norm) : Vector::Unit(k, 0);
}

SampledSup sample_pairs(const DenseOperator& op, FidelityKind kind, const std::vector<Support>& supports,
                        int pairs_per_support, SeededRng& rng, bool ball) {
  if (pairs_per_support < 1) throw Error(ErrorCode::InvalidArgument, "pairs_per_support must be >= 1");
  if (supports.empty()) throw Error(ErrorCode::InvalidArgument, "support list is empty");
  SampledSup out;
  out.value = -std::numeric_limits<double>::infinity();
  for (const Support& s : supports) {
    check_support(op, s);
    const Matrix m = restricted_iteration_matrix(op, kind, s);
    const Index k = static_cast<Index>(s.size());
    double best = -std::numeric_limits<double>::infinity();
    for (int p = 0; p < pairs_per_support; ++p) {
      const Vector u = unit_on(k, rng);
      Vector v = unit_on(k, rng);
      if (ball) v *= std::pow(rng.uniform(), 1.0 / static_cast<double>(k));
      best = std::max(best, u.dot(m * v));
    }
    out.per_support.push_back(best);
    out.value = std::max(out.value, best);
  }
  return out;
}

}  // namespace

std::vector<Support> sample_supports(Index n, Index k, int num_supports, SeededRng& rng) {
  if (k < 1 || k > n) throw Error(ErrorCode::BadSupportSize, "support size out of range: " + std::to_string(k));
  if (num_supports < 1) throw Error(ErrorCode::InvalidArgument, "num_supports must be >= 1");
  std::vector<Support> out;
  out.reserve(static_cast<std::size_t>(num_supports));
  for (int i = 0; i < num_supports; ++i) out.push_back(rng.sample_without_replacement(n, k));
  return out;
}

RateEstimate estimate_restricted_rates(const DenseOperator& op, Index k, int num_supports, SeededRng rng) {
  check_support_size(op, k);
  const std::uint64_t seed = rng.seed(), stream = rng.stream();
  return estimate_restricted_rates(op, sample_supports(op.cols(), k, num_supports, rng), seed, stream);
}

RateEstimate estimate_restricted_rates(const DenseOperator& op, const std::vector<Support>& supports,
                                       std::uint64_t seed, std::uint64_t stream) {
  if (supports.empty()) throw Error(ErrorCode::InvalidArgument, "support list is empty");
  RateEstimate est;
  est.k = static_cast<Index>(supports.front().size());
  est.num_supports = static_cast<int>(supports.size());
  est.seed = seed;
  est.stream = stream;
  const double sigma_max = op.spectral_summary().sigma_max;
  const Matrix vt = op.right_vectors().transpose();
  double ls_min = std::numeric_limits<double>::infinity();
  double bp_min = std::numeric_limits<double>::infinity();
  for (const Support& s : supports) {
    check_support(op, s);
    // sigma_min(A_S^T A_S) = sigma_min(A_S)^2; A_S^T (A A^T)^{-1} A_S = (V^T_S)^T V^T_S.
    const double ls_sv = min_singular_value(columns(op.matrix(), s));
    const double bp_sv = min_singular_value(columns(vt, s));
    const double ls = ls_sv * ls_sv / sigma_max;
    const double bp = bp_sv * bp_sv;
    est.ls_terms.push_back(ls);
    est.bp_terms.push_back(bp);
    ls_min = std::min(ls_min, ls);
    bp_min = std::min(bp_min, bp);
  }
  est.p_ls_hat = std::clamp(1.0 - ls_min, 0.0, 1.0);
  est.p_bp_hat = std::clamp(1.0 - bp_min, 0.0, 1.0);
  est.ratio = est.p_ls_hat > 0.0 ? est.p_bp_hat / est.p_ls_hat : 1.0;
  return est;
}

double rho_pair_value(const DenseOperator& op, FidelityKind kind, const Support& support, const Vector& u,
                      const Vector& v) {
  check_support(op, support);
  if (u.size() != static_cast<Index>(support.size()) || v.size() != u.size()) {
    throw Error(ErrorCode::DimensionMismatch, "pair vectors must have the support's length");
  }
  return u.dot(restricted_iteration_matrix(op, kind, support) * v);
}

SampledSup monte_carlo_rho(const DenseOperator& op, FidelityKind kind, const std::vector<Support>& supports,
                           int pairs_per_support, SeededRng rng) {
  return sample_pairs(op, kind, supports, pairs_per_support, rng, false);
}

double monte_carlo_rho(const DenseOperator& op, FidelityKind kind, Index k, int num_pairs, SeededRng rng) {
  check_support_size(op, k);
  const auto supports = sample_supports(op.cols(), k, num_pairs, rng);
  return sample_pairs(op, kind, supports, 1, rng, false).value;
}

SampledSup monte_carlo_xi(const DenseOperator& op, FidelityKind kind, const std::vector<Support>& supports,
                          int pairs_per_support, SeededRng rng) {
  return sample_pairs(op, kind, supports, pairs_per_support, rng, true);
}

std::pair<double, double> warmup_rates(const DenseOperator& op) {
  return {1.0 - op.spectral_summary().condition_ratio, 0.0};
}

double theorem2_bound(const FidelityTerm& f, double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw Error(ErrorCode::BadDelta, "delta must be in (0, 1], got " + std::to_string(delta));
  }
  const double data = 1.0 - f.hessian_sigma_min() / f.hessian_sigma_max();
  return std::max(data, 1.0 - delta);
}

EmpiricalRate empirical_rate(const std::vector<int>& iterations, const std::vector<double>& distances, int first,
                             int last) {
  if (iterations.size() != distances.size()) {
    throw Error(ErrorCode::DimensionMismatch, "iteration and distance columns differ in length");
  }
  EmpiricalRate out;
  out.first = first;
  out.last = last;
  std::vector<double> t, logd;
  for (std::size_t i = 0; i < iterations.size(); ++i) {
    if (iterations[i] < first || iterations[i] > last) continue;
    if (distances[i] == 0.0) {
      out.outcome = RateOutcome::ZeroDistance;
      out.slope = -std::numeric_limits<double>::infinity();
      out.r2 = 1.0;
      out.points = static_cast<int>(t.size()) + 1;
      return out;
    }
    if (!(distances[i] > 0.0)) throw Error(ErrorCode::InsufficientData, "distances must be positive");
    t.push_back(iterations[i]);
    logd.push_back(std::log(distances[i]));
  }
  out.points = static_cast<int>(t.size());
  if (t.size() < 5) {
    throw Error(ErrorCode::InsufficientData, "need at least 5 points in the window, have " + std::to_string(t.size()));
  }
  const double n = static_cast<double>(t.size());
  double mt = 0.0, ml = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    mt += t[i];
    ml += logd[i];
  }
  mt /= n;
  ml /= n;
  double stt = 0.0, stl = 0.0, sll = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    stt += (t[i] - mt) * (t[i] - mt);
    stl += (t[i] - mt) * (logd[i] - ml);
    sll += (logd[i] - ml) * (logd[i] - ml);
  }
  out.slope = stl / stt;
  out.intercept = ml - out.slope * mt;
  double sse = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double e = logd[i] - (out.intercept + out.slope * t[i]);
    sse += e * e;
  }
  out.r2 = sll > 0.0 ? std::clamp(1.0 - sse / sll, 0.0, 1.0) : 1.0;
  return out;
}

EmpiricalRate empirical_rate(const IterateTrace& trace, RateReference reference, int first, int last) {
  const auto& d = reference == RateReference::Gt ? trace.distance_gt : trace.distance_star;
  if (d.empty()) throw Error(ErrorCode::InsufficientData, "trace has no distances for this reference");
  return empirical_rate(trace.iteration, d, first, last);
}

}  // namespace bpinv
