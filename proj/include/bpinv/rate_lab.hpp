#pragma once

// Convergence-rate estimates: restricted eigenvalue bounds over sampled
// k-sparse supports, sampled rho/xi, oracle-prior rates, the Tikhonov
// rate bound, and log-linear fits of solver traces.

#include <cstdint>
#include <utility>
#include <vector>

#include "bpinv/fidelity.hpp"
#include "bpinv/linops.hpp"
#include "bpinv/rng.hpp"
#include "bpinv/solvers.hpp"

namespace bpinv {

using Support = std::vector<Index>;

constexpr int kDefaultNumSupports = 500;

// Uniform k-subsets of [0, n), drawn without replacement within a subset.
std::vector<Support> sample_supports(Index n, Index k, int num_supports, SeededRng& rng);

struct RateEstimate {
  double p_ls_hat = 0.0;  // 1 - min_S sigma_min(A_S^T A_S) / sigma_max(A A^T)
  double p_bp_hat = 0.0;  // 1 - min_S sigma_min(A_S^T (A A^T)^{-1} A_S)
  double ratio = 1.0;     // p_bp_hat / p_ls_hat (1 when both are 0)
  Index k = 0;
  int num_supports = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  // Per-support restricted terms, in sampling order:
  // ls_terms[i] = sigma_min(A_S^T A_S) / sigma_max(A A^T),
  // bp_terms[i] = sigma_min(A_S^T (A A^T)^{-1} A_S).
  std::vector<double> ls_terms;
  std::vector<double> bp_terms;
};

RateEstimate estimate_restricted_rates(const DenseOperator& op, Index k, int num_supports, SeededRng rng);
// Explicit support list; seed/stream are carried into the result untouched.
RateEstimate estimate_restricted_rates(const DenseOperator& op, const std::vector<Support>& supports,
                                       std::uint64_t seed = 0, std::uint64_t stream = 0);

// u^T (I - mu W A) v restricted to u, v supported on `support`, mu the
// default step for `kind`.
double rho_pair_value(const DenseOperator& op, FidelityKind kind, const Support& support, const Vector& u,
                      const Vector& v);

struct SampledSup {
  double value = 0.0;
  std::vector<double> per_support;  // max over the pairs drawn on each support
};

// Sampled lower bound of rho over the k-sparse cone: unit u, v drawn on
// the same support, `pairs_per_support` pairs for each support.
SampledSup monte_carlo_rho(const DenseOperator& op, FidelityKind kind, const std::vector<Support>& supports,
                           int pairs_per_support, SeededRng rng);
double monte_carlo_rho(const DenseOperator& op, FidelityKind kind, Index k, int num_pairs, SeededRng rng);

// Same sampler with v drawn in the unit ball instead of on the sphere.
SampledSup monte_carlo_xi(const DenseOperator& op, FidelityKind kind, const std::vector<Support>& supports,
                          int pairs_per_support, SeededRng rng);

// PGD rates with the oracle prior: LS 1 - sigma_min/sigma_max, BP 0.
std::pair<double, double> warmup_rates(const DenseOperator& op);

// LS: max{1 - sigma_min/sigma_max, 1 - delta}; BP: 1 - delta. delta in (0, 1].
double theorem2_bound(const FidelityTerm& f, double delta);

// 1 for convex priors, 2 otherwise.
constexpr int kappa_s(bool convex) { return convex ? 1 : 2; }

enum class RateReference { Gt, Star };

enum class RateOutcome { Fitted, ZeroDistance };

struct EmpiricalRate {
  RateOutcome outcome = RateOutcome::Fitted;
  double slope = 0.0;      // per-iteration decay of log distance; -inf on ZeroDistance
  double intercept = 0.0;
  double r2 = 1.0;
  int first = 0;  // window, inclusive iteration indices
  int last = 0;
  int points = 0;
};

// Least-squares fit of log(distance) against iteration over recorded rows
// with first <= iteration <= last. Needs at least 5 rows.
EmpiricalRate empirical_rate(const std::vector<int>& iterations, const std::vector<double>& distances, int first,
                             int last);
EmpiricalRate empirical_rate(const IterateTrace& trace, RateReference reference, int first, int last);

}  // namespace bpinv
