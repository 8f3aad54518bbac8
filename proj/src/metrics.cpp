#include "bpinv/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "bpinv/error.hpp"

namespace bpinv {

double psnr(const Vector& x_hat, const Vector& x_ref, double peak) {
  if (x_hat.size() != x_ref.size()) {
    throw Error(ErrorCode::DimensionMismatch, "psnr inputs have lengths " + std::to_string(x_hat.size()) + " and " +
                                                  std::to_string(x_ref.size()));
  }
  if (!(peak > 0.0)) throw Error(ErrorCode::InvalidArgument, "psnr peak must be positive");
  if (x_hat.size() == 0) throw Error(ErrorCode::BadLength, "psnr of empty vectors");
  const double mse = (x_hat - x_ref).squaredNorm() / static_cast<double>(x_hat.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / mse);
}

Vector add_noise_for_snr(const Vector& clean, NoiseSpec spec) {
  if (std::isinf(spec.snr_db) && spec.snr_db > 0) return clean;
  if (!std::isfinite(spec.snr_db)) throw Error(ErrorCode::InvalidArgument, "snr_db must be finite or +inf");
  const double signal = clean.squaredNorm();
  if (!(signal > 0.0)) throw Error(ErrorCode::ZeroSignal, "cannot set a finite SNR on a zero signal");
  Vector e = spec.rng.normal_vector(clean.size());
  const double drawn = e.squaredNorm();
  if (!(drawn > 0.0)) throw Error(ErrorCode::ZeroSignal, "noise draw is identically zero");
  const double target = signal / std::pow(10.0, spec.snr_db / 10.0);
  e *= std::sqrt(target / drawn);
  return clean + e;
}

Vector sparsify_top_k(const Vector& coeffs, Index k) {
  const Index n = coeffs.size();
  if (k < 1 || k > n) {
    throw Error(ErrorCode::BadK, "k must be in [1, " + std::to_string(n) + "], got " + std::to_string(k));
  }
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return std::abs(coeffs(a)) > std::abs(coeffs(b)); });
  Vector out = Vector::Zero(n);
  for (Index i = 0; i < k; ++i) {
    const Index j = order[static_cast<std::size_t>(i)];
    out(j) = coeffs(j);
  }
  return out;
}

}  // namespace bpinv
