#pragma once

#include <limits>

#include "bpinv/rng.hpp"
#include "bpinv/types.hpp"

namespace bpinv {

// 10 log10(peak^2 / mean((x_hat - x_ref)^2)); +inf when the inputs are equal.
double psnr(const Vector& x_hat, const Vector& x_ref, double peak = 255.0);

struct NoiseSpec {
  double snr_db = std::numeric_limits<double>::infinity();
  SeededRng rng{0};
};

// clean + e with white Gaussian e rescaled after the draw so that
// 10 log10(||clean||^2 / ||e||^2) equals snr_db. Infinite SNR returns clean.
Vector add_noise_for_snr(const Vector& clean, NoiseSpec spec);

// Keeps the k largest-magnitude entries; among equal magnitudes the lower
// index wins.
Vector sparsify_top_k(const Vector& coeffs, Index k);

}  // namespace bpinv
