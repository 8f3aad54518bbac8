#pragma once

// Dense double-precision inner loops used by every solver iteration.
//
// Each kernel has a portable scalar reference implementation and, on x86-64,
// an AVX2+FMA variant. The variant is picked once at startup from the CPU
// features (override with BP_INVLAB_SIMD=scalar|avx2) and can be switched at
// runtime for equivalence testing. Reductions in the SIMD path use a
// different summation order, so results agree with the scalar path to
// round-off, not bitwise; elementwise kernels agree bitwise.

#include <cstddef>
#include <span>
#include <string_view>

namespace bpinv::kernels {

enum class Backend { Scalar, Avx2 };

std::string_view to_string(Backend backend) noexcept;

struct KernelTable {
  Backend backend;
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*asum)(const double* x, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y = M x, M row-major rows x cols
  void (*gemv)(const double* m, std::size_t rows, std::size_t cols, const double* x, double* y);
  // y = M^T x, M row-major rows x cols
  void (*gemv_t)(const double* m, std::size_t rows, std::size_t cols, const double* x, double* y);
  // out_i = sign(z_i) max(|z_i| - theta, 0); out may alias z
  void (*soft_threshold)(const double* z, double theta, double* out, std::size_t n);
};

bool available(Backend backend) noexcept;
// Throws bpinv::Error(InvalidArgument) if the backend is not available here.
const KernelTable& table(Backend backend);

Backend active_backend() noexcept;
void set_active_backend(Backend backend);
const KernelTable& active() noexcept;

// RAII switch used by tests and benchmarks.
class ScopedBackend {
 public:
  explicit ScopedBackend(Backend backend) : previous_(active_backend()) { set_active_backend(backend); }
  ~ScopedBackend() { set_active_backend(previous_); }
  ScopedBackend(const ScopedBackend&) = delete;
  ScopedBackend& operator=(const ScopedBackend&) = delete;

 private:
  Backend previous_;
};

// Span front-ends over the active table.
double dot(std::span<const double> a, std::span<const double> b);
double asum(std::span<const double> x);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void soft_threshold(std::span<const double> z, double theta, std::span<double> out);

}  // namespace bpinv::kernels
