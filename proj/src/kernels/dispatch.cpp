#include <atomic>
#include <cstdlib>
#include <string>

#include "bpinv/error.hpp"
#include "kernels_impl.hpp"

namespace bpinv::kernels {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* initial_table() noexcept {
  const bool avx2 = available(Backend::Avx2);
  if (const char* env = std::getenv("BP_INVLAB_SIMD")) {
    const std::string want(env);
    if (want == "scalar") return &detail::scalar_table();
    if (want == "avx2" && avx2) return detail::avx2_table();
  }
  return avx2 ? detail::avx2_table() : &detail::scalar_table();
}

std::atomic<const KernelTable*>& current() noexcept {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

void check_same_size(std::size_t a, std::size_t b) {
  if (a != b) {
    throw Error(ErrorCode::DimensionMismatch,
                "kernel operands have lengths " + std::to_string(a) + " and " + std::to_string(b));
  }
}

}  // namespace

std::string_view to_string(Backend backend) noexcept {
  switch (backend) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
  }
  return "unknown";
}

bool available(Backend backend) noexcept {
  switch (backend) {
    case Backend::Scalar: return true;
    case Backend::Avx2: return detail::avx2_table() != nullptr && cpu_has_avx2();
  }
  return false;
}

const KernelTable& table(Backend backend) {
  if (!available(backend)) {
    throw Error(ErrorCode::InvalidArgument, std::string("kernel backend not available: ") +
                                                std::string(to_string(backend)));
  }
  return backend == Backend::Avx2 ? *detail::avx2_table() : detail::scalar_table();
}

Backend active_backend() noexcept { return current().load(std::memory_order_acquire)->backend; }

void set_active_backend(Backend backend) { current().store(&table(backend), std::memory_order_release); }

const KernelTable& active() noexcept { return *current().load(std::memory_order_acquire); }

double dot(std::span<const double> a, std::span<const double> b) {
  check_same_size(a.size(), b.size());
  return active().dot(a.data(), b.data(), a.size());
}

double asum(std::span<const double> x) { return active().asum(x.data(), x.size()); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  check_same_size(x.size(), y.size());
  active().axpy(alpha, x.data(), y.data(), x.size());
}

void soft_threshold(std::span<const double> z, double theta, std::span<double> out) {
  check_same_size(z.size(), out.size());
  active().soft_threshold(z.data(), theta, out.data(), z.size());
}

}  // namespace bpinv::kernels
