#include "bpinv/rng.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "bpinv/error.hpp"

namespace bpinv {
namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x62706976u};
  return std::mt19937_64(seq);
}

}  // namespace

SeededRng::SeededRng(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), engine_(make_engine(seed, stream)) {}

double SeededRng::normal() { return normal_(engine_); }

double SeededRng::uniform() { return std::generate_canonical<double, 53>(engine_); }

Index SeededRng::uniform_index(Index n) {
  if (n <= 0) throw Error(ErrorCode::InvalidArgument, "uniform_index needs n > 0");
  std::uniform_int_distribution<Index> dist(0, n - 1);
  return dist(engine_);
}

Vector SeededRng::normal_vector(Index n, double stddev) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = stddev * normal();
  return v;
}

Matrix SeededRng::normal_matrix(Index rows, Index cols, double stddev) {
  // Filled row by row so the draw order does not depend on storage order.
  Matrix a(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) a(i, j) = stddev * normal();
  return a;
}

std::vector<Index> SeededRng::sample_without_replacement(Index n, Index k) {
  if (k < 0 || k > n) {
    throw Error(ErrorCode::InvalidArgument,
                "cannot sample " + std::to_string(k) + " of " + std::to_string(n) + " indices");
  }
  std::vector<Index> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), Index{0});
  // Partial Fisher-Yates.
  for (Index i = 0; i < k; ++i) {
    std::uniform_int_distribution<Index> dist(i, n - 1);
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(dist(engine_))]);
  }
  pool.resize(static_cast<std::size_t>(k));
  std::sort(pool.begin(), pool.end());
  return pool;
}

SeededRng SeededRng::substream(std::uint64_t id) const {
  // splitmix-style mixing keeps derived keys away from small user streams.
  std::uint64_t z = stream_ + 0x9E3779B97F4A7C15ull * (id + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return SeededRng(seed_, z ^ (z >> 31));
}

}  // namespace bpinv
