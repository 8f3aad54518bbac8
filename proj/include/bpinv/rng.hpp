#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "bpinv/types.hpp"

namespace bpinv {

// Deterministic random source keyed by (seed, stream). Two instances built
// from the same pair produce identical draws on the same toolchain.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  double normal();
  double uniform();  // [0, 1)
  Index uniform_index(Index n);  // [0, n)

  Vector normal_vector(Index n, double stddev = 1.0);
  Matrix normal_matrix(Index rows, Index cols, double stddev = 1.0);

  // k distinct indices from [0, n), sorted ascending.
  std::vector<Index> sample_without_replacement(Index n, Index k);

  // Independent generator derived from this one's key; does not advance it.
  SeededRng substream(std::uint64_t id) const;

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace bpinv
