#pragma once

#include <optional>

#include "bpinv/bench/config.hpp"
#include "bpinv/bench/results.hpp"
#include "bpinv/linops.hpp"
#include "bpinv/rng.hpp"
#include "bpinv/solvers.hpp"

namespace bpinv::bench {

// k nonzeros on a uniform support, standard-normal amplitudes, scaled so the
// largest magnitude equals `peak`.
Vector synthetic_sparse(Index n, Index k, SeededRng& rng, double peak = 255.0);

// Measurement setup shared by the compressed-sensing protocols.
struct CsProblem {
  DenseOperator op;
  Vector x_gt;  // in the domain the operator acts on (Haar coefficients when composed)
  Vector y;
};

// Gaussian m x n sensing of a synthetic k-sparse signal, SNR measured
// against ||A x_gt||. Draws use substreams of `rng` so the signal does not
// depend on m.
CsProblem make_sparse_cs_problem(Index n, Index m, Index k, double snr_db, const SeededRng& rng);

struct ThresholdCrossing {
  double threshold = 0.0;
  // First recorded iteration with psnr_gt >= threshold; nullopt if never.
  std::optional<int> first;
  std::optional<int> second;
};

// Threshold = (lower of the two final psnr_gt values) - margin_db.
ThresholdCrossing iterations_to_threshold(const IterateTrace& first, const IterateTrace& second,
                                          double margin_db = 1.0);

struct RunOptions {
  // Worker cap; 0 reads BP_INVLAB_THREADS, falling back to the core count.
  unsigned threads = 0;
};

unsigned resolve_threads(unsigned requested);

// Runs every cell of the protocol. A cell that throws is recorded in
// `failures` and contributes no rows; the rest of the run continues.
ResultTable run_experiment(const ExperimentConfig& cfg, const RunOptions& options = {});

}  // namespace bpinv::bench
