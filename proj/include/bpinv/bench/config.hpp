#pragma once

// Experiment configuration files: one `key = value` per line, `#` starts a
// comment. Values are numbers (`inf` allowed), quoted strings, booleans or
// flat arrays `[a, b, c]`. The full key list is in configs/README.md.

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "bpinv/fidelity.hpp"
#include "bpinv/types.hpp"

namespace bpinv::bench {

enum class ExperimentKind { CsPgdSweepR, CsPgdRatios, CsFistaSweepBeta, CsControlled, RateCurves, IstaFamily, SrPgd };

std::string_view to_string(ExperimentKind kind) noexcept;

enum class SignalKind { Sparse, Image };

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::CsPgdSweepR;
  std::string name;  // experiment column in the CSV; defaults to the kind name

  // Geometry. Image signals fix n = side^2 and always use the Haar domain.
  Index n = 1024;
  Index side = 0;
  bool haar = false;
  Index m = 512;
  std::vector<double> m_ratios;  // cs_pgd_ratios
  std::vector<Index> ms;         // rate_curves
  std::vector<Index> ks;         // rate_curves

  // Super-resolution (sr_pgd).
  Index scale = 3;
  Index kernel_size = 7;
  double kernel_sigma = 1.6;

  SignalKind signal = SignalKind::Sparse;
  Index k = 50;
  std::vector<std::string> images;  // resolved against the config directory; each must have side^2 = n
  std::vector<std::string> paper_images;  // replaces `images` under --paper-scale
  double snr_db = 20.0;

  std::vector<double> r_scales{1.0};
  std::vector<double> betas{1.0};
  std::vector<FidelityKind> fidelities{FidelityKind::LS, FidelityKind::BP};

  int iters = 1000;
  int star_iters = 3000;
  int record_every = 1;
  int num_supports = 500;
  std::vector<std::uint64_t> seeds{1};

  Index paper_n = 16384;
  std::string output;
};

// Parses and validates; throws ConfigError with the offending line.
ExperimentConfig parse_config(const std::string& text, const std::string& base_dir = ".");
ExperimentConfig load_config(const std::string& path);

// Raises n (and m, ms, k, side) by the factor paper_n / n, keeping ratios.
// Image signals switch to paper_images.
void apply_paper_scale(ExperimentConfig& cfg);

// Checks cross-field constraints and that every image file exists.
void validate(const ExperimentConfig& cfg);

}  // namespace bpinv::bench
