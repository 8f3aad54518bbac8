#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bpinv::bench {

struct ResultRow {
  std::string experiment;
  std::uint64_t seed = 0;
  std::string image;
  std::string fidelity;
  std::string solver;
  double param = 0.0;
  int iteration = 0;
  double psnr_gt = 0.0;
  double psnr_star = 0.0;
  double objective = 0.0;
  double l1_norm = 0.0;
  double distance_to_star = 0.0;
};

struct CellFailure {
  std::string cell;
  std::string message;
};

struct ResultTable {
  std::vector<ResultRow> rows;
  std::vector<CellFailure> failures;

  // Orders rows by (experiment, seed, image, fidelity, param, iteration, solver).
  void sort();
};

inline const char* const kCsvHeader =
    "experiment,seed,image,fidelity,solver,param,iteration,psnr_gt,psnr_star,objective,l1_norm,distance_to_star";

// Header plus one line per row, in the table's current order; numbers use
// %.17g and infinities print as inf / -inf.
std::string to_csv(const ResultTable& table);
// Sorts a copy and writes it. Throws IoError.
void emit_csv(const ResultTable& table, const std::string& path);

}  // namespace bpinv::bench
