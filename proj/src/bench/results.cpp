#include "bpinv/bench/results.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <tuple>

#include "bpinv/error.hpp"

namespace bpinv::bench {
namespace {

void put_number(std::string& out, double v) {
  if (std::isinf(v)) {
    out += v > 0 ? "inf" : "-inf";
    return;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

// Quotes fields that would break the column layout.
void put_text(std::string& out, const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) {
    out += s;
    return;
  }
  out += '"';
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
}

}  // namespace

void ResultTable::sort() {
  std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    return std::tie(a.experiment, a.seed, a.image, a.fidelity, a.param, a.iteration, a.solver) <
           std::tie(b.experiment, b.seed, b.image, b.fidelity, b.param, b.iteration, b.solver);
  });
}

std::string to_csv(const ResultTable& table) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const ResultRow& r : table.rows) {
    put_text(out, r.experiment);
    out += ',' + std::to_string(r.seed) + ',';
    put_text(out, r.image);
    out += ',';
    put_text(out, r.fidelity);
    out += ',';
    put_text(out, r.solver);
    out += ',';
    put_number(out, r.param);
    out += ',' + std::to_string(r.iteration) + ',';
    put_number(out, r.psnr_gt);
    out += ',';
    put_number(out, r.psnr_star);
    out += ',';
    put_number(out, r.objective);
    out += ',';
    put_number(out, r.l1_norm);
    out += ',';
    put_number(out, r.distance_to_star);
    out += '\n';
  }
  return out;
}

void emit_csv(const ResultTable& table, const std::string& path) {
  ResultTable sorted = table;
  sorted.sort();
  const std::string text = to_csv(sorted);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
  out << text;
  out.close();
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

}  // namespace bpinv::bench
