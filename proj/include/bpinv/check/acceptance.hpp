#pragma once

// Acceptance suite: one pass/fail verdict per criterion. Every tolerance,
// size and seed is fixed in the implementation.

#include <functional>
#include <string>
#include <vector>

namespace bpinv::check {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct Criterion {
  int id;
  std::string name;
  std::function<CriterionResult()> run;
};

const std::vector<Criterion>& criteria();

// A criterion that throws is reported as failed with the error as detail.
CriterionResult run_criterion(const Criterion& c);

// Runs the selected ids (all when empty), calling `on_result` after each.
std::vector<CriterionResult> run_all(const std::vector<int>& ids = {},
                                     const std::function<void(const CriterionResult&)>& on_result = {});

// "PASS [ 1] name: detail (0.12 s)"
std::string format_line(const CriterionResult& r);

}  // namespace bpinv::check
