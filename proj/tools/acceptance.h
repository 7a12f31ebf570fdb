#ifndef FASTJL_TOOLS_ACCEPTANCE_H_
#define FASTJL_TOOLS_ACCEPTANCE_H_

#include <string>
#include <vector>

#include "fastjl/reports.h"

namespace fastjl::acceptance {

struct Outcome {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;  // measured values next to their bounds
  Json data;
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

constexpr int kCriteria = 12;

std::string criterion_name(int id);
// Runs criterion `id` (1..12) with its pinned parameters and tolerances.
Outcome run(int id, int workers = 1);
// "PASS [07] block-lemmas (12.3 s): ..."
std::string format_line(const Outcome& o);

}  // namespace fastjl::acceptance

#endif  // FASTJL_TOOLS_ACCEPTANCE_H_
