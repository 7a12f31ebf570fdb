// Runs one acceptance criterion (--criterion N) or all of them and prints a
// PASS/FAIL line per criterion. Exit status is non-zero if any failed.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "acceptance.h"

int main(int argc, char** argv) {
  using namespace fastjl::acceptance;
  std::vector<int> ids;
  int workers = 1;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      ids.push_back(std::atoi(argv[++i]));
    } else if (arg == "--workers" && i + 1 < argc) {
      workers = std::atoi(argv[++i]);
    } else {
      std::cerr << "usage: acceptance_test [--criterion N]... [--workers W]\n";
      return 2;
    }
  }
  if (ids.empty())
    for (int id = 1; id <= kCriteria; ++id) ids.push_back(id);
  bool ok = true;
  for (int id : ids) {
    if (id < 1 || id > kCriteria) {
      std::cerr << "criterion " << id << " does not exist\n";
      return 2;
    }
    const Outcome o = run(id, workers);
    std::cout << format_line(o) << std::endl;
    ok = ok && o.passed;
  }
  return ok ? 0 : 1;
}
