#ifndef FASTJL_BENCH_H_
#define FASTJL_BENCH_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fastjl/transforms.h"

namespace fastjl {

struct BenchReport {
  TransformKind kind = TransformKind::kNewRademacher;
  std::size_t r = 0;
  std::uint64_t seed = 0;
  int reps = 0;
  int warmups = 0;
  std::vector<std::size_t> sizes;  // ascending
  std::vector<double> median_ns;   // per apply, one entry per size
  std::vector<double> build_ns;    // construction, timed separately
  std::vector<double> doubling_ratios;  // median_ns[i + 1] / median_ns[i]
};

// Times apply_into on one fixed transform and input per size. Each rep is a
// batch of calls long enough to dwarf the clock resolution; the reported
// figure is the median per-call time over `reps` batches after `warmups`.
BenchReport run_bench(TransformKind kind, std::vector<std::size_t> sizes, std::size_t r,
                      std::uint64_t seed, int reps = 30, int warmups = 5,
                      const TransformParams& params = {});

// Powers of two from lo to hi inclusive; both ends must be powers of two.
std::vector<std::size_t> power_of_two_range(std::size_t lo, std::size_t hi);

}  // namespace fastjl

#endif  // FASTJL_BENCH_H_
