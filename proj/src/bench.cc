#include "fastjl/bench.h"

#include <algorithm>
#include <chrono>

#include "fastjl/errors.h"
#include "fastjl/randomness.h"

namespace fastjl {

namespace {

using Clock = std::chrono::steady_clock;

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double elapsed_ns(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double, std::nano>(b - a).count();
}

}  // namespace

std::vector<std::size_t> power_of_two_range(std::size_t lo, std::size_t hi) {
  if (!is_power_of_two(lo) || !is_power_of_two(hi) || lo > hi) {
    throw RangeError("size range ends must be powers of two with lo <= hi");
  }
  std::vector<std::size_t> out;
  for (std::size_t n = lo; n <= hi; n *= 2) out.push_back(n);
  return out;
}

BenchReport run_bench(TransformKind kind, std::vector<std::size_t> sizes, std::size_t r,
                      std::uint64_t seed, int reps, int warmups,
                      const TransformParams& params) {
  if (sizes.empty()) throw RangeError("bench: no sizes");
  if (reps < 1 || warmups < 0) throw RangeError("bench: reps must be >= 1, warmups >= 0");
  std::sort(sizes.begin(), sizes.end());
  BenchReport rep;
  rep.kind = kind;
  rep.r = r;
  rep.seed = seed;
  rep.reps = reps;
  rep.warmups = warmups;
  rep.sizes = sizes;

  volatile double sink = 0.0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const std::size_t n = sizes[i];
    std::vector<double> builds;
    Transform t;
    for (int b = 0; b < 5; ++b) {
      BitSource src = derive_stream(seed, i);
      const auto t0 = Clock::now();
      t = build(kind, n, r, src, params);
      builds.push_back(elapsed_ns(t0, Clock::now()));
    }
    BitSource xs = derive_stream(seed ^ 0x5eedULL, i);
    Vector x(n);
    for (double& v : x) v = xs.draw_gaussian();
    Vector out(r);
    std::vector<double> scratch;

    // Batch size: enough calls for about 200 microseconds.
    std::size_t batch = 1;
    for (;;) {
      const auto t0 = Clock::now();
      for (std::size_t k = 0; k < batch; ++k) apply_into(t, x, out, scratch);
      if (elapsed_ns(t0, Clock::now()) > 2e5 || batch >= (1u << 20)) break;
      batch *= 2;
    }
    for (int w = 0; w < warmups; ++w)
      for (std::size_t k = 0; k < batch; ++k) apply_into(t, x, out, scratch);
    std::vector<double> per_call;
    for (int rr = 0; rr < reps; ++rr) {
      const auto t0 = Clock::now();
      for (std::size_t k = 0; k < batch; ++k) apply_into(t, x, out, scratch);
      per_call.push_back(elapsed_ns(t0, Clock::now()) / static_cast<double>(batch));
      sink = sink + out[0];
    }
    rep.median_ns.push_back(median(per_call));
    rep.build_ns.push_back(median(builds));
  }
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    rep.doubling_ratios.push_back(rep.median_ns[i] / rep.median_ns[i - 1]);
  }
  return rep;
}

}  // namespace fastjl
