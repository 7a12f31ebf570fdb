#ifndef FASTJL_RIP_H_
#define FASTJL_RIP_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fastjl/linalg.h"
#include "fastjl/transforms.h"

namespace fastjl {

struct RipResult {
  double delta = 0.0;
  // Columns of the first support (in lexicographic order) attaining delta.
  std::vector<std::size_t> worst_support;
};

// delta_k = max over size-k column subsets T of ||M_T^T M_T - I||_2. Refuses
// more than 10^6 supports.
RipResult rip_constant(const Matrix& m, std::size_t k);

struct RipSurvey {
  TransformKind kind = TransformKind::kNewRademacher;
  std::size_t n = 0;
  std::size_t r = 0;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::vector<double> deltas;  // one per seed, in seed order
  double median = 0.0;
  double p90 = 0.0;
  double max = 0.0;
};

// Realizes one transform per derive_stream(seed, s), s < seeds, and reports
// the spread of delta_k.
RipSurvey rip_survey(TransformKind kind, std::size_t n, std::size_t r, std::size_t k,
                     std::uint64_t seeds, std::uint64_t seed,
                     const TransformParams& params = {}, int workers = 1);

double binomial_coefficient(std::size_t n, std::size_t k);

}  // namespace fastjl

#endif  // FASTJL_RIP_H_
