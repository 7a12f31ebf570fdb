#include "fastjl/rip.h"

#include <algorithm>
#include <cmath>

#include "fastjl/errors.h"
#include "fastjl/parallel.h"

namespace fastjl {

double binomial_coefficient(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(c);
}

RipResult rip_constant(const Matrix& m, std::size_t k) {
  const std::size_t n = m.cols();
  if (k == 0 || k > n) throw RangeError("rip_constant: k must lie in [1, n]");
  const double supports = binomial_coefficient(n, k);
  if (supports > 1e6) {
    throw ResourceError("rip_constant: C(" + std::to_string(n) + ", " + std::to_string(k) +
                        ") supports exceeds the 10^6 limit");
  }
  const Matrix gram = multiply_transposed(m, m);
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  RipResult best{-1.0, {}};
  Matrix sub(k, k);
  for (;;) {
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) sub(a, b) = gram(idx[a], idx[b]);
    const Vector ev = symmetric_eigenvalues(sub);
    const double d = std::max(ev.back() - 1.0, 1.0 - ev.front());
    if (d > best.delta) best = {d, idx};
    // next subset in lexicographic order
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return best;
}

RipSurvey rip_survey(TransformKind kind, std::size_t n, std::size_t r, std::size_t k,
                     std::uint64_t seeds, std::uint64_t seed,
                     const TransformParams& params, int workers) {
  if (seeds == 0) throw RangeError("rip_survey: seeds must be positive");
  if (binomial_coefficient(n, k) > 1e6) {
    throw ResourceError("rip_survey: too many supports for exhaustive search");
  }
  RipSurvey s;
  s.kind = kind;
  s.n = n;
  s.r = r;
  s.k = k;
  s.seed = seed;
  s.deltas.resize(seeds);
  parallel_for(seeds, workers, [&](std::size_t i) {
    BitSource src = derive_stream(seed, i);
    s.deltas[i] = rip_constant(realize_dense(build(kind, n, r, src, params)), k).delta;
  });
  std::vector<double> sorted = s.deltas;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t m = sorted.size();
  s.median = m % 2 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
  s.p90 = sorted[std::min(m - 1, static_cast<std::size_t>(std::ceil(0.9 * m)) - 1)];
  s.max = sorted.back();
  return s;
}

}  // namespace fastjl
