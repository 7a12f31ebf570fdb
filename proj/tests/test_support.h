#ifndef FASTJL_TESTS_TEST_SUPPORT_H_
#define FASTJL_TESTS_TEST_SUPPORT_H_

#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include "fastjl/linalg.h"

namespace fastjl::testing {

// Generators for property tests. Deliberately driven by the standard library
// engine so the library's own BitSource is not its own oracle.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::size_t index(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }
  std::size_t pow2(int lo_exp, int hi_exp) {
    return std::size_t{1} << index(static_cast<std::size_t>(lo_exp), static_cast<std::size_t>(hi_exp));
  }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }
  bool coin() { return index(0, 1) == 1; }

  Vector vector(std::size_t n) {
    Vector v(n);
    for (double& x : v) x = normal();
    return v;
  }
  Vector unit_vector(std::size_t n) {
    Vector v = vector(n);
    const double s = norm2(v);
    for (double& x : v) x /= s;
    return v;
  }
  Matrix matrix(std::size_t r, std::size_t c) {
    Matrix m(r, c);
    for (double& x : m.data()) x = normal();
    return m;
  }
  Matrix symmetric(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = normal();
    return m;
  }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

// Runs `body` on `cases` generated cases; failures name the case seed.
template <typename Body>
void for_all(int cases, std::uint64_t seed, Body body) {
  for (int c = 0; c < cases; ++c) {
    const std::uint64_t case_seed = seed * 1000003u + static_cast<std::uint64_t>(c);
    SCOPED_TRACE("property case seed " + std::to_string(case_seed));
    Gen g(case_seed);
    body(g);
    if (::testing::Test::HasFatalFailure()) return;
  }
}

// Dense Sylvester matrix with entries +-1/sqrt(n), built by recursion rather
// than the parity formula the library uses.
inline Matrix sylvester(std::size_t n) {
  Matrix h(1, 1, 1.0);
  for (std::size_t m = 1; m < n; m *= 2) {
    Matrix next(2 * m, 2 * m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        next(i, j) = h(i, j);
        next(i, j + m) = h(i, j);
        next(i + m, j) = h(i, j);
        next(i + m, j + m) = -h(i, j);
      }
    h = next;
  }
  const double s = 1.0 / std::sqrt(static_cast<double>(n));
  for (double& v : h.data()) v *= s;
  return h;
}

inline double max_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_diff(const Matrix& a, const Matrix& b) { return max_diff(a.data(), b.data()); }

}  // namespace fastjl::testing

#endif  // FASTJL_TESTS_TEST_SUPPORT_H_
