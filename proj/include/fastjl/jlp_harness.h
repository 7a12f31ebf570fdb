#ifndef FASTJL_JLP_HARNESS_H_
#define FASTJL_JLP_HARNESS_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fastjl/linalg.h"
#include "fastjl/randomness.h"
#include "fastjl/transforms.h"

namespace fastjl {

enum class VectorFamily { kBasis, kConstant, kRandomUnit, kSpike };

std::string_view to_string(VectorFamily family);
std::optional<VectorFamily> parse_vector_family(std::string_view name);

// Unit vectors used by the experiments. Basis is e_1; Constant is
// 1/sqrt(n) everywhere; RandomUnit is a normalized Gaussian draw from `src`;
// Spike puts n^{-1/4} on the first floor(sqrt(n)) coordinates and
// renormalizes. Only RandomUnit consumes randomness.
Vector make_family_vector(VectorFamily family, std::size_t n, BitSource& src);

struct WilsonInterval {
  double lo = 0.0;
  double hi = 1.0;

  friend bool operator==(const WilsonInterval&, const WilsonInterval&) = default;
};
// 95% Wilson score interval.
WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials);

struct JlpReport {
  TransformKind kind = TransformKind::kNewGaussian;
  std::size_t n = 0;
  std::size_t r = 0;
  double epsilon = 0.0;
  VectorFamily family = VectorFamily::kRandomUnit;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::uint64_t failures = 0;
  double failure_rate = 0.0;
  WilsonInterval failure_ci;
  double mean_squared_norm = 0.0;
  double distortion_p50 = 0.0;
  double distortion_p90 = 0.0;
  double distortion_p99 = 0.0;
  double distortion_max = 0.0;
  double mean_bits_per_trial = 0.0;
  double mean_gaussians_per_trial = 0.0;
  // Pr[|chi^2_r / r - 1| > epsilon]; set for DenseGaussian only.
  std::optional<double> exact_failure_probability;

  friend bool operator==(const JlpReport&, const JlpReport&) = default;
};

// Monte-Carlo estimate of Pr[| ||Phi x||^2 - 1 | > epsilon]. Trial i builds
// its transform and vector from derive_stream(seed, i), so the report does
// not depend on `workers`.
JlpReport jlp_failure_rate(TransformKind kind, std::size_t n, std::size_t r,
                           double epsilon, std::uint64_t trials,
                           VectorFamily family, std::uint64_t seed,
                           const TransformParams& params = {}, int workers = 1);

// Regularized lower incomplete gamma P(a, x).
double regularized_gamma_p(double a, double x);
// Pr[|chi^2_k / k - 1| > epsilon].
double chi_square_two_sided_tail(int dof, double epsilon);

// Empirical tail of a scalar statistic on a threshold grid, with an
// optional analytic overlay. `lower_tail` curves count statistic <= t,
// all others count statistic > t.
struct TailCurve {
  std::string statistic;
  bool lower_tail = false;
  std::uint64_t trials = 0;
  std::vector<double> thresholds;
  std::vector<double> exceedance;
  std::vector<double> ci_lo;
  std::vector<double> ci_hi;
  std::vector<double> bound;
  double mean = 0.0;
  double variance = 0.0;
  double max = 0.0;
  std::map<std::string, double> summary;
};

// ||W D x||_inf over fresh D per trial. The summary holds the exceedance at
// the printed threshold sqrt(ln(n/delta)/n) and at the Hoeffding-constant
// threshold sqrt(2 ln(2n/delta)/n).
TailCurve infinity_norm_check(std::size_t n, double delta, std::uint64_t trials,
                              VectorFamily family, std::uint64_t seed,
                              int workers = 1);

// max_j | ||z_j||^2 - 1 | with z_j = sqrt(r) * block_j(Pi W D x). Overlay is
// 2r exp(-tau^2 t / ln(n/delta)).
TailCurve block_norm_check(std::size_t n, std::size_t r, double epsilon,
                           std::uint64_t trials, std::uint64_t seed,
                           double delta = 0.05,
                           VectorFamily family = VectorFamily::kRandomUnit,
                           int workers = 1);

// min_i sqrt(r) ||y^(i)||, lower tail. Overlay is
// r exp(-(1-tau)^2 n / (ln n + n^{1/3})).
TailCurve block_nonzero_check(std::size_t n, std::size_t r, double theta,
                              std::uint64_t trials, std::uint64_t seed,
                              VectorFamily family = VectorFamily::kRandomUnit,
                              int workers = 1);

enum class QuadraticDistribution { kGaussian, kRademacher };

struct HansonWrightConstants {
  double c1 = 0.0;
  double c2 = 0.0;
};

// Largest common constant c = c1 = c2 for which the overlay dominates the
// exact two-sided chi^2_dim tail on the given grid of eta values.
HansonWrightConstants fit_hanson_wright_constants(int dim,
                                                  const std::vector<double>& etas);

// |g^T A g - Tr A| for symmetric A. The overlay uses constants fitted by
// fit_hanson_wright_constants at dim = rows(A).
TailCurve hanson_wright_check(const Matrix& a, std::uint64_t trials,
                              QuadraticDistribution dist, std::uint64_t seed,
                              int workers = 1);

double hoeffding_bound(double epsilon, double n, double range);
double serfling_bound(double epsilon, double n, double population, double range);
double hw_bound(double eta, double frobenius, double op_norm, double c1, double c2);

}  // namespace fastjl

#endif  // FASTJL_JLP_HARNESS_H_
