#include "fastjl/jlp_harness.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "fastjl/errors.h"
#include "fastjl/parallel.h"

namespace fastjl {

namespace {

constexpr double kZ95 = 1.959963984540054;

struct FamilyName {
  VectorFamily family;
  std::string_view name;
};

constexpr std::array<FamilyName, 4> kFamilyNames{{
    {VectorFamily::kBasis, "basis"},
    {VectorFamily::kConstant, "constant"},
    {VectorFamily::kRandomUnit, "random-unit"},
    {VectorFamily::kSpike, "spike"},
}};

double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return 0.0;
  const double rank = std::ceil(p * static_cast<double>(sorted.size()));
  const std::size_t idx = rank < 1 ? 0 : static_cast<std::size_t>(rank) - 1;
  return sorted[std::min(idx, sorted.size() - 1)];
}

TailCurve make_curve(std::string statistic, const std::vector<double>& samples,
                     std::vector<double> thresholds, bool lower_tail) {
  TailCurve c;
  c.statistic = std::move(statistic);
  c.lower_tail = lower_tail;
  c.trials = samples.size();
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
  c.thresholds = thresholds;
  double sum = 0.0, sum2 = 0.0;
  c.max = samples.empty() ? 0.0 : -std::numeric_limits<double>::infinity();
  for (double s : samples) {
    sum += s;
    c.max = std::max(c.max, s);
  }
  const double nd = static_cast<double>(samples.size());
  c.mean = samples.empty() ? 0.0 : sum / nd;
  for (double s : samples) sum2 += (s - c.mean) * (s - c.mean);
  c.variance = samples.size() > 1 ? sum2 / (nd - 1.0) : 0.0;
  for (double t : thresholds) {
    std::uint64_t hits = 0;
    for (double s : samples) hits += lower_tail ? (s <= t) : (s > t);
    const WilsonInterval ci = wilson_interval(hits, samples.size());
    c.exceedance.push_back(samples.empty() ? 0.0 : static_cast<double>(hits) / nd);
    c.ci_lo.push_back(ci.lo);
    c.ci_hi.push_back(ci.hi);
  }
  return c;
}

double exceedance_at(const std::vector<double>& samples, double t, bool lower_tail) {
  std::uint64_t hits = 0;
  for (double s : samples) hits += lower_tail ? (s <= t) : (s > t);
  return samples.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(samples.size());
}

void require_power_of_two(std::size_t n) {
  if (!is_power_of_two(n)) {
    throw ContractError("n = " + std::to_string(n) + " is not a power of two");
  }
}

void require_block_layout(std::size_t n, std::size_t r) {
  require_power_of_two(n);
  if (r == 0 || r > n || n % r != 0) {
    throw ContractError("r = " + std::to_string(r) + " does not divide n = " +
                        std::to_string(n));
  }
}

// Pi W D x for one trial, drawing x, then D, then Pi from `src`.
Vector permuted_rotation(std::size_t n, VectorFamily family, BitSource& src) {
  Vector x = make_family_vector(family, n, src);
  for (double& v : x)
    if (src.draw_sign() < 0) v = -v;
  fwht_inplace(x);
  const std::vector<std::size_t> pi = sample_permutation(n, src);
  Vector y(n);
  for (std::size_t k = 0; k < n; ++k) y[k] = x[pi[k]];
  return y;
}

}  // namespace

std::string_view to_string(VectorFamily family) {
  for (const auto& f : kFamilyNames)
    if (f.family == family) return f.name;
  return "unknown";
}

std::optional<VectorFamily> parse_vector_family(std::string_view name) {
  for (const auto& f : kFamilyNames)
    if (f.name == name) return f.family;
  return std::nullopt;
}

Vector make_family_vector(VectorFamily family, std::size_t n, BitSource& src) {
  if (n == 0) throw RangeError("make_family_vector: n must be positive");
  Vector x(n, 0.0);
  switch (family) {
    case VectorFamily::kBasis:
      x[0] = 1.0;
      return x;
    case VectorFamily::kConstant:
      std::fill(x.begin(), x.end(), 1.0 / std::sqrt(static_cast<double>(n)));
      return x;
    case VectorFamily::kRandomUnit:
      for (double& v : x) v = src.draw_gaussian();
      break;
    case VectorFamily::kSpike: {
      const std::size_t k = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
      const double h = std::pow(static_cast<double>(n), -0.25);
      for (std::size_t i = 0; i < k; ++i) x[i] = h;
      break;
    }
  }
  const double nrm = norm2(x);
  for (double& v : x) v /= nrm;
  return x;
}

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = kZ95 * kZ95;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = kZ95 * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

JlpReport jlp_failure_rate(TransformKind kind, std::size_t n, std::size_t r,
                           double epsilon, std::uint64_t trials, VectorFamily family,
                           std::uint64_t seed, const TransformParams& params,
                           int workers) {
  if (!(epsilon > 0)) throw RangeError("jlp_failure_rate: epsilon must be positive");
  if (trials == 0) throw RangeError("jlp_failure_rate: trials must be positive");
  {
    BitSource probe = derive_stream(seed, 0);
    build(kind, n, r, probe, params);  // surfaces precondition errors up front
  }
  std::vector<double> sq(trials), bits(trials), gauss(trials);
  parallel_for(trials, workers, [&](std::size_t i) {
    BitSource src = derive_stream(seed, i);
    const Transform t = build(kind, n, r, src, params);
    const Vector x = make_family_vector(family, n, src);
    sq[i] = squared_norm(apply_transform(t, x));
    bits[i] = static_cast<double>(t.bits_used());
    gauss[i] = static_cast<double>(t.gaussians_used());
  });

  JlpReport rep;
  rep.kind = kind;
  rep.n = n;
  rep.r = r;
  rep.epsilon = epsilon;
  rep.family = family;
  rep.trials = trials;
  rep.seed = seed;
  std::vector<double> dist(trials);
  double sum_sq = 0.0, sum_bits = 0.0, sum_gauss = 0.0;
  for (std::size_t i = 0; i < trials; ++i) {
    dist[i] = std::abs(sq[i] - 1.0);
    rep.failures += dist[i] > epsilon;
    sum_sq += sq[i];
    sum_bits += bits[i];
    sum_gauss += gauss[i];
  }
  const double td = static_cast<double>(trials);
  rep.failure_rate = static_cast<double>(rep.failures) / td;
  rep.failure_ci = wilson_interval(rep.failures, trials);
  rep.mean_squared_norm = sum_sq / td;
  rep.mean_bits_per_trial = sum_bits / td;
  rep.mean_gaussians_per_trial = sum_gauss / td;
  std::sort(dist.begin(), dist.end());
  rep.distortion_p50 = quantile_sorted(dist, 0.50);
  rep.distortion_p90 = quantile_sorted(dist, 0.90);
  rep.distortion_p99 = quantile_sorted(dist, 0.99);
  rep.distortion_max = dist.back();
  if (kind == TransformKind::kDenseGaussian) {
    rep.exact_failure_probability = chi_square_two_sided_tail(static_cast<int>(r), epsilon);
  }
  return rep;
}

double regularized_gamma_p(double a, double x) {
  if (!(a > 0) || x < 0) throw RangeError("regularized_gamma_p: need a > 0, x >= 0");
  if (x == 0) return 0.0;
  const double log_prefix = a * std::log(x) - x - std::lgamma(a);
  if (x < a + 1.0) {
    double term = 1.0 / a, sum = term;
    for (int k = 1; k < 10000; ++k) {
      term *= x / (a + k);
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-17) break;
    }
    return std::exp(log_prefix) * sum;
  }
  // Modified Lentz continued fraction for Q(a, x).
  const double tiny = 1e-300;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return 1.0 - std::exp(log_prefix) * h;
}

double chi_square_two_sided_tail(int dof, double epsilon) {
  if (dof < 1 || !(epsilon > 0)) throw RangeError("chi_square_two_sided_tail: bad arguments");
  const double k = dof;
  const double lower = epsilon < 1.0 ? regularized_gamma_p(k / 2.0, k * (1.0 - epsilon) / 2.0) : 0.0;
  const double upper = 1.0 - regularized_gamma_p(k / 2.0, k * (1.0 + epsilon) / 2.0);
  return lower + upper;
}

TailCurve infinity_norm_check(std::size_t n, double delta, std::uint64_t trials,
                              VectorFamily family, std::uint64_t seed, int workers) {
  require_power_of_two(n);
  if (!(delta > 0 && delta < 1)) throw RangeError("infinity_norm_check: delta in (0, 1)");
  std::vector<double> stat(trials);
  parallel_for(trials, workers, [&](std::size_t i) {
    BitSource src = derive_stream(seed, i);
    Vector x = make_family_vector(family, n, src);
    for (double& v : x)
      if (src.draw_sign() < 0) v = -v;
    fwht_inplace(x);
    stat[i] = infinity_norm(x);
  });
  const double nd = static_cast<double>(n);
  const double printed = std::sqrt(std::log(nd / delta) / nd);
  const double hoeffding = std::sqrt(2.0 * std::log(2.0 * nd / delta) / nd);
  std::vector<double> grid;
  for (double f : {0.5, 0.75, 1.0, 1.25, 1.5, 2.0}) grid.push_back(f * printed);
  grid.push_back(hoeffding);
  TailCurve c = make_curve("inf_norm_WDx", stat, grid, false);
  for (double t : c.thresholds) c.bound.push_back(std::min(1.0, 2.0 * nd * std::exp(-nd * t * t / 2.0)));
  c.summary["delta"] = delta;
  c.summary["printed_threshold"] = printed;
  c.summary["printed_exceedance"] = exceedance_at(stat, printed, false);
  c.summary["hoeffding_threshold"] = hoeffding;
  c.summary["hoeffding_exceedance"] = exceedance_at(stat, hoeffding, false);
  return c;
}

TailCurve block_norm_check(std::size_t n, std::size_t r, double epsilon,
                           std::uint64_t trials, std::uint64_t seed, double delta,
                           VectorFamily family, int workers) {
  require_block_layout(n, r);
  if (!(epsilon > 0)) throw RangeError("block_norm_check: epsilon must be positive");
  if (!(delta > 0 && delta < 1)) throw RangeError("block_norm_check: delta in (0, 1)");
  const std::size_t t = n / r;
  const double rd = static_cast<double>(r);
  std::vector<double> stat(trials);
  parallel_for(trials, workers, [&](std::size_t i) {
    BitSource src = derive_stream(seed, i);
    const Vector y = permuted_rotation(n, family, src);
    double worst = 0.0;
    for (std::size_t j = 0; j < r; ++j) {
      double s = 0.0;
      for (std::size_t k = j * t; k < (j + 1) * t; ++k) s += y[k] * y[k];
      worst = std::max(worst, std::abs(rd * s - 1.0));
    }
    stat[i] = worst;
  });
  std::vector<double> grid;
  for (double f : {0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0}) grid.push_back(f * epsilon);
  TailCurve c = make_curve("max_block_norm_deviation", stat, grid, false);
  const double ln_nd = std::log(static_cast<double>(n) / delta);
  auto overlay = [&](double tau) {
    return std::min(1.0, 2.0 * rd * std::exp(-tau * tau * static_cast<double>(t) / ln_nd));
  };
  for (double tau : c.thresholds) c.bound.push_back(overlay(tau));
  c.summary["epsilon"] = epsilon;
  c.summary["delta"] = delta;
  c.summary["block_length"] = static_cast<double>(t);
  c.summary["exceedance_at_epsilon"] = exceedance_at(stat, epsilon, false);
  c.summary["bound_at_epsilon"] = overlay(epsilon);
  return c;
}

TailCurve block_nonzero_check(std::size_t n, std::size_t r, double theta,
                              std::uint64_t trials, std::uint64_t seed,
                              VectorFamily family, int workers) {
  require_block_layout(n, r);
  if (!(theta >= 0 && theta < 1)) throw RangeError("block_nonzero_check: theta in [0, 1)");
  const std::size_t t = n / r;
  const double rd = static_cast<double>(r);
  std::vector<double> stat(trials);
  parallel_for(trials, workers, [&](std::size_t i) {
    BitSource src = derive_stream(seed, i);
    const Vector y = permuted_rotation(n, family, src);
    double smallest = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < r; ++j) {
      double s = 0.0;
      for (std::size_t k = j * t; k < (j + 1) * t; ++k) s += y[k] * y[k];
      smallest = std::min(smallest, std::sqrt(rd * s));
    }
    stat[i] = smallest;
  });
  std::vector<double> grid{theta};
  for (double g : {0.1, 0.25, 0.5, 0.75, 0.9}) grid.push_back(g);
  TailCurve c = make_curve("min_scaled_block_norm", stat, grid, true);
  const double nd = static_cast<double>(n);
  auto overlay = [&](double tau) {
    const double zeta = 1.0 - tau;
    return std::min(1.0, rd * std::exp(-zeta * zeta * nd / (std::log(nd) + std::cbrt(nd))));
  };
  for (double tau : c.thresholds) c.bound.push_back(overlay(tau));
  c.summary["theta"] = theta;
  c.summary["failure_rate_at_theta"] = exceedance_at(stat, theta, true);
  c.summary["failures_at_theta"] = exceedance_at(stat, theta, true) * static_cast<double>(trials);
  c.summary["bound_at_theta"] = overlay(theta);
  return c;
}

HansonWrightConstants fit_hanson_wright_constants(int dim, const std::vector<double>& etas) {
  if (dim < 1) throw RangeError("fit_hanson_wright_constants: dim must be positive");
  const double k = dim;
  double c = std::numeric_limits<double>::infinity();
  for (double eta : etas) {
    if (!(eta > 0)) continue;
    const double lower = eta < k ? regularized_gamma_p(k / 2.0, (k - eta) / 2.0) : 0.0;
    const double upper = 1.0 - regularized_gamma_p(k / 2.0, (k + eta) / 2.0);
    const double tail = lower + upper;
    if (!(tail > 0)) continue;
    c = std::min(c, -std::log(tail / 2.0) / std::min(eta * eta / k, eta));
  }
  if (!std::isfinite(c)) throw RangeError("fit_hanson_wright_constants: empty grid");
  return {c, c};
}

TailCurve hanson_wright_check(const Matrix& a, std::uint64_t trials,
                              QuadraticDistribution dist, std::uint64_t seed, int workers) {
  const std::size_t k = a.rows();
  if (k == 0 || a.cols() != k) throw DimensionError("hanson_wright_check: A must be square");
  const Vector ev = symmetric_eigenvalues(a);  // also enforces symmetry
  const double op = std::max(std::abs(ev.front()), std::abs(ev.back()));
  const double frob = frobenius_norm(a);
  double trace = 0.0;
  for (std::size_t i = 0; i < k; ++i) trace += a(i, i);

  std::vector<double> quad(trials), stat(trials);
  parallel_for(trials, workers, [&](std::size_t i) {
    BitSource src = derive_stream(seed, i);
    Vector g(k);
    for (double& v : g)
      v = dist == QuadraticDistribution::kGaussian ? src.draw_gaussian() : src.draw_sign();
    quad[i] = dot(g, multiply(a, g));
    stat[i] = std::abs(quad[i] - trace);
  });

  std::vector<double> grid;
  for (double f : {0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0}) grid.push_back(f * std::max(frob, 1e-300));
  TailCurve c = make_curve("quadratic_form_deviation", stat, grid, false);
  std::vector<double> fit_grid;
  const double sk = std::sqrt(static_cast<double>(k));
  for (double f : {0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0}) fit_grid.push_back(f * sk);
  const HansonWrightConstants hw = fit_hanson_wright_constants(static_cast<int>(k), fit_grid);
  if (frob > 0 && op > 0) {
    for (double eta : c.thresholds) c.bound.push_back(hw_bound(eta, frob, op, hw.c1, hw.c2));
  }
  double qs = 0.0, qs2 = 0.0;
  for (double q : quad) qs += q;
  const double qm = qs / static_cast<double>(trials);
  for (double q : quad) qs2 += (q - qm) * (q - qm);
  c.summary["c1"] = hw.c1;
  c.summary["c2"] = hw.c2;
  c.summary["trace"] = trace;
  c.summary["frobenius"] = frob;
  c.summary["operator_norm"] = op;
  c.summary["quadratic_mean"] = qm;
  c.summary["quadratic_variance"] = trials > 1 ? qs2 / static_cast<double>(trials - 1) : 0.0;
  return c;
}

double hoeffding_bound(double epsilon, double n, double range) {
  if (!(epsilon > 0) || !(n > 0) || !(range > 0)) {
    throw RangeError("hoeffding_bound: arguments must be positive");
  }
  return 2.0 * std::exp(-2.0 * epsilon * epsilon * n / (range * range));
}

double serfling_bound(double epsilon, double n, double population, double range) {
  if (!(epsilon > 0) || !(n > 0) || !(range > 0) || !(population > 0)) {
    throw RangeError("serfling_bound: arguments must be positive");
  }
  if (n > population) throw RangeError("serfling_bound: sample exceeds population");
  const double f = 1.0 - (n - 1.0) / population;
  return 2.0 * std::exp(-2.0 * epsilon * epsilon * n / (f * range * range));
}

double hw_bound(double eta, double frobenius, double op_norm, double c1, double c2) {
  if (eta < 0 || !(frobenius > 0) || !(op_norm > 0) || !(c1 > 0) || !(c2 > 0)) {
    throw RangeError("hw_bound: eta >= 0 and positive norms/constants required");
  }
  return 2.0 * std::exp(-std::min(c1 * eta * eta / (frobenius * frobenius), c2 * eta / op_norm));
}

}  // namespace fastjl
