#include "acceptance.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include "fastjl/attacks.h"
#include "fastjl/bench.h"
#include "fastjl/errors.h"
#include "fastjl/jlp_harness.h"
#include "fastjl/privacy.h"
#include "fastjl/randomness.h"
#include "fastjl/rip.h"

namespace fastjl::acceptance {

namespace {

constexpr std::uint64_t kSeed = 20240611;

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string g(double v) { return fmt("%.6g", v); }

Vector gaussian_vector(std::size_t n, BitSource& src) {
  Vector x(n);
  for (double& v : x) v = src.draw_gaussian();
  return x;
}

TransformParams large_r() {
  TransformParams p;
  p.allow_large_r = true;
  return p;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// 1. FWHT involution and norm preservation of W D.
Outcome unitarity(int) {
  Outcome o;
  double worst_inv = 0.0, worst_norm = 0.0;
  for (std::size_t n = 2; n <= (1u << 16); n *= 2) {
    for (std::uint64_t t = 0; t < 100; ++t) {
      BitSource src = derive_stream(kSeed + n, t);
      const Vector x = gaussian_vector(n, src);
      Vector y = x;
      fwht_inplace(y);
      fwht_inplace(y);
      for (std::size_t i = 0; i < n; ++i) worst_inv = std::max(worst_inv, std::abs(y[i] - x[i]));
      Vector z = x;
      for (double& v : z)
        if (src.draw_sign() < 0) v = -v;
      fwht_inplace(z);
      worst_norm = std::max(worst_norm, std::abs(norm2(z) - norm2(x)));
    }
  }
  o.passed = worst_inv <= 1e-10 && worst_norm <= 1e-10;
  o.detail = "max|WWx - x| = " + g(worst_inv) + ", max| ||WDx|| - ||x|| | = " + g(worst_norm) +
             " (tol 1e-10)";
  o.data = {{"max_involution_error", worst_inv}, {"max_norm_error", worst_norm}};
  return o;
}

// 2. apply agrees with the realized dense matrix for every kind.
Outcome dense_oracle(int) {
  Outcome o;
  double worst = 0.0;
  std::string worst_at;
  const std::size_t sizes[][2] = {{16, 4}, {64, 8}, {256, 16}};
  for (TransformKind kind : all_transform_kinds()) {
    for (const auto& nr : sizes) {
      BitSource src = derive_stream(kSeed, nr[0]);
      const Transform t = build(kind, nr[0], nr[1], src, large_r());
      const Matrix m = realize_dense(t);
      for (int v = 0; v < 100; ++v) {
        const Vector x = gaussian_vector(nr[0], src);
        const Vector fast = apply_transform(t, x);
        const Vector slow = multiply(m, x);
        for (std::size_t i = 0; i < fast.size(); ++i) {
          const double e = std::abs(fast[i] - slow[i]);
          if (e > worst) {
            worst = e;
            worst_at = std::string(to_string(kind)) + "@n=" + std::to_string(nr[0]);
          }
        }
      }
    }
  }
  o.passed = worst <= 1e-10;
  o.detail = "max entry error " + g(worst) + (worst_at.empty() ? "" : " at " + worst_at) +
             " (tol 1e-10)";
  o.data = {{"max_error", worst}, {"worst_at", worst_at}};
  return o;
}

// 3. Mean squared norm within [0.99, 1.01].
Outcome isometry(int workers) {
  Outcome o;
  o.passed = true;
  o.data = Json::object();
  for (TransformKind kind : {TransformKind::kNewGaussian, TransformKind::kNewRademacher}) {
    for (VectorFamily fam : {VectorFamily::kBasis, VectorFamily::kConstant,
                             VectorFamily::kRandomUnit, VectorFamily::kSpike}) {
      const JlpReport r = jlp_failure_rate(kind, 1024, 64, 0.5, 10000, fam, kSeed, large_r(),
                                           workers);
      const bool ok = r.mean_squared_norm >= 0.99 && r.mean_squared_norm <= 1.01;
      o.passed = o.passed && ok;
      const std::string key = std::string(to_string(kind)) + "/" + std::string(to_string(fam));
      o.data[key] = r.mean_squared_norm;
      o.detail += key + "=" + fmt("%.4f", r.mean_squared_norm) + " ";
    }
  }
  o.detail += "(band [0.99, 1.01])";
  return o;
}

// 4. JLP failure rates against each other and the exact chi^2 tail.
Outcome jlp_relative(int workers) {
  Outcome o;
  const JlpReport ng = jlp_failure_rate(TransformKind::kNewGaussian, 1024, 64, 0.5, 100000,
                                        VectorFamily::kRandomUnit, kSeed, large_r(), workers);
  const JlpReport dg = jlp_failure_rate(TransformKind::kDenseGaussian, 1024, 64, 0.5, 100000,
                                        VectorFamily::kRandomUnit, kSeed, large_r(), workers);
  const double exact = *dg.exact_failure_probability;
  const bool ratio_ok = ng.failure_rate <= 2.0 * dg.failure_rate;
  const bool calib_ok = exact >= dg.failure_ci.lo && exact <= dg.failure_ci.hi;
  o.passed = ratio_ok && calib_ok;
  o.detail = "new-gaussian " + g(ng.failure_rate) + " <= 2 x dense " + g(dg.failure_rate) +
             (ratio_ok ? " ok" : " VIOLATED") + "; exact chi2_64 tail " + g(exact) + " in [" +
             g(dg.failure_ci.lo) + ", " + g(dg.failure_ci.hi) + "]" +
             (calib_ok ? " ok" : " VIOLATED");
  o.data = {{"new_gaussian", to_json(ng)}, {"dense_gaussian", to_json(dg)}, {"exact", exact}};
  return o;
}

// 5. Random-bit budget of NewRademacher.
Outcome bit_budget(int) {
  Outcome o;
  const std::size_t n = 1024;
  bool exact_2n = true;
  double perm_sum = 0.0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    BitSource src = derive_stream(kSeed, s);
    const Transform t = build(TransformKind::kNewRademacher, n, 64, src, large_r());
    exact_2n = exact_2n && t.bits_used() - t.permutation_bits() == 2 * n;
    perm_sum += static_cast<double>(t.permutation_bits());
  }
  const double mean_perm = perm_sum / 100.0;
  const double cap = 1.2 * static_cast<double>(n) * ceil_log2(n);
  o.passed = exact_2n && mean_perm <= cap;
  o.detail = std::string("D and P bits ") + (exact_2n ? "== 2n on all seeds" : "!= 2n") +
             "; mean permutation bits " + fmt("%.1f", mean_perm) + " <= " + fmt("%.1f", cap);
  o.data = {{"d_and_p_exact", exact_2n}, {"mean_permutation_bits", mean_perm}, {"cap", cap}};
  return o;
}

// 6. Apply-time doubling ratios.
Outcome runtime_scaling(int) {
  Outcome o;
  const std::vector<std::size_t> sizes = power_of_two_range(1u << 12, 1u << 16);
  const BenchReport fast = run_bench(TransformKind::kNewRademacher, sizes, 64, kSeed, 30, 5,
                                     large_r());
  const BenchReport dense = run_bench(TransformKind::kDenseGaussian, sizes, 64, kSeed, 30, 5);
  const double fast_max = *std::max_element(fast.doubling_ratios.begin(), fast.doubling_ratios.end());
  const double dense_min =
      *std::min_element(dense.doubling_ratios.begin(), dense.doubling_ratios.end());
  o.passed = fast_max <= 2.8 && dense_min >= 1.9;
  o.detail = "new-rademacher max ratio " + fmt("%.3f", fast_max) + " <= 2.8; dense-gaussian min ratio " +
             fmt("%.3f", dense_min) + " >= 1.9";
  o.data = {{"new_rademacher", to_json(fast)}, {"dense_gaussian", to_json(dense)}};
  return o;
}

// 7. Block norm and block nonzero lemmas.
Outcome block_lemmas(int workers) {
  Outcome o;
  const TailCurve norm = block_norm_check(4096, 16, 0.5, 10000, kSeed, 0.05,
                                          VectorFamily::kRandomUnit, workers);
  const TailCurve nz = block_nonzero_check(4096, 16, 0.1, 10000, kSeed,
                                           VectorFamily::kRandomUnit, workers);
  const double exc = norm.summary.at("exceedance_at_epsilon");
  const double bound = norm.summary.at("bound_at_epsilon");
  const double fails = nz.summary.at("failures_at_theta");
  o.passed = exc <= bound && fails == 0.0;
  o.detail = "block norm exceedance " + g(exc) + " <= overlay " + g(bound) +
             "; block nonzero failures at theta=0.1: " + g(fails) + " (need 0)";
  o.data = {{"block_norm", to_json(norm)}, {"block_nonzero", to_json(nz)}};
  return o;
}

// Closed-form delta_2: for each column pair the Gram block is [[a, c], [c, b]];
// its eigenvalues minus one are (a + b)/2 - 1 +- sqrt(((a - b)/2)^2 + c^2).
double closed_form_delta2(const Matrix& m) {
  double best = 0.0;
  for (std::size_t i = 0; i < m.cols(); ++i) {
    for (std::size_t j = i + 1; j < m.cols(); ++j) {
      double a = 0, b = 0, c = 0;
      for (std::size_t k = 0; k < m.rows(); ++k) {
        a += m(k, i) * m(k, i);
        b += m(k, j) * m(k, j);
        c += m(k, i) * m(k, j);
      }
      const double mid = 0.5 * (a + b) - 1.0;
      const double rad = std::sqrt(0.25 * (a - b) * (a - b) + c * c);
      best = std::max({best, std::abs(mid + rad), std::abs(mid - rad)});
    }
  }
  return best;
}

// 8. RIP survey.
Outcome rip(int workers) {
  Outcome o;
  RipSurvey s[2][3];
  const TransformKind kinds[2] = {TransformKind::kNewRademacher, TransformKind::kDenseGaussian};
  for (int a = 0; a < 2; ++a)
    for (std::size_t k = 1; k <= 3; ++k)
      s[a][k - 1] = rip_survey(kinds[a], 64, 32, k, 20, kSeed, large_r(), workers);
  const double ratio = s[0][1].median / s[1][1].median;
  bool monotone = true;
  for (int a = 0; a < 2; ++a)
    for (std::size_t i = 0; i < 20; ++i)
      monotone = monotone && s[a][0].deltas[i] <= s[a][1].deltas[i] + 1e-12 &&
                 s[a][1].deltas[i] <= s[a][2].deltas[i] + 1e-12;
  double oracle_gap = 0.0;
  for (int a = 0; a < 2; ++a) {
    for (std::uint64_t i = 0; i < 20; ++i) {
      BitSource src = derive_stream(kSeed, i);
      const Matrix m = realize_dense(build(kinds[a], 64, 32, src, large_r()));
      oracle_gap = std::max(oracle_gap, std::abs(closed_form_delta2(m) - s[a][1].deltas[i]));
    }
  }
  o.passed = ratio <= 1.5 && monotone && oracle_gap <= 1e-10;
  o.detail = "median delta_2 new-rademacher " + fmt("%.4f", s[0][1].median) + " / dense " +
             fmt("%.4f", s[1][1].median) + " = " + fmt("%.3f", ratio) + " <= 1.5; monotone in k: " +
             (monotone ? "yes" : "NO") + "; closed-form gap " + g(oracle_gap) + " (tol 1e-10)";
  o.data = {{"new_rademacher_k2", to_json(s[0][1])},
            {"dense_gaussian_k2", to_json(s[1][1])},
            {"ratio", ratio},
            {"monotone", monotone},
            {"oracle_gap", oracle_gap}};
  return o;
}

// 9. Attacks on the rival constructions.
Outcome attack_suite(int workers) {
  Outcome o;
  const TransformParams p = large_r();
  const AttackReport hash =
      run_attack({TransformKind::kHashSparse, 64, 8, p}, pair_hadamard(64, 10.0), 10000, kSeed,
                 workers);
  const AttackReport shc = run_attack({TransformKind::kSubsampledHadamardCombined, 64, 8, p},
                                      pair_bounded_orthonormal(64, 10.0), 100000, kSeed, workers);
  const AttackReport al = run_attack({TransformKind::kAilonLibertyIterated, 64, 16, p},
                                     pair_iterated(64, 10.0, 3), 100000, kSeed, workers);
  const AttackReport circ = run_attack({TransformKind::kPartialCirculant, 64, 8, p},
                                       pair_circulant(64, 10.0), 10000, kSeed, workers);
  const double shc_pred = *shc.predicted_rate;
  const double al_pred = *al.predicted_rate;
  const bool hash_ok = hash.success_rate >= 0.2;
  const bool shc_ok = shc.success_rate >= 0.5 * shc_pred && shc.success_rate <= 2.0 * shc_pred;
  const bool al_ok = al.success_rate >= 0.5 * al_pred && al.success_rate <= 2.0 * al_pred;
  const bool circ_ok = circ.advantage_lo > 0.01;
  o.passed = hash_ok && shc_ok && al_ok && circ_ok;
  auto mark = [](bool ok) { return ok ? std::string(" ok") : std::string(" VIOLATED"); };
  o.detail = "hash-sparse success " + fmt("%.4f", hash.success_rate) + " >= 0.2" + mark(hash_ok) +
             "; shc(B=2) success " + fmt("%.4f", shc.success_rate) + " in [" +
             fmt("%.4f", 0.5 * shc_pred) + ", " + fmt("%.4f", 2 * shc_pred) + "]" + mark(shc_ok) +
             "; ailon-liberty(l=3) success " + fmt("%.4f", al.success_rate) + " in [" +
             fmt("%.4f", 0.5 * al_pred) + ", " + fmt("%.4f", 2 * al_pred) + "]" + mark(al_ok) +
             "; partial-circulant advantage lower CI " + fmt("%.4f", circ.advantage_lo) + " > 0.01" +
             mark(circ_ok);
  o.data = {{"hash_sparse", to_json(hash)},
            {"subsampled_hadamard_combined", to_json(shc)},
            {"ailon_liberty_iterated", to_json(al)},
            {"partial_circulant", to_json(circ)}};
  return o;
}

// 10. Gaussian control arm on every pair.
Outcome gaussian_controls(int workers) {
  Outcome o;
  o.passed = true;
  DpParams params;
  params.r = 8;
  const double w = w_threshold(params.alpha, params.beta, params.r);
  const TransformParams p = large_r();
  struct Arm {
    AttackTarget target;
    NeighbourPair pair;
  };
  const std::vector<Arm> arms = {
      {{TransformKind::kSubsampledHadamardCombined, 64, 8, p}, pair_bounded_orthonormal(64, w)},
      {{TransformKind::kSubsampledHadamardCombined, 64, 8, p},
       pair_bounded_orthonormal(64, w, PairVariant::kSingleColumn)},
      {{TransformKind::kHashSparse, 64, 8, p}, pair_hadamard(64, w)},
      {{TransformKind::kPartialCirculant, 64, 8, p}, pair_circulant(64, w)},
      {{TransformKind::kAilonLibertyIterated, 64, 16, p}, pair_iterated(64, w, 3)},
  };
  std::uint64_t total_fires = 0;
  o.data = Json::array();
  for (const Arm& arm : arms) {
    for (TransformKind mech : {TransformKind::kNewGaussian, TransformKind::kDenseGaussian}) {
      const AttackReport r = gaussian_control(arm.target, arm.pair, mech, params, 10000, kSeed,
                                              workers);
      const bool ok = r.event_fires == 0 && r.advantage_lo <= 0.0 && r.advantage_hi >= 0.0;
      o.passed = o.passed && ok;
      total_fires += r.event_fires;
      o.data.push_back(to_json(r));
    }
  }
  o.detail = std::to_string(arms.size() * 2) + " arms at w = threshold " + fmt("%.2f", w) +
             ", total event fires " + std::to_string(total_fires) +
             " (need 0), advantage CI contains 0: " + (o.passed ? "all" : "NOT all");
  return o;
}

// 11. Publication preconditions, lifting floor, streaming equivalence, composition.
Outcome privacy_plumbing(int) {
  Outcome o;
  DpParams params;
  params.r = 8;
  const double t = w_threshold(params.alpha, params.beta, params.r);

  int rejected = 0, leaked = 0;
  double worst_lift_gap = 0.0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    BitSource src = derive_stream(kSeed, i);
    const std::size_t m = 2 + src.draw_uniform_index(7);
    const std::size_t n = m + src.draw_uniform_index(9);
    Matrix a(m, n);
    for (double& v : a.data()) v = src.draw_gaussian();
    if (i % 2 == 1) {
      // Scaled towards the threshold from below.
      const double s = spectral_extremes(a).sigma_min;
      const double target = t * (0.5 + 0.49 * src.draw_uniform01());
      if (s > 0)
        for (double& v : a.data()) v *= target / s;
    }
    PublishOptions opt;
    opt.transform = large_r();
    try {
      publish_first_moment(a, params, i, opt);
      ++leaked;
    } catch (const PrivacyPreconditionError&) {
      ++rejected;
    }
    const Matrix lifted = lift_matrix(a.transpose(), t, a.rows());
    worst_lift_gap = std::max(worst_lift_gap, t - spectral_extremes(lifted).sigma_min);
  }

  bool identical = true;
  for (TransformKind kind : {TransformKind::kNewGaussian, TransformKind::kDenseGaussian}) {
    BitSource src = derive_stream(kSeed ^ 0xabcdULL, 0);
    const std::size_t d = 24, m = 8;
    Matrix a(d, m);
    for (double& v : a.data()) v = src.draw_gaussian();
    DpParams sp = params;
    sp.w = t;
    MatrixProductSketch mm(sp, kind, d, m, m, 99, StreamMode::kPrivate, large_r());
    LinearRegressionSketch lr(sp, kind, d, m, 99, StreamMode::kPrivate, large_r());
    for (std::size_t c = 0; c < m; ++c) {
      mm.update(MatrixProductSketch::Side::kA, c, a.column(c));
      lr.update_column(c, a.column(c));
    }
    PublishOptions opt;
    opt.kind = kind;
    opt.lift = true;
    opt.transform = large_r();
    const FirstMomentSketch batch = publish_first_moment(a.transpose(), sp, 99, opt);
    identical = identical && batch.data == mm.sketch_a() && batch.data == lr.sketch_a();
  }

  struct Point {
    double a0, b0;
    int ell;
    double bp, alpha, beta;
  };
  // Evaluated by hand at 40 significant digits.
  const Point grid[] = {
      {0.1, 0.01, 1, 0.01, 0.32348542587702927017, 0.02},
      {0.05, 0.001, 10, 1e-5, 0.80871356469257317543, 0.01001},
      {0.2, 0.0, 4, 0.05, 1.2990987322723266186, 0.05},
      {0.01, 1e-6, 100, 1e-6, 0.54565217697569319786, 0.000101},
      {0.5, 0.1, 0, 0.3, 0.0, 0.3},
  };
  double compose_gap = 0.0;
  for (const Point& pt : grid) {
    const ComposedPrivacy c = compose_privacy(pt.a0, pt.b0, pt.ell, pt.bp);
    compose_gap = std::max({compose_gap, std::abs(c.alpha - pt.alpha), std::abs(c.beta - pt.beta)});
  }

  o.passed = rejected == 1000 && leaked == 0 && worst_lift_gap <= 1e-9 && identical &&
             compose_gap <= 1e-12;
  o.detail = "rejected " + std::to_string(rejected) + "/1000 below-threshold inputs; lift floor gap " +
             g(worst_lift_gap) + " (<= 1e-9); streaming == batch: " + (identical ? "yes" : "NO") +
             "; composition gap " + g(compose_gap) + " (<= 1e-12)";
  o.data = {{"rejected", rejected},          {"leaked", leaked},
            {"lift_gap", worst_lift_gap},   {"stream_batch_identical", identical},
            {"compose_gap", compose_gap},   {"threshold", t}};
  return o;
}

struct UtilityRun {
  double residual_ratio;
  double coef_error;
  double product_max_error;
  double product_frob_error;
};

UtilityRun utility_run(std::size_t r, std::uint64_t s) {
  BitSource data = derive_stream(kSeed ^ 0x1234ULL, s);
  const std::size_t rows = 64, m = 8;
  Matrix a(rows, m);
  for (double& v : a.data()) v = data.draw_gaussian();
  Vector b(rows);
  for (double& v : b) v = data.draw_gaussian();
  DpParams p;
  p.r = r;
  p.w = 0.0;
  LinearRegressionSketch lr(p, TransformKind::kDenseGaussian, rows, m, s, StreamMode::kNonPrivate);
  for (std::size_t c = 0; c < m; ++c) lr.update_column(c, a.column(c));
  lr.update_target(b);
  const Vector xh = lr.query();
  const Vector xs = least_squares(a, b);
  Vector rh = multiply(a, xh), rs = multiply(a, xs);
  for (std::size_t i = 0; i < rows; ++i) {
    rh[i] -= b[i];
    rs[i] -= b[i];
  }
  double coef = 0.0;
  for (std::size_t i = 0; i < m; ++i) coef += (xh[i] - xs[i]) * (xh[i] - xs[i]);

  MatrixProductSketch mm(p, TransformKind::kDenseGaussian, 8, 8, 8, s, StreamMode::kNonPrivate);
  const Matrix id = Matrix::Identity(8);
  for (std::size_t c = 0; c < 8; ++c) {
    mm.update(MatrixProductSketch::Side::kA, c, id.column(c));
    mm.update(MatrixProductSketch::Side::kB, c, id.column(c));
  }
  const Matrix diff = subtract(mm.query(), id);
  return {norm2(rh) / norm2(rs), std::sqrt(coef), max_abs_entry(diff), frobenius_norm(diff)};
}

// 12. Non-private sketch utility.
Outcome sketch_utility(int) {
  Outcome o;
  std::vector<double> ratio, coef256, coef64, prod_max, prod256, prod64;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const UtilityRun hi = utility_run(256, s);
    const UtilityRun lo = utility_run(64, s);
    ratio.push_back(hi.residual_ratio);
    coef256.push_back(hi.coef_error);
    coef64.push_back(lo.coef_error);
    prod_max.push_back(hi.product_max_error);
    prod256.push_back(hi.product_frob_error);
    prod64.push_back(lo.product_frob_error);
  }
  const auto frac = [](const std::vector<double>& v, double cap) {
    return static_cast<double>(std::count_if(v.begin(), v.end(), [&](double x) { return x <= cap; })) /
           static_cast<double>(v.size());
  };
  const double lr_frac = frac(ratio, 1.5);
  const double mm_frac = frac(prod_max, 0.25);
  const double lr_shrink = median(coef64) / median(coef256);
  const double mm_shrink = median(prod64) / median(prod256);
  o.passed = lr_frac >= 0.9 && mm_frac >= 0.9 && lr_shrink >= 1.5 && mm_shrink >= 1.5;
  o.detail = "regression ratio <= 1.5 on " + fmt("%.0f%%", 100 * lr_frac) +
             " of seeds; product within 0.25 on " + fmt("%.0f%%", 100 * mm_frac) +
             " (need 90%); error shrink r=64 -> 256: regression " + fmt("%.2f", lr_shrink) +
             "x, product " + fmt("%.2f", mm_shrink) + "x (need 1.5x)";
  o.data = {{"regression_fraction", lr_frac}, {"product_fraction", mm_frac},
            {"regression_shrink", lr_shrink}, {"product_shrink", mm_shrink}};
  return o;
}

struct Entry {
  const char* name;
  double budget;
  std::function<Outcome(int)> fn;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> e = {
      {"unitarity", 10, unitarity},
      {"dense-oracle", 30, dense_oracle},
      {"isometry-in-expectation", 120, isometry},
      {"jlp-relative-failure", 600, jlp_relative},
      {"random-bit-budget", 10, bit_budget},
      {"runtime-scaling", 120, runtime_scaling},
      {"block-lemmas", 300, block_lemmas},
      {"rip-survey", 300, rip},
      {"attack-suite", 600, attack_suite},
      {"gaussian-control", 300, gaussian_controls},
      {"privacy-plumbing", 120, privacy_plumbing},
      {"sketch-utility", 300, sketch_utility},
  };
  return e;
}

}  // namespace

std::string criterion_name(int id) {
  if (id < 1 || id > kCriteria) throw RangeError("acceptance criterion must be 1..12");
  return entries()[id - 1].name;
}

Outcome run(int id, int workers) {
  if (id < 1 || id > kCriteria) throw RangeError("acceptance criterion must be 1..12");
  const Entry& e = entries()[id - 1];
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o = e.fn(workers);
  o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.id = id;
  o.name = e.name;
  o.budget_seconds = e.budget;
  if (o.seconds > o.budget_seconds) {
    o.passed = false;
    o.detail += "; runtime " + fmt("%.1f", o.seconds) + " s over budget " + fmt("%.0f", e.budget) + " s";
  }
  return o;
}

std::string format_line(const Outcome& o) {
  char head[96];
  std::snprintf(head, sizeof head, "%s [%02d] %s (%.1f s / %.0f s): ", o.passed ? "PASS" : "FAIL",
                o.id, o.name.c_str(), o.seconds, o.budget_seconds);
  return head + o.detail;
}

}  // namespace fastjl::acceptance
