#include "fastjl/privacy.h"

#include <algorithm>
#include <cmath>

#include "fastjl/errors.h"
#include "fastjl/randomness.h"

namespace fastjl {

namespace {

BitSource sketch_source(std::uint64_t seed) { return derive_stream(seed, 0); }

bool gaussian_entried(TransformKind kind) {
  return kind == TransformKind::kNewGaussian || kind == TransformKind::kDenseGaussian;
}

void require_private_kind(TransformKind kind) {
  if (!gaussian_entried(kind)) {
    throw ContractError(std::string("private release needs a Gaussian-entried transform, got ") +
                        std::string(to_string(kind)));
  }
}

Matrix pad_rows_to_power_of_two(const Matrix& x) {
  const std::size_t h = next_power_of_two(x.rows());
  if (h == x.rows()) return x;
  Matrix out(h, x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) out(i, j) = x(i, j);
  return out;
}

double structural_delta_for(TransformKind kind, std::size_t n, std::size_t r) {
  return is_block_kind(kind) ? delta_structural(n, r) : 0.0;
}

}  // namespace

void validate(const DpParams& p) {
  if (!(p.alpha > 0)) throw RangeError("alpha must be positive");
  if (!(p.beta > 0 && p.beta < 1)) throw RangeError("beta must lie in (0, 1)");
  if (p.r == 0) throw RangeError("r must be positive");
  if (!(p.w >= 0)) throw RangeError("w must be non-negative");
}

ThresholdBreakdown w_threshold_breakdown(double alpha, double beta, std::size_t r) {
  validate(DpParams{alpha, beta, r, 0.0});
  const double rd = static_cast<double>(r);
  const double core = std::sqrt(16.0 * rd * std::log(2.0 / beta));
  ThresholdBreakdown t;
  t.single_release = std::log(4.0 / beta) * core / alpha;
  t.second_moment = 16.0 * rd * std::log(2.0 / beta) * std::log(4.0 / beta) / alpha;
  t.streaming = core * std::log(16.0 * rd / beta) / alpha;
  t.value = std::max({t.single_release, t.second_moment, t.streaming});
  if (t.single_release == t.value) t.binding.push_back("single_release");
  if (t.second_moment == t.value) t.binding.push_back("second_moment");
  if (t.streaming == t.value) t.binding.push_back("streaming");
  return t;
}

double w_threshold(double alpha, double beta, std::size_t r) {
  return w_threshold_breakdown(alpha, beta, r).value;
}

double delta_structural(std::size_t n, std::size_t r, double theta) {
  if (n < 2 || r == 0) throw RangeError("delta_structural: need n >= 2, r >= 1");
  if (!(theta >= 0 && theta < 1)) throw RangeError("delta_structural: theta in [0, 1)");
  const double nd = static_cast<double>(n);
  const double zeta = 1.0 - theta;
  return std::min(1.0, static_cast<double>(r) *
                           std::exp(-zeta * zeta * nd / (std::log(nd) + std::cbrt(nd))));
}

ComposedPrivacy compose_privacy(double alpha0, double beta0, int ell, double beta_prime) {
  if (!(alpha0 > 0)) throw RangeError("compose_privacy: alpha0 must be positive");
  if (!(beta0 >= 0 && beta0 < 1)) throw RangeError("compose_privacy: beta0 in [0, 1)");
  if (ell < 0) throw RangeError("compose_privacy: ell must be non-negative");
  if (!(beta_prime > 0 && beta_prime < 1)) throw RangeError("compose_privacy: beta' in (0, 1)");
  const double l = ell;
  return {std::sqrt(2.0 * l * std::log(1.0 / beta_prime)) * alpha0 + 2.0 * l * alpha0 * alpha0,
          l * beta0 + beta_prime};
}

std::size_t lifted_height(std::size_t top, std::size_t d) {
  return next_power_of_two(2 * (top + d));
}

Matrix lift_matrix(const Matrix& a, double w, std::size_t top) {
  if (!(w >= 0)) throw RangeError("lift_matrix: w must be non-negative");
  if (top == 0) top = a.cols();
  if (top < a.cols()) throw DimensionError("lift_matrix: top block shorter than column count");
  const std::size_t d = a.rows();
  const std::size_t h = lifted_height(top, d);
  Matrix out(h, a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    out(j, j) = w;
    for (std::size_t i = 0; i < d; ++i) out(h - d + i, j) = a(i, j);
  }
  return out;
}

FirstMomentSketch publish_first_moment(const Matrix& a, const DpParams& params,
                                       std::uint64_t seed, const PublishOptions& options) {
  validate(params);
  FirstMomentSketch s;
  s.kind = options.kind;
  s.r = params.r;
  s.lifted = options.lift;
  s.non_private = options.non_private;
  s.w = options.lift ? params.w : 0.0;
  s.seed = seed;
  s.threshold = w_threshold_breakdown(params.alpha, params.beta, params.r);

  const Matrix x = options.lift ? lift_matrix(a.transpose(), params.w, a.rows())
                                : pad_rows_to_power_of_two(a.transpose());
  if (!options.non_private) {
    require_private_kind(options.kind);
    if (options.lift) {
      if (params.w < s.threshold.value) {
        throw PrivacyPreconditionError("lifting weight w is below the privacy threshold",
                                       params.w, s.threshold.value);
      }
    } else {
      const double sig = spectral_extremes(a).sigma_min;
      if (sig < s.threshold.value) {
        throw PrivacyPreconditionError("sigma_min(A) is below the privacy threshold; "
                                       "retry with lifting",
                                       sig, s.threshold.value);
      }
    }
  }
  s.sigma_min = spectral_extremes(x).sigma_min;
  BitSource src = sketch_source(seed);
  const Transform phi = build(options.kind, x.rows(), params.r, src, options.transform);
  s.embedded_dim = phi.n();
  s.structural_delta = structural_delta_for(options.kind, phi.n(), params.r);
  s.data = apply_columns(phi, x);
  return s;
}

SecondMomentSketch publish_second_moment(const Matrix& a, const DpParams& params,
                                         std::uint64_t seed, const PublishOptions& options) {
  const FirstMomentSketch first = publish_first_moment(a, params, seed, options);
  BitSource src = sketch_source(seed);
  const Transform phi = build(options.kind, first.embedded_dim, params.r, src, options.transform);
  SecondMomentSketch s;
  s.kind = first.kind;
  s.r = first.r;
  s.embedded_dim = first.embedded_dim;
  s.lifted = first.lifted;
  s.w = first.w;
  s.sigma_min = first.sigma_min;
  s.threshold = first.threshold;
  s.seed = seed;
  s.data = multiply_transposed(realize_dense(phi), first.data);
  return s;
}

double covariance_query(const FirstMomentSketch& sketch, std::span<const double> u) {
  if (u.size() != sketch.data.cols()) throw DimensionError("covariance_query: u has wrong length");
  if (std::abs(norm2(u) - 1.0) > 1e-9) throw RangeError("covariance_query: u must be a unit vector");
  return squared_norm(multiply(sketch.data, u));
}

Matrix graph_edge_matrix(const Graph& g, double lift) {
  const std::size_t n = g.vertices;
  if (n < 2) throw RangeError("graph_edge_matrix: need at least two vertices");
  if (!(lift >= 0)) throw RangeError("graph_edge_matrix: lift must be non-negative");
  Matrix weights(n, n);
  for (const Edge& e : g.edges) {
    if (e.u == e.v) throw ContractError("graph_edge_matrix: self-loop");
    if (e.u >= n || e.v >= n) throw RangeError("graph_edge_matrix: vertex out of range");
    if (!(e.weight >= 0)) throw RangeError("graph_edge_matrix: negative weight");
    weights(std::min(e.u, e.v), std::max(e.u, e.v)) += e.weight;
  }
  Matrix out(n * (n - 1) / 2, n);
  std::size_t row = 0;
  const double base = lift / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++row) {
      const double s = std::sqrt(weights(i, j) + base);
      out(row, i) = s;
      out(row, j) = -s;
    }
  }
  return out;
}

namespace {

Vector indicator(std::size_t n, std::span<const std::size_t> side) {
  Vector u(n, 0.0);
  for (std::size_t v : side) {
    if (v >= n) throw RangeError("cut: vertex index out of range");
    if (u[v] != 0.0) throw RangeError("cut: repeated vertex");
    u[v] = 1.0;
  }
  return u;
}

}  // namespace

double exact_cut(const Graph& g, std::span<const std::size_t> side) {
  const Vector u = indicator(g.vertices, side);
  double c = 0.0;
  for (const Edge& e : g.edges)
    if (u[e.u] != u[e.v]) c += e.weight;
  return c;
}

CutSketch publish_cut_sketch(const Graph& g, const DpParams& params, std::uint64_t seed,
                             const PublishOptions& options) {
  validate(params);
  CutSketch c;
  c.vertices = g.vertices;
  FirstMomentSketch& s = c.sketch;
  s.kind = options.kind;
  s.r = params.r;
  s.non_private = options.non_private;
  s.seed = seed;
  s.threshold = w_threshold_breakdown(params.alpha, params.beta, params.r);
  c.lift = options.non_private ? 0.0 : s.threshold.value * s.threshold.value;
  const Matrix e = graph_edge_matrix(g, c.lift);
  const Vector ev = symmetric_eigenvalues(multiply_transposed(e, e));
  c.spectral_floor = std::sqrt(std::max(ev[1], 0.0));
  if (!options.non_private) {
    require_private_kind(options.kind);
    if (c.spectral_floor < s.threshold.value * (1.0 - 1e-9)) {
      throw PrivacyPreconditionError("lifted edge matrix misses the spectral floor",
                                     c.spectral_floor, s.threshold.value);
    }
  }
  s.sigma_min = c.spectral_floor;
  s.w = std::sqrt(c.lift);
  const Matrix x = pad_rows_to_power_of_two(e);
  BitSource src = sketch_source(seed);
  const Transform phi = build(options.kind, x.rows(), params.r, src, options.transform);
  s.embedded_dim = phi.n();
  s.structural_delta = structural_delta_for(options.kind, phi.n(), params.r);
  s.data = apply_columns(phi, x);
  return c;
}

double cut_query(const CutSketch& sketch, std::span<const std::size_t> side) {
  const Vector u = indicator(sketch.vertices, side);
  const double k = static_cast<double>(side.size());
  const double n = static_cast<double>(sketch.vertices);
  return squared_norm(multiply(sketch.sketch.data, u)) - k * (n - k) * sketch.lift / n;
}

namespace {

Transform stream_transform(const DpParams& params, TransformKind kind, std::size_t height,
                           std::uint64_t seed, StreamMode mode,
                           const TransformParams& transform) {
  validate(params);
  if (mode == StreamMode::kPrivate) {
    require_private_kind(kind);
    const double t = w_threshold(params.alpha, params.beta, params.r);
    if (params.w < t) {
      throw PrivacyPreconditionError("stream lifting weight w is below the privacy threshold",
                                     params.w, t);
    }
  }
  BitSource src = sketch_source(seed);
  return build(kind, height, params.r, src, transform);
}

Vector lift_column(std::size_t height, std::size_t col, double w, std::size_t n_rows,
                   std::span<const double> values) {
  if (values.size() != n_rows) throw DimensionError("stream update: column has wrong length");
  Vector v(height, 0.0);
  v[col] = w;
  std::copy(values.begin(), values.end(), v.end() - static_cast<std::ptrdiff_t>(n_rows));
  return v;
}

}  // namespace

MatrixProductSketch::MatrixProductSketch(const DpParams& params, TransformKind kind,
                                         std::size_t n_rows, std::size_t m1, std::size_t m2,
                                         std::uint64_t seed, StreamMode mode,
                                         const TransformParams& transform)
    : params_(params),
      n_rows_(n_rows),
      top_(std::max(m1, m2)),
      transform_(stream_transform(params, kind, lifted_height(std::max(m1, m2), n_rows), seed,
                                  mode, transform)),
      ya_(params.r, m1),
      yb_(params.r, m2) {
  if (n_rows == 0 || m1 == 0 || m2 == 0) throw RangeError("MatrixProductSketch: empty shape");
  const Vector zeros(n_rows, 0.0);
  for (std::size_t a = 0; a < m1; ++a) ya_.set_column(a, apply_transform(transform_, lifted_column(a, zeros)));
  for (std::size_t b = 0; b < m2; ++b) yb_.set_column(b, apply_transform(transform_, lifted_column(b, zeros)));
}

Vector MatrixProductSketch::lifted_column(std::size_t col, std::span<const double> values) const {
  return lift_column(transform_.n(), col, params_.w, n_rows_, values);
}

void MatrixProductSketch::update(Side side, std::size_t col, std::span<const double> values) {
  Matrix& y = side == Side::kA ? ya_ : yb_;
  if (col >= y.cols()) throw RangeError("MatrixProductSketch::update: column out of range");
  y.set_column(col, apply_transform(transform_, lifted_column(col, values)));
}

Matrix MatrixProductSketch::query() const { return multiply_transposed(ya_, yb_); }

LinearRegressionSketch::LinearRegressionSketch(const DpParams& params, TransformKind kind,
                                               std::size_t n_rows, std::size_t m,
                                               std::uint64_t seed, StreamMode mode,
                                               const TransformParams& transform)
    : params_(params),
      n_rows_(n_rows),
      m_(m),
      transform_(stream_transform(params, kind, lifted_height(m, n_rows), seed, mode, transform)),
      ya_(params.r, m),
      yb_(params.r, 0.0) {
  if (n_rows == 0 || m == 0) throw RangeError("LinearRegressionSketch: empty shape");
  const Vector zeros(n_rows, 0.0);
  for (std::size_t a = 0; a < m; ++a) {
    ya_.set_column(a, apply_transform(transform_, lift_column(transform_.n(), a, params_.w, n_rows_, zeros)));
  }
}

void LinearRegressionSketch::update_column(std::size_t col, std::span<const double> values) {
  if (col >= m_) throw RangeError("LinearRegressionSketch::update_column: column out of range");
  ya_.set_column(col, apply_transform(transform_, lift_column(transform_.n(), col, params_.w, n_rows_, values)));
}

void LinearRegressionSketch::update_target(std::span<const double> b) {
  Vector v = lift_column(transform_.n(), 0, 0.0, n_rows_, b);
  yb_ = apply_transform(transform_, v);
}

Vector LinearRegressionSketch::query() const { return least_squares(ya_, yb_); }

}  // namespace fastjl
