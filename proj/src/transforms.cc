#include "fastjl/transforms.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "fastjl/errors.h"

namespace fastjl {

namespace {

struct KindName {
  TransformKind kind;
  std::string_view name;
};

constexpr std::array<KindName, 11> kKindNames{{
    {TransformKind::kNewGaussian, "new-gaussian"},
    {TransformKind::kNewRademacher, "new-rademacher"},
    {TransformKind::kNewSparseG, "new-sparse-g"},
    {TransformKind::kDenseGaussian, "dense-gaussian"},
    {TransformKind::kAchlioptasDense, "achlioptas-dense"},
    {TransformKind::kAchlioptasSparse, "achlioptas-sparse"},
    {TransformKind::kFjlt, "fjlt"},
    {TransformKind::kSubsampledHadamardCombined, "subsampled-hadamard-combined"},
    {TransformKind::kPartialCirculant, "partial-circulant"},
    {TransformKind::kHashSparse, "hash-sparse"},
    {TransformKind::kAilonLibertyIterated, "ailon-liberty-iterated"},
}};

bool uses_hadamard(TransformKind kind) {
  switch (kind) {
    case TransformKind::kDenseGaussian:
    case TransformKind::kAchlioptasDense:
    case TransformKind::kAchlioptasSparse:
    case TransformKind::kPartialCirculant:
      return false;
    default:
      return true;
  }
}

std::vector<int> draw_signs(std::size_t n, BitSource& src) {
  std::vector<int> s(n);
  for (auto& v : s) v = src.draw_sign();
  return s;
}

// First k entries of a uniformly random arrangement of {0..n-1}.
std::vector<std::size_t> draw_distinct(std::size_t n, std::size_t k, BitSource& src) {
  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    std::swap(pool[i], pool[i + src.draw_uniform_index(n - i)]);
  }
  pool.resize(k);
  return pool;
}

void multiply_signs(std::span<double> v, const std::vector<int>& s) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (s[i] < 0) v[i] = -v[i];
}

void validate(TransformKind kind, std::size_t n, std::size_t r,
              const TransformParams& params) {
  if (n == 0) throw RangeError("build: n must be positive");
  if (r == 0) throw RangeError("build: r must be positive");
  if (uses_hadamard(kind) && !is_power_of_two(n)) {
    throw ContractError("build: n = " + std::to_string(n) +
                        " is not a power of two; pad the input first");
  }
  if (is_block_kind(kind)) {
    if (r > n || n % r != 0) {
      throw ContractError("build: r = " + std::to_string(r) + " does not divide n = " +
                          std::to_string(n));
    }
    const std::size_t root = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
    if (!params.allow_large_r && 2 * r > root) {
      throw RangeError("build: r = " + std::to_string(r) +
                       " exceeds floor(sqrt(n))/2 required by the block construction's "
                       "sparse-regime guarantee; set allow_large_r to override");
    }
  }
  switch (kind) {
    case TransformKind::kNewSparseG:
      if (!(params.sparse_epsilon > 0 && params.sparse_epsilon < 1) ||
          !(params.sparse_delta > 0 && params.sparse_delta < 1)) {
        throw RangeError("build: NewSparseG needs epsilon, delta in (0, 1)");
      }
      break;
    case TransformKind::kFjlt:
      if (!(params.fjlt_p > 0 && params.fjlt_p <= 1)) {
        throw RangeError("build: FJLT keep probability must lie in (0, 1]");
      }
      break;
    case TransformKind::kSubsampledHadamardCombined:
      if (params.combine_b < 1) throw RangeError("build: combine_b must be >= 1");
      if (r * static_cast<std::size_t>(params.combine_b) > n) {
        throw RangeError("build: r * B exceeds the number of Hadamard rows");
      }
      break;
    case TransformKind::kAilonLibertyIterated:
      if (params.iterations < 1) throw RangeError("build: iterations must be >= 1");
      [[fallthrough]];
    case TransformKind::kPartialCirculant:
      if (r > n) throw RangeError("build: r exceeds n");
      break;
    default:
      break;
  }
}

}  // namespace

std::string_view to_string(TransformKind kind) {
  for (const auto& kn : kKindNames)
    if (kn.kind == kind) return kn.name;
  return "unknown";
}

std::optional<TransformKind> parse_transform_kind(std::string_view name) {
  for (const auto& kn : kKindNames)
    if (kn.name == name) return kn.kind;
  return std::nullopt;
}

std::vector<TransformKind> all_transform_kinds() {
  std::vector<TransformKind> out;
  for (const auto& kn : kKindNames) out.push_back(kn.kind);
  return out;
}

bool is_block_kind(TransformKind kind) {
  return kind == TransformKind::kNewGaussian || kind == TransformKind::kNewRademacher ||
         kind == TransformKind::kNewSparseG;
}

SparseGParams sparse_g_params(std::size_t n, std::size_t r, double epsilon, double delta) {
  if (!(epsilon > 0 && epsilon < 1) || !(delta > 0 && delta < 1)) {
    throw RangeError("sparse_g_params: epsilon, delta must lie in (0, 1)");
  }
  const double nd = static_cast<double>(n);
  SparseGParams out;
  out.a = static_cast<long long>(
      std::ceil(16.0 / epsilon * std::log(1.0 / delta) * std::log(static_cast<double>(r) / delta)));
  if (out.a < 1) out.a = 1;
  const double ad = static_cast<double>(out.a);
  if (1.0 / ad <= std::log(nd / delta) / nd) {
    const double b = std::ceil(6.0 * ad * std::log(3.0 * ad / delta));
    out.b = b >= nd ? n : next_power_of_two(static_cast<std::size_t>(b));
  } else {
    out.fallback = true;
    out.b = next_power_of_two(r * r);
  }
  if (out.b > n) out.b = n;
  return out;
}

Transform build(TransformKind kind, std::size_t n, std::size_t r, BitSource& src,
                const TransformParams& params) {
  validate(kind, n, r, params);
  const std::uint64_t bits0 = src.bits_consumed();
  const std::uint64_t gauss0 = src.gaussian_samples_consumed();

  Transform t;
  t.kind_ = kind;
  t.n_ = n;
  t.r_ = r;
  t.hadamard_block_ = n;
  const double rd = static_cast<double>(r);
  const double nd = static_cast<double>(n);

  switch (kind) {
    case TransformKind::kNewGaussian:
    case TransformKind::kNewRademacher:
    case TransformKind::kNewSparseG: {
      if (kind == TransformKind::kNewSparseG) {
        t.sparse_ = sparse_g_params(n, r, params.sparse_epsilon, params.sparse_delta);
        t.hadamard_block_ = t.sparse_.b;
      }
      t.d_ = draw_signs(n, src);
      const std::uint64_t before_perm = src.bits_consumed();
      t.perm_ = sample_permutation(n, src);
      t.permutation_bits_ = src.bits_consumed() - before_perm;
      t.p_.resize(n);
      if (kind == TransformKind::kNewGaussian) {
        for (auto& v : t.p_) v = src.draw_gaussian();
      } else {
        for (auto& v : t.p_) v = src.draw_sign();
      }
      break;
    }
    case TransformKind::kDenseGaussian:
      t.dense_ = Matrix(r, n);
      for (auto& v : t.dense_.data()) v = src.draw_gaussian();
      t.scale_ = 1.0 / std::sqrt(rd);
      break;
    case TransformKind::kAchlioptasDense:
      t.dense_ = Matrix(r, n);
      for (auto& v : t.dense_.data()) v = src.draw_sign();
      t.scale_ = 1.0 / std::sqrt(rd);
      break;
    case TransformKind::kAchlioptasSparse: {
      t.dense_ = Matrix(r, n);
      const double s3 = std::sqrt(3.0);
      for (auto& v : t.dense_.data()) {
        const std::size_t u = src.draw_uniform_index(6);
        v = u == 0 ? s3 : (u == 1 ? -s3 : 0.0);
      }
      t.scale_ = 1.0 / std::sqrt(rd);
      break;
    }
    case TransformKind::kFjlt:
      t.d_ = draw_signs(n, src);
      t.dense_ = Matrix(r, n);
      for (auto& v : t.dense_.data()) {
        v = src.draw_uniform01() < params.fjlt_p ? src.draw_gaussian() : 0.0;
      }
      t.scale_ = 1.0 / std::sqrt(rd * params.fjlt_p);
      break;
    case TransformKind::kSubsampledHadamardCombined: {
      const std::size_t b = static_cast<std::size_t>(params.combine_b);
      t.combine_b_ = params.combine_b;
      t.d_ = draw_signs(n, src);
      t.rows_ = draw_distinct(n, r * b, src);
      t.row_signs_ = draw_signs(r * b, src);
      t.scale_ = std::sqrt(nd / (rd * static_cast<double>(b)));
      break;
    }
    case TransformKind::kPartialCirculant:
      t.d_ = draw_signs(n, src);
      t.generator_ = draw_signs(n, src);
      t.scale_ = 1.0 / std::sqrt(rd);
      break;
    case TransformKind::kHashSparse:
      t.d_ = draw_signs(n, src);
      t.buckets_.resize(n);
      for (auto& h : t.buckets_) h = src.draw_uniform_index(r);
      t.row_signs_ = draw_signs(n, src);
      break;
    case TransformKind::kAilonLibertyIterated:
      t.iterated_d_.resize(static_cast<std::size_t>(params.iterations));
      for (auto& d : t.iterated_d_) d = draw_signs(n, src);
      t.rows_ = draw_distinct(n, r, src);
      t.scale_ = std::sqrt(nd / rd);
      break;
  }
  t.bits_used_ = src.bits_consumed() - bits0;
  t.gaussians_used_ = src.gaussian_samples_consumed() - gauss0;
  return t;
}

void apply_core(const Transform& t, std::span<const double> x, std::span<double> out,
                std::vector<double>& scratch);

void apply_into(const Transform& t, std::span<const double> x, std::span<double> out,
                std::vector<double>& scratch) {
  if (x.size() != t.n_) {
    throw DimensionError("apply: input length " + std::to_string(x.size()) +
                         " differs from n = " + std::to_string(t.n_));
  }
  if (out.size() != t.r_) throw DimensionError("apply: output length differs from r");
  if (!t.prefix_signs_.empty()) {
    Vector signed_x(x.begin(), x.end());
    multiply_signs(signed_x, t.prefix_signs_);
    apply_core(t, signed_x, out, scratch);
    return;
  }
  apply_core(t, x, out, scratch);
}

void apply_core(const Transform& t, std::span<const double> x, std::span<double> out,
                std::vector<double>& scratch) {
  const std::size_t n = t.n_;
  const std::size_t r = t.r_;

  switch (t.kind_) {
    case TransformKind::kNewGaussian:
    case TransformKind::kNewRademacher:
    case TransformKind::kNewSparseG: {
      scratch.assign(x.begin(), x.end());
      multiply_signs(scratch, t.d_);
      block_fwht_inplace(scratch, t.hadamard_block_);
      const std::size_t len = n / r;
      for (std::size_t i = 0; i < r; ++i) {
        double s = 0.0;
        for (std::size_t k = i * len; k < (i + 1) * len; ++k) s += t.p_[k] * scratch[t.perm_[k]];
        out[i] = s;
      }
      return;
    }
    case TransformKind::kDenseGaussian:
    case TransformKind::kAchlioptasDense:
    case TransformKind::kAchlioptasSparse:
      for (std::size_t i = 0; i < r; ++i) out[i] = t.scale_ * dot(t.dense_.row(i), x);
      return;
    case TransformKind::kFjlt:
      scratch.assign(x.begin(), x.end());
      multiply_signs(scratch, t.d_);
      fwht_inplace(scratch);
      for (std::size_t i = 0; i < r; ++i) out[i] = t.scale_ * dot(t.dense_.row(i), scratch);
      return;
    case TransformKind::kSubsampledHadamardCombined: {
      scratch.assign(x.begin(), x.end());
      multiply_signs(scratch, t.d_);
      fwht_inplace(scratch);
      const std::size_t b = static_cast<std::size_t>(t.combine_b_);
      for (std::size_t i = 0; i < r; ++i) {
        double s = 0.0;
        for (std::size_t k = i * b; k < (i + 1) * b; ++k) s += t.row_signs_[k] * scratch[t.rows_[k]];
        out[i] = t.scale_ * s;
      }
      return;
    }
    case TransformKind::kPartialCirculant: {
      scratch.assign(x.begin(), x.end());
      multiply_signs(scratch, t.d_);
      for (std::size_t i = 0; i < r; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += t.generator_[(i + n - j) % n] * scratch[j];
        out[i] = t.scale_ * s;
      }
      return;
    }
    case TransformKind::kHashSparse:
      scratch.assign(x.begin(), x.end());
      multiply_signs(scratch, t.d_);
      fwht_inplace(scratch);
      for (std::size_t i = 0; i < r; ++i) out[i] = 0.0;
      for (std::size_t j = 0; j < n; ++j) out[t.buckets_[j]] += t.row_signs_[j] * scratch[j];
      return;
    case TransformKind::kAilonLibertyIterated:
      scratch.assign(x.begin(), x.end());
      for (auto it = t.iterated_d_.rbegin(); it != t.iterated_d_.rend(); ++it) {
        multiply_signs(scratch, *it);
        fwht_inplace(scratch);
      }
      for (std::size_t i = 0; i < r; ++i) out[i] = t.scale_ * scratch[t.rows_[i]];
      return;
  }
}

Transform kw11_wrap(Transform t, BitSource& src) {
  const std::uint64_t bits0 = src.bits_consumed();
  t.prefix_signs_ = draw_signs(t.n_, src);
  t.bits_used_ += src.bits_consumed() - bits0;
  return t;
}

Vector pad_to_pow2(std::span<const double> x) {
  Vector out(x.begin(), x.end());
  out.resize(next_power_of_two(std::max<std::size_t>(x.size(), 1)), 0.0);
  return out;
}

Vector apply_transform(const Transform& t, std::span<const double> x) {
  Vector out(t.r());
  std::vector<double> scratch;
  apply_into(t, x, out, scratch);
  return out;
}

Matrix apply_columns(const Transform& t, const Matrix& a) {
  if (a.rows() != t.n()) throw DimensionError("apply_columns: A has the wrong row count");
  Matrix out(t.r(), a.cols());
  Vector col(t.r());
  std::vector<double> scratch;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    apply_into(t, a.column(j), col, scratch);
    out.set_column(j, col);
  }
  return out;
}

Matrix realize_dense(const Transform& t) {
  if (t.n() > (std::size_t{1} << 14)) {
    throw ResourceError("realize_dense: n = " + std::to_string(t.n()) +
                        " exceeds the 2^14 materialization limit");
  }
  return apply_columns(t, Matrix::Identity(t.n()));
}

}  // namespace fastjl
