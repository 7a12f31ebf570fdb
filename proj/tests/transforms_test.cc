#include "fastjl/transforms.h"

#include <gtest/gtest.h>

#include <cmath>

#include "fastjl/errors.h"
#include "test_support.h"

namespace fastjl {
namespace {

using testing::for_all;
using testing::Gen;
using testing::max_diff;
using testing::sylvester;

Matrix diag_signs(const std::vector<int>& s) {
  Matrix d(s.size(), s.size());
  for (std::size_t i = 0; i < s.size(); ++i) d(i, i) = s[i];
  return d;
}

Matrix block_sylvester(std::size_t n, std::size_t b) {
  const Matrix h = sylvester(b);
  Matrix out(n, n);
  for (std::size_t s = 0; s < n; s += b)
    for (std::size_t i = 0; i < b; ++i)
      for (std::size_t j = 0; j < b; ++j) out(s + i, s + j) = h(i, j);
  return out;
}

Matrix scaled(Matrix m, double s) {
  for (double& v : m.data()) v *= s;
  return m;
}

// Dense r x n matrix assembled from the drawn components only.
Matrix oracle(const Transform& t) {
  const std::size_t n = t.n(), r = t.r();
  Matrix m(r, n);
  switch (t.kind()) {
    case TransformKind::kNewGaussian:
    case TransformKind::kNewRademacher:
    case TransformKind::kNewSparseG: {
      const Matrix wd = multiply(block_sylvester(n, t.hadamard_block()), diag_signs(t.signs()));
      const std::size_t len = n / r;
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t k = i * len; k < (i + 1) * len; ++k)
          for (std::size_t j = 0; j < n; ++j)
            m(i, j) += t.block_entries()[k] * wd(t.permutation()[k], j);
      break;
    }
    case TransformKind::kDenseGaussian:
    case TransformKind::kAchlioptasDense:
    case TransformKind::kAchlioptasSparse:
      m = scaled(t.dense(), t.scale());
      break;
    case TransformKind::kFjlt:
      m = scaled(multiply(t.dense(), multiply(sylvester(n), diag_signs(t.signs()))), t.scale());
      break;
    case TransformKind::kSubsampledHadamardCombined: {
      const Matrix wd = multiply(sylvester(n), diag_signs(t.signs()));
      const std::size_t b = static_cast<std::size_t>(t.combine_b());
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t k = i * b; k < (i + 1) * b; ++k)
          for (std::size_t j = 0; j < n; ++j)
            m(i, j) += t.scale() * t.row_signs()[k] * wd(t.rows()[k], j);
      break;
    }
    case TransformKind::kPartialCirculant:
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < n; ++j)
          m(i, j) = t.scale() * t.generator()[(i + n - j) % n] * t.signs()[j];
      break;
    case TransformKind::kHashSparse: {
      Matrix s(r, n);
      for (std::size_t j = 0; j < n; ++j) s(t.buckets()[j], j) = t.row_signs()[j];
      m = multiply(s, multiply(sylvester(n), diag_signs(t.signs())));
      break;
    }
    case TransformKind::kAilonLibertyIterated: {
      Matrix prod = Matrix::Identity(n);
      for (const auto& d : t.iterated_signs())
        prod = multiply(prod, multiply(sylvester(n), diag_signs(d)));
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = t.scale() * prod(t.rows()[i], j);
      break;
    }
  }
  if (!t.prefix_signs().empty()) m = multiply(m, diag_signs(t.prefix_signs()));
  return m;
}

TransformParams large_r() {
  TransformParams p;
  p.allow_large_r = true;
  return p;
}

TEST(TransformKind, NamesRoundTrip) {
  for (TransformKind k : all_transform_kinds()) EXPECT_EQ(parse_transform_kind(to_string(k)), k);
  EXPECT_FALSE(parse_transform_kind("nope").has_value());
  EXPECT_EQ(all_transform_kinds().size(), 11u);
}

TEST(TransformProperty, RealizedMatrixMatchesComponentOracle) {
  for_all(60, 41, [](Gen& g) {
    const auto kinds = all_transform_kinds();
    const TransformKind kind = kinds[g.index(0, kinds.size() - 1)];
    const std::size_t n = g.pow2(3, 7);
    const std::size_t r = g.pow2(0, 2);
    BitSource src(g.index(0, 1u << 30));
    Transform t = build(kind, n, r, src, large_r());
    if (g.coin()) t = kw11_wrap(std::move(t), src);
    SCOPED_TRACE(std::string(to_string(kind)) + " n=" + std::to_string(n) + " r=" + std::to_string(r));
    EXPECT_LT(max_diff(realize_dense(t), oracle(t)), 1e-10);
  });
}

TEST(TransformProperty, LinearInTheInput) {
  for_all(40, 42, [](Gen& g) {
    const auto kinds = all_transform_kinds();
    const TransformKind kind = kinds[g.index(0, kinds.size() - 1)];
    const std::size_t n = g.pow2(4, 9);
    BitSource src(g.index(0, 1u << 30));
    const Transform t = build(kind, n, 2, src);
    const Vector x = g.vector(n), y = g.vector(n);
    const double a = g.normal(), b = g.normal();
    Vector comb(n);
    for (std::size_t i = 0; i < n; ++i) comb[i] = a * x[i] + b * y[i];
    const Vector tx = apply_transform(t, x), ty = apply_transform(t, y), tc = apply_transform(t, comb);
    for (std::size_t i = 0; i < 2; ++i) EXPECT_NEAR(tc[i], a * tx[i] + b * ty[i], 1e-9);
  });
}

TEST(TransformProperty, NewRademacherFrobeniusNormIsExactlySqrtN) {
  for_all(20, 43, [](Gen& g) {
    const std::size_t n = g.pow2(4, 9);
    BitSource src(g.index(0, 1u << 30));
    const Transform t = build(TransformKind::kNewRademacher, n, 2, src);
    EXPECT_NEAR(frobenius_norm(realize_dense(t)), std::sqrt(static_cast<double>(n)), 1e-9);
  });
}

TEST(TransformProperty, SameSeedSameMatrix) {
  for_all(15, 44, [](Gen& g) {
    const auto kinds = all_transform_kinds();
    const TransformKind kind = kinds[g.index(0, kinds.size() - 1)];
    const std::uint64_t seed = g.index(0, 1u << 30);
    BitSource a(seed), b(seed);
    EXPECT_EQ(realize_dense(build(kind, 64, 4, a)), realize_dense(build(kind, 64, 4, b)));
  });
}

TEST(Accounting, NewRademacherUsesBitsOnly) {
  BitSource src(1);
  const Transform t = build(TransformKind::kNewRademacher, 16, 2, src);
  EXPECT_EQ(t.bits_used() - t.permutation_bits(), 32u);
  EXPECT_EQ(t.gaussians_used(), 0u);
  EXPECT_GT(t.permutation_bits(), 0u);
  EXPECT_EQ(t.bits_used(), src.bits_consumed());
}

TEST(Accounting, NewGaussianDrawsOneGaussianPerCoordinate) {
  BitSource src(2);
  const Transform t = build(TransformKind::kNewGaussian, 16, 2, src);
  EXPECT_EQ(t.gaussians_used(), 16u);
  EXPECT_EQ(t.bits_used() - t.permutation_bits(), 16u);
}

TEST(Accounting, DenseGaussianDrawsRTimesN) {
  BitSource src(3);
  const Transform t = build(TransformKind::kDenseGaussian, 16, 4, src);
  EXPECT_EQ(t.gaussians_used(), 64u);
  EXPECT_EQ(t.bits_used(), 0u);
}

TEST(Accounting, WrapAddsNBits) {
  BitSource src(4);
  Transform t = build(TransformKind::kNewRademacher, 64, 4, src);
  const std::uint64_t before = t.bits_used();
  t = kw11_wrap(std::move(t), src);
  EXPECT_EQ(t.bits_used(), before + 64);
  EXPECT_EQ(t.prefix_signs().size(), 64u);
}

TEST(Structure, HashSparseHasOneBucketPerColumn) {
  BitSource src(5);
  const Transform t = build(TransformKind::kHashSparse, 256, 8, src);
  ASSERT_EQ(t.buckets().size(), 256u);
  for (std::size_t h : t.buckets()) EXPECT_LT(h, 8u);
  ASSERT_EQ(t.row_signs().size(), 256u);
}

TEST(Structure, SubsampledHadamardRowsAreDistinct) {
  BitSource src(6);
  TransformParams p;
  p.combine_b = 4;
  const Transform t = build(TransformKind::kSubsampledHadamardCombined, 64, 8, src, p);
  std::vector<std::size_t> rows = t.rows();
  ASSERT_EQ(rows.size(), 32u);
  std::sort(rows.begin(), rows.end());
  EXPECT_EQ(std::adjacent_find(rows.begin(), rows.end()), rows.end());
}

TEST(Structure, CirculantMatchesConvolution) {
  BitSource src(7);
  const Transform t = build(TransformKind::kPartialCirculant, 32, 5, src);
  Gen g(7);
  const Vector x = g.vector(32);
  Vector dx(32), gen(32);
  for (std::size_t i = 0; i < 32; ++i) {
    dx[i] = t.signs()[i] * x[i];
    gen[i] = t.generator()[i];
  }
  const Vector full = circular_convolve(gen, dx);
  const Vector y = apply_transform(t, x);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(y[i], t.scale() * full[i], 1e-10);
}

TEST(Structure, RealizedMatrixHasFullRowRank) {
  for (TransformKind kind : all_transform_kinds()) {
    BitSource src(8);
    const Matrix m = realize_dense(build(kind, 64, 4, src));
    const Vector ev = symmetric_eigenvalues(multiply(m, m.transpose()));
    int rank = 0;
    for (double v : ev)
      if (v > 1e-9 * ev.back()) ++rank;
    EXPECT_EQ(rank, 4) << to_string(kind);
  }
}

TEST(Structure, AchlioptasSparseEntries) {
  BitSource src(9);
  const Transform t = build(TransformKind::kAchlioptasSparse, 64, 64, src);
  int zeros = 0;
  for (double v : t.dense().data()) {
    EXPECT_TRUE(v == 0.0 || std::abs(std::abs(v) - std::sqrt(3.0)) < 1e-15);
    if (v == 0.0) ++zeros;
  }
  EXPECT_NEAR(zeros / 4096.0, 2.0 / 3.0, 0.04);
}

TEST(Guards, BlockKindRejectsLargeR) {
  BitSource src(10);
  EXPECT_THROW(build(TransformKind::kNewRademacher, 64, 8, src), RangeError);
  EXPECT_NO_THROW(build(TransformKind::kNewRademacher, 64, 4, src));
  EXPECT_NO_THROW(build(TransformKind::kNewRademacher, 64, 8, src, large_r()));
}

TEST(Guards, ShapeContracts) {
  BitSource src(11);
  EXPECT_THROW(build(TransformKind::kNewRademacher, 48, 2, src), ContractError);
  EXPECT_THROW(build(TransformKind::kNewRademacher, 64, 3, src, large_r()), ContractError);
  EXPECT_THROW(build(TransformKind::kFjlt, 0, 1, src), RangeError);
  EXPECT_THROW(build(TransformKind::kDenseGaussian, 8, 0, src), RangeError);
  EXPECT_NO_THROW(build(TransformKind::kDenseGaussian, 12, 3, src));
  const Transform t = build(TransformKind::kHashSparse, 16, 2, src);
  EXPECT_THROW(apply_transform(t, Vector(8)), DimensionError);
}

TEST(Guards, RealizeRefusesHugeN) {
  BitSource src(12);
  const Transform t = build(TransformKind::kHashSparse, std::size_t{1} << 15, 1, src);
  EXPECT_THROW(realize_dense(t), ResourceError);
}

TEST(Padding, PadsToPowerOfTwo) {
  EXPECT_EQ(pad_to_pow2(Vector{}), Vector{0.0});
  EXPECT_EQ(pad_to_pow2(Vector{1, 2, 3, 4, 5}), (Vector{1, 2, 3, 4, 5, 0, 0, 0}));
  EXPECT_EQ(pad_to_pow2(Vector{1, 2}), (Vector{1, 2}));
}

// ceil(16/eps ln(1/delta) ln(r/delta)); b is 6a ln(3a/delta) rounded up to a
// power of two when 1/a <= ln(n/delta)/n, else r^2; capped at n.
SparseGParams sparse_oracle(std::size_t n, std::size_t r, double eps, double delta) {
  const long double a = std::ceil(16.0L / eps * std::log(1.0L / delta) * std::log(static_cast<long double>(r) / delta));
  SparseGParams out;
  out.a = static_cast<long long>(a);
  std::size_t b;
  if (1.0L / a <= std::log(static_cast<long double>(n) / delta) / n) {
    const long double raw = std::ceil(6.0L * a * std::log(3.0L * a / delta));
    b = 1;
    while (static_cast<long double>(b) < raw) b *= 2;
  } else {
    out.fallback = true;
    b = r * r;
    std::size_t p = 1;
    while (p < b) p *= 2;
    b = p;
  }
  out.b = std::min(b, n);
  return out;
}

TEST(SparseG, FrozenParameters) {
  struct Row {
    std::size_t n, r;
    double eps, delta;
    long long a;
    std::size_t b;
    bool fallback;
  };
  const Row rows[] = {
      {1024, 8, 0.5, 0.1, 323, 1024, false},
      {65536, 16, 0.5, 0.1, 374, 256, true},
      {std::size_t{1} << 20, 16, 0.9, 0.5, 43, 256, true},
      {4096, 4, 0.5, 0.1, 272, 16, true},
  };
  for (const Row& row : rows) {
    const SparseGParams got = sparse_g_params(row.n, row.r, row.eps, row.delta);
    const SparseGParams ref = sparse_oracle(row.n, row.r, row.eps, row.delta);
    EXPECT_EQ(got.a, row.a);
    EXPECT_EQ(got.b, row.b);
    EXPECT_EQ(got.fallback, row.fallback);
    EXPECT_EQ(ref.a, row.a);
    EXPECT_EQ(ref.b, row.b);
    EXPECT_EQ(ref.fallback, row.fallback);
  }
  EXPECT_THROW(sparse_g_params(64, 2, 0.0, 0.1), RangeError);
}

TEST(SparseG, UsesSmallerHadamardBlocks) {
  BitSource src(13);
  const Transform t = build(TransformKind::kNewSparseG, 4096, 4, src);
  EXPECT_EQ(t.hadamard_block(), 16u);
}

TEST(Isometry, MeanSquaredNormIsOne) {
  for (TransformKind kind : all_transform_kinds()) {
    double s = 0;
    const int trials = 2000;
    Gen g(99);
    const Vector x = g.unit_vector(64);
    for (int i = 0; i < trials; ++i) {
      BitSource src = derive_stream(77, static_cast<std::uint64_t>(i));
      s += squared_norm(apply_transform(build(kind, 64, 4, src), x));
    }
    EXPECT_NEAR(s / trials, 1.0, 0.1) << to_string(kind);
  }
}

}  // namespace
}  // namespace fastjl
