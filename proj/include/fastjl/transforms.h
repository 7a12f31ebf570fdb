#ifndef FASTJL_TRANSFORMS_H_
#define FASTJL_TRANSFORMS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fastjl/linalg.h"
#include "fastjl/randomness.h"

namespace fastjl {

enum class TransformKind {
  kNewGaussian,
  kNewRademacher,
  kNewSparseG,
  kDenseGaussian,
  kAchlioptasDense,
  kAchlioptasSparse,
  kFjlt,
  kSubsampledHadamardCombined,
  kPartialCirculant,
  kHashSparse,
  kAilonLibertyIterated,
};

std::string_view to_string(TransformKind kind);
// Accepts the kebab-case CLI names ("new-rademacher", "dense-gaussian", ...).
std::optional<TransformKind> parse_transform_kind(std::string_view name);
std::vector<TransformKind> all_transform_kinds();
// Kinds built as P * Pi * W * D (or its block variant).
bool is_block_kind(TransformKind kind);

struct TransformParams {
  double sparse_epsilon = 0.5;  // NewSparseG
  double sparse_delta = 0.1;    // NewSparseG
  double fjlt_p = 0.25;         // FJLT keep probability
  int combine_b = 2;            // SubsampledHadamardCombined bucket size
  int iterations = 3;           // AilonLibertyIterated
  // Lifts the r <= floor(sqrt(n))/2 guard on the block kinds.
  bool allow_large_r = false;
};

struct SparseGParams {
  long long a = 0;
  std::size_t b = 0;
  bool fallback = false;  // b = r^2 because 1/a <= ln(n/delta)/n failed
};

SparseGParams sparse_g_params(std::size_t n, std::size_t r, double epsilon,
                              double delta);

// Random matrix drawn by build(). Apply with apply_transform(); never materialized
// unless realize_dense() is called.
class Transform {
 public:
  TransformKind kind() const { return kind_; }
  std::size_t n() const { return n_; }
  std::size_t r() const { return r_; }
  double scale() const { return scale_; }
  // Row block length t = n / r for the block kinds.
  std::size_t block_length() const { return n_ / r_; }
  // Size of the Hadamard blocks inside G (n unless NewSparseG picked smaller).
  std::size_t hadamard_block() const { return hadamard_block_; }

  const std::vector<int>& signs() const { return d_; }
  const std::vector<std::size_t>& permutation() const { return perm_; }
  const Vector& block_entries() const { return p_; }
  const Matrix& dense() const { return dense_; }
  const std::vector<std::size_t>& rows() const { return rows_; }
  const std::vector<int>& row_signs() const { return row_signs_; }
  const std::vector<int>& generator() const { return generator_; }
  const std::vector<std::size_t>& buckets() const { return buckets_; }
  const std::vector<std::vector<int>>& iterated_signs() const { return iterated_d_; }
  int combine_b() const { return combine_b_; }
  const SparseGParams& sparse_params() const { return sparse_; }
  // Extra signs applied to the input before everything else; set by kw11_wrap.
  const std::vector<int>& prefix_signs() const { return prefix_signs_; }

  std::uint64_t bits_used() const { return bits_used_; }
  std::uint64_t gaussians_used() const { return gaussians_used_; }
  std::uint64_t permutation_bits() const { return permutation_bits_; }

 private:
  friend Transform build(TransformKind, std::size_t, std::size_t, BitSource&,
                         const TransformParams&);
  friend void apply_into(const Transform&, std::span<const double>,
                         std::span<double>, std::vector<double>&);
  friend void apply_core(const Transform&, std::span<const double>, std::span<double>,
                         std::vector<double>&);
  friend Transform kw11_wrap(Transform, BitSource&);

  TransformKind kind_ = TransformKind::kNewRademacher;
  std::size_t n_ = 0;
  std::size_t r_ = 0;
  double scale_ = 1.0;
  std::size_t hadamard_block_ = 0;
  int combine_b_ = 1;
  SparseGParams sparse_;
  std::vector<int> d_;
  std::vector<std::size_t> perm_;
  Vector p_;
  Matrix dense_;
  std::vector<std::size_t> rows_;
  std::vector<int> row_signs_;
  std::vector<int> generator_;
  std::vector<std::size_t> buckets_;
  std::vector<std::vector<int>> iterated_d_;
  std::vector<int> prefix_signs_;
  std::uint64_t bits_used_ = 0;
  std::uint64_t gaussians_used_ = 0;
  std::uint64_t permutation_bits_ = 0;
};

// Draws a transform of the given kind. Block kinds draw D, then Pi, then P.
Transform build(TransformKind kind, std::size_t n, std::size_t r, BitSource& src,
                const TransformParams& params = {});

Vector apply_transform(const Transform& t, std::span<const double> x);
// Allocation-free form; `scratch` is resized as needed.
void apply_into(const Transform& t, std::span<const double> x, std::span<double> out,
                std::vector<double>& scratch);
// x -> T(D' x) for n fresh signs D' drawn from `src`.
Transform kw11_wrap(Transform t, BitSource& src);

// Zero-pads to the next power of two (length 0 becomes 1).
Vector pad_to_pow2(std::span<const double> x);

// Phi * A, column by column.
Matrix apply_columns(const Transform& t, const Matrix& a);
// The r x n matrix with column j equal to apply_transform(e_j). Refuses n > 2^14.
Matrix realize_dense(const Transform& t);

}  // namespace fastjl

#endif  // FASTJL_TRANSFORMS_H_
