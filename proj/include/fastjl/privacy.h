#ifndef FASTJL_PRIVACY_H_
#define FASTJL_PRIVACY_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fastjl/linalg.h"
#include "fastjl/transforms.h"

namespace fastjl {

struct DpParams {
  double alpha = 1.0;
  double beta = 0.1;
  std::size_t r = 64;
  double w = 0.0;  // lifting weight; must reach w_threshold() in private mode
};

void validate(const DpParams& params);

struct ThresholdBreakdown {
  double single_release = 0.0;   // ln(4/beta) sqrt(16 r ln(2/beta)) / alpha
  double second_moment = 0.0;    // 16 r ln(2/beta) ln(4/beta) / alpha
  double streaming = 0.0;        // sqrt(16 r ln(2/beta)) ln(16 r / beta) / alpha
  double value = 0.0;            // the maximum of the three
  std::vector<std::string> binding;  // names of the terms equal to the maximum
};

ThresholdBreakdown w_threshold_breakdown(double alpha, double beta, std::size_t r);
double w_threshold(double alpha, double beta, std::size_t r);

// Failure probability of the block-nonzero event for the block kinds,
// r exp(-(1 - theta)^2 n / (ln n + n^{1/3})), capped at 1.
double delta_structural(std::size_t n, std::size_t r, double theta = 0.5);

struct ComposedPrivacy {
  double alpha = 0.0;
  double beta = 0.0;
};
// Advanced composition of `ell` releases at (alpha0, beta0) with slack beta_prime.
ComposedPrivacy compose_privacy(double alpha0, double beta0, int ell, double beta_prime);

// Stacks, for every column a of A (d x c): w e_a over the top `top` rows, a
// zero block, then A[:, a] at the bottom. The height is the next power of two
// at or above 2 (top + d), so sigma_min of the result is at least w.
Matrix lift_matrix(const Matrix& a, double w, std::size_t top = 0);
std::size_t lifted_height(std::size_t top, std::size_t d);

struct PublishOptions {
  TransformKind kind = TransformKind::kNewGaussian;
  TransformParams transform;
  bool lift = false;
  // Skips every privacy check. For utility experiments only.
  bool non_private = false;
};

struct FirstMomentSketch {
  Matrix data;  // r x m
  TransformKind kind = TransformKind::kNewGaussian;
  std::size_t r = 0;
  std::size_t embedded_dim = 0;
  bool lifted = false;
  bool non_private = false;
  double w = 0.0;
  double sigma_min = 0.0;  // of the released matrix (after lifting)
  ThresholdBreakdown threshold;
  double structural_delta = 0.0;
  std::uint64_t seed = 0;
};

struct SecondMomentSketch {
  Matrix data;  // embedded_dim x m
  TransformKind kind = TransformKind::kNewGaussian;
  std::size_t r = 0;
  std::size_t embedded_dim = 0;
  bool lifted = false;
  double w = 0.0;
  double sigma_min = 0.0;
  ThresholdBreakdown threshold;
  std::uint64_t seed = 0;
};

// Phi A^T for A (m x n). Private mode needs a Gaussian-entried kind and
// either sigma_min(A) >= w_threshold or lifting with w >= w_threshold.
FirstMomentSketch publish_first_moment(const Matrix& a, const DpParams& params,
                                       std::uint64_t seed, const PublishOptions& options = {});
// Phi^T Phi A^T under the same preconditions.
SecondMomentSketch publish_second_moment(const Matrix& a, const DpParams& params,
                                         std::uint64_t seed,
                                         const PublishOptions& options = {});

// ||S u||^2 for unit u; estimates ||A^T u||^2 (plus w^2 when lifted).
double covariance_query(const FirstMomentSketch& sketch, std::span<const double> u);

struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
  double weight = 1.0;
};

struct Graph {
  std::size_t vertices = 0;
  std::vector<Edge> edges;
};

// C(n,2) x n matrix; the row for pair (i < j) is sqrt(w_ij + lift / n)(e_i - e_j).
Matrix graph_edge_matrix(const Graph& g, double lift);
double exact_cut(const Graph& g, std::span<const std::size_t> side);

struct CutSketch {
  FirstMomentSketch sketch;
  std::size_t vertices = 0;
  double lift = 0.0;
  // sqrt of the second smallest Laplacian eigenvalue after lifting.
  double spectral_floor = 0.0;
};

// Releases Phi E_G. In private mode the lift is w_threshold^2, which puts
// every singular value of E_G orthogonal to the all-ones vector at or above
// the threshold; the all-ones direction is identically zero for every graph.
CutSketch publish_cut_sketch(const Graph& g, const DpParams& params, std::uint64_t seed,
                             const PublishOptions& options = {});
// ||S 1_side||^2 minus the lift's contribution |S|(n - |S|) lift / n.
double cut_query(const CutSketch& sketch, std::span<const std::size_t> side);

enum class StreamMode { kPrivate, kNonPrivate };

// Y_A = Phi A_hat and Y_B = Phi B_hat for n_rows x m1 and n_rows x m2
// matrices received column by column. Query returns Y_A^T Y_B.
class MatrixProductSketch {
 public:
  MatrixProductSketch(const DpParams& params, TransformKind kind, std::size_t n_rows,
                      std::size_t m1, std::size_t m2, std::uint64_t seed,
                      StreamMode mode = StreamMode::kPrivate,
                      const TransformParams& transform = {});
  enum class Side { kA, kB };
  // Replaces column `col` of the chosen side.
  void update(Side side, std::size_t col, std::span<const double> values);
  Matrix query() const;
  const Matrix& sketch_a() const { return ya_; }
  const Matrix& sketch_b() const { return yb_; }
  std::size_t embedded_dim() const { return transform_.n(); }

 private:
  Vector lifted_column(std::size_t col, std::span<const double> values) const;

  DpParams params_;
  std::size_t n_rows_;
  std::size_t top_;
  Transform transform_;
  Matrix ya_;
  Matrix yb_;
};

// Y_A = Phi A_hat and y_b = Phi b_hat, where b_hat carries b in the bottom
// block and zeros elsewhere. Query solves min ||Y_A x - y_b||.
class LinearRegressionSketch {
 public:
  LinearRegressionSketch(const DpParams& params, TransformKind kind, std::size_t n_rows,
                         std::size_t m, std::uint64_t seed,
                         StreamMode mode = StreamMode::kPrivate,
                         const TransformParams& transform = {});
  void update_column(std::size_t col, std::span<const double> values);
  void update_target(std::span<const double> b);
  Vector query() const;
  const Matrix& sketch_a() const { return ya_; }
  const Vector& sketch_b() const { return yb_; }

 private:
  DpParams params_;
  std::size_t n_rows_;
  std::size_t m_;
  Transform transform_;
  Matrix ya_;
  Vector yb_;
};

}  // namespace fastjl

#endif  // FASTJL_PRIVACY_H_
