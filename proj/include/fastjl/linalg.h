#ifndef FASTJL_LINALG_H_
#define FASTJL_LINALG_H_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace fastjl {

using Vector = std::vector<double>;

// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix Identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }
  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  Vector column(std::size_t j) const;
  void set_column(std::size_t j, std::span<const double> v);
  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  Matrix transpose() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix multiply(const Matrix& a, const Matrix& b);
Vector multiply(const Matrix& a, std::span<const double> x);
// Returns a^T b without forming the transpose.
Matrix multiply_transposed(const Matrix& a, const Matrix& b);
Matrix subtract(const Matrix& a, const Matrix& b);
double frobenius_norm(const Matrix& a);
double max_abs_entry(const Matrix& a);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double squared_norm(std::span<const double> a);
double infinity_norm(std::span<const double> a);

bool is_power_of_two(std::size_t n);
std::size_t next_power_of_two(std::size_t n);
int floor_log2(std::size_t n);
int ceil_log2(std::size_t n);

// Orthonormal Walsh-Hadamard transform, in place, scaled by 1/sqrt(n).
// Throws ContractError unless the length is a power of two (n >= 1).
void fwht_inplace(std::span<double> v);
Vector fwht(Vector v);
// Applies the orthonormal transform independently to consecutive blocks of
// length `block`.
void block_fwht_inplace(std::span<double> v, std::size_t block);

// Sylvester Hadamard matrix with entries +-1/sqrt(n).
Matrix hadamard(std::size_t n);

struct EigenDecomposition {
  Vector values;   // ascending
  Matrix vectors;  // column j pairs with values[j]
};

// Cyclic Jacobi. Stops when the off-diagonal Frobenius norm falls below
// 1e-12 * ||M||_F. Rejects inputs that are asymmetric beyond 1e-10 relative.
EigenDecomposition symmetric_eigen(const Matrix& m);
Vector symmetric_eigenvalues(const Matrix& m);

struct SpectralExtremes {
  double sigma_min = 0.0;
  double sigma_max = 0.0;
};
// Extreme singular values from the eigenvalues of the smaller Gram matrix.
SpectralExtremes spectral_extremes(const Matrix& a);

// min ||Ax - b|| via the normal equations. Throws SingularityError when
// lambda_min(A^T A) <= 1e-12 * lambda_max(A^T A).
Vector least_squares(const Matrix& a, std::span<const double> b);

// y_i = sum_j g[(i - j) mod n] x_j, computed directly.
Vector circular_convolve(std::span<const double> g, std::span<const double> x);

// First line "rows,cols", then one comma-separated row per line with 17
// significant digits. Missing, malformed or short files throw ResourceError.
void write_matrix_csv(const Matrix& m, std::ostream& out);
void write_matrix_csv(const Matrix& m, const std::string& path);
Matrix read_matrix_csv(std::istream& in);
Matrix read_matrix_csv(const std::string& path);

}  // namespace fastjl

#endif  // FASTJL_LINALG_H_
